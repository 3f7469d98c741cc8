#ifndef LONGCAST_NUMERIC_HPP_
#define LONGCAST_NUMERIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace longcast
{

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/**
 * @brief Numerically stable log(sum(exp(x))).
 *
 * Returns -inf for an empty range or when every entry is -inf.
 */
inline double log_sum_exp(std::span<const double> x)
{
  if (x.empty()) {
    return neg_inf;
  }
  const double top = *std::max_element(x.begin(), x.end());
  if (top == neg_inf) {
    return neg_inf;
  }
  if (top == std::numeric_limits<double>::infinity()) {
    return top;
  }
  double acc = 0.0;
  for (double v : x) {
    acc += std::exp(v - top);
  }
  return top + std::log(acc);
}

/// Dense row-major matrix of doubles; rows are time steps, columns experts.
class Matrix
{
public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
  : rows_(rows), cols_(cols), data_(rows * cols, fill)
  {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double & operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const double> values)
  {
    if (rows_ == 0 && cols_ == 0) {
      cols_ = values.size();
    }
    if (values.size() != cols_) {
      throw ArgumentError(
              "row has " + std::to_string(values.size()) + " entries, expected " +
              std::to_string(cols_));
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  const std::vector<double> & data() const noexcept { return data_; }

  bool operator==(const Matrix &) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/**
 * @brief Exact floating-point accumulator (nonoverlapping partials).
 *
 * The represented value is the exact real sum of everything added; a sum
 * that is mathematically zero evaluates to exactly 0.
 */
class ExactSum
{
public:
  void add(double x)
  {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::abs(x) < std::abs(y)) {
        std::swap(x, y);
      }
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) {
        partials_[i++] = lo;
      }
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  ExactSum & operator+=(double x)
  {
    add(x);
    return *this;
  }

  double value() const
  {
    double total = 0.0;
    for (auto it = partials_.rbegin(); it != partials_.rend(); ++it) {
      total += *it;
    }
    return total;
  }

private:
  std::vector<double> partials_;
};

/// Integer power with saturation, used by enumeration guards.
inline double enumeration_size(std::size_t base, std::size_t exponent)
{
  return std::pow(static_cast<double>(base), static_cast<double>(exponent));
}

}  // namespace longcast

#endif  // LONGCAST_NUMERIC_HPP_
