#ifndef LONGCAST_WEIGHTS_HPP_
#define LONGCAST_WEIGHTS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace longcast
{

/**
 * @brief Probability vector over experts, stored as log-weights whose
 * log-sum-exp is zero.
 */
class WeightVector
{
public:
  WeightVector() = default;

  /// Takes unnormalized log-weights and normalizes them.
  static WeightVector from_log(std::vector<double> log_weights)
  {
    WeightVector w;
    w.log_ = std::move(log_weights);
    w.normalize();
    return w;
  }

  /// Adopts log-weights that are already normalized up to rounding, e.g. the
  /// image of a normalized vector under a row-stochastic kernel.
  static WeightVector from_normalized_log(std::vector<double> log_weights)
  {
    WeightVector w;
    w.log_ = std::move(log_weights);
    return w;
  }

  static WeightVector from_probabilities(std::span<const double> p)
  {
    std::vector<double> lw(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!(p[i] >= 0.0)) {
        throw ArgumentError("probabilities must be nonnegative");
      }
      lw[i] = std::log(p[i]);
    }
    return from_log(std::move(lw));
  }

  static WeightVector uniform(std::size_t n)
  {
    return from_log(std::vector<double>(n, 0.0));
  }

  std::size_t size() const noexcept { return log_.size(); }
  const std::vector<double> & log_weights() const noexcept { return log_; }
  double log_weight(std::size_t n) const { return log_[n]; }
  double probability(std::size_t n) const { return std::exp(log_[n]); }

  std::vector<double> probabilities() const
  {
    std::vector<double> p(log_.size());
    std::transform(log_.begin(), log_.end(), p.begin(), [](double v) {return std::exp(v);});
    return p;
  }

  bool operator==(const WeightVector &) const = default;

private:
  void normalize()
  {
    if (log_.empty()) {
      throw ArgumentError("weight vector must be nonempty");
    }
    const double z = log_sum_exp(log_);
    if (!std::isfinite(z)) {
      throw ArgumentError("weight vector has no finite mass");
    }
    for (auto & v : log_) {
      v -= z;
    }
  }

  std::vector<double> log_;
};

inline double max_abs_difference(const WeightVector & a, const WeightVector & b)
{
  if (a.size() != b.size()) {
    throw ArgumentError("weight vectors differ in size");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a.probability(i) - b.probability(i)));
  }
  return d;
}

/**
 * @brief Weighted average of the expert forecasts.
 *
 * Clamped into [min forecast, max forecast] so rounding in the weights
 * cannot push the result out of the prediction set.
 */
inline double predict(const WeightVector & weights, std::span<const double> forecasts)
{
  if (weights.size() != forecasts.size()) {
    throw ArgumentError(
            "predict: " + std::to_string(weights.size()) + " weights vs " +
            std::to_string(forecasts.size()) + " forecasts");
  }
  double acc = 0.0;
  for (std::size_t n = 0; n < forecasts.size(); ++n) {
    acc += weights.probability(n) * forecasts[n];
  }
  const auto [lo, hi] = std::minmax_element(forecasts.begin(), forecasts.end());
  return std::clamp(acc, *lo, *hi);
}

/// Exponential reweighing by one loss vector: w_n <- w_n exp(-eta l_n), renormalized.
inline WeightVector v1_update(const WeightVector & weights, std::span<const double> losses, double eta)
{
  if (weights.size() != losses.size()) {
    throw ArgumentError("v1_update: dimension mismatch");
  }
  std::vector<double> lw(weights.log_weights());
  for (std::size_t n = 0; n < lw.size(); ++n) {
    if (!std::isfinite(losses[n])) {
      throw ArgumentError("v1_update: non-finite loss");
    }
    lw[n] -= eta * losses[n];
  }
  return WeightVector::from_log(std::move(lw));
}

/// -(1/eta) ln sum_n w_n exp(-eta l_n)
inline double mixloss(const WeightVector & weights, std::span<const double> losses, double eta)
{
  if (weights.size() != losses.size()) {
    throw ArgumentError("mixloss: dimension mismatch");
  }
  std::vector<double> terms(losses.size());
  for (std::size_t n = 0; n < losses.size(); ++n) {
    terms[n] = weights.log_weight(n) - eta * losses[n];
  }
  return -log_sum_exp(terms) / eta;
}

/// Log-space vector-matrix product: out_j = LSE_i (x_i + logK(i, j)).
inline std::vector<double> log_vec_mat(std::span<const double> x, const Matrix & log_kernel)
{
  const std::size_t n = x.size();
  std::vector<double> out(log_kernel.cols());
  std::vector<double> terms(n);
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      terms[i] = x[i] + log_kernel(i, j);
    }
    out[j] = log_sum_exp(terms);
  }
  return out;
}

/// Log-space matrix product.
inline Matrix log_mat_mat(const Matrix & a, const Matrix & b)
{
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = log_vec_mat(a.row(r), b);
    std::copy(row.begin(), row.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace longcast

#endif  // LONGCAST_WEIGHTS_HPP_
