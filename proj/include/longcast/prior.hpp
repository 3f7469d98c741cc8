#ifndef LONGCAST_PRIOR_HPP_
#define LONGCAST_PRIOR_HPP_

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace longcast
{

/**
 * @brief First-order Markov distribution over active-expert sequences.
 *
 * Immutable after construction. Log-space copies of the initial
 * distribution and the transition kernel are cached; zero entries map
 * to -inf.
 */
class ExpertPrior
{
public:
  static constexpr double tolerance = 1e-12;

  ExpertPrior(std::vector<double> initial, Matrix transition)
  : initial_(std::move(initial)), transition_(std::move(transition))
  {
    const std::size_t n = initial_.size();
    if (n == 0) {
      throw ArgumentError("prior needs at least one expert");
    }
    if (transition_.rows() != n || transition_.cols() != n) {
      throw ArgumentError("transition matrix must be N x N");
    }
    check_distribution(initial_, "initial distribution");
    for (std::size_t i = 0; i < n; ++i) {
      check_distribution(transition_.row(i), "transition row " + std::to_string(i));
    }

    log_initial_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      log_initial_[i] = std::log(initial_[i]);
    }
    log_transition_ = Matrix(n, n);
    identity_ = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        log_transition_(i, j) = std::log(transition_(i, j));
        identity_ = identity_ && transition_(i, j) == (i == j ? 1.0 : 0.0);
      }
    }
  }

  std::size_t num_experts() const noexcept { return initial_.size(); }
  const std::vector<double> & initial() const noexcept { return initial_; }
  const Matrix & transition() const noexcept { return transition_; }
  const std::vector<double> & log_initial() const noexcept { return log_initial_; }
  const Matrix & log_transition() const noexcept { return log_transition_; }

  /// True when the kernel is exactly the identity (experts never switch).
  bool is_identity() const noexcept { return identity_; }

private:
  static void check_distribution(std::span<const double> p, const std::string & what)
  {
    double total = 0.0;
    for (double v : p) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ArgumentError(what + " has a negative or non-finite entry");
      }
      total += v;
    }
    if (std::abs(total - 1.0) > tolerance) {
      throw ArgumentError(what + " sums to " + std::to_string(total) + ", not 1");
    }
  }

  std::vector<double> initial_;
  Matrix transition_;
  std::vector<double> log_initial_;
  Matrix log_transition_;
  bool identity_ = false;
};

/// Uniform start, experts never switch.
inline ExpertPrior identity_prior(std::size_t num_experts)
{
  if (num_experts == 0) {
    throw ArgumentError("identity_prior needs N >= 1");
  }
  Matrix eye(num_experts, num_experts);
  for (std::size_t i = 0; i < num_experts; ++i) {
    eye(i, i) = 1.0;
  }
  return ExpertPrior(
    std::vector<double>(num_experts, 1.0 / static_cast<double>(num_experts)), std::move(eye));
}

/// Uniform start; each step keeps the expert with probability 1 - alpha and
/// otherwise redraws uniformly over all N experts (self included).
inline ExpertPrior fixed_share_prior(std::size_t num_experts, double alpha)
{
  if (num_experts == 0) {
    throw ArgumentError("fixed_share_prior needs N >= 1");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ArgumentError("fixed-share alpha must lie in [0,1], got " + std::to_string(alpha));
  }
  const double n = static_cast<double>(num_experts);
  Matrix k(num_experts, num_experts, alpha / n);
  for (std::size_t i = 0; i < num_experts; ++i) {
    k(i, i) = (1.0 - alpha) + alpha / n;
  }
  return ExpertPrior(std::vector<double>(num_experts, 1.0 / n), std::move(k));
}

/// ln p0(n1) + sum ln p(n_t | n_{t-1}); -inf when the sequence has zero mass.
inline double sequence_log_prob(const ExpertPrior & prior, std::span<const std::size_t> sequence)
{
  if (sequence.empty()) {
    throw ArgumentError("sequence must be nonempty");
  }
  for (std::size_t n : sequence) {
    if (n >= prior.num_experts()) {
      throw ArgumentError(
              "expert index " + std::to_string(n) + " out of range for N=" +
              std::to_string(prior.num_experts()));
    }
  }
  double lp = prior.log_initial()[sequence[0]];
  for (std::size_t t = 1; t < sequence.size(); ++t) {
    lp += prior.log_transition()(sequence[t - 1], sequence[t]);
  }
  return lp;
}

/// Marginal p(n_t) = p0 K^{t-1} for 1-based t, in linear space.
inline std::vector<double> prior_marginal(const ExpertPrior & prior, std::size_t t)
{
  if (t == 0) {
    throw ArgumentError("time index is 1-based");
  }
  const std::size_t n = prior.num_experts();
  std::vector<double> p = prior.initial();
  for (std::size_t step = 1; step < t; ++step) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        next[j] += p[i] * prior.transition()(i, j);
      }
    }
    p = std::move(next);
  }
  return p;
}

/// Parses `identity` or `fixed-share:ALPHA`.
inline ExpertPrior parse_prior(std::string_view spec, std::size_t num_experts)
{
  if (spec == "identity") {
    return identity_prior(num_experts);
  }
  constexpr std::string_view fs = "fixed-share:";
  if (spec.substr(0, fs.size()) == fs) {
    const std::string tail(spec.substr(fs.size()));
    char * end = nullptr;
    const double alpha = std::strtod(tail.c_str(), &end);
    if (tail.empty() || end != tail.c_str() + tail.size()) {
      throw ArgumentError("bad fixed-share alpha '" + tail + "'");
    }
    return fixed_share_prior(num_experts, alpha);
  }
  throw ArgumentError(
          "unknown prior '" + std::string(spec) + "' (expected identity|fixed-share:ALPHA)");
}

}  // namespace longcast

#endif  // LONGCAST_PRIOR_HPP_
