#ifndef LONGCAST_BOUNDS_HPP_
#define LONGCAST_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "errors.hpp"
#include "loss.hpp"
#include "prior.hpp"

namespace longcast
{

/// Regret of one-step reweighing against the best expert: ln(N) / eta.
inline double v1_regret_bound(std::size_t num_experts, double eta)
{
  if (num_experts == 0 || !(eta > 0.0)) {
    throw ArgumentError("regret bounds need N >= 1 and eta > 0");
  }
  return std::log(static_cast<double>(num_experts)) / eta;
}

/// Replicated learners pay the one-step bound once per grid.
inline double vd_regret_bound(std::size_t num_experts, std::size_t delay, double eta)
{
  return static_cast<double>(delay) * v1_regret_bound(num_experts, eta);
}

/// Regret against a fixed comparator sequence: -(1/eta) ln p(sequence).
inline double sequence_regret_bound(
  const ExpertPrior & prior, std::span<const std::size_t> sequence, double eta)
{
  const double lp = sequence_log_prob(prior, sequence);
  if (lp == -std::numeric_limits<double>::infinity()) {
    return std::numeric_limits<double>::infinity();
  }
  return -lp / eta;
}

// ---------------------------------------------------------------------------
// weight drift over D - 1 unseen losses
// ---------------------------------------------------------------------------

/**
 * @brief Largest change of one expert's weight caused by D - 1 losses in
 * [0, H]: (1 - sqrt(q))^2 / (1 - q) with q = exp(-eta (D - 1) H).
 *
 * Evaluated as (1 - sqrt(q)) / (1 + sqrt(q)), which is the same quantity
 * and stays accurate as eta -> 0. Returns 0 for D = 1 or eta = 0.
 */
inline double drift_bound(double eta, std::size_t delay, double range_bound)
{
  if (!(eta >= 0.0) || delay == 0 || !(range_bound > 0.0)) {
    throw ArgumentError("drift_bound needs eta >= 0, D >= 1, H > 0");
  }
  if (delay == 1 || eta == 0.0) {
    return 0.0;
  }
  const double x = eta * static_cast<double>(delay - 1) * range_bound;
  const double one_minus_root = -std::expm1(-0.5 * x);
  return one_minus_root / (2.0 - one_minus_root);
}

/// q = exp(-eta (D - 1) H), the extreme ratio between two experts' factors.
inline double drift_ratio(double eta, std::size_t delay, double range_bound)
{
  return std::exp(-eta * static_cast<double>(delay - 1) * range_bound);
}

/// Boundary value a = q / ((N - 1) + q) of the first coordinate.
inline double drift_boundary_a(double ratio, std::size_t num_experts)
{
  if (num_experts < 2) {
    throw ArgumentError("drift calculus needs N >= 2");
  }
  return ratio / (static_cast<double>(num_experts - 1) + ratio);
}

/// x - x a / (x a + (1 - x)(1 - a) / (N - 1))
inline double drift_objective(double x, double a, std::size_t num_experts)
{
  if (num_experts < 2) {
    throw ArgumentError("drift calculus needs N >= 2");
  }
  const double rest = (1.0 - x) * (1.0 - a) / static_cast<double>(num_experts - 1);
  return x - x * a / (x * a + rest);
}

/// Stationary point x* = (1 - a - sqrt(a (1 - a)(N - 1))) / (1 - a N).
inline double drift_argmax_x(double a, std::size_t num_experts)
{
  if (num_experts < 2) {
    throw ArgumentError("drift calculus needs N >= 2");
  }
  const double n = static_cast<double>(num_experts);
  if (!(a > 0.0) || !(a < 1.0 / n)) {
    throw ArgumentError("drift_argmax_x requires 0 < a < 1/N, got a = " + std::to_string(a));
  }
  return (1.0 - a - std::sqrt(a * (1.0 - a) * (n - 1.0))) / (1.0 - a * n);
}

// ---------------------------------------------------------------------------
// learning rate for the fully connected delayed algorithm
// ---------------------------------------------------------------------------

inline constexpr double default_epsilon_frac = 0.1;

struct EtaChoice
{
  double eta = 0.0;             ///< rate to use (clamped to the loss's exp-concavity level)
  double unclamped = 0.0;       ///< sqrt(ln N / (F N T)); +inf when F = 0
  bool clamped = false;
  double drift_slope = 0.0;     ///< U(D, H), linear coefficient of the drift bound
  double f_constant = 0.0;      ///< F = B L U
  double bound = 0.0;           ///< ln N / eta + F N T eta at the chosen eta
  double sqrt_bound = 0.0;      ///< 2 sqrt(F N ln N) sqrt(T)
};

/**
 * @brief Rate minimizing ln N / eta + F N T eta, with
 * F = B L (1 + epsilon_frac)(D - 1) H / 4.
 *
 * When D = 1 there is no drift term and the loss's default rate is used.
 */
inline EtaChoice eta_star(
  std::size_t num_experts, std::size_t horizon, const LossSpec & loss, std::size_t delay,
  double epsilon_frac = default_epsilon_frac)
{
  if (num_experts < 2 || horizon == 0 || delay == 0) {
    throw ArgumentError("eta_star needs N >= 2, T >= 1, D >= 1");
  }
  if (!(epsilon_frac >= 0.0)) {
    throw ArgumentError("epsilon_frac must be nonnegative");
  }
  const double n = static_cast<double>(num_experts);
  const double t = static_cast<double>(horizon);
  const double log_n = std::log(n);

  EtaChoice c;
  c.drift_slope = (1.0 + epsilon_frac) * static_cast<double>(delay - 1) * loss.range_bound / 4.0;
  c.f_constant = loss.prediction_bound * loss.lipschitz * c.drift_slope;
  if (c.f_constant == 0.0) {
    c.unclamped = std::numeric_limits<double>::infinity();
    c.eta = loss.default_eta;
    c.clamped = true;
  } else {
    c.unclamped = std::sqrt(log_n / (c.f_constant * n * t));
    c.eta = std::min(c.unclamped, loss.default_eta);
    c.clamped = c.eta < c.unclamped;
  }
  c.bound = log_n / c.eta + c.f_constant * n * t * c.eta;
  c.sqrt_bound = 2.0 * std::sqrt(c.f_constant * n * log_n) * std::sqrt(t);
  return c;
}

}  // namespace longcast

#endif  // LONGCAST_BOUNDS_HPP_
