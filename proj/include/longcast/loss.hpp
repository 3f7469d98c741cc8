#ifndef LONGCAST_LOSS_HPP_
#define LONGCAST_LOSS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace longcast
{

struct Interval
{
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  double width() const noexcept { return hi - lo; }
};

enum class LossKind { square, log };

inline constexpr double log_loss_clip = 1e-6;

inline double square_loss(double omega, double gamma)
{
  if (!(omega >= 0.0 && omega <= 1.0) || !(gamma >= 0.0 && gamma <= 1.0)) {
    throw DomainError(
            "square loss requires omega and gamma in [0,1], got (" + std::to_string(omega) + ", " +
            std::to_string(gamma) + ")");
  }
  const double r = omega - gamma;
  return r * r;
}

/// Log loss with the prediction clipped into [clip, 1 - clip].
inline double log_loss(double omega, double gamma, double clip = log_loss_clip)
{
  if (omega != 0.0 && omega != 1.0) {
    throw DomainError("log loss requires omega in {0,1}, got " + std::to_string(omega));
  }
  if (std::isnan(gamma)) {
    throw DomainError("log loss prediction is NaN");
  }
  const double g = std::clamp(gamma, clip, 1.0 - clip);
  return omega == 1.0 ? -std::log(g) : -std::log1p(-g);
}

/**
 * @brief A loss function on scalar outcomes and predictions with the
 * constants the regret bounds need.
 *
 * `range_bound` (H) bounds the loss over the whole domain, `lipschitz` (L)
 * bounds its slope in the prediction, and `prediction_bound` (B) bounds
 * |gamma|. `default_eta` is the exp-concavity level used when no learning
 * rate is given.
 */
struct LossSpec
{
  LossKind kind = LossKind::square;
  Interval omega_domain{};
  Interval gamma_domain{};
  bool binary_outcomes = false;
  double clip = 0.0;
  double range_bound = 1.0;
  double lipschitz = 2.0;
  double prediction_bound = 1.0;
  double default_eta = 0.5;

  std::string_view name() const noexcept { return kind == LossKind::square ? "square" : "log"; }

  double operator()(double omega, double gamma) const
  {
    return kind == LossKind::square ? square_loss(omega, gamma) : log_loss(omega, gamma, clip);
  }

  bool outcome_in_domain(double omega) const noexcept
  {
    if (binary_outcomes) {
      return omega == 0.0 || omega == 1.0;
    }
    return omega_domain.contains(omega);
  }

  bool prediction_in_domain(double gamma) const noexcept { return gamma_domain.contains(gamma); }

  /// Interval of predictions on which the loss is not flattened by clipping.
  Interval effective_gamma_domain() const noexcept
  {
    return {gamma_domain.lo + clip, gamma_domain.hi - clip};
  }

  static LossSpec square()
  {
    return LossSpec{};
  }

  static LossSpec log(double clip = log_loss_clip)
  {
    LossSpec spec;
    spec.kind = LossKind::log;
    spec.binary_outcomes = true;
    spec.clip = clip;
    // 1 - clip is rounded, so the omega = 0 side can sit a hair above -ln(clip)
    spec.range_bound = std::max(-std::log(clip), -std::log1p(-(1.0 - clip)));
    spec.lipschitz = 1.0 / clip;
    spec.default_eta = 1.0;
    return spec;
  }
};

inline LossSpec make_loss(std::string_view name)
{
  if (name == "square") {
    return LossSpec::square();
  }
  if (name == "log") {
    return LossSpec::log();
  }
  throw ArgumentError("unknown loss '" + std::string(name) + "' (expected square|log)");
}

// ---------------------------------------------------------------------------
// exp-concavity
// ---------------------------------------------------------------------------

inline constexpr double concavity_tolerance = 1e-12;

/// One instance of the exp-concavity inequality: an outcome and a finite
/// distribution over predictions.
struct ConcavityCase
{
  double omega = 0.0;
  std::vector<double> support;
  std::vector<double> probabilities;
};

/**
 * @brief Amount by which the mixture of exponentiated losses exceeds the
 * exponentiated loss of the mean prediction. Positive means violation.
 */
inline double concavity_gap(const LossSpec & loss, double eta, const ConcavityCase & c)
{
  double mean = 0.0;
  double mixture = 0.0;
  for (std::size_t i = 0; i < c.support.size(); ++i) {
    mean += c.probabilities[i] * c.support[i];
    mixture += c.probabilities[i] * std::exp(-eta * loss(c.omega, c.support[i]));
  }
  const Interval dom = loss.gamma_domain;
  mean = std::clamp(mean, dom.lo, dom.hi);
  return mixture - std::exp(-eta * loss(c.omega, mean));
}

/// Random cases drawn from the loss domain; deterministic in `seed`.
inline std::vector<ConcavityCase> sample_concavity_cases(
  const LossSpec & loss, std::size_t trials, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  const Interval gam = loss.effective_gamma_domain();
  std::uniform_real_distribution<double> omega_dist(loss.omega_domain.lo, loss.omega_domain.hi);
  std::uniform_real_distribution<double> gamma_dist(gam.lo, gam.hi);
  std::uniform_int_distribution<int> size_dist(2, 8);
  std::bernoulli_distribution bit(0.5);
  std::exponential_distribution<double> expo(1.0);

  std::vector<ConcavityCase> cases(trials);
  for (auto & c : cases) {
    c.omega = loss.binary_outcomes ? (bit(rng) ? 1.0 : 0.0) : omega_dist(rng);
    const auto k = static_cast<std::size_t>(size_dist(rng));
    c.support.resize(k);
    c.probabilities.resize(k);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      c.support[i] = gamma_dist(rng);
      c.probabilities[i] = expo(rng);
      total += c.probabilities[i];
    }
    for (auto & p : c.probabilities) {
      p /= total;
    }
  }
  return cases;
}

struct ConcavityReport
{
  bool passed = true;
  double worst_gap = -std::numeric_limits<double>::infinity();
  std::optional<ConcavityCase> counterexample;
};

namespace detail
{

// Hill-climbs the gap from `start` with shrinking random perturbations.
inline ConcavityCase refine_concavity_case(
  const LossSpec & loss, double eta, ConcavityCase start, std::mt19937_64 & rng,
  std::size_t iterations = 4000)
{
  const Interval gam = loss.effective_gamma_domain();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution bit(0.5);
  double best = concavity_gap(loss, eta, start);
  double step = 0.25 * gam.width();
  for (std::size_t it = 0; it < iterations; ++it) {
    ConcavityCase trial = start;
    if (!loss.binary_outcomes) {
      trial.omega = std::clamp(
        trial.omega + step * gauss(rng), loss.omega_domain.lo, loss.omega_domain.hi);
    } else if (it % 50 == 0) {
      trial.omega = bit(rng) ? 1.0 : 0.0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < trial.support.size(); ++i) {
      trial.support[i] = std::clamp(trial.support[i] + step * gauss(rng), gam.lo, gam.hi);
      trial.probabilities[i] = std::max(trial.probabilities[i] * std::exp(step * gauss(rng)), 1e-12);
      total += trial.probabilities[i];
    }
    for (auto & p : trial.probabilities) {
      p /= total;
    }
    const double gap = concavity_gap(loss, eta, trial);
    if (gap > best) {
      best = gap;
      start = std::move(trial);
    } else if ((it + 1) % 200 == 0) {
      step *= 0.5;
    }
  }
  return start;
}

}  // namespace detail

/**
 * @brief Searches for a violation of eta-exponential concavity.
 *
 * Monte Carlo over random outcomes and finite prediction distributions;
 * when no sample violates the inequality, the worst sample is refined
 * locally before declaring a pass.
 */
inline ConcavityReport check_exp_concavity(
  const LossSpec & loss, double eta, std::size_t trials, std::uint64_t seed)
{
  if (trials == 0) {
    throw ArgumentError("check_exp_concavity needs at least one trial");
  }
  if (!(eta > 0.0)) {
    throw ArgumentError("eta must be positive");
  }
  ConcavityReport report;
  const auto cases = sample_concavity_cases(loss, trials, seed);
  const ConcavityCase * worst = nullptr;
  for (const auto & c : cases) {
    const double gap = concavity_gap(loss, eta, c);
    if (gap > report.worst_gap) {
      report.worst_gap = gap;
      worst = &c;
    }
    if (gap > concavity_tolerance) {
      report.passed = false;
      report.counterexample = c;
      return report;
    }
  }

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  ConcavityCase refined = detail::refine_concavity_case(loss, eta, *worst, rng);
  const double gap = concavity_gap(loss, eta, refined);
  report.worst_gap = std::max(report.worst_gap, gap);
  if (gap > concavity_tolerance) {
    report.passed = false;
    report.counterexample = std::move(refined);
  }
  return report;
}

}  // namespace longcast

#endif  // LONGCAST_LOSS_HPP_
