#ifndef LONGCAST_GAME_HPP_
#define LONGCAST_GAME_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aggregator.hpp"
#include "errors.hpp"
#include "loss.hpp"
#include "numeric.hpp"
#include "oracle.hpp"
#include "weights.hpp"

namespace longcast
{

/// Outcomes, expert forecasts (T x N), delay, and the loss they are scored with.
struct GameInput
{
  std::vector<double> outcomes;
  Matrix forecasts;
  std::size_t delay = 1;
  LossSpec loss = LossSpec::square();

  std::size_t steps() const noexcept { return outcomes.size(); }
  std::size_t num_experts() const noexcept { return forecasts.cols(); }
};

inline void validate(const GameInput & in)
{
  if (in.outcomes.empty()) {
    throw ArgumentError("game needs T >= 1 steps");
  }
  if (in.forecasts.cols() == 0) {
    throw ArgumentError("game needs N >= 1 experts");
  }
  if (in.forecasts.rows() != in.outcomes.size()) {
    throw ArgumentError(
            "forecast rows (" + std::to_string(in.forecasts.rows()) + ") differ from outcomes (" +
            std::to_string(in.outcomes.size()) + ")");
  }
  if (in.delay == 0) {
    throw ArgumentError("delay D must be >= 1");
  }
  for (std::size_t t = 0; t < in.steps(); ++t) {
    if (!in.loss.outcome_in_domain(in.outcomes[t])) {
      throw DomainError(
              "step " + std::to_string(t + 1) + ": outcome " + std::to_string(in.outcomes[t]) +
              " outside the " + std::string(in.loss.name()) + " loss domain");
    }
    for (std::size_t n = 0; n < in.num_experts(); ++n) {
      if (!in.loss.prediction_in_domain(in.forecasts(t, n))) {
        throw DomainError(
                "step " + std::to_string(t + 1) + ", expert " + std::to_string(n + 1) +
                ": forecast outside the prediction domain");
      }
    }
  }
}

/// Per-expert loss table l_t^n (T x N).
inline Matrix expert_losses(const GameInput & in)
{
  Matrix l(in.steps(), in.num_experts());
  for (std::size_t t = 0; t < in.steps(); ++t) {
    for (std::size_t n = 0; n < in.num_experts(); ++n) {
      l(t, n) = in.loss(in.outcomes[t], in.forecasts(t, n));
    }
  }
  return l;
}

/**
 * @brief Everything recorded while playing one game.
 *
 * Per-step vectors are indexed by t - 1. `cumulative_expert_loss` holds the
 * final L_T^n; `regret_curve[t-1]` is H_t - min_n L_t^n.
 */
struct GameTrace
{
  double eta = 0.0;
  std::size_t delay = 1;
  std::vector<double> gamma;
  std::vector<double> h;
  std::vector<double> m;
  Matrix losses;
  std::vector<double> cumulative_h;
  std::vector<double> cumulative_m;
  std::vector<double> regret_curve;
  std::vector<double> cumulative_expert_loss;
  std::size_t best_expert = 0;
  std::optional<Matrix> weights;

  std::size_t steps() const noexcept { return h.size(); }
  double total_loss() const { return cumulative_h.empty() ? 0.0 : cumulative_h.back(); }
  double total_mixloss() const { return cumulative_m.empty() ? 0.0 : cumulative_m.back(); }
  double best_expert_loss() const { return cumulative_expert_loss.at(best_expert); }
  double regret() const { return regret_curve.empty() ? 0.0 : regret_curve.back(); }

  /// max_t (h_t - m_t); nonpositive up to rounding when eta is an exp-concavity level.
  double max_mixloss_excess() const
  {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < h.size(); ++t) {
      worst = std::max(worst, h[t] - m[t]);
    }
    return worst;
  }
};

/// Lowest index among the minimizers.
inline std::size_t argmin_lowest(std::span<const double> v)
{
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

/**
 * @brief Plays the delayed-feedback game.
 *
 * Forecasts for steps 1..D come from the engine's initial weights. At step
 * t the outcome is revealed, the step-t forecasts (made at t - D) are
 * charged, the engine consumes the step-t losses, and the forecast for
 * t + D is emitted when t + D <= T.
 */
template<WeightEngine Engine>
GameTrace run_game(const GameInput & in, Engine & engine, bool record_weights = false)
{
  validate(in);
  const std::size_t steps = in.steps();
  const std::size_t n = in.num_experts();
  const std::size_t delay = in.delay;
  if (engine.delay() != delay) {
    throw ArgumentError(
            "engine delay " + std::to_string(engine.delay()) + " differs from game delay " +
            std::to_string(delay));
  }
  if (engine.num_experts() != n) {
    throw ArgumentError("engine and game disagree on the number of experts");
  }
  if (engine.revealed() != 0) {
    throw ArgumentError("run_game needs a freshly initialized engine");
  }

  GameTrace tr;
  tr.eta = engine.eta();
  tr.delay = delay;
  tr.gamma.assign(steps, 0.0);
  tr.h.reserve(steps);
  tr.m.reserve(steps);
  tr.losses = expert_losses(in);
  tr.cumulative_h.reserve(steps);
  tr.cumulative_m.reserve(steps);
  tr.regret_curve.reserve(steps);
  tr.cumulative_expert_loss.assign(n, 0.0);
  if (record_weights) {
    tr.weights = Matrix(steps, n);
  }

  auto emit = [&](std::size_t t) {
      const WeightVector & w = engine.weights_for(t);
      tr.gamma[t - 1] = predict(w, in.forecasts.row(t - 1));
      if (record_weights) {
        for (std::size_t k = 0; k < n; ++k) {
          (*tr.weights)(t - 1, k) = w.probability(k);
        }
      }
    };
  for (std::size_t t = 1; t <= std::min(delay, steps); ++t) {
    emit(t);
  }

  double hsum = 0.0;
  double msum = 0.0;
  for (std::size_t t = 1; t <= steps; ++t) {
    const double omega = in.outcomes[t - 1];
    const auto l = tr.losses.row(t - 1);
    const double h = in.loss(omega, tr.gamma[t - 1]);
    const double m = mixloss(engine.weights_for(t), l, tr.eta);
    tr.h.push_back(h);
    tr.m.push_back(m);
    hsum += h;
    msum += m;
    for (std::size_t k = 0; k < n; ++k) {
      tr.cumulative_expert_loss[k] += l[k];
    }
    tr.cumulative_h.push_back(hsum);
    tr.cumulative_m.push_back(msum);
    tr.regret_curve.push_back(
      hsum - *std::min_element(tr.cumulative_expert_loss.begin(), tr.cumulative_expert_loss.end()));

    engine.reveal(l);
    if (t + delay <= steps) {
      emit(t + delay);
    }
  }
  tr.best_expert = argmin_lowest(tr.cumulative_expert_loss);
  return tr;
}

/// Convenience: builds the engine from (algorithm, prior, eta) and plays.
inline GameTrace run_game(
  const GameInput & in, Algorithm algo, const ExpertPrior & prior, double eta,
  bool record_weights = false)
{
  Aggregator agg = init_state(algo, prior, in.delay, eta);
  return run_game(in, agg, record_weights);
}

/// Exact loss bound for the one-step posterior aggregator on this game.
inline double posterior_loss_bound(const GameInput & in, const SequenceModel & model, double eta)
{
  if (in.delay != 1) {
    throw ArgumentError("the posterior loss bound holds for one-step games (D = 1)");
  }
  validate(in);
  return posterior_loss_bound(model, expert_losses(in), eta);
}

inline double posterior_loss_bound(const GameInput & in, const ExpertPrior & prior, double eta)
{
  return posterior_loss_bound(in, markov_model(prior), eta);
}

/// -(1/eta) ln((1/N) sum_n exp(-eta L_T^n)): the cumulative mixloss of
/// one-step reweighing from a uniform start.
inline double telescoped_mixloss(std::span<const double> cumulative_losses, double eta)
{
  std::vector<double> terms(cumulative_losses.size());
  for (std::size_t n = 0; n < terms.size(); ++n) {
    terms[n] = -eta * cumulative_losses[n];
  }
  return -(log_sum_exp(terms) - std::log(static_cast<double>(terms.size()))) / eta;
}

}  // namespace longcast

#endif  // LONGCAST_GAME_HPP_
