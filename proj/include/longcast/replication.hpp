#ifndef LONGCAST_REPLICATION_HPP_
#define LONGCAST_REPLICATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "game.hpp"
#include "numeric.hpp"

namespace longcast
{

/**
 * @brief Stretches a one-step game into a D-step game by repeating every
 * step D times: omega''_t = omega'_{ceil(t/D)}, and likewise for forecasts.
 */
inline GameInput replicate_game(const GameInput & one_step, std::size_t delay)
{
  if (delay == 0) {
    throw ArgumentError("delay D must be >= 1");
  }
  if (one_step.delay != 1) {
    throw ArgumentError("replicate_game expects a one-step source game");
  }
  validate(one_step);
  GameInput out;
  out.delay = delay;
  out.loss = one_step.loss;
  out.outcomes.reserve(one_step.steps() * delay);
  out.forecasts = Matrix(0, 0);
  for (std::size_t b = 0; b < one_step.steps(); ++b) {
    for (std::size_t k = 0; k < delay; ++k) {
      out.outcomes.push_back(one_step.outcomes[b]);
      out.forecasts.append_row(one_step.forecasts.row(b));
    }
  }
  return out;
}

struct ReplicationReport
{
  /// max_n |L''^n - D L'^n|, evaluated exactly.
  double loss_identity_residual = 0.0;
  /// Expected loss of the D-step strategy on the stretched game.
  double delayed_loss = 0.0;
  /// Expected loss of the derived one-step strategy on the source game.
  double one_step_loss = 0.0;
  double loss_gap = 0.0;            ///< |delayed_loss - D one_step_loss|
  double delayed_regret = 0.0;
  double one_step_regret = 0.0;
  double regret_gap = 0.0;          ///< |delayed_regret - D one_step_regret|
  bool regret_dominates = false;    ///< delayed_regret >= D one_step_regret - tolerance
  Matrix one_step_weights;          ///< derived strategy, one row per source step
  bool passed = false;
};

/**
 * @brief Checks the cumulative-loss identities that relate a D-step
 * strategy on a stretched game to a derived one-step strategy.
 *
 * `strategy_weights` holds the D-step strategy's mixtures on the stretched
 * game (T'D rows of probabilities). The derived one-step strategy plays,
 * at source step b, the average of the D mixtures used inside block b.
 * Expected losses are weighted sums of expert losses.
 */
inline ReplicationReport verify_replication_identity(
  const GameInput & one_step, const Matrix & strategy_weights, std::size_t delay,
  double tolerance = 1e-12)
{
  if (delay == 0) {
    throw ArgumentError("delay D must be >= 1");
  }
  validate(one_step);
  const std::size_t blocks = one_step.steps();
  const std::size_t n = one_step.num_experts();
  if (strategy_weights.rows() != blocks * delay || strategy_weights.cols() != n) {
    throw ArgumentError(
            "strategy has " + std::to_string(strategy_weights.rows()) + " rows; expected T'D = " +
            std::to_string(blocks * delay));
  }

  const GameInput stretched = replicate_game(one_step, delay);
  const Matrix source_losses = expert_losses(one_step);
  const Matrix stretched_losses = expert_losses(stretched);
  const double d = static_cast<double>(delay);

  ReplicationReport r;

  std::vector<ExactSum> source_total(n);
  std::vector<ExactSum> stretched_total(n);
  for (std::size_t k = 0; k < n; ++k) {
    ExactSum diff;
    for (std::size_t t = 0; t < stretched.steps(); ++t) {
      stretched_total[k] += stretched_losses(t, k);
      diff += stretched_losses(t, k);
    }
    for (std::size_t b = 0; b < blocks; ++b) {
      source_total[k] += source_losses(b, k);
      for (std::size_t rep = 0; rep < delay; ++rep) {
        diff += -source_losses(b, k);
      }
    }
    r.loss_identity_residual = std::max(r.loss_identity_residual, std::abs(diff.value()));
  }

  ExactSum delayed;
  for (std::size_t t = 0; t < stretched.steps(); ++t) {
    for (std::size_t k = 0; k < n; ++k) {
      delayed += strategy_weights(t, k) * stretched_losses(t, k);
    }
  }
  r.one_step_weights = Matrix(blocks, n);
  ExactSum one;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t k = 0; k < n; ++k) {
      ExactSum avg;
      for (std::size_t rep = 0; rep < delay; ++rep) {
        avg += strategy_weights(b * delay + rep, k);
      }
      r.one_step_weights(b, k) = avg.value() / d;
      one += r.one_step_weights(b, k) * source_losses(b, k);
    }
  }
  r.delayed_loss = delayed.value();
  r.one_step_loss = one.value();
  r.loss_gap = std::abs(r.delayed_loss - d * r.one_step_loss);

  double best_stretched = std::numeric_limits<double>::infinity();
  double best_source = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    best_stretched = std::min(best_stretched, stretched_total[k].value());
    best_source = std::min(best_source, source_total[k].value());
  }
  r.delayed_regret = r.delayed_loss - best_stretched;
  r.one_step_regret = r.one_step_loss - best_source;
  r.regret_gap = std::abs(r.delayed_regret - d * r.one_step_regret);
  r.regret_dominates = r.delayed_regret >= d * r.one_step_regret - tolerance;
  r.passed = r.loss_identity_residual == 0.0 && r.loss_gap <= tolerance &&
    r.regret_gap <= tolerance && r.regret_dominates;
  return r;
}

}  // namespace longcast

#endif  // LONGCAST_REPLICATION_HPP_
