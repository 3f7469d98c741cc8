#ifndef LONGCAST_EXPERIMENT_HPP_
#define LONGCAST_EXPERIMENT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aggregator.hpp"
#include "bounds.hpp"
#include "game.hpp"
#include "generate.hpp"
#include "io.hpp"
#include "prior.hpp"

namespace longcast
{

/// One fully specified run. Data come from `data_path` when set, else from `generator`.
struct RunConfig
{
  Algorithm algo = Algorithm::v1;
  std::string loss = "square";
  std::string prior = "identity";
  std::size_t delay = 1;
  std::optional<double> eta;            ///< empty means "auto": eta_star
  double epsilon_frac = default_epsilon_frac;
  std::optional<std::filesystem::path> data_path;
  GeneratorSpec generator;
  bool record_weights = false;
};

struct RunResult
{
  GameTrace trace;
  RunMetadata metadata;
  double bound = 0.0;
};

inline GameInput load_game(const RunConfig & cfg)
{
  const LossSpec loss = make_loss(cfg.loss);
  GameInput g;
  if (cfg.data_path) {
    g = parse_game_file(*cfg.data_path, loss, cfg.delay);
  } else {
    GeneratorSpec spec = cfg.generator;
    if (spec.model == GameModel::adversarial_swap && spec.block == 0) {
      spec.block = cfg.delay;
    }
    spec.binary_outcomes = spec.binary_outcomes || loss.binary_outcomes;
    g = generate_game(spec);
    g.loss = loss;
    g.delay = cfg.delay;
  }
  validate(g);
  return g;
}

/// Fixed rate, or eta_star for the game's (N, T, D) under the loss.
inline double resolve_eta(const RunConfig & cfg, const GameInput & g)
{
  if (cfg.eta) {
    return *cfg.eta;
  }
  if (g.num_experts() < 2) {
    return g.loss.default_eta;
  }
  return eta_star(g.num_experts(), g.steps(), g.loss, g.delay, cfg.epsilon_frac).eta;
}

/**
 * @brief The regret guarantee that applies to this algorithm and rate,
 * against the best fixed expert. NaN when none is available in closed form
 * (switching priors with D > 1).
 */
inline double regret_guarantee(
  Algorithm algo, const ExpertPrior & prior, const LossSpec & loss, std::size_t steps,
  std::size_t delay, double eta, double epsilon_frac = default_epsilon_frac)
{
  const std::size_t n = prior.num_experts();
  switch (algo) {
    case Algorithm::v1:
      return v1_regret_bound(n, eta);
    case Algorithm::vd_replicated:
      return vd_regret_bound(n, delay, eta);
    case Algorithm::vdfc:
      if (delay == 1 || n < 2) {
        return v1_regret_bound(n, eta);
      } else {
        const auto c = eta_star(n, steps, loss, delay, epsilon_frac);
        return v1_regret_bound(n, eta) + c.f_constant * static_cast<double>(n * steps) * eta;
      }
    case Algorithm::g_markov:
      if (delay == 1) {
        // worst case over the constant comparator sequences
        double worst = 0.0;
        std::vector<std::size_t> seq(steps);
        for (std::size_t k = 0; k < n; ++k) {
          std::fill(seq.begin(), seq.end(), k);
          worst = std::max(worst, sequence_regret_bound(prior, seq, eta));
        }
        return worst;
      }
      if (prior.is_identity()) {
        return regret_guarantee(Algorithm::vdfc, prior, loss, steps, delay, eta, epsilon_frac);
      }
      return std::numeric_limits<double>::quiet_NaN();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

inline RunResult run_experiment(const RunConfig & cfg)
{
  const GameInput g = load_game(cfg);
  const ExpertPrior prior = parse_prior(cfg.prior, g.num_experts());
  const double eta = resolve_eta(cfg, g);

  RunResult r;
  r.trace = run_game(g, cfg.algo, prior, eta, cfg.record_weights);
  r.metadata.algo = std::string(algorithm_name(cfg.algo));
  r.metadata.loss = cfg.loss;
  r.metadata.prior = cfg.prior;
  r.metadata.experts = g.num_experts();
  r.metadata.steps = g.steps();
  r.metadata.delay = g.delay;
  r.metadata.eta = eta;
  r.metadata.eta_policy = cfg.eta ? "fixed" : "auto";
  r.metadata.source = cfg.data_path ? cfg.data_path->string() :
    std::string(model_name(cfg.generator.model));
  r.metadata.seed = cfg.generator.seed;
  r.bound = regret_guarantee(cfg.algo, prior, g.loss, g.steps(), g.delay, eta, cfg.epsilon_frac);
  return r;
}

}  // namespace longcast

#endif  // LONGCAST_EXPERIMENT_HPP_
