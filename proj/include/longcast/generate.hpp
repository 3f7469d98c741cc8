#ifndef LONGCAST_GENERATE_HPP_
#define LONGCAST_GENERATE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "game.hpp"
#include "loss.hpp"

namespace longcast
{

enum class GameModel { noisy_experts, drifting_best, adversarial_swap };

inline std::string_view model_name(GameModel m) noexcept
{
  switch (m) {
    case GameModel::noisy_experts: return "noisy-experts";
    case GameModel::drifting_best: return "drifting-best";
    case GameModel::adversarial_swap: return "adversarial-swap";
  }
  return "?";
}

inline GameModel parse_model(std::string_view name)
{
  if (name == "noisy-experts") {return GameModel::noisy_experts;}
  if (name == "drifting-best") {return GameModel::drifting_best;}
  if (name == "adversarial-swap") {return GameModel::adversarial_swap;}
  throw ArgumentError(
          "unknown generator '" + std::string(name) +
          "' (expected noisy-experts|drifting-best|adversarial-swap)");
}

struct GeneratorSpec
{
  GameModel model = GameModel::noisy_experts;
  std::size_t experts = 5;
  std::size_t steps = 1000;
  double noise = 0.3;
  std::uint64_t seed = 1;
  /// Block length for adversarial-swap.
  std::size_t block = 1;
  /// Draw outcomes as Bernoulli(signal) so the game can be scored with log loss.
  bool binary_outcomes = false;
};

namespace detail
{

// Reflected Gaussian random walk confined to [0, 1].
inline std::vector<double> latent_signal(std::size_t steps, std::mt19937_64 & rng)
{
  std::normal_distribution<double> step(0.0, 0.05);
  std::vector<double> s(steps);
  double x = 0.5;
  for (auto & v : s) {
    x += step(rng);
    if (x < 0.0) {x = -x;}
    if (x > 1.0) {x = 2.0 - x;}
    x = std::clamp(x, 0.0, 1.0);
    v = x;
  }
  return s;
}

inline double clip01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace detail

/**
 * @brief Synthetic games, deterministic in the seed.
 *
 * - noisy-experts: expert n (1-based) reports the latent signal plus
 *   independent Gaussian noise with standard deviation noise * n / N.
 * - drifting-best: the leading expert changes every T/5 steps, cycling
 *   through 1..N. The leader reports the signal exactly; the others share
 *   one Gaussian shock per step, scaled by 0.3 + 0.7 (n-1)/(N-1), so the
 *   crowd cannot average its errors away and expert 1 is best overall.
 * - adversarial-swap: binary outcomes; experts 1 and 2 take turns being
 *   perfect in blocks of `block` steps, the other one is off by `noise`.
 *   Any further experts forecast 0.5.
 *
 * The returned game has delay 1 and square loss; callers set both.
 */
inline GameInput generate_game(const GeneratorSpec & spec)
{
  if (spec.experts == 0 || spec.steps == 0) {
    throw ArgumentError("generator needs N >= 1 and T >= 1");
  }
  if (!(spec.noise >= 0.0)) {
    throw ArgumentError("noise must be nonnegative");
  }
  std::mt19937_64 rng(spec.seed);
  const std::size_t n = spec.experts;
  const std::size_t steps = spec.steps;

  GameInput g;
  g.outcomes.resize(steps);
  g.forecasts = Matrix(steps, n);

  switch (spec.model) {
    case GameModel::noisy_experts:
    case GameModel::drifting_best: {
        const auto signal = detail::latent_signal(steps, rng);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::bernoulli_distribution coin;
        for (std::size_t t = 0; t < steps; ++t) {
          if (spec.model == GameModel::noisy_experts) {
            for (std::size_t k = 0; k < n; ++k) {
              const double sd = spec.noise * static_cast<double>(k + 1) / static_cast<double>(n);
              g.forecasts(t, k) = detail::clip01(signal[t] + sd * gauss(rng));
            }
          } else {
            const std::size_t phase = t * 5 / steps;
            const std::size_t leader = phase % n;
            const double shock = spec.noise * gauss(rng);
            for (std::size_t k = 0; k < n; ++k) {
              const double scale = k == leader ? 0.0 :
                0.3 + 0.7 * static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(n - 1, 1));
              g.forecasts(t, k) = detail::clip01(signal[t] + scale * shock);
            }
          }
          if (spec.binary_outcomes) {
            coin = std::bernoulli_distribution(signal[t]);
            g.outcomes[t] = coin(rng) ? 1.0 : 0.0;
          } else {
            g.outcomes[t] = signal[t];
          }
        }
        break;
      }
    case GameModel::adversarial_swap: {
        if (spec.noise > 1.0) {
          throw ArgumentError("adversarial-swap noise must lie in [0,1]");
        }
        if (spec.block == 0) {
          throw ArgumentError("adversarial-swap block length must be >= 1");
        }
        std::bernoulli_distribution bit(0.5);
        for (std::size_t t = 0; t < steps; ++t) {
          const double omega = bit(rng) ? 1.0 : 0.0;
          const double off = omega + (1.0 - 2.0 * omega) * spec.noise;
          const bool first_on = (t / spec.block) % 2 == 0;
          g.outcomes[t] = omega;
          for (std::size_t k = 0; k < n; ++k) {
            if (k == 0) {
              g.forecasts(t, k) = first_on ? omega : off;
            } else if (k == 1) {
              g.forecasts(t, k) = first_on ? off : omega;
            } else {
              g.forecasts(t, k) = 0.5;
            }
          }
        }
        break;
      }
  }
  return g;
}

}  // namespace longcast

#endif  // LONGCAST_GENERATE_HPP_
