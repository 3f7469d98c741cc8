#ifndef LONGCAST_ORACLE_HPP_
#define LONGCAST_ORACLE_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"
#include "prior.hpp"
#include "weights.hpp"

namespace longcast
{

inline constexpr double enumeration_guard = 1e7;

/**
 * @brief Arbitrary distribution over active-expert sequences, given by its
 * conditionals: log p(next | history). An empty history asks for the
 * initial distribution.
 */
struct SequenceModel
{
  std::size_t num_experts = 0;
  std::function<double(std::span<const std::size_t> history, std::size_t next)> log_conditional;
};

inline SequenceModel markov_model(const ExpertPrior & prior)
{
  return SequenceModel{
    prior.num_experts(),
    [prior](std::span<const std::size_t> history, std::size_t next) {
      return history.empty() ? prior.log_initial()[next] :
             prior.log_transition()(history.back(), next);
    }};
}

/// Independent uniform start on each of the D grids, then n_t = n_{t-D}.
inline SequenceModel replicated_model(std::size_t num_experts, std::size_t delay)
{
  if (num_experts == 0 || delay == 0) {
    throw ArgumentError("replicated_model needs N >= 1 and D >= 1");
  }
  const double log_uniform = -std::log(static_cast<double>(num_experts));
  return SequenceModel{
    num_experts,
    [log_uniform, delay](std::span<const std::size_t> history, std::size_t next) {
      if (history.size() < delay) {
        return log_uniform;
      }
      return history[history.size() - delay] == next ? 0.0 : neg_inf;
    }};
}

namespace detail
{

inline void check_enumeration(std::size_t n, std::size_t length)
{
  if (enumeration_size(n, length) > enumeration_guard) {
    throw CapacityError(
            "enumerating " + std::to_string(n) + "^" + std::to_string(length) +
            " sequences exceeds the guard of 1e7");
  }
}

// Depth-first walk over all sequences of `length`; `score(depth, expert)`
// adds the per-step loss term, `leaf` receives (last expert, log weight).
template<typename Score, typename Leaf>
void enumerate_sequences(
  const SequenceModel & model, std::size_t length, Score && score, Leaf && leaf)
{
  std::vector<std::size_t> seq;
  seq.reserve(length);
  auto rec = [&](auto && self, double acc) -> void {
      if (seq.size() == length) {
        leaf(seq.back(), acc);
        return;
      }
      const std::size_t depth = seq.size();
      for (std::size_t n = 0; n < model.num_experts; ++n) {
        const double lp = model.log_conditional(seq, n);
        if (lp == neg_inf) {
          continue;
        }
        seq.push_back(n);
        self(self, acc + lp + score(depth, n));
        seq.pop_back();
      }
    };
  rec(rec, 0.0);
}

}  // namespace detail

/**
 * @brief Posterior marginal p(n_t | Xi_{t-D}) by exhaustive enumeration.
 *
 * `losses` holds one row per time step (row 0 is t = 1). Every sequence
 * (n_1..n_t) is weighted by its prior probability times
 * exp(-eta loss[tau][n_tau]) for tau <= t - D; the normalized marginal of
 * n_t is returned. This is the reference for every fast update.
 */
inline WeightVector brute_force_posterior(
  const SequenceModel & model, const Matrix & losses, double eta, std::size_t t,
  std::size_t delay)
{
  if (t == 0) {
    throw ArgumentError("time index is 1-based");
  }
  const std::size_t n = model.num_experts;
  const std::size_t conditioned = t > delay ? t - delay : 0;
  if (conditioned > losses.rows() || (conditioned > 0 && losses.cols() != n)) {
    throw ArgumentError("loss table too short or wrong width for the requested step");
  }
  detail::check_enumeration(n, t);

  std::vector<std::vector<double>> by_last(n);
  detail::enumerate_sequences(
    model, t,
    [&](std::size_t depth, std::size_t expert) {
      return depth < conditioned ? -eta * losses(depth, expert) : 0.0;
    },
    [&](std::size_t last, double log_w) {by_last[last].push_back(log_w);});

  std::vector<double> marginal(n);
  for (std::size_t i = 0; i < n; ++i) {
    marginal[i] = log_sum_exp(by_last[i]);
  }
  return WeightVector::from_log(std::move(marginal));
}

inline WeightVector brute_force_posterior(
  const ExpertPrior & prior, const Matrix & losses, double eta, std::size_t t, std::size_t delay)
{
  return brute_force_posterior(markov_model(prior), losses, eta, t, delay);
}

/**
 * @brief Loss upper bound for the one-step posterior aggregator:
 * -(1/eta) ln E_p[exp(-eta L_T^{N_T})], exact by enumeration.
 */
inline double posterior_loss_bound(const SequenceModel & model, const Matrix & losses, double eta)
{
  const std::size_t t = losses.rows();
  if (t == 0) {
    throw ArgumentError("empty loss table");
  }
  if (losses.cols() != model.num_experts) {
    throw ArgumentError("loss table width differs from the number of experts");
  }
  detail::check_enumeration(model.num_experts, t);
  std::vector<double> terms;
  detail::enumerate_sequences(
    model, t,
    [&](std::size_t depth, std::size_t expert) {return -eta * losses(depth, expert);},
    [&](std::size_t, double log_w) {terms.push_back(log_w);});
  return -log_sum_exp(terms) / eta;
}

inline double posterior_loss_bound(const ExpertPrior & prior, const Matrix & losses, double eta)
{
  return posterior_loss_bound(markov_model(prior), losses, eta);
}

}  // namespace longcast

#endif  // LONGCAST_ORACLE_HPP_
