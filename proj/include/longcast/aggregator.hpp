#ifndef LONGCAST_AGGREGATOR_HPP_
#define LONGCAST_AGGREGATOR_HPP_

#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "prior.hpp"
#include "weights.hpp"

namespace longcast
{

enum class Algorithm { v1, vd_replicated, vdfc, g_markov };

inline std::string_view algorithm_name(Algorithm a) noexcept
{
  switch (a) {
    case Algorithm::v1: return "v1";
    case Algorithm::vd_replicated: return "vd";
    case Algorithm::vdfc: return "vdfc";
    case Algorithm::g_markov: return "g-markov";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view name)
{
  if (name == "v1") {return Algorithm::v1;}
  if (name == "vd") {return Algorithm::vd_replicated;}
  if (name == "vdfc") {return Algorithm::vdfc;}
  if (name == "g-markov") {return Algorithm::g_markov;}
  throw ArgumentError("unknown algorithm '" + std::string(name) + "' (expected v1|vd|vdfc|g-markov)");
}

/**
 * @brief Anything that emits weights for D future steps and consumes one
 * revealed loss vector per step.
 *
 * Time is 1-based. After `revealed()` loss vectors have been consumed,
 * weights are available for steps revealed()+1 .. revealed()+delay().
 */
template<typename T>
concept WeightEngine = requires(T & engine, const T & cengine, std::span<const double> losses,
    std::size_t t)
{
  {cengine.num_experts()} -> std::convertible_to<std::size_t>;
  {cengine.delay()} -> std::convertible_to<std::size_t>;
  {cengine.eta()} -> std::convertible_to<double>;
  {cengine.revealed()} -> std::convertible_to<std::size_t>;
  {cengine.weights_for(t)} -> std::same_as<const WeightVector &>;
  engine.reveal(losses);
};

namespace detail
{

inline void check_engine_args(const ExpertPrior & prior, std::size_t delay, double eta)
{
  if (delay == 0) {
    throw ArgumentError("delay D must be >= 1");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ArgumentError("eta must be a positive finite number");
  }
  (void)prior;
}

inline void require_identity(const ExpertPrior & prior, std::string_view who)
{
  if (!prior.is_identity()) {
    throw ArgumentError(std::string(who) + " requires a prior with identity transitions");
  }
}

// Bookkeeping shared by the engines: the revealed counter and the window
// of steps whose weights may be queried.
class Clock
{
public:
  explicit Clock(std::size_t delay)
  : delay_(delay) {}

  std::size_t delay() const noexcept { return delay_; }
  std::size_t revealed() const noexcept { return revealed_; }

  std::size_t slot(std::size_t t) const
  {
    if (t <= revealed_ || t > revealed_ + delay_) {
      throw ArgumentError(
              "weights for step " + std::to_string(t) + " are not available after " +
              std::to_string(revealed_) + " revealed steps (delay " + std::to_string(delay_) + ")");
    }
    return (t - 1) % delay_;
  }

  // Slot of the step being revealed; the same slot then holds step t + D.
  std::size_t advance() noexcept { return revealed_++ % delay_; }

private:
  std::size_t delay_;
  std::size_t revealed_ = 0;
};

inline void check_losses(std::span<const double> losses, std::size_t n)
{
  if (losses.size() != n) {
    throw ArgumentError(
            "revealed " + std::to_string(losses.size()) + " losses for " + std::to_string(n) +
            " experts");
  }
}

}  // namespace detail

/**
 * @brief Fully connected delayed reweighing (V1 when D = 1).
 *
 * One weight vector, updated at every step with the loss vector that has
 * just been revealed; the weights for step t are proportional to
 * exp(-eta L_{t-D}).
 */
class FullyConnected
{
public:
  FullyConnected(const ExpertPrior & prior, std::size_t delay, double eta)
  : clock_(delay), eta_(eta)
  {
    detail::check_engine_args(prior, delay, eta);
    detail::require_identity(prior, "fully connected reweighing");
    current_ = WeightVector::from_log(prior.log_initial());
    pending_.assign(delay, current_);
  }

  std::size_t num_experts() const noexcept { return current_.size(); }
  std::size_t delay() const noexcept { return clock_.delay(); }
  double eta() const noexcept { return eta_; }
  std::size_t revealed() const noexcept { return clock_.revealed(); }

  const WeightVector & weights_for(std::size_t t) const { return pending_[clock_.slot(t)]; }

  void reveal(std::span<const double> losses)
  {
    detail::check_losses(losses, num_experts());
    current_ = v1_update(current_, losses, eta_);
    pending_[clock_.advance()] = current_;
  }

private:
  detail::Clock clock_;
  double eta_;
  WeightVector current_;
  std::vector<WeightVector> pending_;
};

/**
 * @brief D independent one-step reweighing learners, one per residue class
 * of time modulo D. Grids never exchange information.
 */
class Replicated
{
public:
  Replicated(const ExpertPrior & prior, std::size_t delay, double eta)
  : clock_(delay), eta_(eta)
  {
    detail::check_engine_args(prior, delay, eta);
    detail::require_identity(prior, "replicated reweighing");
    grids_.assign(delay, WeightVector::from_log(prior.log_initial()));
  }

  std::size_t num_experts() const noexcept { return grids_.front().size(); }
  std::size_t delay() const noexcept { return clock_.delay(); }
  double eta() const noexcept { return eta_; }
  std::size_t revealed() const noexcept { return clock_.revealed(); }

  const WeightVector & weights_for(std::size_t t) const { return grids_[clock_.slot(t)]; }

  /// State of grid d = (t - 1) mod D.
  const WeightVector & grid(std::size_t d) const { return grids_.at(d); }

  void reveal(std::span<const double> losses)
  {
    detail::check_losses(losses, num_experts());
    auto & g = grids_[clock_.advance()];
    g = v1_update(g, losses, eta_);
  }

private:
  detail::Clock clock_;
  double eta_;
  std::vector<WeightVector> grids_;
};

/// K^power in log space.
inline Matrix log_kernel_power(const ExpertPrior & prior, std::size_t power)
{
  Matrix out = prior.log_transition();
  for (std::size_t i = 1; i < power; ++i) {
    out = log_mat_mat(out, prior.log_transition());
  }
  return out;
}

/**
 * @brief Exact posterior reweighing for a first-order Markov prior.
 *
 * Keeps the one-step predictive p(n_t | Xi_{t-1}). On each revealed loss
 * vector it conditions (multiply by exp(-eta l), normalize), propagates
 * one step for the next update, and propagates D steps to emit
 * p(n_{t+D} | Xi_t).
 */
class MarkovPosterior
{
public:
  MarkovPosterior(const ExpertPrior & prior, std::size_t delay, double eta)
  : clock_(delay), eta_(eta), log_kernel_(prior.log_transition())
  {
    detail::check_engine_args(prior, delay, eta);
    log_kernel_delay_ = log_kernel_power(prior, delay);
    predictive_ = WeightVector::from_log(prior.log_initial());
    pending_.reserve(delay);
    pending_.push_back(predictive_);
    for (std::size_t t = 1; t < delay; ++t) {
      pending_.push_back(
        WeightVector::from_normalized_log(log_vec_mat(pending_.back().log_weights(), log_kernel_)));
    }
  }

  std::size_t num_experts() const noexcept { return predictive_.size(); }
  std::size_t delay() const noexcept { return clock_.delay(); }
  double eta() const noexcept { return eta_; }
  std::size_t revealed() const noexcept { return clock_.revealed(); }

  const WeightVector & weights_for(std::size_t t) const { return pending_[clock_.slot(t)]; }

  void reveal(std::span<const double> losses)
  {
    detail::check_losses(losses, num_experts());
    const WeightVector filtered = v1_update(predictive_, losses, eta_);
    predictive_ = WeightVector::from_normalized_log(log_vec_mat(filtered.log_weights(), log_kernel_));
    pending_[clock_.advance()] =
      WeightVector::from_normalized_log(log_vec_mat(filtered.log_weights(), log_kernel_delay_));
  }

private:
  detail::Clock clock_;
  double eta_;
  Matrix log_kernel_;
  Matrix log_kernel_delay_;
  WeightVector predictive_;
  std::vector<WeightVector> pending_;
};

static_assert(WeightEngine<FullyConnected>);
static_assert(WeightEngine<Replicated>);
static_assert(WeightEngine<MarkovPosterior>);

/**
 * @brief Runtime-selected engine together with its configuration.
 *
 * `v1` is the fully connected engine restricted to D = 1.
 */
class Aggregator
{
public:
  Aggregator(Algorithm algo, const ExpertPrior & prior, std::size_t delay, double eta)
  : algo_(algo), prior_(prior), engine_(make(algo, prior, delay, eta)) {}

  Algorithm algorithm() const noexcept { return algo_; }
  const ExpertPrior & prior() const noexcept { return prior_; }

  std::size_t num_experts() const { return std::visit([](const auto & e) {return e.num_experts();}, engine_); }
  std::size_t delay() const { return std::visit([](const auto & e) {return e.delay();}, engine_); }
  double eta() const { return std::visit([](const auto & e) {return e.eta();}, engine_); }
  std::size_t revealed() const { return std::visit([](const auto & e) {return e.revealed();}, engine_); }

  const WeightVector & weights_for(std::size_t t) const
  {
    return std::visit(
      [t](const auto & e) -> const WeightVector & {return e.weights_for(t);}, engine_);
  }

  void reveal(std::span<const double> losses)
  {
    std::visit([losses](auto & e) {e.reveal(losses);}, engine_);
  }

  /// Underlying engine, for callers that need engine-specific state.
  template<typename Engine>
  const Engine & engine() const { return std::get<Engine>(engine_); }

private:
  using Engine = std::variant<FullyConnected, Replicated, MarkovPosterior>;

  static Engine make(Algorithm algo, const ExpertPrior & prior, std::size_t delay, double eta)
  {
    switch (algo) {
      case Algorithm::v1:
        if (delay != 1) {
          throw ArgumentError("v1 is the one-step algorithm; use vd or vdfc for delay > 1");
        }
        return FullyConnected(prior, delay, eta);
      case Algorithm::vdfc:
        return FullyConnected(prior, delay, eta);
      case Algorithm::vd_replicated:
        return Replicated(prior, delay, eta);
      case Algorithm::g_markov:
        return MarkovPosterior(prior, delay, eta);
    }
    throw ArgumentError("unknown algorithm");
  }

  Algorithm algo_;
  ExpertPrior prior_;
  Engine engine_;
};

static_assert(WeightEngine<Aggregator>);

inline Aggregator init_state(Algorithm algo, const ExpertPrior & prior, std::size_t delay, double eta)
{
  return Aggregator(algo, prior, delay, eta);
}

}  // namespace longcast

#endif  // LONGCAST_AGGREGATOR_HPP_
