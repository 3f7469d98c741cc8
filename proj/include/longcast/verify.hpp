#ifndef LONGCAST_VERIFY_HPP_
#define LONGCAST_VERIFY_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aggregator.hpp"
#include "bounds.hpp"
#include "game.hpp"
#include "generate.hpp"
#include "io.hpp"
#include "loss.hpp"
#include "oracle.hpp"
#include "prior.hpp"
#include "replication.hpp"

namespace longcast::verify
{

struct CheckResult
{
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Tracks max_t (h_t - m_t) over every trace it is shown.
class MixlossAudit
{
public:
  void record(const GameTrace & tr)
  {
    worst_ = std::max(worst_, tr.max_mixloss_excess());
    ++traces_;
  }

  double worst_excess() const noexcept { return worst_; }
  std::size_t traces() const noexcept { return traces_; }

private:
  double worst_ = -std::numeric_limits<double>::infinity();
  std::size_t traces_ = 0;
};

namespace detail
{

inline std::string fmt(const char * pattern, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

template<typename F>
CheckResult timed(std::string name, F && body)
{
  const auto start = std::chrono::steady_clock::now();
  CheckResult r{std::move(name), false, {}, 0.0};
  try {
    body(r);
  } catch (const std::exception & e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// Square-loss game with uniform outcomes and forecasts.
inline GameInput uniform_game(std::size_t n, std::size_t steps, std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GameInput g;
  g.outcomes.resize(steps);
  g.forecasts = Matrix(steps, n);
  for (std::size_t t = 0; t < steps; ++t) {
    g.outcomes[t] = u(rng);
    for (std::size_t k = 0; k < n; ++k) {
      g.forecasts(t, k) = u(rng);
    }
  }
  return g;
}

inline Matrix uniform_table(std::size_t rows, std::size_t cols, std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = u(rng);
    }
  }
  return m;
}

// Max weight gap between an engine and the enumeration oracle over steps 1..T.
template<WeightEngine Engine>
double oracle_gap(
  Engine engine, const SequenceModel & model, const Matrix & losses, double eta)
{
  double gap = 0.0;
  for (std::size_t t = 1; t <= losses.rows(); ++t) {
    const auto expected = brute_force_posterior(model, losses, eta, t, engine.delay());
    gap = std::max(gap, max_abs_difference(engine.weights_for(t), expected));
    engine.reveal(losses.row(t - 1));
  }
  return gap;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// regret bounds
// ---------------------------------------------------------------------------

struct V1BoundParams
{
  std::size_t games = 100;
  std::size_t experts = 10;
  std::size_t steps = 1000;
  double eta = 0.5;
  double noise = 0.3;
  double tolerance = 1e-9;
};

/// One-step reweighing on noisy-experts games never exceeds ln(N)/eta.
inline CheckResult check_v1_bound(const V1BoundParams & p, MixlossAudit * audit = nullptr)
{
  return detail::timed("v1 regret <= ln N / eta", [&](CheckResult & r) {
      const double bound = v1_regret_bound(p.experts, p.eta);
      const ExpertPrior prior = identity_prior(p.experts);
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < p.games; ++s) {
        GameInput g = generate_game(
          {GameModel::noisy_experts, p.experts, p.steps, p.noise, 1000 + s});
        const GameTrace tr = run_game(g, Algorithm::v1, prior, p.eta);
        worst = std::max(worst, tr.regret());
        if (audit) {audit->record(tr);}
      }
      r.passed = worst <= bound + p.tolerance;
      r.detail = detail::fmt("max regret %.6f over %zu games, bound %.6f", worst, p.games, bound);
    });
}

struct VDBoundParams
{
  std::size_t games = 100;
  std::size_t experts = 5;
  std::size_t delay = 7;
  std::size_t steps = 700;
  double eta = 0.5;
  double noise = 0.3;
  double tolerance = 1e-9;
};

/// Replicated reweighing never exceeds D ln(N)/eta; games cycle through all generators.
inline CheckResult check_vd_bound(const VDBoundParams & p, MixlossAudit * audit = nullptr)
{
  return detail::timed("vd regret <= D ln N / eta", [&](CheckResult & r) {
      const double bound = vd_regret_bound(p.experts, p.delay, p.eta);
      const ExpertPrior prior = identity_prior(p.experts);
      const GameModel models[] = {
        GameModel::noisy_experts, GameModel::drifting_best, GameModel::adversarial_swap};
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < p.games; ++s) {
        GeneratorSpec spec{models[s % 3], p.experts, p.steps, p.noise, 2000 + s};
        spec.block = p.delay;
        GameInput g = generate_game(spec);
        g.delay = p.delay;
        const GameTrace tr = run_game(g, Algorithm::vd_replicated, prior, p.eta);
        worst = std::max(worst, tr.regret());
        if (audit) {audit->record(tr);}
      }
      r.passed = worst <= bound + p.tolerance;
      r.detail = detail::fmt("max regret %.6f over %zu games, bound %.6f", worst, p.games, bound);
    });
}

// ---------------------------------------------------------------------------
// posterior loss bound and mixloss telescope
// ---------------------------------------------------------------------------

struct PosteriorBoundParams
{
  std::size_t experts = 3;
  std::size_t steps = 6;
  std::size_t tables = 20;
  double eta = 0.5;
  double alpha = 0.3;
  double tolerance = 1e-9;
  std::uint64_t seed = 7;
};

/**
 * @brief H_T <= -(1/eta) ln E_p exp(-eta L) for the one-step posterior
 * aggregator, and M_T equals that expression, under the identity and
 * fixed-share priors. For the identity prior M_T is also compared with the
 * closed form -(1/eta) ln((1/N) sum exp(-eta L_T^n)).
 */
inline CheckResult check_posterior_bound(
  const PosteriorBoundParams & p, MixlossAudit * audit = nullptr)
{
  return detail::timed("posterior loss bound and mixloss telescope", [&](CheckResult & r) {
      std::mt19937_64 rng(p.seed);
      const ExpertPrior priors[] = {
        identity_prior(p.experts), fixed_share_prior(p.experts, p.alpha)};
      double worst_excess = -std::numeric_limits<double>::infinity();
      double worst_telescope = 0.0;
      for (std::size_t i = 0; i < p.tables; ++i) {
        const GameInput g = detail::uniform_game(p.experts, p.steps, rng);
        for (std::size_t k = 0; k < 2; ++k) {
          const GameTrace tr = run_game(g, Algorithm::g_markov, priors[k], p.eta);
          if (audit) {audit->record(tr);}
          const double rhs = posterior_loss_bound(g, priors[k], p.eta);
          worst_excess = std::max(worst_excess, tr.total_loss() - rhs);
          worst_telescope = std::max(worst_telescope, std::abs(tr.total_mixloss() - rhs));
          if (k == 0) {
            const double closed = telescoped_mixloss(tr.cumulative_expert_loss, p.eta);
            worst_telescope = std::max(worst_telescope, std::abs(tr.total_mixloss() - closed));
          }
        }
      }
      r.passed = worst_excess <= p.tolerance && worst_telescope <= p.tolerance;
      r.detail = detail::fmt(
        "max(H_T - bound) = %.3e, max |M_T - closed form| = %.3e", worst_excess, worst_telescope);
    });
}

// ---------------------------------------------------------------------------
// oracle equivalence
// ---------------------------------------------------------------------------

struct OracleParams
{
  std::vector<std::size_t> experts{2, 3};
  std::size_t steps = 8;
  std::vector<std::size_t> delays{1, 2, 3};
  std::size_t tables = 20;
  double alpha = 0.3;
  double tolerance = 1e-10;
  std::uint64_t seed = 11;
};

/// Every fast engine matches exhaustive enumeration at every step.
inline CheckResult check_oracle_equivalence(const OracleParams & p)
{
  return detail::timed("fast updates == brute-force posterior", [&](CheckResult & r) {
      std::mt19937_64 rng(p.seed);
      std::uniform_real_distribution<double> eta_dist(0.1, 2.0);
      double worst = 0.0;
      std::size_t cases = 0;
      for (std::size_t n : p.experts) {
        const ExpertPrior ident = identity_prior(n);
        const ExpertPrior share = fixed_share_prior(n, p.alpha);
        for (std::size_t d : p.delays) {
          for (std::size_t i = 0; i < p.tables; ++i) {
            const Matrix losses = detail::uniform_table(p.steps, n, rng);
            const double eta = eta_dist(rng);
            if (d == 1) {
              worst = std::max(worst, detail::oracle_gap(
                  init_state(Algorithm::v1, ident, d, eta), markov_model(ident), losses, eta));
            }
            worst = std::max(worst, detail::oracle_gap(
                Replicated(ident, d, eta), replicated_model(n, d), losses, eta));
            worst = std::max(worst, detail::oracle_gap(
                FullyConnected(ident, d, eta), markov_model(ident), losses, eta));
            worst = std::max(worst, detail::oracle_gap(
                MarkovPosterior(ident, d, eta), markov_model(ident), losses, eta));
            worst = std::max(worst, detail::oracle_gap(
                MarkovPosterior(share, d, eta), markov_model(share), losses, eta));
            cases += d == 1 ? 5 : 4;
          }
        }
      }
      r.passed = worst <= p.tolerance;
      r.detail = detail::fmt("max |w_fast - w_oracle| = %.3e over %zu runs", worst, cases);
    });
}

// ---------------------------------------------------------------------------
// replication identities
// ---------------------------------------------------------------------------

struct ReplicationParams
{
  std::size_t source_steps = 50;
  std::size_t experts = 4;
  std::vector<std::size_t> delays{2, 3, 5};
  double eta = 0.5;
  double tolerance = 1e-12;
  std::uint64_t seed = 13;
};

/**
 * @brief On a stretched game: expert losses scale exactly by D; the fully
 * connected strategy's expected loss equals D times that of its block-head
 * one-step counterpart; replicated reweighing on the stretched game loses
 * exactly D times what one-step reweighing loses on the source.
 */
inline CheckResult check_replication(const ReplicationParams & p, MixlossAudit * audit = nullptr)
{
  return detail::timed("replication identities", [&](CheckResult & r) {
      const GameInput source = generate_game(
        {GameModel::noisy_experts, p.experts, p.source_steps, 0.3, p.seed});
      const ExpertPrior prior = identity_prior(p.experts);
      const GameTrace one_step = run_game(source, Algorithm::v1, prior, p.eta);
      if (audit) {audit->record(one_step);}

      double loss_residual = 0.0;
      double h_gap = 0.0;
      double regret_gap = 0.0;
      double vd_gap = 0.0;
      bool dominates = true;
      for (std::size_t d : p.delays) {
        const GameInput stretched = replicate_game(source, d);
        const GameTrace fc = run_game(stretched, Algorithm::vdfc, prior, p.eta, true);
        if (audit) {audit->record(fc);}
        const auto rep = verify_replication_identity(source, *fc.weights, d, p.tolerance);
        loss_residual = std::max(loss_residual, rep.loss_identity_residual);
        h_gap = std::max(h_gap, rep.loss_gap);
        regret_gap = std::max(regret_gap, rep.regret_gap);
        dominates = dominates && rep.regret_dominates;

        const GameTrace vd = run_game(stretched, Algorithm::vd_replicated, prior, p.eta);
        if (audit) {audit->record(vd);}
        ExactSum diff;
        for (double h : vd.h) {diff += h;}
        for (double h : one_step.h) {
          for (std::size_t k = 0; k < d; ++k) {diff += -h;}
        }
        vd_gap = std::max(vd_gap, std::abs(diff.value()));
      }
      r.passed = loss_residual == 0.0 && h_gap <= p.tolerance && regret_gap <= p.tolerance &&
        vd_gap <= p.tolerance && dominates;
      r.detail = detail::fmt(
        "L residual %.1e, H gap (vdfc) %.2e, regret gap %.2e, H gap (vd vs v1) %.2e",
        loss_residual, h_gap, regret_gap, vd_gap);
    });
}

// ---------------------------------------------------------------------------
// drift calculus
// ---------------------------------------------------------------------------

struct DriftParams
{
  std::size_t samples = 50;
  double grid_step = 1e-4;
  double tolerance = 1e-6;
  double closed_form_tolerance = 1e-9;
  std::uint64_t seed = 17;
};

inline double drift_grid_max(double a, std::size_t n, double step)
{
  double best = -std::numeric_limits<double>::infinity();
  const auto cells = static_cast<std::size_t>(std::llround(1.0 / step));
  for (std::size_t i = 1; i < cells; ++i) {
    best = std::max(best, drift_objective(static_cast<double>(i) * step, a, n));
  }
  return best;
}

/**
 * @brief Grid search of the drift objective at the boundary value of a
 * never exceeds drift_bound and comes within `tolerance` of it; the
 * stationary point reproduces the closed form; N=2, q=1/4 gives 1/3.
 *
 * Sampled ranges: eta in [0.01, 1], D in 2..8, H in [0.05, 1], N in 2..20.
 */
inline CheckResult check_drift(const DriftParams & p)
{
  return detail::timed("drift calculus", [&](CheckResult & r) {
      std::mt19937_64 rng(p.seed);
      std::uniform_real_distribution<double> eta_dist(0.01, 1.0);
      std::uniform_int_distribution<std::size_t> d_dist(2, 8);
      std::uniform_real_distribution<double> h_dist(0.05, 1.0);
      std::uniform_int_distribution<std::size_t> n_dist(2, 20);
      double worst_over = -std::numeric_limits<double>::infinity();
      double worst_gap = 0.0;
      double worst_stationary = 0.0;
      for (std::size_t i = 0; i < p.samples; ++i) {
        const double eta = eta_dist(rng);
        const std::size_t d = d_dist(rng);
        const double h = h_dist(rng);
        const std::size_t n = n_dist(rng);
        const double bound = drift_bound(eta, d, h);
        const double a = drift_boundary_a(drift_ratio(eta, d, h), n);
        const double grid = drift_grid_max(a, n, p.grid_step);
        worst_over = std::max(worst_over, grid - bound);
        worst_gap = std::max(worst_gap, std::abs(bound - grid));
        const double at_star = drift_objective(drift_argmax_x(a, n), a, n);
        worst_stationary = std::max(worst_stationary, std::abs(at_star - bound));
      }
      // q = exp(-eta (D-1) H) = 1/4 with D = 2, H = 1
      const double quarter_eta = std::log(4.0);
      const double third = drift_bound(quarter_eta, 2, 1.0);
      const double a2 = drift_boundary_a(0.25, 2);
      const double third_star = drift_objective(drift_argmax_x(a2, 2), a2, 2);
      const bool closed_ok = std::abs(third - 1.0 / 3.0) <= p.closed_form_tolerance &&
        std::abs(third_star - 1.0 / 3.0) <= p.closed_form_tolerance;

      r.passed = worst_over <= 0.0 && worst_gap <= p.tolerance &&
        worst_stationary <= p.closed_form_tolerance && closed_ok;
      r.detail = detail::fmt(
        "max(grid - bound) = %.2e, max |grid - bound| = %.2e, |f(x*) - bound| = %.2e, "
        "N=2,q=1/4 -> %.12f", worst_over, worst_gap, worst_stationary, third);
    });
}

// ---------------------------------------------------------------------------
// sublinear regret of the fully connected algorithm
// ---------------------------------------------------------------------------

struct SublinearParams
{
  std::size_t experts = 5;
  std::size_t delay = 7;
  std::vector<std::size_t> horizons{1024, 4096, 16384};
  std::size_t seeds = 20;
  double noise = 1.0;
  double epsilon_frac = default_epsilon_frac;
  double growth_limit = 4.0;
};

/**
 * @brief With eta = eta_star, the mean regret on drifting-best games stays
 * under 2 sqrt(F N ln N) sqrt(T) at every horizon, and quadrupling T from
 * the second-to-last to the last horizon less than quadruples it.
 */
inline CheckResult check_sublinear(const SublinearParams & p, MixlossAudit * audit = nullptr)
{
  return detail::timed("vdfc sublinear regret at eta*", [&](CheckResult & r) {
      const ExpertPrior prior = identity_prior(p.experts);
      const LossSpec loss = LossSpec::square();
      std::vector<double> means;
      bool under = true;
      std::ostringstream os;
      for (std::size_t horizon : p.horizons) {
        const EtaChoice c = eta_star(p.experts, horizon, loss, p.delay, p.epsilon_frac);
        double total = 0.0;
        for (std::size_t s = 0; s < p.seeds; ++s) {
          GameInput g = generate_game(
            {GameModel::drifting_best, p.experts, horizon, p.noise, 3000 + s});
          g.delay = p.delay;
          const GameTrace tr = run_game(g, Algorithm::vdfc, prior, c.eta);
          if (audit) {audit->record(tr);}
          total += tr.regret();
        }
        const double mean = total / static_cast<double>(p.seeds);
        means.push_back(mean);
        under = under && mean <= c.sqrt_bound;
        os << detail::fmt("T=%zu eta*=%.5f mean regret %.3f bound %.3f; ",
            horizon, c.eta, mean, c.sqrt_bound);
      }
      const double prev = means[means.size() - 2];
      const double ratio = means.back() / prev;
      const bool sublinear = prev > 0.0 && ratio < p.growth_limit;
      os << detail::fmt("growth ratio %.3f", ratio);
      r.passed = under && sublinear;
      r.detail = os.str();
    });
}

// ---------------------------------------------------------------------------
// exp-concavity
// ---------------------------------------------------------------------------

struct ConcavityParams
{
  std::size_t trials = 100000;
  std::uint64_t seed = 19;
};

inline CheckResult check_exp_concavity_levels(const ConcavityParams & p)
{
  return detail::timed("exp-concavity levels", [&](CheckResult & r) {
      const auto sq_half = check_exp_concavity(LossSpec::square(), 0.5, p.trials, p.seed);
      const auto sq_two = check_exp_concavity(LossSpec::square(), 2.0, p.trials, p.seed);
      const auto log_one = check_exp_concavity(LossSpec::log(), 1.0, p.trials, p.seed);
      r.passed = sq_half.passed && !sq_two.passed && log_one.passed;
      r.detail = detail::fmt(
        "square@0.5 %s (worst gap %.2e), square@2 %s, log@1 %s (worst gap %.2e)",
        sq_half.passed ? "passes" : "FAILS", sq_half.worst_gap,
        sq_two.passed ? "passes (expected violation)" : "violated",
        log_one.passed ? "passes" : "FAILS", log_one.worst_gap);
    });
}

inline CheckResult check_mixloss_domination(const MixlossAudit & audit, double tolerance = 1e-12)
{
  return detail::timed("h_t <= m_t on every trace", [&](CheckResult & r) {
      r.passed = audit.traces() > 0 && audit.worst_excess() <= tolerance;
      r.detail = detail::fmt(
        "max(h_t - m_t) = %.3e over %zu traces", audit.worst_excess(), audit.traces());
    });
}

// ---------------------------------------------------------------------------
// module properties
// ---------------------------------------------------------------------------

/// Range and Lipschitz constants of both losses hold on random samples.
inline CheckResult check_loss_constants(std::size_t samples = 20000, std::uint64_t seed = 23)
{
  return detail::timed("loss range and Lipschitz constants", [&](CheckResult & r) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::bernoulli_distribution bit(0.5);
      bool ok = true;
      for (const LossSpec & loss : {LossSpec::square(), LossSpec::log()}) {
        for (double omega : {0.0, 1.0}) {
          for (double gamma : {loss.gamma_domain.lo, loss.gamma_domain.hi}) {
            const double v = loss(omega, gamma);
            ok = ok && v >= 0.0 && v <= loss.range_bound;
          }
        }
        for (std::size_t i = 0; i < samples; ++i) {
          const double omega = loss.binary_outcomes ? (bit(rng) ? 1.0 : 0.0) : u(rng);
          const double g1 = u(rng);
          const double g2 = u(rng);
          const double l1 = loss(omega, g1);
          const double l2 = loss(omega, g2);
          ok = ok && l1 >= 0.0 && l1 <= loss.range_bound;
          ok = ok && std::abs(l1 - l2) <= loss.lipschitz * std::abs(g1 - g2) * (1 + 1e-12) + 1e-15;
        }
      }
      r.passed = ok;
      r.detail = detail::fmt("%zu samples per loss", samples);
    });
}

/// Passing at eta on a sample set implies passing at eta/2 on the same set.
inline CheckResult check_eta_closure(std::size_t trials = 20000, std::uint64_t seed = 29)
{
  return detail::timed("exp-concavity closed under smaller eta", [&](CheckResult & r) {
      bool ok = true;
      for (auto [loss, eta] : {std::pair{LossSpec::square(), 0.5}, std::pair{LossSpec::log(), 1.0}}) {
        const auto cases = sample_concavity_cases(loss, trials, seed);
        for (const auto & c : cases) {
          if (concavity_gap(loss, eta, c) <= concavity_tolerance) {
            ok = ok && concavity_gap(loss, eta / 2, c) <= concavity_tolerance;
          }
        }
      }
      r.passed = ok;
      r.detail = detail::fmt("%zu recorded samples per loss", trials);
    });
}

/// Sequence probabilities of every prior we build sum to one.
inline CheckResult check_prior_normalization()
{
  return detail::timed("prior sequence mass sums to 1", [&](CheckResult & r) {
      double worst = 0.0;
      for (std::size_t n = 1; n <= 3; ++n) {
        for (const ExpertPrior & prior : {identity_prior(n), fixed_share_prior(n, 0.3)}) {
          for (std::size_t len = 1; len <= 6; ++len) {
            std::vector<std::size_t> seq(len, 0);
            double total = 0.0;
            while (true) {
              total += std::exp(sequence_log_prob(prior, seq));
              std::size_t pos = 0;
              while (pos < len && ++seq[pos] == n) {
                seq[pos++] = 0;
              }
              if (pos == len) {break;}
            }
            worst = std::max(worst, std::abs(total - 1.0));
          }
        }
      }
      r.passed = worst <= 1e-9;
      r.detail = detail::fmt("max |sum - 1| = %.2e", worst);
    });
}

/**
 * @brief Update invariances on random streams: simplex preservation,
 * shift invariance of the losses, permutation equivariance, and the
 * bitwise reduction chain vdfc(D=1) == v1 == g-markov(identity, D=1) ==
 * vd(D=1).
 */
inline CheckResult check_update_invariants(std::size_t streams = 50, std::uint64_t seed = 31)
{
  return detail::timed("update invariants", [&](CheckResult & r) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> shift(-3.0, 3.0);
      double simplex_err = 0.0;
      double shift_err = 0.0;
      double perm_err = 0.0;
      bool chain = true;
      const Algorithm algos[] = {
        Algorithm::vd_replicated, Algorithm::vdfc, Algorithm::g_markov};
      for (std::size_t s = 0; s < streams; ++s) {
        const std::size_t n = 2 + s % 4;
        const std::size_t d = 1 + s % 3;
        const double eta = 0.2 + 0.1 * static_cast<double>(s % 7);
        const Matrix losses = detail::uniform_table(30, n, rng);
        Matrix shifted = losses;
        for (std::size_t t = 0; t < losses.rows(); ++t) {
          const double c = shift(rng);
          for (std::size_t k = 0; k < n; ++k) {shifted(t, k) += c;}
        }
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Matrix permuted(losses.rows(), n);
        for (std::size_t t = 0; t < losses.rows(); ++t) {
          for (std::size_t k = 0; k < n; ++k) {permuted(t, perm[k]) = losses(t, k);}
        }
        for (const ExpertPrior & prior : {identity_prior(n), fixed_share_prior(n, 0.25)}) {
          for (Algorithm algo : algos) {
            if (algo != Algorithm::g_markov && !prior.is_identity()) {continue;}
            Aggregator a = init_state(algo, prior, d, eta);
            Aggregator b = init_state(algo, prior, d, eta);
            Aggregator c = init_state(algo, prior, d, eta);
            for (std::size_t t = 1; t <= losses.rows(); ++t) {
              const auto & wa = a.weights_for(t);
              double sum = 0.0;
              for (std::size_t k = 0; k < n; ++k) {
                sum += wa.probability(k);
                perm_err = std::max(perm_err,
                  std::abs(wa.probability(k) - c.weights_for(t).probability(perm[k])));
              }
              simplex_err = std::max(simplex_err, std::abs(sum - 1.0));
              shift_err = std::max(shift_err, max_abs_difference(wa, b.weights_for(t)));
              a.reveal(losses.row(t - 1));
              b.reveal(shifted.row(t - 1));
              c.reveal(permuted.row(t - 1));
            }
          }
        }
        // reduction chain at D = 1
        const ExpertPrior ident = identity_prior(n);
        Aggregator v1 = init_state(Algorithm::v1, ident, 1, eta);
        Aggregator fc = init_state(Algorithm::vdfc, ident, 1, eta);
        Aggregator vd = init_state(Algorithm::vd_replicated, ident, 1, eta);
        Aggregator gm = init_state(Algorithm::g_markov, ident, 1, eta);
        for (std::size_t t = 1; t <= losses.rows(); ++t) {
          const auto & ref = v1.weights_for(t);
          chain = chain && ref == fc.weights_for(t) && ref == vd.weights_for(t) &&
            ref == gm.weights_for(t);
          for (Aggregator * x : {&v1, &fc, &vd, &gm}) {x->reveal(losses.row(t - 1));}
        }
      }
      r.passed = simplex_err <= 1e-12 && shift_err <= 1e-12 && perm_err <= 1e-12 && chain;
      r.detail = detail::fmt(
        "simplex err %.1e, shift err %.1e, permutation err %.1e, reduction chain %s",
        simplex_err, shift_err, perm_err, chain ? "bitwise equal" : "DIFFERS");
    });
}

/// Under the identity prior the expert with strictly least revealed loss has the largest weight.
inline CheckResult check_concentration(std::size_t streams = 50, std::uint64_t seed = 37)
{
  return detail::timed("weights follow cumulative loss", [&](CheckResult & r) {
      std::mt19937_64 rng(seed);
      bool ok = true;
      for (std::size_t s = 0; s < streams; ++s) {
        const std::size_t n = 2 + s % 5;
        const std::size_t d = 1 + s % 4;
        const Matrix losses = detail::uniform_table(40, n, rng);
        FullyConnected fc(identity_prior(n), d, 0.7);
        std::vector<double> cum(n, 0.0);
        for (std::size_t t = 1; t <= losses.rows(); ++t) {
          if (t > d) {
            for (std::size_t k = 0; k < n; ++k) {cum[k] += losses(t - d - 1, k);}
            const std::size_t best = argmin_lowest(cum);
            if (std::count(cum.begin(), cum.end(), cum[best]) == 1) {
              const auto w = fc.weights_for(t).probabilities();
              ok = ok && std::max_element(w.begin(), w.end()) - w.begin() ==
                static_cast<std::ptrdiff_t>(best);
            }
          }
          fc.reveal(losses.row(t - 1));
        }
      }
      r.passed = ok;
      r.detail = detail::fmt("%zu streams", streams);
    });
}

/// The replicated bound holds when T is not a multiple of D as well.
inline CheckResult check_vd_uneven(std::uint64_t seed = 41)
{
  return detail::timed("vd bound with T not a multiple of D", [&](CheckResult & r) {
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < 30; ++s) {
        const std::size_t d = 2 + s % 5;
        const std::size_t steps = 101 + 3 * s;
        GameInput g = generate_game({GameModel::drifting_best, 4, steps, 0.8, seed + s});
        g.delay = d;
        const GameTrace tr = run_game(g, Algorithm::vd_replicated, identity_prior(4), 0.5);
        worst = std::max(worst, tr.regret() - vd_regret_bound(4, d, 0.5));
      }
      r.passed = worst <= 1e-9;
      r.detail = detail::fmt("max(regret - bound) = %.4f", worst);
    });
}

/// Generated games survive a CSV round trip bit for bit.
inline CheckResult check_csv_round_trip(std::uint64_t seed = 43)
{
  return detail::timed("CSV round trip", [&](CheckResult & r) {
      bool ok = true;
      for (GameModel m : {GameModel::noisy_experts, GameModel::drifting_best,
          GameModel::adversarial_swap})
      {
        const GameInput g = generate_game({m, 4, 200, 0.37, seed});
        std::stringstream ss;
        write_game_csv(ss, g);
        const GameInput back = read_game_csv(ss);
        ok = ok && back.outcomes == g.outcomes && back.forecasts == g.forecasts;
      }
      r.passed = ok;
      r.detail = "three generators";
    });
}

/// Acceptance criteria in order, with the tolerances pinned in the parameter defaults.
inline std::vector<CheckResult> run_acceptance()
{
  MixlossAudit audit;
  std::vector<CheckResult> out;
  out.push_back(check_v1_bound({}, &audit));
  out.push_back(check_vd_bound({}, &audit));
  out.push_back(check_posterior_bound({}, &audit));
  out.push_back(check_oracle_equivalence({}));
  out.push_back(check_replication({}, &audit));
  out.push_back(check_drift({}));
  out.push_back(check_sublinear({}, &audit));
  CheckResult conc = check_exp_concavity_levels({});
  const CheckResult dom = check_mixloss_domination(audit);
  conc.name += " + " + dom.name;
  conc.passed = conc.passed && dom.passed;
  conc.detail += "; " + dom.detail;
  out.push_back(std::move(conc));
  return out;
}

/// Everything: module properties followed by the acceptance criteria.
inline std::vector<CheckResult> run_all()
{
  std::vector<CheckResult> out;
  out.push_back(check_loss_constants());
  out.push_back(check_eta_closure());
  out.push_back(check_prior_normalization());
  out.push_back(check_update_invariants());
  out.push_back(check_concentration());
  out.push_back(check_vd_uneven());
  out.push_back(check_csv_round_trip());
  for (auto & c : run_acceptance()) {
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace longcast::verify

#endif  // LONGCAST_VERIFY_HPP_
