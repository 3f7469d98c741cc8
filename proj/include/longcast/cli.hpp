#ifndef LONGCAST_CLI_HPP_
#define LONGCAST_CLI_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bounds.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "generate.hpp"
#include "io.hpp"
#include "verify.hpp"

namespace longcast
{

namespace cli
{

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

// Raised for flag combinations CLI11 cannot catch on its own.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

inline std::optional<double> parse_eta(const std::string & s)
{
  if (s == "auto") {
    return std::nullopt;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != s.size() || !(v > 0.0) || !std::isfinite(v)) {
    throw UsageError("--eta must be a positive number or 'auto', got '" + s + "'");
  }
  return v;
}

struct GameFlags
{
  std::string data;
  std::string gen = "noisy-experts";
  std::size_t experts = 5;
  std::size_t steps = 1000;
  double noise = 0.3;
  std::uint64_t seed = 1;
  std::size_t block = 0;
  bool binary = false;

  void add_to(CLI::App & app)
  {
    auto * data_opt = app.add_option("--data", data, "Game CSV (t,omega,xi_1..xi_N)");
    app.add_option("--gen", gen, "Generator: noisy-experts|drifting-best|adversarial-swap")
    ->excludes(data_opt);
    app.add_option("--experts,-N", experts, "Number of generated experts")->check(
      CLI::PositiveNumber);
    app.add_option("--steps,-T", steps, "Number of generated steps")->check(CLI::PositiveNumber);
    app.add_option("--noise", noise, "Generator noise level")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "Generator seed");
    app.add_option("--block", block, "adversarial-swap block length (default: D)");
    app.add_flag("--binary", binary, "Draw binary outcomes");
  }

  GeneratorSpec spec() const
  {
    GeneratorSpec s;
    s.model = parse_model(gen);
    s.experts = experts;
    s.steps = steps;
    s.noise = noise;
    s.seed = seed;
    s.block = block;
    s.binary_outcomes = binary;
    return s;
  }
};

// Output goes to `path` when set, else to `fallback`.
template<typename F>
void with_output(const std::string & path, std::ostream & fallback, F && write)
{
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) {
    throw ArgumentError("cannot write " + path);
  }
  write(f);
}

inline nlohmann::json run_json(const RunResult & r)
{
  nlohmann::json j = trace_to_json(r.trace, r.metadata);
  j["bound"] = std::isnan(r.bound) ? nlohmann::json(nullptr) : nlohmann::json(r.bound);
  return j;
}

template<typename T>
std::vector<T> parse_list(const std::string & csv, auto && convert)
{
  std::vector<T> out;
  for (auto field : detail::split_commas(csv)) {
    if (field.empty()) {
      throw UsageError("empty entry in list '" + csv + "'");
    }
    out.push_back(convert(std::string(field)));
  }
  return out;
}

inline std::size_t parse_count(const std::string & s)
{
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != s.size() || s.empty() || s.front() == '-') {
    throw UsageError("'" + s + "' is not a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

inline std::vector<SweepRow> run_sweep(
  const RunConfig & base, const std::vector<Algorithm> & algos,
  const std::vector<std::optional<double>> & etas, const std::vector<std::size_t> & delays,
  const std::vector<std::uint64_t> & seeds, unsigned threads)
{
  std::vector<RunConfig> cells;
  for (Algorithm a : algos) {
    for (const auto & e : etas) {
      for (std::size_t d : delays) {
        for (std::uint64_t s : seeds) {
          RunConfig c = base;
          c.algo = a;
          c.eta = e;
          c.delay = d;
          c.generator.seed = s;
          cells.push_back(std::move(c));
        }
      }
    }
  }

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) {
        try {
          const RunResult r = run_experiment(cells[i]);
          rows[i] = SweepRow{
            r.metadata.algo, r.metadata.eta, r.metadata.delay, cells[i].generator.seed,
            r.trace.total_loss(), r.trace.best_expert_loss(), r.trace.regret(), r.bound};
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) {failure = std::current_exception();}
        }
      }
    };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i) {
    pool.emplace_back(worker);
  }
  for (auto & t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow & a, const SweepRow & b) {
      return a.key() < b.key();
    });
  // 'auto' can resolve to a rate that is also on the grid; the runs are identical
  rows.erase(std::unique(rows.begin(), rows.end(), [](const SweepRow & a, const SweepRow & b) {
      return a.key() == b.key();
    }), rows.end());
  return rows;
}

}  // namespace cli

/**
 * @brief Entry point shared by the `longcast` binary and the tests.
 *
 * Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.
 */
inline int cli_main(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Delayed-feedback prediction with expert advice"};
  app.require_subcommand(1);

  // run / sweep share the model options
  std::string algo = "v1";
  std::string loss = "square";
  std::string prior = "identity";
  std::size_t delay = 1;
  std::string eta = "auto";
  double epsilon_frac = default_epsilon_frac;
  bool record_weights = false;
  std::string out_path;

  auto * run = app.add_subcommand("run", "Play one game and write its trace as JSON");
  cli::GameFlags run_game_flags;
  run->add_option("--algo", algo, "v1|vd|vdfc|g-markov");
  run->add_option("--loss", loss, "square|log");
  run->add_option("--prior", prior, "identity|fixed-share:ALPHA");
  run->add_option("--delay,-D", delay, "Prediction horizon D")->check(CLI::PositiveNumber);
  run->add_option("--eta", eta, "Learning rate, or 'auto'");
  run->add_option("--epsilon-frac", epsilon_frac, "Slack used by 'auto'")->check(
    CLI::NonNegativeNumber);
  run->add_flag("--weights", record_weights, "Include the weight matrix in the trace");
  run->add_option("--out,-o", out_path, "Output file (default stdout)");
  run_game_flags.add_to(*run);

  auto * gen = app.add_subcommand("gen", "Write a generated game as CSV");
  cli::GameFlags gen_flags;
  gen->add_option("--out,-o", out_path, "Output file (default stdout)");
  gen_flags.add_to(*gen);

  auto * sweep = app.add_subcommand("sweep", "Run a grid of games and summarize them as CSV");
  cli::GameFlags sweep_flags;
  std::string eta_grid = "auto";
  std::string delay_grid = "1";
  std::string algo_list = "v1";
  std::string seed_list = "1";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  sweep->add_option("--eta-grid", eta_grid, "Comma-separated rates ('auto' allowed)");
  sweep->add_option("--delay-grid", delay_grid, "Comma-separated horizons");
  sweep->add_option("--algo-list", algo_list, "Comma-separated algorithms");
  sweep->add_option("--seeds", seed_list, "Comma-separated generator seeds");
  sweep->add_option("--loss", loss, "square|log");
  sweep->add_option("--prior", prior, "identity|fixed-share:ALPHA");
  sweep->add_option("--epsilon-frac", epsilon_frac, "Slack used by 'auto'")->check(
    CLI::NonNegativeNumber);
  sweep->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out,-o", out_path, "Output file (default stdout)");
  sweep_flags.add_to(*sweep);

  auto * verify = app.add_subcommand("verify", "Run the invariant and oracle suite");

  auto * bound = app.add_subcommand("bound", "Print the theoretical regret numbers");
  std::optional<std::string> bound_algo;
  std::size_t bound_experts = 0;
  std::optional<double> bound_eta;
  std::optional<std::size_t> bound_steps;
  bound->add_option("--algo", bound_algo, "Restrict output to one algorithm");
  bound->add_option("--experts,-N", bound_experts, "Number of experts")->required()->check(
    CLI::PositiveNumber);
  bound->add_option("--eta", bound_eta, "Learning rate")->check(CLI::PositiveNumber);
  bound->add_option("--delay,-D", delay, "Prediction horizon D")->check(CLI::PositiveNumber);
  bound->add_option("--steps,-T", bound_steps, "Horizon T (needed for eta*)")->check(
    CLI::PositiveNumber);
  bound->add_option("--loss", loss, "square|log");
  bound->add_option("--epsilon-frac", epsilon_frac, "Slack in F")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? cli::exit_ok : cli::exit_usage;
  }

  auto print = [&](const char * key, double v) {
      out << key << ' ' << format_real(v) << '\n';
    };

  try {
    if (*run) {
      RunConfig cfg;
      cfg.algo = parse_algorithm(algo);
      cfg.loss = loss;
      cfg.prior = prior;
      cfg.delay = delay;
      cfg.eta = cli::parse_eta(eta);
      cfg.epsilon_frac = epsilon_frac;
      if (!run_game_flags.data.empty()) {cfg.data_path = run_game_flags.data;}
      cfg.generator = run_game_flags.spec();
      cfg.record_weights = record_weights;
      const RunResult r = run_experiment(cfg);
      cli::with_output(out_path, out, [&](std::ostream & os) {
          os << cli::run_json(r).dump(2) << '\n';
        });
      return cli::exit_ok;
    }

    if (*gen) {
      GeneratorSpec spec = gen_flags.spec();
      if (spec.block == 0) {spec.block = 1;}
      if (!gen_flags.data.empty()) {
        throw cli::UsageError("gen does not read --data");
      }
      const GameInput g = generate_game(spec);
      cli::with_output(out_path, out, [&](std::ostream & os) {write_game_csv(os, g);});
      return cli::exit_ok;
    }

    if (*sweep) {
      RunConfig base;
      base.loss = loss;
      base.prior = prior;
      base.epsilon_frac = epsilon_frac;
      if (!sweep_flags.data.empty()) {base.data_path = sweep_flags.data;}
      base.generator = sweep_flags.spec();
      const auto algos = cli::parse_list<Algorithm>(algo_list, [](const std::string & s) {
            return parse_algorithm(s);
          });
      const auto etas = cli::parse_list<std::optional<double>>(eta_grid, cli::parse_eta);
      const auto delays = cli::parse_list<std::size_t>(delay_grid, [](const std::string & s) {
            const std::size_t d = cli::parse_count(s);
            if (d == 0) {throw cli::UsageError("delays must be >= 1");}
            return d;
          });
      const auto seeds = cli::parse_list<std::uint64_t>(seed_list, cli::parse_count);
      for (Algorithm a : algos) {
        for (std::size_t d : delays) {
          if (a == Algorithm::v1 && d != 1) {
            throw cli::UsageError("v1 is the one-step algorithm; use --delay-grid 1 or vd/vdfc");
          }
        }
      }
      const auto rows = cli::run_sweep(base, algos, etas, delays, seeds, threads);
      cli::with_output(out_path, out, [&](std::ostream & os) {write_sweep_csv(os, rows);});
      return cli::exit_ok;
    }

    if (*verify) {
      bool ok = true;
      for (const auto & c : verify::run_all()) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        ok = ok && c.passed;
      }
      return ok ? cli::exit_ok : cli::exit_failure;
    }

    if (*bound) {
      const LossSpec spec = make_loss(loss);
      std::optional<Algorithm> only;
      if (bound_algo) {only = parse_algorithm(*bound_algo);}
      auto wants = [&](Algorithm a) {return !only || *only == a;};
      if (only && (*only == Algorithm::v1 || *only == Algorithm::vd_replicated) && !bound_eta) {
        throw cli::UsageError("--eta is required for this bound");
      }
      if (bound_eta && wants(Algorithm::v1)) {
        print("v1_regret_bound", v1_regret_bound(bound_experts, *bound_eta));
      }
      if (bound_eta && wants(Algorithm::vd_replicated)) {
        print("vd_regret_bound", vd_regret_bound(bound_experts, delay, *bound_eta));
      }
      if (bound_steps && bound_experts >= 2 && wants(Algorithm::vdfc)) {
        const EtaChoice c = eta_star(bound_experts, *bound_steps, spec, delay, epsilon_frac);
        print("F", c.f_constant);
        print("eta_star", c.eta);
        print("eta_star_unclamped", c.unclamped);
        print("vdfc_regret_bound_at_eta_star", c.bound);
        print("sqrt_bound", c.sqrt_bound);
      } else if (only && *only == Algorithm::vdfc) {
        throw cli::UsageError("vdfc bounds need --steps and --experts >= 2");
      }
      return cli::exit_ok;
    }
  } catch (const cli::UsageError & e) {
    err << "usage error: " << e.what() << '\n';
    return cli::exit_usage;
  } catch (const ArgumentError & e) {
    err << "usage error: " << e.what() << '\n';
    return cli::exit_usage;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return cli::exit_failure;
  }
  return cli::exit_usage;
}

}  // namespace longcast

#endif  // LONGCAST_CLI_HPP_
