#ifndef LONGCAST_IO_HPP_
#define LONGCAST_IO_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "game.hpp"

namespace longcast
{

/// 17 significant digits, enough to parse back to the identical double.
inline std::string format_real(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail
{

inline std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {s.remove_prefix(1);}
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

inline double parse_real(std::string_view field, std::size_t line, std::string_view column)
{
  double v = 0.0;
  if (!field.empty() && field.front() == '+') {
    field.remove_prefix(1);
  }
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError(line, "column " + std::string(column) + ": '" + std::string(field) +
            "' is not a number");
  }
  if (!std::isfinite(v)) {
    throw ParseError(line, "column " + std::string(column) + ": value is not finite");
  }
  return v;
}

}  // namespace detail

/**
 * @brief Reads a game in CSV form: header `t,omega,xi_1,...,xi_N`, then one
 * row per step with t counting up from 1.
 */
inline GameInput read_game_csv(
  std::istream & in, const LossSpec & loss = LossSpec::square(), std::size_t delay = 1)
{
  std::string line;
  std::size_t lineno = 0;
  std::size_t experts = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::trim(line).empty()) {
      break;
    }
  }
  {
    const auto head = detail::split_commas(line);
    if (head.size() < 3 || head[0] != "t" || head[1] != "omega") {
      throw ParseError(lineno, "header must be t,omega,xi_1,...,xi_N");
    }
    for (std::size_t k = 2; k < head.size(); ++k) {
      if (head[k] != "xi_" + std::to_string(k - 1)) {
        throw ParseError(lineno, "header column " + std::to_string(k + 1) + " must be xi_" +
                std::to_string(k - 1));
      }
    }
    experts = head.size() - 2;
  }

  GameInput g;
  g.loss = loss;
  g.delay = delay;
  g.forecasts = Matrix(0, experts);
  std::vector<double> row(experts);
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) {
      continue;
    }
    const auto fields = detail::split_commas(line);
    if (fields.size() != experts + 2) {
      throw ParseError(lineno, "expected " + std::to_string(experts + 2) + " fields, found " +
              std::to_string(fields.size()));
    }
    const double t = detail::parse_real(fields[0], lineno, "t");
    if (t != static_cast<double>(g.outcomes.size() + 1)) {
      throw ParseError(lineno, "t must be " + std::to_string(g.outcomes.size() + 1));
    }
    const double omega = detail::parse_real(fields[1], lineno, "omega");
    if (!loss.outcome_in_domain(omega)) {
      throw DomainError("line " + std::to_string(lineno) + ", column omega: " +
              format_real(omega) + " outside the " + std::string(loss.name()) + " loss domain");
    }
    for (std::size_t k = 0; k < experts; ++k) {
      const std::string col = "xi_" + std::to_string(k + 1);
      row[k] = detail::parse_real(fields[k + 2], lineno, col);
      if (!loss.prediction_in_domain(row[k])) {
        throw DomainError("line " + std::to_string(lineno) + ", column " + col + ": " +
                format_real(row[k]) + " outside the prediction domain");
      }
    }
    g.outcomes.push_back(omega);
    g.forecasts.append_row(row);
  }
  if (g.outcomes.empty()) {
    throw ParseError(lineno, "no data rows");
  }
  return g;
}

inline GameInput parse_game_file(
  const std::filesystem::path & path, const LossSpec & loss = LossSpec::square(),
  std::size_t delay = 1)
{
  std::ifstream in(path);
  if (!in) {
    throw ArgumentError("cannot open " + path.string());
  }
  return read_game_csv(in, loss, delay);
}

inline void write_game_csv(std::ostream & out, const GameInput & g)
{
  out << "t,omega";
  for (std::size_t k = 0; k < g.num_experts(); ++k) {
    out << ",xi_" << k + 1;
  }
  out << '\n';
  for (std::size_t t = 0; t < g.steps(); ++t) {
    out << t + 1 << ',' << format_real(g.outcomes[t]);
    for (std::size_t k = 0; k < g.num_experts(); ++k) {
      out << ',' << format_real(g.forecasts(t, k));
    }
    out << '\n';
  }
}

inline void write_game_file(const std::filesystem::path & path, const GameInput & g)
{
  std::ofstream out(path);
  if (!out) {
    throw ArgumentError("cannot write " + path.string());
  }
  write_game_csv(out, g);
}

// ---------------------------------------------------------------------------
// traces
// ---------------------------------------------------------------------------

struct RunMetadata
{
  std::string algo;
  std::string loss;
  std::string prior;
  std::size_t experts = 0;
  std::size_t steps = 0;
  std::size_t delay = 1;
  double eta = 0.0;
  std::string eta_policy = "fixed";
  std::string source;
  std::uint64_t seed = 0;
};

inline nlohmann::json trace_to_json(const GameTrace & tr, const RunMetadata & meta)
{
  using nlohmann::json;
  json j;
  j["metadata"] = {
    {"algo", meta.algo},
    {"loss", meta.loss},
    {"prior", meta.prior},
    {"N", meta.experts},
    {"T", meta.steps},
    {"D", meta.delay},
    {"eta", meta.eta},
    {"eta_policy", meta.eta_policy},
    {"source", meta.source},
    {"seed", meta.seed},
  };
  j["gamma"] = tr.gamma;
  j["h"] = tr.h;
  j["m"] = tr.m;
  j["regret_curve"] = tr.regret_curve;
  j["cumulative_expert_loss"] = tr.cumulative_expert_loss;
  j["H_T"] = tr.total_loss();
  j["M_T"] = tr.total_mixloss();
  j["best_expert"] = tr.best_expert + 1;
  j["best_L_T"] = tr.best_expert_loss();
  j["regret"] = tr.regret();
  if (tr.weights) {
    json rows = json::array();
    for (std::size_t t = 0; t < tr.weights->rows(); ++t) {
      const auto r = tr.weights->row(t);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["weights"] = std::move(rows);
  }
  return j;
}

// ---------------------------------------------------------------------------
// sweep summaries
// ---------------------------------------------------------------------------

struct SweepRow
{
  std::string algo;
  double eta = 0.0;
  std::size_t delay = 1;
  std::uint64_t seed = 0;
  double total_loss = 0.0;
  double best_loss = 0.0;
  double regret = 0.0;
  double bound = 0.0;

  auto key() const { return std::tie(algo, eta, delay, seed); }
};

inline void write_sweep_csv(std::ostream & out, const std::vector<SweepRow> & rows)
{
  out << "algo,eta,D,seed,HT,best_LT,regret,bound\n";
  for (const auto & r : rows) {
    out << r.algo << ',' << format_real(r.eta) << ',' << r.delay << ',' << r.seed << ',' <<
      format_real(r.total_loss) << ',' << format_real(r.best_loss) << ',' <<
      format_real(r.regret) << ',' << format_real(r.bound) << '\n';
  }
}

}  // namespace longcast

#endif  // LONGCAST_IO_HPP_
