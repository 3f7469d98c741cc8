#include <algorithm>
#include <cmath>
#include <vector>

#include <catch_amalgamated.hpp>

#include <longcast/bounds.hpp>
#include <longcast/errors.hpp>
#include <longcast/loss.hpp>
#include <longcast/prior.hpp>

using namespace longcast;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

// Written out from the definition, independently of drift_objective.
double objective(double x, double a, double n)
{
  const double shifted = x * a / (x * a + (1.0 - x) * (1.0 - a) / (n - 1.0));
  return x - shifted;
}

double grid_max(double a, double n, double step)
{
  double best = -1.0;
  for (double x = step; x < 1.0; x += step) {best = std::max(best, objective(x, a, n));}
  return best;
}

}  // namespace

TEST_CASE("regret bounds", "[bounds]")
{
  CHECK_THAT(v1_regret_bound(10, 0.5), WithinAbs(4.60517018598809, 1e-12));
  CHECK_THAT(vd_regret_bound(5, 7, 0.5), WithinAbs(22.5321307740774, 1e-12));
  CHECK(v1_regret_bound(1, 0.5) == 0.0);
  CHECK_THROWS_AS(v1_regret_bound(3, 0.0), ArgumentError);
}

TEST_CASE("regret against a comparator sequence", "[bounds]")
{
  const std::vector<std::size_t> constant{1, 1, 1, 1};
  CHECK_THAT(sequence_regret_bound(identity_prior(4), constant, 0.5),
    WithinAbs(std::log(4.0) / 0.5, 1e-14));
  const std::vector<std::size_t> switching{0, 0, 1};
  CHECK(sequence_regret_bound(identity_prior(2), switching, 0.5) == INFINITY);
  CHECK_THAT(sequence_regret_bound(fixed_share_prior(2, 0.2), switching, 0.5),
    WithinAbs(-(std::log(0.5) + std::log(0.9) + std::log(0.1)) / 0.5, 1e-13));
}

TEST_CASE("drift bound", "[bounds][drift]")
{
  CHECK(drift_bound(0.5, 1, 1.0) == 0.0);
  CHECK(drift_bound(1e-12, 5, 1.0) < 1e-11);
  CHECK_THAT(drift_bound(std::log(4.0), 2, 1.0), WithinAbs(1.0 / 3, 1e-15));
  // closed form written as (1 - sqrt q)^2 / (1 - q)
  for (double q : {0.9, 0.5, 0.1, 1e-3}) {
    const double eta = -std::log(q) / 3.0;
    const double expected = std::pow(1.0 - std::sqrt(q), 2) / (1.0 - q);
    CHECK_THAT(drift_bound(eta, 4, 1.0), WithinRel(expected, 1e-12));
  }
  CHECK_THROWS_AS(drift_bound(-1.0, 2, 1.0), ArgumentError);
}

TEST_CASE("drift maximizer", "[bounds][drift]")
{
  const double a = drift_boundary_a(0.25, 2);
  CHECK_THAT(a, WithinAbs(0.2, 1e-15));
  CHECK_THAT(drift_argmax_x(a, 2), WithinAbs(2.0 / 3, 1e-12));
  CHECK_THAT(drift_objective(2.0 / 3, a, 2), WithinAbs(1.0 / 3, 1e-12));
  CHECK_THAT(grid_max(a, 2, 1e-5), WithinAbs(1.0 / 3, 1e-9));

  // no room to drift as a approaches 1/N
  const double near_half = 0.5 - 1e-9;
  CHECK(drift_objective(drift_argmax_x(near_half, 2), near_half, 2) < 1e-4);

  const double a5 = drift_boundary_a(0.25, 5);
  CHECK_THAT(grid_max(a5, 5, 1e-5), WithinAbs(1.0 / 3, 1e-8));
  CHECK_THAT(drift_objective(drift_argmax_x(a5, 5), a5, 5), WithinAbs(1.0 / 3, 1e-12));

  CHECK_THROWS_AS(drift_argmax_x(0.6, 2), ArgumentError);
  CHECK_THROWS_AS(drift_argmax_x(0.1, 1), ArgumentError);
}

TEST_CASE("eta star", "[bounds]")
{
  const LossSpec sq = LossSpec::square();
  CHECK(eta_star(5, 100, sq, 1).eta == sq.default_eta);

  const auto c1 = eta_star(5, 1000, sq, 4);
  const auto c2 = eta_star(5, 2000, sq, 4);
  CHECK_THAT(c1.unclamped / c2.unclamped, WithinRel(std::sqrt(2.0), 1e-14));

  const auto c = eta_star(10, 10000, sq, 7, 0.1);
  const double f = 1.0 * 2.0 * (1.1 * 6.0 / 4.0);
  CHECK_THAT(c.f_constant, WithinRel(f, 1e-15));
  CHECK_THAT(c.eta, WithinRel(std::sqrt(std::log(10.0) / (f * 10 * 1e4)), 1e-14));
  CHECK_THAT(c.sqrt_bound, WithinRel(2.0 * std::sqrt(f * 10 * std::log(10.0)) * 100.0, 1e-14));
  CHECK_THAT(c.bound, WithinRel(c.sqrt_bound, 1e-12));

  // short horizon: the formula exceeds the exp-concavity level and is clamped
  const auto tiny = eta_star(2, 1, sq, 2);
  CHECK(tiny.clamped);
  CHECK(tiny.eta == sq.default_eta);
  CHECK_THROWS_AS(eta_star(1, 10, sq, 2), ArgumentError);
}
