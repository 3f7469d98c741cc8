#include <cmath>

#include <catch_amalgamated.hpp>

#include <longcast/errors.hpp>
#include <longcast/loss.hpp>

using namespace longcast;
using Catch::Matchers::WithinAbs;

TEST_CASE("square loss values", "[loss]")
{
  CHECK(square_loss(0.5, 0.5) == 0.0);
  CHECK(square_loss(1.0, 0.0) == 1.0);
  CHECK_THAT(square_loss(0.2, 0.7), WithinAbs(0.25, 1e-15));
  CHECK_THROWS_AS(square_loss(1.5, 0.5), DomainError);
  CHECK_THROWS_AS(square_loss(0.5, -0.1), DomainError);
}

TEST_CASE("log loss values and clipping", "[loss]")
{
  CHECK_THAT(log_loss(1.0, 0.5), WithinAbs(std::log(2.0), 1e-15));
  CHECK_THAT(log_loss(0.0, 0.5), WithinAbs(std::log(2.0), 1e-15));
  CHECK(log_loss(1.0, 1.0 - log_loss_clip) == -std::log(1.0 - log_loss_clip));
  // predictions past the clip are treated as the clip
  CHECK(log_loss(1.0, 0.0) == log_loss(1.0, log_loss_clip));
  CHECK(log_loss(0.0, 1.0) == -std::log1p(-(1.0 - log_loss_clip)));
  // H covers both clipped extremes exactly
  const LossSpec lg = LossSpec::log();
  CHECK(log_loss(0.0, 1.0) <= lg.range_bound);
  CHECK(log_loss(1.0, 0.0) <= lg.range_bound);
  CHECK_THROWS_AS(log_loss(0.5, 0.5), DomainError);
}

TEST_CASE("loss specs carry their constants", "[loss]")
{
  const LossSpec sq = make_loss("square");
  CHECK(sq.range_bound == 1.0);
  CHECK(sq.lipschitz == 2.0);
  CHECK(sq.default_eta == 0.5);
  const LossSpec lg = make_loss("log");
  CHECK_THAT(lg.range_bound, WithinAbs(-std::log(1e-6), 1e-9));
  CHECK(lg.lipschitz == 1e6);
  CHECK(lg.default_eta == 1.0);
  CHECK(lg.outcome_in_domain(1.0));
  CHECK_FALSE(lg.outcome_in_domain(0.5));
  CHECK_THROWS_AS(make_loss("hinge"), ArgumentError);
}

TEST_CASE("exp-concavity levels", "[loss][concavity]")
{
  const auto sq_half = check_exp_concavity(LossSpec::square(), 0.5, 100000, 5);
  CHECK(sq_half.passed);
  CHECK_FALSE(sq_half.counterexample);

  const auto sq_two = check_exp_concavity(LossSpec::square(), 2.0, 100000, 5);
  REQUIRE_FALSE(sq_two.passed);
  REQUIRE(sq_two.counterexample);
  CHECK(concavity_gap(LossSpec::square(), 2.0, *sq_two.counterexample) > concavity_tolerance);

  CHECK(check_exp_concavity(LossSpec::log(), 1.0, 100000, 5).passed);
}

TEST_CASE("square loss at eta 2: uniform mixture of 0.6 and 1.0 against omega 0", "[loss][concavity]")
{
  // Direct evaluation: E exp(-2 gamma^2) = (e^-0.72 + e^-2)/2, exp(-2 * 0.8^2) = e^-1.28.
  const ConcavityCase c{0.0, {0.6, 1.0}, {0.5, 0.5}};
  const double lhs = 0.5 * (std::exp(-0.72) + std::exp(-2.0));
  const double rhs = std::exp(-1.28);
  CHECK(lhs > rhs);
  CHECK_THAT(concavity_gap(LossSpec::square(), 2.0, c), WithinAbs(lhs - rhs, 1e-15));
  CHECK(concavity_gap(LossSpec::square(), 0.5, c) <= 0.0);
}

TEST_CASE("concavity sampler is deterministic in the seed", "[loss][concavity]")
{
  const auto a = sample_concavity_cases(LossSpec::square(), 50, 9);
  const auto b = sample_concavity_cases(LossSpec::square(), 50, 9);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].omega == b[i].omega);
    CHECK(a[i].support == b[i].support);
    CHECK(a[i].probabilities == b[i].probabilities);
  }
}
