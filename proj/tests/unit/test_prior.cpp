#include <cmath>
#include <vector>

#include <catch_amalgamated.hpp>

#include <longcast/errors.hpp>
#include <longcast/prior.hpp>

using namespace longcast;
using Catch::Matchers::WithinAbs;

TEST_CASE("identity prior", "[prior]")
{
  const ExpertPrior one = identity_prior(1);
  CHECK(one.initial() == std::vector<double>{1.0});
  CHECK(one.transition()(0, 0) == 1.0);

  const ExpertPrior three = identity_prior(3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK_THAT(three.initial()[i], WithinAbs(1.0 / 3.0, 1e-15));
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(three.transition()(i, j) == (i == j ? 1.0 : 0.0));
    }
  }
  CHECK(three.is_identity());
  CHECK_THROWS_AS(identity_prior(0), ArgumentError);
}

TEST_CASE("fixed-share prior", "[prior]")
{
  const ExpertPrior degenerate = fixed_share_prior(4, 0.0);
  CHECK(degenerate.is_identity());
  CHECK(degenerate.transition() == identity_prior(4).transition());

  const ExpertPrior memoryless = fixed_share_prior(2, 1.0);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK_THAT(memoryless.transition()(i, j), WithinAbs(0.5, 1e-15));
    }
  }

  const ExpertPrior fs = fixed_share_prior(2, 0.2);
  CHECK_THAT(fs.transition()(0, 0), WithinAbs(0.9, 1e-15));
  CHECK_THAT(fs.transition()(0, 1), WithinAbs(0.1, 1e-15));
  CHECK_THAT(fs.transition()(1, 0), WithinAbs(0.1, 1e-15));
  CHECK_THAT(fs.transition()(1, 1), WithinAbs(0.9, 1e-15));

  CHECK_THROWS_AS(fixed_share_prior(2, 1.5), ArgumentError);
  CHECK_THROWS_AS(fixed_share_prior(2, -0.1), ArgumentError);
}

TEST_CASE("invalid priors are rejected", "[prior]")
{
  Matrix k(2, 2, 0.5);
  CHECK_THROWS_AS(ExpertPrior({0.7, 0.7}, k), ArgumentError);
  k(0, 0) = 0.9;
  CHECK_THROWS_AS(ExpertPrior({0.5, 0.5}, k), ArgumentError);
  CHECK_THROWS_AS(ExpertPrior({0.5, 0.5}, Matrix(3, 3, 1.0 / 3)), ArgumentError);
}

TEST_CASE("sequence log-probabilities", "[prior]")
{
  for (std::size_t n : {1u, 2u, 5u}) {
    const ExpertPrior p = identity_prior(n);
    for (std::size_t len : {1u, 4u, 9u}) {
      const std::vector<std::size_t> constant(len, n - 1);
      CHECK_THAT(sequence_log_prob(p, constant), WithinAbs(-std::log(double(n)), 1e-14));
    }
  }
  const std::vector<std::size_t> switching{0, 0, 1};
  CHECK(sequence_log_prob(identity_prior(2), switching) == -INFINITY);

  // (1,1,2) in 1-based expert labels
  CHECK_THAT(sequence_log_prob(fixed_share_prior(2, 0.2), switching),
    WithinAbs(std::log(0.5) + std::log(0.9) + std::log(0.1), 1e-14));

  const std::vector<std::size_t> bad{0, 2};
  CHECK_THROWS_AS(sequence_log_prob(identity_prior(2), bad), ArgumentError);
}

TEST_CASE("sequence mass sums to one", "[prior]")
{
  Matrix k(3, 3);
  k(0, 0) = 0.2; k(0, 1) = 0.5; k(0, 2) = 0.3;
  k(1, 0) = 0.0; k(1, 1) = 1.0; k(1, 2) = 0.0;
  k(2, 0) = 0.6; k(2, 1) = 0.1; k(2, 2) = 0.3;
  const ExpertPrior generic({0.1, 0.6, 0.3}, k);
  for (const ExpertPrior & p : {identity_prior(3), fixed_share_prior(3, 0.3), generic}) {
    for (std::size_t len = 1; len <= 6; ++len) {
      double total = 0.0;
      std::vector<std::size_t> seq(len, 0);
      for (std::size_t code = 0; code < static_cast<std::size_t>(std::pow(3, len)); ++code) {
        std::size_t c = code;
        for (auto & s : seq) {s = c % 3; c /= 3;}
        total += std::exp(sequence_log_prob(p, seq));
      }
      CHECK_THAT(total, WithinAbs(1.0, 1e-9));
    }
  }
}

TEST_CASE("prior marginals follow the kernel", "[prior]")
{
  const ExpertPrior p({0.7, 0.3}, [] {
      Matrix k(2, 2);
      k(0, 0) = 0.9; k(0, 1) = 0.1; k(1, 0) = 0.4; k(1, 1) = 0.6;
      return k;
    }());
  CHECK(prior_marginal(p, 1) == p.initial());
  const auto m3 = prior_marginal(p, 3);
  // hand-computed: p0 K = (0.75, 0.25); p0 K^2 = (0.775, 0.225)
  CHECK_THAT(m3[0], WithinAbs(0.775, 1e-15));
  CHECK_THAT(m3[1], WithinAbs(0.225, 1e-15));
}

TEST_CASE("prior specs parse", "[prior]")
{
  CHECK(parse_prior("identity", 3).is_identity());
  CHECK_THAT(parse_prior("fixed-share:0.2", 2).transition()(0, 1), WithinAbs(0.1, 1e-15));
  CHECK_THROWS_AS(parse_prior("fixed-share:", 2), ArgumentError);
  CHECK_THROWS_AS(parse_prior("fixed-share:abc", 2), ArgumentError);
  CHECK_THROWS_AS(parse_prior("uniform", 2), ArgumentError);
}
