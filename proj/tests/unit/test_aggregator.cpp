#include <cmath>
#include <random>
#include <vector>

#include <catch_amalgamated.hpp>

#include <longcast/aggregator.hpp>
#include <longcast/errors.hpp>

using namespace longcast;
using Catch::Matchers::WithinAbs;

namespace
{

Matrix random_losses(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {m(r, c) = u(rng);}
  }
  return m;
}

bool is_uniform(const WeightVector & w)
{
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (std::abs(w.probability(k) - 1.0 / double(w.size())) > 1e-15) {return false;}
  }
  return true;
}

}  // namespace

TEST_CASE("fresh engines start from the prior", "[aggregator]")
{
  const Aggregator v1 = init_state(Algorithm::v1, identity_prior(4), 1, 0.5);
  CHECK(is_uniform(v1.weights_for(1)));

  const Aggregator fc = init_state(Algorithm::vdfc, identity_prior(2), 3, 0.5);
  for (std::size_t t = 1; t <= 3; ++t) {CHECK(is_uniform(fc.weights_for(t)));}
  CHECK_THROWS_AS(fc.weights_for(4), ArgumentError);
  CHECK_THROWS_AS(fc.weights_for(0), ArgumentError);

  const Aggregator vd = init_state(Algorithm::vd_replicated, identity_prior(2), 2, 0.5);
  const auto & rep = vd.engine<Replicated>();
  CHECK(is_uniform(rep.grid(0)));
  CHECK(is_uniform(rep.grid(1)));
}

TEST_CASE("configuration errors", "[aggregator]")
{
  CHECK_THROWS_AS(init_state(Algorithm::v1, identity_prior(2), 2, 0.5), ArgumentError);
  CHECK_THROWS_AS(init_state(Algorithm::vdfc, fixed_share_prior(2, 0.1), 2, 0.5), ArgumentError);
  CHECK_THROWS_AS(init_state(Algorithm::vd_replicated, fixed_share_prior(2, 0.1), 2, 0.5),
    ArgumentError);
  CHECK_THROWS_AS(init_state(Algorithm::vdfc, identity_prior(2), 0, 0.5), ArgumentError);
  CHECK_THROWS_AS(init_state(Algorithm::vdfc, identity_prior(2), 1, 0.0), ArgumentError);
  Aggregator a = init_state(Algorithm::vdfc, identity_prior(2), 1, 0.5);
  CHECK_THROWS_AS(a.reveal(std::vector<double>{0.1}), ArgumentError);
  CHECK(parse_algorithm("g-markov") == Algorithm::g_markov);
  CHECK(algorithm_name(Algorithm::vd_replicated) == "vd");
  CHECK_THROWS_AS(parse_algorithm("hedge"), ArgumentError);
}

TEST_CASE("fully connected weights follow the delayed cumulative loss", "[aggregator]")
{
  const std::size_t n = 3;
  const double eta = 0.8;
  for (std::size_t d : {1u, 2u, 4u}) {
    const Matrix l = random_losses(12, n, 100 + d);
    FullyConnected fc(identity_prior(n), d, eta);
    for (std::size_t t = 1; t <= l.rows(); ++t) {
      std::vector<double> cum(n, 0.0);
      for (std::size_t tau = 1; tau + d <= t; ++tau) {
        for (std::size_t k = 0; k < n; ++k) {cum[k] += l(tau - 1, k);}
      }
      double z = 0.0;
      for (double c : cum) {z += std::exp(-eta * c);}
      for (std::size_t k = 0; k < n; ++k) {
        CHECK_THAT(fc.weights_for(t).probability(k), WithinAbs(std::exp(-eta * cum[k]) / z, 1e-14));
      }
      fc.reveal(l.row(t - 1));
    }
  }
}

TEST_CASE("D = 1 reduction chain is bitwise", "[aggregator]")
{
  const Matrix l = random_losses(40, 4, 3);
  const ExpertPrior p = identity_prior(4);
  Aggregator v1 = init_state(Algorithm::v1, p, 1, 0.6);
  Aggregator fc = init_state(Algorithm::vdfc, p, 1, 0.6);
  Aggregator vd = init_state(Algorithm::vd_replicated, p, 1, 0.6);
  Aggregator gm = init_state(Algorithm::g_markov, p, 1, 0.6);
  for (std::size_t t = 1; t <= l.rows(); ++t) {
    REQUIRE(v1.weights_for(t) == fc.weights_for(t));
    REQUIRE(v1.weights_for(t) == vd.weights_for(t));
    REQUIRE(v1.weights_for(t) == gm.weights_for(t));
    for (Aggregator * a : {&v1, &fc, &vd, &gm}) {a->reveal(l.row(t - 1));}
  }
}

TEST_CASE("posterior with identity kernel equals fully connected at any D", "[aggregator]")
{
  for (std::size_t d : {2u, 3u, 5u}) {
    const Matrix l = random_losses(30, 3, 50 + d);
    FullyConnected fc(identity_prior(3), d, 0.4);
    MarkovPosterior gm(identity_prior(3), d, 0.4);
    for (std::size_t t = 1; t <= l.rows(); ++t) {
      REQUIRE(fc.weights_for(t) == gm.weights_for(t));
      fc.reveal(l.row(t - 1));
      gm.reveal(l.row(t - 1));
    }
  }
}

TEST_CASE("replicated grids are independent one-step learners", "[aggregator]")
{
  const std::size_t d = 2;
  const Matrix l = random_losses(8, 2, 77);
  Replicated rep(identity_prior(2), d, 0.9);
  std::vector<FullyConnected> standalone(d, FullyConnected(identity_prior(2), 1, 0.9));
  for (std::size_t t = 1; t <= l.rows(); ++t) {
    const std::size_t g = (t - 1) % d;
    REQUIRE(rep.weights_for(t) == standalone[g].weights_for(standalone[g].revealed() + 1));
    rep.reveal(l.row(t - 1));
    standalone[g].reveal(l.row(t - 1));
    for (std::size_t k = 0; k < d; ++k) {
      REQUIRE(rep.grid(k) == standalone[k].weights_for(standalone[k].revealed() + 1));
    }
  }
}

TEST_CASE("memoryless kernel keeps weights uniform", "[aggregator]")
{
  for (std::size_t d : {1u, 3u}) {
    const Matrix l = random_losses(10, 3, 9);
    MarkovPosterior gm(fixed_share_prior(3, 1.0), d, 2.0);
    for (std::size_t t = 1; t <= l.rows(); ++t) {
      const auto & w = gm.weights_for(t);
      for (std::size_t k = 0; k < 3; ++k) {
        CHECK_THAT(w.probability(k), WithinAbs(1.0 / 3, 1e-14));
      }
      gm.reveal(l.row(t - 1));
    }
  }
}
