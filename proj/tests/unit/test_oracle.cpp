#include <cmath>
#include <random>
#include <vector>

#include <catch_amalgamated.hpp>

#include <longcast/aggregator.hpp>
#include <longcast/errors.hpp>
#include <longcast/oracle.hpp>

using namespace longcast;
using Catch::Matchers::WithinAbs;

namespace
{

Matrix random_losses(std::size_t rows, std::size_t cols, std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {m(r, c) = u(rng);}
  }
  return m;
}

// Forward filter in probability space: condition on rows 1..t-D, then
// push the filtered distribution forward to step t through the kernel.
std::vector<double> forward_predictive(
  const ExpertPrior & prior, const Matrix & losses, double eta, std::size_t t, std::size_t d)
{
  const std::size_t n = prior.num_experts();
  const std::size_t conditioned = t > d ? t - d : 0;
  std::vector<double> f = prior.initial();
  auto push = [&] {
      std::vector<double> next(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {next[j] += f[i] * prior.transition()(i, j);}
      }
      f = next;
    };
  for (std::size_t tau = 1; tau <= conditioned; ++tau) {
    double z = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      f[k] *= std::exp(-eta * losses(tau - 1, k));
      z += f[k];
    }
    for (auto & v : f) {v /= z;}
    push();
  }
  for (std::size_t s = conditioned + 1; s < t; ++s) {push();}
  return f;
}

}  // namespace

TEST_CASE("before any feedback the oracle returns the prior marginal", "[oracle]")
{
  std::mt19937_64 rng(1);
  const ExpertPrior p = fixed_share_prior(3, 0.3);
  const Matrix l = random_losses(5, 3, rng);
  for (std::size_t t = 1; t <= 3; ++t) {
    const auto w = brute_force_posterior(p, l, 0.7, t, 3);
    const auto m = prior_marginal(p, t);
    for (std::size_t k = 0; k < 3; ++k) {CHECK_THAT(w.probability(k), WithinAbs(m[k], 1e-14));}
  }
}

TEST_CASE("identity prior at D = 1 gives the softmax of past losses", "[oracle]")
{
  std::mt19937_64 rng(2);
  const Matrix l = random_losses(6, 3, rng);
  const double eta = 1.1;
  std::vector<double> cum(3, 0.0);
  for (std::size_t t = 1; t <= 6; ++t) {
    const auto w = brute_force_posterior(identity_prior(3), l, eta, t, 1);
    double z = 0.0;
    for (double c : cum) {z += std::exp(-eta * c);}
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK_THAT(w.probability(k), WithinAbs(std::exp(-eta * cum[k]) / z, 1e-14));
    }
    for (std::size_t k = 0; k < 3; ++k) {cum[k] += l(t - 1, k);}
  }
}

TEST_CASE("enumeration oracle agrees with an independent forward filter", "[oracle]")
{
  std::mt19937_64 rng(3);
  Matrix k(3, 3);
  k(0, 0) = 0.5; k(0, 1) = 0.25; k(0, 2) = 0.25;
  k(1, 0) = 0.1; k(1, 1) = 0.8; k(1, 2) = 0.1;
  k(2, 0) = 0.3; k(2, 1) = 0.0; k(2, 2) = 0.7;
  const ExpertPrior generic({0.2, 0.5, 0.3}, k);
  for (const ExpertPrior & p : {fixed_share_prior(3, 0.3), generic, identity_prior(3)}) {
    for (std::size_t d : {1u, 2u, 3u}) {
      const Matrix l = random_losses(7, 3, rng);
      for (std::size_t t = 1; t <= 7; ++t) {
        const auto w = brute_force_posterior(p, l, 0.9, t, d);
        const auto ref = forward_predictive(p, l, 0.9, t, d);
        for (std::size_t n = 0; n < 3; ++n) {CHECK_THAT(w.probability(n), WithinAbs(ref[n], 1e-12));}
      }
    }
  }
}

TEST_CASE("fixed-share reference value, N=3, D=2, t=5", "[oracle]")
{
  std::mt19937_64 rng(4);
  const ExpertPrior p = fixed_share_prior(3, 0.3);
  const Matrix l = random_losses(5, 3, rng);
  MarkovPosterior gm(p, 2, 0.5);
  for (std::size_t t = 1; t < 5; ++t) {gm.reveal(l.row(t - 1));}
  const auto ref = forward_predictive(p, l, 0.5, 5, 2);
  const auto oracle = brute_force_posterior(p, l, 0.5, 5, 2);
  for (std::size_t n = 0; n < 3; ++n) {
    CHECK_THAT(gm.weights_for(5).probability(n), WithinAbs(ref[n], 1e-12));
    CHECK_THAT(oracle.probability(n), WithinAbs(ref[n], 1e-12));
  }
}

TEST_CASE("fast engines match the oracle on the small cases", "[oracle]")
{
  std::mt19937_64 rng(5);
  {
    const Matrix l = random_losses(6, 2, rng);
    FullyConnected fc(identity_prior(2), 2, 0.7);
    for (std::size_t t = 1; t <= 6; ++t) {
      CHECK(max_abs_difference(fc.weights_for(t), brute_force_posterior(identity_prior(2), l, 0.7, t, 2)) <= 1e-12);
      fc.reveal(l.row(t - 1));
    }
  }
  {
    const Matrix l = random_losses(6, 2, rng);
    const ExpertPrior p = fixed_share_prior(2, 0.2);
    MarkovPosterior gm(p, 2, 0.7);
    for (std::size_t t = 1; t <= 6; ++t) {
      CHECK(max_abs_difference(gm.weights_for(t), brute_force_posterior(p, l, 0.7, t, 2)) <= 1e-12);
      gm.reveal(l.row(t - 1));
    }
  }
  {
    const Matrix l = random_losses(8, 2, rng);
    Replicated rep(identity_prior(2), 2, 0.7);
    const SequenceModel model = replicated_model(2, 2);
    for (std::size_t t = 1; t <= 8; ++t) {
      CHECK(max_abs_difference(rep.weights_for(t), brute_force_posterior(model, l, 0.7, t, 2)) <= 1e-12);
      rep.reveal(l.row(t - 1));
    }
  }
}

TEST_CASE("posterior loss bound is exact for a degenerate prior", "[oracle]")
{
  // All mass on expert 2 staying put: the bound is that expert's loss.
  Matrix k(2, 2);
  k(0, 0) = 1.0; k(1, 1) = 1.0;
  const ExpertPrior point({0.0, 1.0}, k);
  std::mt19937_64 rng(6);
  const Matrix l = random_losses(5, 2, rng);
  double total = 0.0;
  for (std::size_t t = 0; t < 5; ++t) {total += l(t, 1);}
  CHECK_THAT(posterior_loss_bound(point, l, 0.5), WithinAbs(total, 1e-12));
}

TEST_CASE("enumeration is guarded", "[oracle]")
{
  const Matrix big(30, 3);
  CHECK_THROWS_AS(posterior_loss_bound(identity_prior(3), big, 0.5), CapacityError);
  CHECK_THROWS_AS(brute_force_posterior(identity_prior(3), big, 0.5, 30, 1), CapacityError);
}
