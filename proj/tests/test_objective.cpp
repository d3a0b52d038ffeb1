#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "chomet/learner.hpp"
#include "chomet/objective.hpp"
#include "support.hpp"

using namespace chomet;
using chomet::fixtures::handmade_env;

namespace {

constexpr double e = std::numbers::e;

// Independent evaluation of g_t, term by term.
double reference_utility(const std::vector<double>& x, const SlotEnvironment& env)
{
  double g = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double p = env.best[n];
    const double log_c = p > 0.0 ? std::log(env.rate[n]) : 0.0;
    g += x[n] * p * env.availability[n % env.cells] * log_c;
    g -= env.beta * x[n] * (1.0 - p);
    g -= env.gamma * p * (1.0 - x[n]);
  }
  return g;
}

}  // namespace

TEST(Utility, ServedPreparedCellWithRateE)
{
  const auto env = handmade_env(1, 1, {1.0}, {e}, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(utility(std::vector<double>{1.0}, env), 1.0);
}

TEST(Utility, OnlyGammaPenaltyFires)
{
  const auto env = handmade_env(1, 1, {1.0}, {e}, 0.0, 0.5);
  EXPECT_DOUBLE_EQ(utility(std::vector<double>{0.0}, env), -0.5);
}

TEST(Utility, OnlyBetaPenaltyFires)
{
  const auto env = handmade_env(1, 1, {0.0}, {e}, 0.3, 0.0);
  EXPECT_DOUBLE_EQ(utility(std::vector<double>{1.0}, env), -0.3);
}

TEST(Utility, BreakdownPartsAddUp)
{
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto env = fixtures::random_env(rng, 3, 4);
    const auto x = fixtures::random_box_point(rng, env.size());
    const auto b = utility_terms(x, env);
    EXPECT_DOUBLE_EQ(b.utility, b.rate_term - b.beta_penalty - b.gamma_penalty);
    EXPECT_NEAR(b.utility, reference_utility(x, env), 1e-9 * (1.0 + std::abs(b.utility)));
  }
}

TEST(Utility, ServedCellWithZeroRateIsInconsistent)
{
  const auto env = handmade_env(1, 2, {0.0, 1.0}, {3.0, 0.0}, 0.1, 0.1);
  EXPECT_THROW(utility(std::vector<double>{0.0, 1.0}, env), InvalidArgument);
  EXPECT_THROW(utility_gradient(env), InvalidArgument);
}

TEST(Utility, PerPairParametersApplyEntrywise)
{
  auto env = handmade_env(1, 2, {1.0, 0.0}, {e, e}, 0.0, 0.0);
  env.beta_pair = {0.0, 0.7};
  env.gamma_pair = {0.2, 0.0};
  EXPECT_DOUBLE_EQ(utility(std::vector<double>{0.0, 1.0}, env), -0.2 - 0.7);
}

TEST(Utility, LinearInX)
{
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const auto env = fixtures::random_env(rng, 2, 5);
    const auto x = fixtures::random_box_point(rng, env.size());
    const auto y = fixtures::random_box_point(rng, env.size());
    const double a = rng.uniform01();
    std::vector<double> mix(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) mix[n] = a * x[n] + (1.0 - a) * y[n];
    const double lhs = utility(mix, env);
    const double rhs = a * utility(x, env) + (1.0 - a) * utility(y, env);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(Gradient, Examples)
{
  auto env = handmade_env(1, 1, {1.0}, {std::exp(2.0)}, 0.0, 0.5);
  EXPECT_DOUBLE_EQ(utility_gradient(env)[0], 2.5);
  env = handmade_env(1, 1, {0.0}, {5.0}, 0.3, 0.5);
  EXPECT_DOUBLE_EQ(utility_gradient(env)[0], -0.3);
}

TEST(Gradient, ForwardDifferenceEqualsEntryAnywhere)
{
  Rng rng(5);
  const auto env = fixtures::random_env(rng, 2, 3);
  const auto grad = utility_gradient(env);
  const double h = 1e-3;
  for (int k = 0; k < 10; ++k) {
    auto x = fixtures::random_box_point(rng, env.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
      auto xh = x;
      xh[n] += h;
      const double fd = (utility(xh, env) - utility(x, env)) / h;
      EXPECT_NEAR(fd, grad[n], 1e-9 * (1.0 + std::abs(grad[n])));
    }
  }
}

TEST(Gradient, CentralDifferencesAtRandomPoints)
{
  Rng rng(17);
  for (int k = 0; k < 10; ++k) {
    const auto env = fixtures::random_env(rng, 3, 4);
    const auto grad = utility_gradient(env);
    const auto x = fixtures::random_box_point(rng, env.size());
    const double h = 1e-4;
    for (std::size_t n = 0; n < x.size(); ++n) {
      auto up = x, down = x;
      up[n] += h;
      down[n] -= h;
      const double fd = (utility(up, env) - utility(down, env)) / (2.0 * h);
      EXPECT_LE(std::abs(fd - grad[n]), 1e-6 * std::max(1.0, std::abs(grad[n])));
    }
  }
}

TEST(Gradient, NormBoundedByTheGradientConstantOnGeneratedSlots)
{
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto c = fixtures::small_scenario(seed, 3, 4, 40);
    c.availability = seed % 2 ? AvailabilityMode::random : AvailabilityMode::fixed;
    const auto tl = generate_timeline(c);
    const auto constants = bound_constants(tl.ues, tl.cells, tl.bounds);
    for (const auto& env : tl.slots) {
      double sq = 0.0;
      for (double g : utility_gradient(env)) sq += g * g;
      EXPECT_LE(std::sqrt(sq), constants.gradient * (1.0 + 1e-12));
    }
  }
}

TEST(SwitchingNorm, Examples)
{
  const std::vector<double> x{1.0, 0.0}, zero{0.0, 0.0}, b{0.25, 1.0};
  EXPECT_EQ(switching_norm(x, x, b), 0.0);
  EXPECT_DOUBLE_EQ(switching_norm(x, zero, b), 0.5);
  const std::vector<double> p{1, 0, 1, 1, 0, 1}, q{0, 0, 0, 0, 0, 0}, ones(6, 1.0);
  EXPECT_DOUBLE_EQ(switching_norm(p, q, ones), 2.0);
}

TEST(SwitchingNorm, RejectsNonPositiveWeightsAndShapeMismatch)
{
  const std::vector<double> x{1.0, 0.0}, y{0.0, 0.0};
  EXPECT_THROW(switching_norm(x, y, std::vector<double>{1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(switching_norm(x, y, std::vector<double>{1.0, -1.0}), InvalidArgument);
  EXPECT_THROW(switching_norm(x, std::vector<double>{0.0}, std::vector<double>{1.0, 1.0}),
               InvalidArgument);
}

TEST(SwitchingNorm, NormAxiomsOnRandomTriples)
{
  Rng rng(23);
  const std::vector<double> origin(6, 0.0);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> b(6), x(6), y(6), z(6);
    for (double& v : b) v = std::max(1e-3, rng.uniform01());
    for (std::size_t n = 0; n < 6; ++n) {
      x[n] = rng.uniform(-1.0, 1.0);
      y[n] = rng.uniform(-1.0, 1.0);
      z[n] = rng.uniform(-1.0, 1.0);
    }
    const double xz = switching_norm(x, z, b);
    EXPECT_LE(xz, switching_norm(x, y, b) + switching_norm(y, z, b) + 1e-12);
    const double a = rng.uniform(-3.0, 3.0);
    std::vector<double> ax(6);
    for (std::size_t n = 0; n < 6; ++n) ax[n] = a * x[n];
    EXPECT_NEAR(switching_norm(ax, origin, b), std::abs(a) * switching_norm(x, origin, b), 1e-12);
    EXPECT_DOUBLE_EQ(xz, switching_norm(z, x, b));
  }
}

TEST(Objective, ZeroDeltaOrNoMoveGivesUtility)
{
  Rng rng(29);
  auto env = fixtures::random_env(rng, 2, 3);
  const auto x = fixtures::random_box_point(rng, env.size());
  const auto y = fixtures::random_box_point(rng, env.size());
  EXPECT_DOUBLE_EQ(objective(x, x, env).objective, utility(x, env));
  env.delta = 0.0;
  EXPECT_DOUBLE_EQ(objective(x, y, env).objective, utility(x, env));
}

TEST(Objective, CombinedExample)
{
  const auto env = handmade_env(1, 1, {1.0}, {e}, 0.0, 0.0, 2.0);
  const auto b = objective(std::vector<double>{1.0}, std::vector<double>{0.0}, env);
  EXPECT_DOUBLE_EQ(b.objective, -1.0);
  EXPECT_DOUBLE_EQ(b.switching_cost, 2.0);
}

TEST(Objective, IsUtilityMinusWeightedSwitching)
{
  Rng rng(31);
  for (int k = 0; k < 50; ++k) {
    const auto env = fixtures::random_env(rng, 2, 4);
    const auto x = fixtures::random_box_point(rng, env.size());
    const auto y = fixtures::random_box_point(rng, env.size());
    const auto b = objective(x, y, env);
    EXPECT_EQ(b.objective, b.utility - env.delta * b.switching_norm);
    EXPECT_EQ(b.switching_cost, env.delta * b.switching_norm);
  }
}

TEST(Objective, TrajectoryStartsFromZeroDecision)
{
  const auto env = handmade_env(1, 2, {1.0, 0.0}, {e, e}, 0.0, 0.0, 1.0);
  ScenarioTimeline tl;
  tl.ues = 1;
  tl.cells = 2;
  tl.slots = {env, env};
  const std::vector<PreparationVector> xs{
      PreparationVector(1, 2, Domain::binary, {1.0, 1.0}),
      PreparationVector(1, 2, Domain::binary, {1.0, 0.0})};
  const auto out = evaluate_trajectory(tl, xs);
  EXPECT_DOUBLE_EQ(out[0].switching_norm, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(out[1].switching_norm, 1.0);
  EXPECT_THROW(evaluate_trajectory(tl, std::span(xs).first(1)), InvalidArgument);
}

TEST(PreparationVector, DomainChecks)
{
  EXPECT_THROW(PreparationVector(1, 2, Domain::binary, {0.5, 1.0}), InvalidArgument);
  EXPECT_THROW(PreparationVector(1, 2, Domain::fractional, {1.5, 0.0}), InvalidArgument);
  EXPECT_THROW(PreparationVector(1, 2, Domain::fractional, {0.5}), InvalidArgument);
  const PreparationVector x(2, 3, Domain::fractional, {0.1, 0.2, 0.3, 1.0, 0.0, 0.5});
  EXPECT_DOUBLE_EQ(x(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(x.total(), 2.1);
}
