#ifndef CHOMET_TESTS_SUPPORT_HPP
#define CHOMET_TESTS_SUPPORT_HPP

// Shared fixtures and random-instance generators for the unit tests.

#include <cmath>
#include <vector>

#include "chomet/radio_model.hpp"
#include "chomet/rng.hpp"

namespace chomet::fixtures {

/// Environment with explicit served cells and rates; everything else neutral.
inline SlotEnvironment handmade_env(std::size_t ues, std::size_t cells, std::vector<double> best,
                                    std::vector<double> rate, double beta, double gamma,
                                    double delta = 0.0)
{
  SlotEnvironment env;
  env.ues = ues;
  env.cells = cells;
  env.sinr.assign(ues * cells, 1.0);
  env.rate = std::move(rate);
  env.best = std::move(best);
  env.offsets_db.assign(cells, 0.0);
  env.availability.assign(cells, 1.0);
  env.switching_weights.assign(ues * cells, 1.0);
  env.beta = beta;
  env.gamma = gamma;
  env.delta = delta;
  return env;
}

/// Random direct-SINR slot with per-slot random parameters.
inline SlotEnvironment random_env(Rng& rng, std::size_t ues, std::size_t cells)
{
  std::vector<double> sinr(ues * cells), bandwidth(cells), offsets(cells), avail(cells),
      weights(ues * cells);
  for (double& s : sinr) s = db_to_linear(rng.uniform(10.0, 30.0));
  for (double& w : bandwidth) w = 5.0 * static_cast<double>(1 + rng.index(4));
  for (double& o : offsets) o = rng.uniform(0.0, 1.0);
  for (double& u : avail) u = rng.uniform(0.2, 1.0);
  for (double& b : weights) b = std::max(1e-3, rng.uniform01());
  return make_environment(ues, cells, sinr, bandwidth, offsets, avail, weights,
                          rng.uniform(0.0, 1.0), rng.uniform(0.0, 10.0), rng.uniform(0.0, 6.0));
}

/// Random fractional point in the unit box.
inline std::vector<double> random_box_point(Rng& rng, std::size_t n)
{
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform01();
  return x;
}

/// Small random scenario; `seed` also picks beta, gamma, delta and the period.
inline ScenarioConfig small_scenario(std::uint64_t seed, std::size_t ues, std::size_t cells,
                                     std::size_t slots)
{
  Rng rng(derive_seed(seed, "test/scenario"));
  ScenarioConfig c;
  c.mode = ScenarioMode::volatile_;
  c.ues = ues;
  c.cells = cells;
  c.slots = slots;
  c.change_period = 1 + rng.index(3);
  c.beta = rng.uniform(0.05, 1.0);
  c.gamma = rng.uniform(0.1, 10.0);
  c.delta = rng.uniform(0.0, 6.0);
  c.seed = seed;
  return c;
}

}  // namespace chomet::fixtures

#endif  // CHOMET_TESTS_SUPPORT_HPP
