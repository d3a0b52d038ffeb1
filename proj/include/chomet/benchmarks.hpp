#ifndef CHOMET_BENCHMARKS_HPP
#define CHOMET_BENCHMARKS_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "chomet/objective.hpp"
#include "chomet/preparation.hpp"
#include "chomet/radio_model.hpp"

namespace chomet {

// -- (N-best, TTT) comparator -------------------------------------------------

/// A3-style comparator: prepare a UE's cell once it has ranked among the UE's
/// top-N cells for TTT consecutive observed slots.
struct TttComparatorConfig {
  std::size_t best = 1;  ///< N
  std::size_t ttt = 1;   ///< consecutive slots required
  bool use_offsets = false;
  /// Slots between an observation and the decision that may use it. With 1,
  /// the slot-t decision sees SINR up to slot t-1, the same information the
  /// learner has; with 0 it also sees slot t.
  std::size_t observation_lag = 1;

  std::string label() const
  {
    return "ttt(" + std::to_string(best) + "," + std::to_string(ttt) + ")";
  }

  void validate(std::size_t cells) const
  {
    if (best > cells)
      throw InvalidArgument(label() + ": N = " + std::to_string(best) + " exceeds the " +
                            std::to_string(cells) + " cells");
    if (ttt == 0) throw InvalidArgument(label() + ": TTT must be at least 1");
  }
};

/// Cells of one UE ordered by SINR (descending), ties to the lowest index.
inline std::vector<std::size_t> rank_cells(std::span<const double> sinr,
                                           std::span<const double> offsets_db, bool use_offsets)
{
  std::vector<double> score(sinr.size());
  for (std::size_t j = 0; j < sinr.size(); ++j)
    score[j] = use_offsets ? linear_to_db(sinr[j]) - offsets_db[j] : sinr[j];
  std::vector<std::size_t> order(sinr.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  return order;
}

inline std::vector<PreparationVector> run_ttt_comparator(const ScenarioTimeline& timeline,
                                                         const TttComparatorConfig& cfg)
{
  const std::size_t ues = timeline.ues, cells = timeline.cells;
  cfg.validate(cells);
  // streak[n]: consecutive observed slots (up to the latest) with pair n in the top-N.
  std::vector<std::size_t> streak(ues * cells, 0);
  std::vector<std::vector<std::size_t>> history;  // streak snapshots, one per observed slot
  history.reserve(timeline.size());
  std::vector<PreparationVector> decisions;
  decisions.reserve(timeline.size());

  for (std::size_t t = 0; t < timeline.size(); ++t) {
    const SlotEnvironment& env = timeline[t];
    for (std::size_t i = 0; i < ues; ++i) {
      const std::span<const double> row(env.sinr.data() + i * cells, cells);
      const auto order = rank_cells(row, env.offsets_db, cfg.use_offsets);
      std::vector<bool> top(cells, false);
      for (std::size_t r = 0; r < cfg.best; ++r) top[order[r]] = true;
      for (std::size_t j = 0; j < cells; ++j) {
        std::size_t& s = streak[i * cells + j];
        s = top[j] ? s + 1 : 0;
      }
    }
    history.push_back(streak);

    PreparationVector x(ues, cells, Domain::binary);
    if (t >= cfg.observation_lag) {
      const auto& seen = history[t - cfg.observation_lag];
      for (std::size_t n = 0; n < x.size(); ++n) x[n] = seen[n] >= cfg.ttt ? 1.0 : 0.0;
    }
    decisions.push_back(std::move(x));
  }
  return decisions;
}

// -- Hindsight oracles --------------------------------------------------------

struct OracleResult {
  std::vector<PreparationVector> decisions;
  std::vector<double> utility;    ///< g_t(x*_t)
  std::vector<double> objective;  ///< g_t(x*_t) - delta_t ||x*_t - x*_{t-1}||, x*_0 = 0
  double total_utility = 0.0;
  double total_objective = 0.0;
};

namespace detail {

inline OracleResult score_oracle(const ScenarioTimeline& timeline,
                                 std::vector<PreparationVector> decisions)
{
  OracleResult r;
  for (const auto& b : evaluate_trajectory(timeline, decisions)) {
    r.utility.push_back(b.utility);
    r.objective.push_back(b.objective);
    r.total_utility += b.utility;
    r.total_objective += b.objective;
  }
  r.decisions = std::move(decisions);
  return r;
}

}  // namespace detail

/// Per-slot maximizer of g_t, ignoring switching: prepare (i, j) iff its
/// gradient entry is positive.
inline OracleResult oracle_per_slot(const ScenarioTimeline& timeline)
{
  std::vector<PreparationVector> decisions;
  decisions.reserve(timeline.size());
  for (const auto& env : timeline.slots) {
    const auto grad = utility_gradient(env);
    PreparationVector x(timeline.ues, timeline.cells, Domain::binary);
    for (std::size_t n = 0; n < grad.size(); ++n) x[n] = grad[n] > 0.0 ? 1.0 : 0.0;
    decisions.push_back(std::move(x));
  }
  return detail::score_oracle(timeline, std::move(decisions));
}

class CapacityError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

inline constexpr std::size_t kOracleDpMaxPairs = 14;

/// Exact maximizer of sum_t (g_t(x_t) - delta_t ||x_t - x_{t-1}||_{B_t}) over
/// binary sequences with x_0 = 0. Dynamic program over the previous decision;
/// O(T 4^(IJ)) time, so I*J is capped.
inline OracleResult oracle_dp(const ScenarioTimeline& timeline)
{
  const std::size_t pairs = timeline.ues * timeline.cells;
  if (pairs > kOracleDpMaxPairs)
    throw CapacityError("oracle_dp: I*J = " + std::to_string(pairs) + " exceeds the cap of " +
                        std::to_string(kOracleDpMaxPairs) + " pairs");
  const std::size_t states = std::size_t{1} << pairs;
  const double ninf = -std::numeric_limits<double>::infinity();

  std::vector<double> value(states, ninf), next(states);
  value[0] = 0.0;
  std::vector<double> util(states), weight_sum(states);
  std::vector<std::vector<std::uint32_t>> parent(timeline.size(),
                                                 std::vector<std::uint32_t>(states));

  for (std::size_t t = 0; t < timeline.size(); ++t) {
    const SlotEnvironment& env = timeline[t];
    const auto grad = utility_gradient(env);
    util[0] = utility_terms(std::vector<double>(pairs, 0.0), env).utility;
    weight_sum[0] = 0.0;
    for (std::size_t m = 1; m < states; ++m) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
      util[m] = util[m & (m - 1)] + grad[low];
      weight_sum[m] = weight_sum[m & (m - 1)] + env.switching_weights[low];
    }
    for (std::size_t x = 0; x < states; ++x) {
      double best = ninf;
      std::uint32_t arg = 0;
      for (std::size_t prev = 0; prev < states; ++prev) {
        if (value[prev] == ninf) continue;
        const double v = value[prev] - env.delta * std::sqrt(weight_sum[x ^ prev]);
        if (v > best) {
          best = v;
          arg = static_cast<std::uint32_t>(prev);
        }
      }
      next[x] = util[x] + best;
      parent[t][x] = arg;
    }
    value.swap(next);
  }

  std::size_t state = static_cast<std::size_t>(
      std::distance(value.begin(), std::max_element(value.begin(), value.end())));
  std::vector<PreparationVector> decisions(timeline.size());
  for (std::size_t t = timeline.size(); t-- > 0;) {
    PreparationVector x(timeline.ues, timeline.cells, Domain::binary);
    for (std::size_t n = 0; n < pairs; ++n) x[n] = (state >> n) & 1U ? 1.0 : 0.0;
    decisions[t] = std::move(x);
    state = parent[t][state];
  }
  return detail::score_oracle(timeline, std::move(decisions));
}

}  // namespace chomet

#endif  // CHOMET_BENCHMARKS_HPP
