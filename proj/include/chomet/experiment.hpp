#ifndef CHOMET_EXPERIMENT_HPP
#define CHOMET_EXPERIMENT_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chomet/benchmarks.hpp"
#include "chomet/config.hpp"
#include "chomet/learner.hpp"
#include "chomet/objective.hpp"
#include "chomet/radio_model.hpp"

namespace chomet {

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One CSV row: what one algorithm did in one slot of one seeded run.
struct SlotRecord {
  std::size_t slot = 0;  ///< 1-based
  std::string algorithm;
  std::uint64_t seed = 0;
  double utility = 0.0;
  double switching = 0.0;  ///< delta_t ||x_t - x_{t-1}||_{B_t}
  double objective = 0.0;
  double cum_objective = 0.0;
  double preparations = 0.0;  ///< sum of the implemented binary decision
  double oracle_g = 0.0;      ///< benchmark utility g_t(x*_t)
  double avg_regret = 0.0;    ///< R_t / t
};

struct RunSummary {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t slots = 0;
  double total_objective = 0.0;
  double tail_objective = 0.0;     ///< sum over the last objective_window slots
  double mean_preparations = 0.0;  ///< over the last preparations_window slots
  double final_regret = 0.0;       ///< R_T / T
  double path_length = 0.0;        ///< P_T of the benchmark sequence
  std::optional<double> regret_bound;  ///< learner only
};

struct ExperimentResult {
  std::vector<SlotRecord> records;
  std::vector<RunSummary> summaries;
};

// -- Metrics ------------------------------------------------------------------

/// Average dynamic regret R_t / t, R_t = sum_{tau<=t} (g*_tau - objective_tau).
inline std::vector<double> compute_regret(std::span<const double> objectives,
                                          std::span<const double> oracle_utility)
{
  if (objectives.size() != oracle_utility.size())
    throw InvalidArgument("compute_regret: algorithm and oracle series differ in length");
  std::vector<double> out(objectives.size());
  double gap = 0.0;
  for (std::size_t t = 0; t < objectives.size(); ++t) {
    gap += oracle_utility[t] - objectives[t];
    out[t] = gap / static_cast<double>(t + 1);
  }
  return out;
}

/// P_T = sum_t ||x*_t - x*_{t-1}||_{B_t}, counting movement within the
/// sequence only (the first slot contributes nothing).
inline double compute_path_length(std::span<const PreparationVector> decisions,
                                  const ScenarioTimeline& timeline)
{
  if (decisions.size() != timeline.size())
    throw InvalidArgument("compute_path_length: one decision per slot required");
  double total = 0.0;
  for (std::size_t t = 1; t < decisions.size(); ++t)
    total += switching_norm(decisions[t], decisions[t - 1], timeline[t].switching_weights);
  return total;
}

inline HyperParams learner_params(const ExperimentConfig& config, const ScenarioTimeline& timeline)
{
  return derive_hyperparams(timeline.size(), timeline.ues, timeline.cells, timeline.bounds,
                            config.chomet);
}

// -- Running ------------------------------------------------------------------

/// Decisions of one algorithm on one timeline. `seed` feeds the quantizer.
inline std::vector<PreparationVector> run_algorithm(const AlgorithmSpec& algorithm,
                                                    const ScenarioTimeline& timeline,
                                                    const ExperimentConfig& config,
                                                    std::uint64_t seed)
{
  switch (algorithm.kind) {
    case AlgorithmKind::ttt: return run_ttt_comparator(timeline, algorithm.ttt);
    case AlgorithmKind::oracle_per_slot: return oracle_per_slot(timeline).decisions;
    case AlgorithmKind::oracle_dp: return oracle_dp(timeline).decisions;
    case AlgorithmKind::chomet: break;
  }
  Chomet learner(timeline.ues, timeline.cells, learner_params(config, timeline));
  Rng rng(derive_seed(seed, "quantizer/" + algorithm.id()));
  std::vector<PreparationVector> decisions;
  decisions.reserve(timeline.size());
  for (std::size_t t = 0; t < timeline.size(); ++t) {
    try {
      decisions.push_back(chomet_step(learner, timeline[t], rng).decision);
    } catch (const std::exception& e) {
      throw ExperimentError("slot " + std::to_string(t + 1) + ": " + e.what());
    }
  }
  return decisions;
}

/// Turns a decision sequence into records and a summary.
inline RunSummary score_run(const std::string& algorithm, std::uint64_t seed,
                            const ScenarioTimeline& timeline,
                            std::span<const PreparationVector> decisions,
                            const OracleResult& benchmark, const ExperimentConfig& config,
                            std::vector<SlotRecord>* records)
{
  const auto breakdown = evaluate_trajectory(timeline, decisions);
  std::vector<double> objectives(breakdown.size());
  for (std::size_t t = 0; t < breakdown.size(); ++t) objectives[t] = breakdown[t].objective;
  const auto regret = compute_regret(objectives, benchmark.utility);

  RunSummary s;
  s.algorithm = algorithm;
  s.seed = seed;
  s.slots = timeline.size();
  const std::size_t T = timeline.size();
  const std::size_t tail_from = T - std::min(T, config.objective_window);
  const std::size_t prep_from = T - std::min(T, config.preparations_window);
  double cumulative = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    cumulative += objectives[t];
    const double prepared = decisions[t].total();
    if (t >= tail_from) s.tail_objective += objectives[t];
    if (t >= prep_from) s.mean_preparations += prepared;
    if (records != nullptr)
      records->push_back({t + 1, algorithm, seed, breakdown[t].utility, breakdown[t].switching_cost,
                          objectives[t], cumulative, prepared, benchmark.utility[t], regret[t]});
  }
  s.total_objective = cumulative;
  s.mean_preparations /= static_cast<double>(T - prep_from);
  s.final_regret = regret.empty() ? 0.0 : regret.back();
  s.path_length = compute_path_length(benchmark.decisions, timeline);
  return s;
}

/// Runs every (algorithm, seed) pair. The regret benchmark {x*_t} is the
/// per-slot hindsight maximizer.
inline ExperimentResult run_experiment(const ExperimentConfig& config, bool keep_records = true)
{
  config.validate();
  ExperimentResult result;
  for (std::uint64_t seed : config.seeds) {
    ScenarioConfig scenario = config.scenario;
    scenario.seed = seed;
    const ScenarioTimeline timeline = generate_timeline(scenario);
    const OracleResult benchmark = oracle_per_slot(timeline);
    for (const auto& algorithm : config.algorithms) {
      const std::string id = algorithm.id();
      try {
        const auto decisions = run_algorithm(algorithm, timeline, config, seed);
        RunSummary s = score_run(id, seed, timeline, decisions, benchmark, config,
                                 keep_records ? &result.records : nullptr);
        if (algorithm.kind == AlgorithmKind::chomet)
          s.regret_bound = regret_bound(learner_params(config, timeline), s.path_length);
        result.summaries.push_back(std::move(s));
      } catch (const std::exception& e) {
        throw ExperimentError("algorithm " + id + ", seed " + std::to_string(seed) + ": " +
                              e.what());
      }
    }
  }
  return result;
}

/// Mean of each summary field across seeds, per algorithm, in first-seen order.
inline std::vector<RunSummary> mean_by_algorithm(std::span<const RunSummary> runs)
{
  std::vector<RunSummary> out;
  std::map<std::string, std::size_t> index;
  std::vector<double> counts;
  for (const auto& r : runs) {
    auto [it, fresh] = index.try_emplace(r.algorithm, out.size());
    if (fresh) {
      RunSummary m;
      m.algorithm = r.algorithm;
      m.slots = r.slots;
      out.push_back(m);
      counts.push_back(0.0);
    }
    RunSummary& m = out[it->second];
    counts[it->second] += 1.0;
    m.total_objective += r.total_objective;
    m.tail_objective += r.tail_objective;
    m.mean_preparations += r.mean_preparations;
    m.final_regret += r.final_regret;
    m.path_length += r.path_length;
    if (r.regret_bound) m.regret_bound = m.regret_bound.value_or(0.0) + *r.regret_bound;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    RunSummary& m = out[k];
    const double n = counts[k];
    m.total_objective /= n;
    m.tail_objective /= n;
    m.mean_preparations /= n;
    m.final_regret /= n;
    m.path_length /= n;
    if (m.regret_bound) *m.regret_bound /= n;
  }
  return out;
}

// -- CSV ----------------------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "slot,algorithm,seed,utility,switching,objective,cum_objective,preparations,oracle_g,"
    "avg_regret";

inline std::string format_g9(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline void write_csv(std::span<const SlotRecord> records, std::ostream& out)
{
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.slot << ',' << r.algorithm << ',' << r.seed << ',' << format_g9(r.utility) << ','
        << format_g9(r.switching) << ',' << format_g9(r.objective) << ','
        << format_g9(r.cum_objective) << ',' << format_g9(r.preparations) << ','
        << format_g9(r.oracle_g) << ',' << format_g9(r.avg_regret) << '\n';
  }
}

inline void write_csv(std::span<const SlotRecord> records, const std::string& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExperimentError(path + ": cannot open for writing");
  write_csv(records, out);
  out.flush();
  if (!out) throw ExperimentError(path + ": write failed");
}

inline std::vector<SlotRecord> read_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ExperimentError("csv: missing or unexpected header");
  std::vector<SlotRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 10) throw ExperimentError("csv: expected 10 fields in '" + line + "'");
    try {
      out.push_back({std::stoul(f[0]), f[1], std::stoull(f[2]), std::stod(f[3]), std::stod(f[4]),
                     std::stod(f[5]), std::stod(f[6]), std::stod(f[7]), std::stod(f[8]),
                     std::stod(f[9])});
    } catch (const std::logic_error&) {
      throw ExperimentError("csv: malformed number in '" + line + "'");
    }
  }
  return out;
}

inline std::vector<SlotRecord> read_csv(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExperimentError(path + ": cannot open for reading");
  return read_csv(in);
}

}  // namespace chomet

#endif  // CHOMET_EXPERIMENT_HPP
