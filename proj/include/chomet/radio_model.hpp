#ifndef CHOMET_RADIO_MODEL_HPP
#define CHOMET_RADIO_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chomet/preparation.hpp"
#include "chomet/rng.hpp"

namespace chomet {

// -- Cells and link quality ---------------------------------------------------

struct CellConfig {
  double transmit_power = 1.0;          ///< q_j, watts
  double bandwidth_mhz = 10.0;          ///< W_j
  std::vector<std::size_t> cochannel;   ///< B_j, cells sharing j's frequency
  double noise_psd = 3.98e-15;          ///< sigma^2, watts per MHz (-174 dBm/Hz)

  void validate(std::size_t self, std::size_t cell_count) const
  {
    const std::string where = "cell " + std::to_string(self) + ": ";
    if (!(transmit_power > 0.0)) throw InvalidArgument(where + "transmit power must be > 0");
    if (!(bandwidth_mhz > 0.0)) throw InvalidArgument(where + "bandwidth must be > 0");
    if (!(noise_psd > 0.0)) throw InvalidArgument(where + "noise psd must be > 0");
    for (std::size_t k : cochannel) {
      if (k == self) throw InvalidArgument(where + "a cell cannot interfere with itself");
      if (k >= cell_count) throw InvalidArgument(where + "co-channel index out of range");
    }
  }
};

/// Linear SINR of `cell` at a UE whose channel gains to every cell are
/// `gains`: q_j phi_j / (W_j sigma^2 + sum_{k in B_j} q_k phi_k).
inline double compute_sinr(std::span<const double> gains, std::size_t cell,
                           std::span<const CellConfig> cells)
{
  if (gains.size() != cells.size())
    throw InvalidArgument("compute_sinr: one gain per cell required");
  if (cell >= cells.size()) throw InvalidArgument("compute_sinr: cell index out of range");
  const CellConfig& c = cells[cell];
  double denominator = c.bandwidth_mhz * c.noise_psd;
  for (std::size_t k : c.cochannel) {
    if (k >= cells.size() || k == cell)
      throw InvalidArgument("compute_sinr: invalid co-channel set for cell " + std::to_string(cell));
    denominator += cells[k].transmit_power * gains[k];
  }
  if (!(denominator > 0.0))
    throw InvalidArgument("compute_sinr: zero interference-plus-noise (noise psd must be > 0)");
  return c.transmit_power * gains[cell] / denominator;
}

/// Shannon rate in Mbps for bandwidth in MHz and linear SINR.
inline double compute_rate(double bandwidth_mhz, double sinr)
{
  return bandwidth_mhz * std::log2(1.0 + sinr);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear)
{
  return linear > 0.0 ? 10.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

class OutOfCoverage : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Index of argmax_k (SINR_k[dB] - offset_k[dB]); ties go to the lowest index.
/// `sinr` is linear, unreachable cells carry 0.
inline std::size_t best_cell(std::span<const double> sinr, std::span<const double> offsets_db)
{
  if (sinr.size() != offsets_db.size())
    throw InvalidArgument("best_cell: SINR row and offsets differ in length");
  std::size_t best = sinr.size();
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sinr.size(); ++k) {
    if (!(sinr[k] > 0.0)) continue;
    const double score = linear_to_db(sinr[k]) - offsets_db[k];
    if (best == sinr.size() || score > best_score) {
      best = k;
      best_score = score;
    }
  }
  if (best == sinr.size()) throw OutOfCoverage("best_cell: UE out of coverage (all-zero SINR row)");
  return best;
}

/// One-hot row p_i: 1 at the offset-adjusted best cell.
inline std::vector<double> best_cell_indicator(std::span<const double> sinr,
                                               std::span<const double> offsets_db)
{
  std::vector<double> p(sinr.size(), 0.0);
  p[best_cell(sinr, offsets_db)] = 1.0;
  return p;
}

// -- Per-slot environment -----------------------------------------------------

/// Exogenous data of one slot. Flattened pair index n = ue * cells + cell.
struct SlotEnvironment {
  std::size_t ues = 0;
  std::size_t cells = 0;
  std::vector<double> sinr;               ///< linear, I*J
  std::vector<double> rate;               ///< Mbps, I*J
  std::vector<double> best;               ///< one-hot rows p_ij, I*J
  std::vector<double> offsets_db;         ///< J
  std::vector<double> availability;       ///< u_j in [0, 1], J
  std::vector<double> switching_weights;  ///< diagonal of B_t, in (0, 1], I*J
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  /// Optional per-pair overrides (slicing); empty means the scalar applies.
  std::vector<double> beta_pair;
  std::vector<double> gamma_pair;

  std::size_t size() const { return ues * cells; }
  double beta_at(std::size_t n) const { return beta_pair.empty() ? beta : beta_pair[n]; }
  double gamma_at(std::size_t n) const { return gamma_pair.empty() ? gamma : gamma_pair[n]; }
  double availability_at(std::size_t n) const { return availability[n % cells]; }

  /// Checks sizes, ranges and the derived-field relations.
  void validate() const
  {
    const std::size_t n = size();
    if (ues == 0 || cells == 0) throw InvalidArgument("environment: empty dimensions");
    if (sinr.size() != n || rate.size() != n || best.size() != n || switching_weights.size() != n)
      throw InvalidArgument("environment: per-pair vectors must have I*J entries");
    if (offsets_db.size() != cells || availability.size() != cells)
      throw InvalidArgument("environment: per-cell vectors must have J entries");
    if (!beta_pair.empty() && beta_pair.size() != n)
      throw InvalidArgument("environment: per-pair beta must have I*J entries");
    if (!gamma_pair.empty() && gamma_pair.size() != n)
      throw InvalidArgument("environment: per-pair gamma must have I*J entries");
    if (beta < 0.0 || gamma < 0.0 || delta < 0.0)
      throw InvalidArgument("environment: scalarization parameters must be >= 0");
    for (std::size_t k = 0; k < n; ++k) {
      if (!(sinr[k] >= 0.0)) throw InvalidArgument("environment: negative SINR");
      if (!(switching_weights[k] > 0.0 && switching_weights[k] <= 1.0))
        throw InvalidArgument("environment: switching weights must lie in (0, 1]");
    }
    for (double u : availability)
      if (!(u >= 0.0 && u <= 1.0)) throw InvalidArgument("environment: availability outside [0, 1]");
    for (std::size_t i = 0; i < ues; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < cells; ++j) row += best[i * cells + j];
      if (row != 1.0) throw InvalidArgument("environment: best-cell row is not one-hot");
    }
  }
};

/// Builds a slot environment from raw draws, deriving rates c_ij = W_j log2(1 + s_ij)
/// and the best-cell indicators.
inline SlotEnvironment make_environment(std::size_t ues, std::size_t cells,
                                        std::vector<double> sinr,
                                        std::span<const double> bandwidths_mhz,
                                        std::vector<double> offsets_db,
                                        std::vector<double> availability,
                                        std::vector<double> switching_weights, double beta,
                                        double gamma, double delta)
{
  if (bandwidths_mhz.size() != cells)
    throw InvalidArgument("make_environment: one bandwidth per cell required");
  if (sinr.size() != ues * cells || offsets_db.size() != cells)
    throw InvalidArgument("make_environment: dimension mismatch");
  SlotEnvironment env;
  env.ues = ues;
  env.cells = cells;
  env.rate.resize(ues * cells);
  env.best.assign(ues * cells, 0.0);
  for (std::size_t i = 0; i < ues; ++i) {
    const std::span<const double> row(sinr.data() + i * cells, cells);
    env.best[i * cells + best_cell(row, offsets_db)] = 1.0;
    for (std::size_t j = 0; j < cells; ++j)
      env.rate[i * cells + j] = compute_rate(bandwidths_mhz[j], row[j]);
  }
  env.sinr = std::move(sinr);
  env.offsets_db = std::move(offsets_db);
  env.availability = std::move(availability);
  env.switching_weights = std::move(switching_weights);
  env.beta = beta;
  env.gamma = gamma;
  env.delta = delta;
  env.validate();
  return env;
}

// -- Scenario configuration ---------------------------------------------------

enum class ScenarioMode { stationary, volatile_, physical };

inline std::string_view to_string(ScenarioMode mode)
{
  switch (mode) {
    case ScenarioMode::stationary: return "stationary";
    case ScenarioMode::volatile_: return "volatile";
    case ScenarioMode::physical: return "physical";
  }
  return "?";
}

inline ScenarioMode parse_scenario_mode(std::string_view text)
{
  if (text == "stationary") return ScenarioMode::stationary;
  if (text == "volatile") return ScenarioMode::volatile_;
  if (text == "physical") return ScenarioMode::physical;
  throw InvalidArgument("unknown scenario mode '" + std::string(text) +
                        "' (expected stationary, volatile or physical)");
}

/// Constant value or one value per slot.
struct Schedule {
  std::vector<double> values{0.0};

  Schedule() = default;
  Schedule(double constant) : values{constant} {}  // NOLINT: implicit by intent
  explicit Schedule(std::vector<double> per_slot) : values(std::move(per_slot)) {}

  bool constant() const { return values.size() == 1; }
  /// Value in slot t (0-based).
  double at(std::size_t t) const { return constant() ? values.front() : values.at(t); }
  double max() const { return *std::max_element(values.begin(), values.end()); }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

enum class AvailabilityMode { fixed, random };

/// Physical-mode parameters: cells with Eq.-style SINR from channel gains.
struct PhysicalLayout {
  std::vector<CellConfig> cells;       ///< empty: J default cells on `frequency_reuse` groups
  Interval gain_range_db{-110.0, -80.0};
  std::size_t frequency_reuse = 3;
};

struct ScenarioConfig {
  ScenarioMode mode = ScenarioMode::volatile_;
  std::size_t ues = 20;
  std::size_t cells = 10;
  std::size_t slots = 5000;
  Interval sinr_range_db{10.0, 30.0};
  std::size_t change_period = 0;  ///< 0 selects the mode default (600 stationary, 10 otherwise)
  std::vector<double> bandwidth_set{5.0, 10.0, 15.0, 20.0};
  Interval offset_range_db{0.0, 1.0};
  bool offsets_every_slot = false;
  double switching_weight_floor = 1e-3;
  AvailabilityMode availability = AvailabilityMode::fixed;
  double availability_min = 0.0;
  Schedule beta = 0.5;
  Schedule gamma = 10.0;
  Schedule delta = 5.0;
  PhysicalLayout physical;
  std::uint64_t seed = 1;

  std::size_t effective_change_period() const
  {
    if (change_period != 0) return change_period;
    return mode == ScenarioMode::stationary ? 600 : 10;
  }

  void validate() const
  {
    if (ues == 0 || cells == 0 || slots == 0)
      throw InvalidArgument("scenario: ues, cells and slots must be positive");
    if (!(sinr_range_db.lo < sinr_range_db.hi))
      throw InvalidArgument("scenario: sinr_range_db lower bound must be below the upper bound");
    if (bandwidth_set.empty()) throw InvalidArgument("scenario: bandwidth set is empty");
    for (double w : bandwidth_set)
      if (!(w > 0.0)) throw InvalidArgument("scenario: bandwidths must be > 0");
    if (offset_range_db.lo > offset_range_db.hi)
      throw InvalidArgument("scenario: offset range is inverted");
    if (!(switching_weight_floor > 0.0 && switching_weight_floor <= 1.0))
      throw InvalidArgument("scenario: switching weight floor must lie in (0, 1]");
    if (!(availability_min >= 0.0 && availability_min <= 1.0))
      throw InvalidArgument("scenario: availability_min must lie in [0, 1]");
    for (const auto* s : {&beta, &gamma, &delta}) {
      if (s->values.empty() || (!s->constant() && s->values.size() != slots))
        throw InvalidArgument("scenario: schedules must hold one value or one per slot");
      for (double v : s->values)
        if (!(v >= 0.0)) throw InvalidArgument("scenario: beta, gamma, delta must be >= 0");
    }
    if (mode == ScenarioMode::physical) {
      if (!physical.cells.empty() && physical.cells.size() != cells)
        throw InvalidArgument("scenario: physical layout must list exactly `cells` cells");
      for (std::size_t j = 0; j < physical.cells.size(); ++j) physical.cells[j].validate(j, cells);
      if (physical.frequency_reuse == 0)
        throw InvalidArgument("scenario: frequency_reuse must be positive");
      if (!(physical.gain_range_db.lo <= physical.gain_range_db.hi))
        throw InvalidArgument("scenario: gain range is inverted");
    }
  }
};

/// Known a-priori bounds of the exogenous data, used for step-size tuning.
struct ScenarioBounds {
  double rate_max = 1.0;  ///< c_max, Mbps
  double switching_weight_max = 1.0;
  double beta_max = 0.0;
  double gamma_max = 0.0;
};

struct ScenarioTimeline {
  std::size_t ues = 0;
  std::size_t cells = 0;
  std::vector<double> bandwidths_mhz;
  std::vector<SlotEnvironment> slots;
  ScenarioBounds bounds;

  std::size_t size() const { return slots.size(); }
  const SlotEnvironment& operator[](std::size_t t) const { return slots[t]; }
};

/// Fills `gains` (I*J, linear) with the channel gains of slot `t` (0-based).
using GainTrajectory = std::function<void(std::size_t t, std::span<double> gains)>;

/// Default layout: cell j on frequency group j mod reuse, fixed bandwidths.
inline std::vector<CellConfig> default_physical_cells(const ScenarioConfig& config,
                                                      std::span<const double> bandwidths)
{
  std::vector<CellConfig> cells(config.cells);
  for (std::size_t j = 0; j < config.cells; ++j) {
    cells[j].bandwidth_mhz = bandwidths[j];
    for (std::size_t k = 0; k < config.cells; ++k)
      if (k != j && k % config.physical.frequency_reuse == j % config.physical.frequency_reuse)
        cells[j].cochannel.push_back(k);
  }
  return cells;
}

namespace detail {

inline std::vector<double> draw_offsets(const ScenarioConfig& c, Rng& rng)
{
  std::vector<double> o(c.cells);
  for (double& v : o) v = rng.uniform(c.offset_range_db.lo, c.offset_range_db.hi);
  return o;
}

inline std::vector<double> draw_weights(const ScenarioConfig& c, Rng& rng)
{
  std::vector<double> b(c.ues * c.cells);
  for (double& v : b) v = std::max(c.switching_weight_floor, rng.uniform01());
  return b;
}

inline std::vector<double> draw_availability(const ScenarioConfig& c, Rng& rng)
{
  std::vector<double> u(c.cells, 1.0);
  if (c.availability == AvailabilityMode::random)
    for (double& v : u) v = rng.uniform(c.availability_min, 1.0);
  return u;
}

inline ScenarioTimeline generate(const ScenarioConfig& config, const GainTrajectory* gains)
{
  config.validate();
  const std::size_t ues = config.ues, cells = config.cells, pairs = ues * cells;
  const std::size_t period = config.effective_change_period();
  const bool physical = config.mode == ScenarioMode::physical;

  // Separate streams: toggling one schedule never shifts another's draws.
  Rng bandwidth_rng(derive_seed(config.seed, "timeline/bandwidth"));
  Rng sinr_rng(derive_seed(config.seed, "timeline/sinr"));
  Rng offset_rng(derive_seed(config.seed, "timeline/offsets"));
  Rng weight_rng(derive_seed(config.seed, "timeline/weights"));
  Rng avail_rng(derive_seed(config.seed, "timeline/availability"));

  ScenarioTimeline timeline;
  timeline.ues = ues;
  timeline.cells = cells;

  std::vector<CellConfig> layout;
  if (physical && !config.physical.cells.empty()) {
    layout = config.physical.cells;
    for (const auto& c : layout) timeline.bandwidths_mhz.push_back(c.bandwidth_mhz);
  } else {
    timeline.bandwidths_mhz.resize(cells);
    for (double& w : timeline.bandwidths_mhz)
      w = config.bandwidth_set[bandwidth_rng.index(config.bandwidth_set.size())];
    if (physical) layout = default_physical_cells(config, timeline.bandwidths_mhz);
  }

  std::vector<double> sinr(pairs), offsets, weights, availability, gain(pairs);
  timeline.slots.reserve(config.slots);
  for (std::size_t t = 0; t < config.slots; ++t) {
    const bool redraw = t % period == 0;
    if (redraw) {
      if (!physical) {
        for (double& s : sinr)
          s = db_to_linear(sinr_rng.uniform(config.sinr_range_db.lo, config.sinr_range_db.hi));
      } else if (gains == nullptr) {
        for (double& g : gain)
          g = db_to_linear(
              sinr_rng.uniform(config.physical.gain_range_db.lo, config.physical.gain_range_db.hi));
      }
      weights = draw_weights(config, weight_rng);
      availability = draw_availability(config, avail_rng);
    }
    if (redraw || config.offsets_every_slot) offsets = draw_offsets(config, offset_rng);
    if (physical && (redraw || gains != nullptr)) {
      if (gains != nullptr) (*gains)(t, gain);
      for (std::size_t i = 0; i < ues; ++i) {
        const std::span<const double> row(gain.data() + i * cells, cells);
        for (std::size_t j = 0; j < cells; ++j) sinr[i * cells + j] = compute_sinr(row, j, layout);
      }
    }
    timeline.slots.push_back(make_environment(ues, cells, sinr, timeline.bandwidths_mhz, offsets,
                                              availability, weights, config.beta.at(t),
                                              config.gamma.at(t), config.delta.at(t)));
  }

  ScenarioBounds& b = timeline.bounds;
  b.switching_weight_max = 1.0;
  b.beta_max = config.beta.max();
  b.gamma_max = config.gamma.max();
  if (!physical) {
    const double w_max = *std::max_element(config.bandwidth_set.begin(), config.bandwidth_set.end());
    b.rate_max = compute_rate(w_max, db_to_linear(config.sinr_range_db.hi));
  } else {
    // No closed-form SINR ceiling for arbitrary gains; use the realized one.
    b.rate_max = 0.0;
    for (const auto& env : timeline.slots)
      b.rate_max = std::max(b.rate_max, *std::max_element(env.rate.begin(), env.rate.end()));
  }
  return timeline;
}

}  // namespace detail

/// Generates all T slot environments. Pure function of the config (and seed).
inline ScenarioTimeline generate_timeline(const ScenarioConfig& config)
{
  return detail::generate(config, nullptr);
}

/// Physical mode with caller-supplied channel gains per slot.
inline ScenarioTimeline generate_timeline(const ScenarioConfig& config, const GainTrajectory& gains)
{
  if (config.mode != ScenarioMode::physical)
    throw InvalidArgument("gain trajectories require physical mode");
  return detail::generate(config, &gains);
}

}  // namespace chomet

#endif  // CHOMET_RADIO_MODEL_HPP
