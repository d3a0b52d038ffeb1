#ifndef CHOMET_LEARNER_HPP
#define CHOMET_LEARNER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "chomet/objective.hpp"
#include "chomet/preparation.hpp"
#include "chomet/radio_model.hpp"
#include "chomet/rng.hpp"

namespace chomet {

// -- Step sizes and bound constants -------------------------------------------

/// Worst-case constants of the problem instance.
struct BoundConstants {
  double diameter = 0.0;            ///< D = sqrt(I J), Euclidean
  double gradient = 0.0;            ///< G, bound on ||grad g||_2
  double diameter_weighted = 0.0;   ///< D_B = D sqrt(b_max)
  double diameter_dual = 0.0;       ///< D_B* = D / sqrt(b_max)
  double gradient_weighted = 0.0;   ///< G_B = G sqrt(b_max)
  double weight_max = 1.0;          ///< b_max
  double rate_max = 1.0;            ///< c_max
  double beta_max = 0.0;
  double gamma_max = 0.0;
};

struct HyperParams {
  std::size_t horizon = 1;
  std::size_t ues = 1;
  std::size_t cells = 1;
  std::size_t experts = 1;        ///< K
  std::vector<double> steps;      ///< theta_1 < ... < theta_K, doubling
  double meta_step = 0.0;         ///< eta
  double nu = 0.0;
  BoundConstants bounds;
};

/// Knobs that depart from the tuned values; identity by default.
struct StepOverrides {
  double theta_scale = 1.0;
  double meta_step_scale = 1.0;
  std::optional<double> meta_step;  ///< absolute eta; wins over meta_step_scale
};

/// K = ceil(log2 sqrt(1 + 2T)) + 1.
inline std::size_t expert_count(std::size_t horizon)
{
  const double k = std::ceil(std::log2(std::sqrt(1.0 + 2.0 * static_cast<double>(horizon))));
  return static_cast<std::size_t>(k) + 1;
}

inline BoundConstants bound_constants(std::size_t ues, std::size_t cells, const ScenarioBounds& b)
{
  if (!(b.rate_max > 0.0) || !(b.switching_weight_max > 0.0))
    throw InvalidArgument("bound constants: rate and weight bounds must be positive");
  BoundConstants c;
  const double I = static_cast<double>(ues), J = static_cast<double>(cells);
  c.weight_max = b.switching_weight_max;
  c.rate_max = b.rate_max;
  c.beta_max = b.beta_max;
  c.gamma_max = b.gamma_max;
  c.diameter = std::sqrt(I * J);
  const double served = std::log(b.rate_max) + b.gamma_max;
  c.gradient = std::sqrt(I * (J - 1.0) * b.beta_max * b.beta_max + I * served * served);
  const double root_b = std::sqrt(b.switching_weight_max);
  c.diameter_weighted = c.diameter * root_b;
  c.diameter_dual = c.diameter / root_b;
  c.gradient_weighted = c.gradient * root_b;
  return c;
}

/// Step grid and meta step tuned for a horizon of `horizon` slots:
///   theta_k = 2^(k-1) sqrt(D_B^2 / (T (G^2 + 2 G_B)))
///   eta     = 1 / sqrt(T nu),  nu = (D_B + 1/8)(G D + 2 D_B)^2
inline HyperParams derive_hyperparams(std::size_t horizon, std::size_t ues, std::size_t cells,
                                      const ScenarioBounds& bounds, const StepOverrides& overrides = {})
{
  if (horizon == 0 || ues == 0 || cells == 0)
    throw InvalidArgument("derive_hyperparams: horizon and dimensions must be positive");
  if (!(overrides.theta_scale > 0.0)) throw InvalidArgument("theta_scale must be > 0");
  if (!(overrides.meta_step_scale > 0.0)) throw InvalidArgument("meta_step_scale must be > 0");
  if (overrides.meta_step && !(*overrides.meta_step > 0.0))
    throw InvalidArgument("meta_step override must be > 0");

  HyperParams hp;
  hp.horizon = horizon;
  hp.ues = ues;
  hp.cells = cells;
  hp.bounds = bound_constants(ues, cells, bounds);
  const BoundConstants& c = hp.bounds;
  const double T = static_cast<double>(horizon);

  hp.experts = expert_count(horizon);
  const double gradient_term = c.gradient * c.gradient + 2.0 * c.gradient_weighted;
  const double base = std::sqrt(c.diameter_weighted * c.diameter_weighted / (T * gradient_term));
  hp.steps.resize(hp.experts);
  for (std::size_t k = 0; k < hp.experts; ++k)
    hp.steps[k] = overrides.theta_scale * std::ldexp(base, static_cast<int>(k));

  const double spread = c.gradient * c.diameter + 2.0 * c.diameter_weighted;
  hp.nu = (c.diameter_weighted + 0.125) * spread * spread;
  hp.meta_step = overrides.meta_step ? *overrides.meta_step
                                     : overrides.meta_step_scale / std::sqrt(T * hp.nu);
  return hp;
}

/// w_1^k = (1 + 1/K) / (k (k + 1)), k = 1..K. Sums to one.
inline std::vector<double> init_weights(std::size_t experts)
{
  if (experts == 0) throw InvalidArgument("init_weights: need at least one expert");
  std::vector<double> w(experts);
  const double scale = 1.0 + 1.0 / static_cast<double>(experts);
  for (std::size_t k = 1; k <= experts; ++k)
    w[k - 1] = scale / (static_cast<double>(k) * static_cast<double>(k + 1));
  return w;
}

/// Expected-regret bound for a benchmark with path length P_T.
///
/// The meta term uses the prior weight of the expert whose step is the
/// largest grid step not exceeding the path-length-optimal step.
inline double regret_bound(const HyperParams& hp, double path_length)
{
  const BoundConstants& c = hp.bounds;
  const double T = static_cast<double>(hp.horizon);
  const double gradient_term = c.gradient * c.gradient + 2.0 * c.gradient_weighted;
  const double path_term =
      c.diameter_weighted * c.diameter_weighted + 2.0 * c.diameter_dual * path_length;

  const double ideal_step = std::sqrt(path_term / (T * gradient_term));
  std::size_t k = 0;
  while (k + 1 < hp.steps.size() && hp.steps[k + 1] <= ideal_step) ++k;
  const double prior = init_weights(hp.experts)[k];

  const double continuous = std::sqrt(T) * (std::sqrt(hp.nu) * (1.0 + std::log(1.0 / prior)) +
                                            std::sqrt(gradient_term * path_term));
  const double rounding = T * (c.gradient + std::sqrt(c.weight_max)) *
                          std::sqrt(static_cast<double>(hp.ues * hp.cells)) / 2.0;
  return continuous + rounding;
}

// -- Meta-learner primitives --------------------------------------------------

/// x^m = sum_k w_k x^k.
inline PreparationVector meta_combine(std::span<const double> weights,
                                      std::span<const PreparationVector> experts)
{
  if (experts.empty() || weights.size() != experts.size())
    throw InvalidArgument("meta_combine: one weight per expert required");
  PreparationVector mix(experts.front().ues(), experts.front().cells(), Domain::fractional);
  for (std::size_t k = 0; k < experts.size(); ++k) {
    if (!experts[k].same_shape(mix)) throw InvalidArgument("meta_combine: experts differ in shape");
    for (std::size_t n = 0; n < mix.size(); ++n) mix[n] += weights[k] * experts[k][n];
  }
  // Rounding can push a convex combination a few ulps past the box.
  for (double& v : mix.values()) v = std::clamp(v, 0.0, 1.0);
  return mix;
}

/// Madow (systematic) sampling with offset u in [0, 1): entry n is selected
/// iff a point of {u, u + 1, u + 2, ...} falls in (C_{n-1}, C_n], where C is
/// the running sum of the marginals. P(select n) = x_n, and the number
/// selected is floor(S) or ceil(S) with S = sum x.
inline PreparationVector madow_quantize(const PreparationVector& marginals, double u)
{
  if (!(u >= 0.0 && u < 1.0)) throw InvalidArgument("madow_quantize: offset must lie in [0, 1)");
  PreparationVector out(marginals.ues(), marginals.cells(), Domain::binary);
  double lower = 0.0;
  for (std::size_t n = 0; n < marginals.size(); ++n) {
    const double x = marginals[n];
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("madow_quantize: marginals must lie in [0, 1]");
    const double upper = lower + x;
    // Number of grid points in (lower, upper]; at most one since x <= 1.
    const double hits = std::floor(upper - u) - std::floor(lower - u);
    out[n] = x >= 1.0 ? 1.0 : (x <= 0.0 ? 0.0 : (hits > 0.0 ? 1.0 : 0.0));
    lower = upper;
  }
  return out;
}

inline PreparationVector madow_quantize(const PreparationVector& marginals, Rng& rng)
{
  return madow_quantize(marginals, rng.uniform01());
}

/// l_t(x^k) = <grad, x^k - x_t> - delta ||x_t - x_{t-1}||_B.
/// The switching part is the same for every expert.
inline double surrogate_loss(std::span<const double> grad, std::span<const double> expert,
                             std::span<const double> decision, double switching_norm, double delta)
{
  if (grad.size() != expert.size() || grad.size() != decision.size())
    throw InvalidArgument("surrogate_loss: dimension mismatch");
  double inner = 0.0;
  for (std::size_t n = 0; n < grad.size(); ++n) inner += grad[n] * (expert[n] - decision[n]);
  return inner - delta * switching_norm;
}

/// Exponential weights: w'_k proportional to w_k exp(eta l_k), evaluated in
/// the log domain. Weights are floored at the smallest normal double so an
/// expert that falls far behind stays strictly positive instead of underflowing.
inline std::vector<double> update_weights(std::span<const double> weights,
                                          std::span<const double> losses, double eta)
{
  if (weights.size() != losses.size() || weights.empty())
    throw InvalidArgument("update_weights: one loss per weight required");
  if (!(eta > 0.0)) throw InvalidArgument("update_weights: eta must be > 0");
  std::vector<double> out(weights.size());
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!(weights[k] > 0.0)) throw InvalidArgument("update_weights: weights must be positive");
    out[k] = std::log(weights[k]) + eta * losses[k];
    shift = std::max(shift, out[k]);
  }
  double total = 0.0;
  for (double& w : out) {
    w = std::exp(w - shift);
    total += w;
  }
  for (double& w : out) w = std::max(w / total, std::numeric_limits<double>::min());
  return out;
}

/// Projected gradient ascent step onto the unit box.
inline void expert_step(PreparationVector& expert, std::span<const double> grad, double step)
{
  if (grad.size() != expert.size()) throw InvalidArgument("expert_step: dimension mismatch");
  for (std::size_t n = 0; n < grad.size(); ++n)
    expert[n] = std::clamp(expert[n] + step * grad[n], 0.0, 1.0);
}

inline PreparationVector expert_step(const PreparationVector& expert, std::span<const double> grad,
                                     double step)
{
  PreparationVector next = expert;
  expert_step(next, grad, step);
  return next;
}

// -- The learner --------------------------------------------------------------

struct ExpertState {
  PreparationVector iterate;  ///< x^k, fractional
  double step = 0.0;          ///< theta_k
};

/// Everything the learner decided and observed in one slot.
struct LearnerSlot {
  PreparationVector mix;            ///< x^m_t
  PreparationVector decision;       ///< x_t, binary
  std::vector<double> gradient;     ///< grad g_t(x_t)
  std::vector<double> losses;       ///< l_t(x^k_t), per expert
  std::vector<double> weights;      ///< w_{t+1}
  ObjectiveBreakdown breakdown;     ///< objective of x_t against x_{t-1}
};

/// Meta-learner over K projected-gradient experts with Madow rounding.
///
/// One slot is decide() (mix and quantize, before the environment is known)
/// followed by observe() (gradient, weight and expert updates).
class Chomet {
 public:
  Chomet(std::size_t ues, std::size_t cells, HyperParams params)
      : params_(std::move(params)),
        weights_(init_weights(params_.steps.size())),
        previous_(ues, cells, Domain::binary),
        previous_mix_(ues, cells, Domain::fractional),
        decision_(ues, cells, Domain::binary),
        mix_(ues, cells, Domain::fractional)
  {
    if (params_.steps.empty()) throw InvalidArgument("Chomet: no experts");
    if (!std::is_sorted(params_.steps.begin(), params_.steps.end()))
      throw InvalidArgument("Chomet: expert steps must be sorted ascending");
    experts_.reserve(params_.steps.size());
    for (double step : params_.steps)
      experts_.push_back({PreparationVector(ues, cells, Domain::fractional), step});
  }

  const HyperParams& params() const { return params_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const ExpertState> experts() const { return experts_; }
  const PreparationVector& previous_decision() const { return previous_; }
  const PreparationVector& previous_mix() const { return previous_mix_; }

  /// Combines the experts and rounds the mix to an implementable decision.
  const PreparationVector& decide(Rng& rng)
  {
    if (pending_) throw InvalidArgument("Chomet: decide() called twice without observe()");
    std::vector<PreparationVector> iterates;
    iterates.reserve(experts_.size());
    for (const auto& e : experts_) iterates.push_back(e.iterate);
    mix_ = meta_combine(weights_, iterates);
    decision_ = madow_quantize(mix_, rng);
    pending_ = true;
    return decision_;
  }

  /// Reveals the slot's environment and updates weights and experts.
  LearnerSlot observe(const SlotEnvironment& env)
  {
    if (!pending_) throw InvalidArgument("Chomet: observe() without a pending decision");
    if (env.size() != decision_.size()) throw InvalidArgument("Chomet: environment shape mismatch");
    pending_ = false;

    LearnerSlot slot;
    slot.breakdown = objective(decision_, previous_, env);
    slot.gradient = utility_gradient(env);  // evaluated at x_t; g_t is linear

    slot.losses.resize(experts_.size());
    for (std::size_t k = 0; k < experts_.size(); ++k)
      slot.losses[k] = surrogate_loss(slot.gradient, experts_[k].iterate.values(),
                                      decision_.values(), slot.breakdown.switching_norm, env.delta);
    weights_ = update_weights(weights_, slot.losses, params_.meta_step);
    for (auto& e : experts_) expert_step(e.iterate, slot.gradient, e.step);

    slot.mix = mix_;
    slot.decision = decision_;
    slot.weights = weights_;
    previous_ = decision_;
    previous_mix_ = mix_;
    return slot;
  }

 private:
  HyperParams params_;
  std::vector<double> weights_;
  std::vector<ExpertState> experts_;
  PreparationVector previous_;      ///< x_{t-1}; all zeros before slot 1
  PreparationVector previous_mix_;  ///< x^m_{t-1}
  PreparationVector decision_;
  PreparationVector mix_;
  bool pending_ = false;
};

/// One full slot: decide, then observe `env`.
inline LearnerSlot chomet_step(Chomet& learner, const SlotEnvironment& env, Rng& rng)
{
  learner.decide(rng);
  return learner.observe(env);
}

}  // namespace chomet

#endif  // CHOMET_LEARNER_HPP
