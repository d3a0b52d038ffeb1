#ifndef CHOMET_OBJECTIVE_HPP
#define CHOMET_OBJECTIVE_HPP

#include <cmath>
#include <span>
#include <vector>

#include "chomet/preparation.hpp"
#include "chomet/radio_model.hpp"

namespace chomet {

struct ObjectiveBreakdown {
  double rate_term = 0.0;      ///< sum x p u ln c
  double beta_penalty = 0.0;   ///< sum beta x (1 - p)
  double gamma_penalty = 0.0;  ///< sum gamma p (1 - x)
  double utility = 0.0;        ///< rate_term - beta_penalty - gamma_penalty
  double switching_norm = 0.0; ///< ||x - x_prev||_B
  double switching_cost = 0.0; ///< delta * switching_norm
  double objective = 0.0;      ///< utility - switching_cost
};

namespace detail {

// Natural log of the served rate; the served cell must have positive rate.
inline double log_rate(const SlotEnvironment& env, std::size_t n)
{
  if (env.best[n] == 0.0) return 0.0;
  if (!(env.rate[n] > 0.0))
    throw InvalidArgument("inconsistent environment: best cell has zero rate");
  return std::log(env.rate[n]);
}

inline void check_shape(std::size_t got, const SlotEnvironment& env)
{
  if (got != env.size()) throw InvalidArgument("decision and environment differ in size");
}

}  // namespace detail

/// Utility terms of g_t at x (linear in x). Natural log on the rate term.
inline ObjectiveBreakdown utility_terms(std::span<const double> x, const SlotEnvironment& env)
{
  detail::check_shape(x.size(), env);
  ObjectiveBreakdown out;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double p = env.best[n];
    out.rate_term += x[n] * p * env.availability_at(n) * detail::log_rate(env, n);
    out.beta_penalty += env.beta_at(n) * x[n] * (1.0 - p);
    out.gamma_penalty += env.gamma_at(n) * p * (1.0 - x[n]);
  }
  out.utility = out.rate_term - out.beta_penalty - out.gamma_penalty;
  out.objective = out.utility;
  return out;
}

inline double utility(std::span<const double> x, const SlotEnvironment& env)
{
  return utility_terms(x, env).utility;
}

inline double utility(const PreparationVector& x, const SlotEnvironment& env)
{
  return utility(x.values(), env);
}

/// grad g_t; entry n = p u ln c - beta (1 - p) + gamma p. Constant in x.
inline std::vector<double> utility_gradient(const SlotEnvironment& env)
{
  std::vector<double> grad(env.size());
  for (std::size_t n = 0; n < grad.size(); ++n) {
    const double p = env.best[n];
    grad[n] = p * env.availability_at(n) * detail::log_rate(env, n) -
              env.beta_at(n) * (1.0 - p) + env.gamma_at(n) * p;
  }
  return grad;
}

/// Weighted norm sqrt(sum_n b_n (x_n - y_n)^2).
inline double switching_norm(std::span<const double> x, std::span<const double> x_prev,
                             std::span<const double> weights)
{
  if (x.size() != x_prev.size() || x.size() != weights.size())
    throw InvalidArgument("switching_norm: dimension mismatch");
  double sum = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (!(weights[n] > 0.0)) throw InvalidArgument("switching_norm: weights must be positive");
    const double d = x[n] - x_prev[n];
    sum += weights[n] * d * d;
  }
  return std::sqrt(sum);
}

inline double switching_norm(const PreparationVector& x, const PreparationVector& x_prev,
                             std::span<const double> weights)
{
  return switching_norm(x.values(), x_prev.values(), weights);
}

/// Dual of the B-norm: sqrt(sum_n v_n^2 / b_n).
inline double dual_switching_norm(std::span<const double> v, std::span<const double> weights)
{
  if (v.size() != weights.size()) throw InvalidArgument("dual norm: dimension mismatch");
  double sum = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n) sum += v[n] * v[n] / weights[n];
  return std::sqrt(sum);
}

/// Per-slot objective g_t(x) - delta_t ||x - x_prev||_{B_t}, with its parts.
inline ObjectiveBreakdown objective(std::span<const double> x, std::span<const double> x_prev,
                                    const SlotEnvironment& env)
{
  ObjectiveBreakdown out = utility_terms(x, env);
  out.switching_norm = switching_norm(x, x_prev, env.switching_weights);
  out.switching_cost = env.delta * out.switching_norm;
  out.objective = out.utility - out.switching_cost;
  return out;
}

inline ObjectiveBreakdown objective(const PreparationVector& x, const PreparationVector& x_prev,
                                    const SlotEnvironment& env)
{
  if (!x.same_shape(x_prev)) throw InvalidArgument("objective: decisions differ in shape");
  return objective(x.values(), x_prev.values(), env);
}

/// Scores a decision sequence slot by slot, starting from x_0 = 0.
inline std::vector<ObjectiveBreakdown> evaluate_trajectory(
    const ScenarioTimeline& timeline, std::span<const PreparationVector> decisions)
{
  if (decisions.size() != timeline.size())
    throw InvalidArgument("evaluate_trajectory: one decision per slot required");
  std::vector<ObjectiveBreakdown> out;
  out.reserve(decisions.size());
  PreparationVector previous(timeline.ues, timeline.cells, Domain::binary);
  for (std::size_t t = 0; t < decisions.size(); ++t) {
    out.push_back(objective(decisions[t], previous, timeline[t]));
    previous = decisions[t];
  }
  return out;
}

}  // namespace chomet

#endif  // CHOMET_OBJECTIVE_HPP
