#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "basiscount/enumerate.hpp"
#include "basiscount/frank_wolfe.hpp"
#include "basiscount/matroid.hpp"
#include "basiscount/weights.hpp"

namespace basiscount {

enum class CountMode { single, intersection, weighted };

inline const char* mode_name(CountMode m) {
  switch (m) {
    case CountMode::single: return "single";
    case CountMode::intersection: return "intersection";
    case CountMode::weighted: return "weighted";
  }
  return "unknown";
}

struct LowerBound {
  std::string name;
  double log_value = 0.0;  // natural log; -infinity for a zero bound
};

/// Certified bracket on a (weighted) basis count, carried in log space.
struct CountEstimate {
  CountMode mode = CountMode::single;
  std::size_t n = 0;
  std::size_t r = 0;
  double constant = 1.0;  // c in exp(tau - c r)
  double tau_found = 0.0;
  double gap = 0.0;
  double log_beta_upper = 0.0;
  std::vector<LowerBound> lower_bounds;
  bool exact_zero = false;
  std::size_t iterations = 0;
  Point point;

  double beta_upper() const { return std::exp(log_beta_upper); }

  double best_log_lower() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& lb : lower_bounds) best = std::max(best, lb.log_value);
    return best;
  }

  /// True when log(value) lies in [max lower bound, upper bound] up to `slack`.
  bool brackets_log(double log_value, double slack = 0.0) const {
    return best_log_lower() <= log_value + slack && log_value <= log_beta_upper + slack;
  }
};

struct CountOptions {
  SolveOptions solver;
};

namespace detail {

inline CountEstimate zero_estimate(CountMode mode, std::size_t n, std::size_t r, double c) {
  CountEstimate est;
  est.mode = mode;
  est.n = n;
  est.r = r;
  est.constant = c;
  est.exact_zero = true;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  est.tau_found = neg_inf;
  est.log_beta_upper = neg_inf;
  est.lower_bounds.push_back({"entropy_lower", neg_inf});
  return est;
}

inline CountEstimate from_solution(CountMode mode, std::size_t n, std::size_t r, double c, SolveResult sol) {
  CountEstimate est;
  est.mode = mode;
  est.n = n;
  est.r = r;
  est.constant = c;
  est.tau_found = sol.tau_found;
  est.gap = sol.gap;
  est.log_beta_upper = sol.tau_found + sol.gap;
  est.iterations = sol.iterations;
  est.point = std::move(sol.point);
  return est;
}

}  // namespace detail

/// Brackets |B_M| between max(e^{tau-r}, e^{tau/2}) and e^{tau+gap}.
inline CountEstimate count_bases(const Matroid& m, const CountOptions& opts = {}) {
  auto sol = maximize_entropy(EntropyProgram{m, std::nullopt, std::nullopt}, opts.solver);
  const double tau = sol.tau_found;
  auto est = detail::from_solution(CountMode::single, m.size(), m.rank(), 1.0, std::move(sol));
  est.lower_bounds.push_back({"entropy_lower", tau - static_cast<double>(m.rank())});
  est.lower_bounds.push_back({"sqrt_lower", tau / 2.0});
  return est;
}

/// Number of size-k independent sets, as the basis count of the rank-k truncation.
inline CountEstimate count_independent_sets_of_size(const Matroid& m, std::size_t k, const CountOptions& opts = {}) {
  return count_bases(truncation(m, k), opts);
}

/// Brackets |B_M ∩ B_N| between e^{tau-3r} and e^{tau+gap}.
inline CountEstimate count_common_bases(const Matroid& m, const Matroid& other, const CountOptions& opts = {}) {
  if (m.size() != other.size()) throw std::invalid_argument("matroids on different ground sets");
  constexpr double c = 3.0;
  if (m.rank() != other.rank()) return detail::zero_estimate(CountMode::intersection, m.size(), m.rank(), c);
  SolveResult sol;
  try {
    sol = maximize_entropy(EntropyProgram{m, other, std::nullopt}, opts.solver);
  } catch (const Infeasible&) {
    return detail::zero_estimate(CountMode::intersection, m.size(), m.rank(), c);
  }
  const double tau = sol.tau_found;
  auto est = detail::from_solution(CountMode::intersection, m.size(), m.rank(), c, std::move(sol));
  est.lower_bounds.push_back({"entropy_lower", tau - c * static_cast<double>(m.rank())});
  return est;
}

/// Brackets sum over common bases of lambda^B between e^{tau-4r} and e^{tau+gap}.
/// Without `other`, counts weighted bases of `m` alone.
inline CountEstimate count_weighted_common_bases(const Matroid& m, const std::optional<Matroid>& other,
                                                 const Weights& lambda, const CountOptions& opts = {}) {
  if (lambda.size() != m.size()) throw std::invalid_argument("weights length differs from ground set size");
  if (other && other->size() != m.size()) throw std::invalid_argument("matroids on different ground sets");
  constexpr double c = 4.0;
  if (other && m.rank() != other->rank()) return detail::zero_estimate(CountMode::weighted, m.size(), m.rank(), c);
  SolveResult sol;
  try {
    sol = maximize_entropy(EntropyProgram{m, other, lambda}, opts.solver);
  } catch (const Infeasible&) {
    return detail::zero_estimate(CountMode::weighted, m.size(), m.rank(), c);
  }
  // The lower bound needs the objective under the true weights: mass on a
  // zero-weight element makes it vacuous.
  double true_objective = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double pi = sol.point.p[i];
    const double lw = lambda.log_value(i);
    if (pi > 0.0 && !std::isfinite(lw)) {
      true_objective = -std::numeric_limits<double>::infinity();
      break;
    }
    true_objective += entropy_term(pi, std::isfinite(lw) ? lw : 0.0);
  }
  auto est = detail::from_solution(CountMode::weighted, m.size(), m.rank(), c, std::move(sol));
  est.lower_bounds.push_back({"entropy_lower", true_objective - c * static_cast<double>(m.rank())});
  return est;
}

/// Exact (weighted) basis or common-basis count by enumeration.
struct ExactCount {
  mpq_class value;
  std::size_t support = 0;  // number of (common) bases enumerated

  bool is_integer() const { return value.get_den() == 1; }
  std::string to_string() const { return value.get_str(); }
  double log_value() const {
    return sgn(value) > 0 ? log_rational(value) : -std::numeric_limits<double>::infinity();
  }
};

inline ExactCount exact_weighted_count(const Matroid& m, const std::optional<Matroid>& other = std::nullopt,
                                       const std::optional<Weights>& lambda = std::nullopt,
                                       const EnumerationGuard& guard = {}) {
  if (lambda && lambda->size() != m.size()) throw std::invalid_argument("weights length differs from ground set size");
  const auto bases = other ? enumerate_common_bases(m, *other, guard) : enumerate_bases(m, guard);
  ExactCount out;
  out.value = 0;
  out.support = bases.size();
  for (const auto& b : bases) {
    if (!lambda) {
      out.value += 1;
      continue;
    }
    mpq_class term = 1;
    for (auto e : b.elements()) term *= lambda->exact()[e];
    out.value += term;
  }
  out.value.canonicalize();
  return out;
}

}  // namespace basiscount
