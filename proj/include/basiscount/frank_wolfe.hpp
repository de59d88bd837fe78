#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "basiscount/lmo.hpp"
#include "basiscount/matroid.hpp"
#include "basiscount/weights.hpp"

namespace basiscount {

/// Smallest log-weight the solver works with; zero weights are clamped to it.
inline const double kLogWeightFloor = std::log(std::numeric_limits<double>::min());

/// Marginals are clamped into [kGradientClamp, 1 - kGradientClamp] for gradients.
inline constexpr double kGradientClamp = 1e-12;

/// Binary entropy in nats, with 0 log 0 = 0.
inline double binary_entropy(double x) {
  double h = 0.0;
  if (x > 0.0) h -= x * std::log(x);
  if (x < 1.0) h -= (1.0 - x) * std::log1p(-x);
  return h;
}

/// One coordinate of the entropy objective: p log(lambda/p) + (1-p) log(1/(1-p)).
inline double entropy_term(double p, double log_lambda) {
  double t = 0.0;
  if (p > 0.0) t += p * (log_lambda - std::log(p));
  if (p < 1.0) t -= (1.0 - p) * std::log1p(-p);
  return t;
}

/// A point of [0,1]^n together with a convex decomposition into polytope vertices.
struct Point {
  std::vector<double> p;
  std::vector<std::pair<SubsetMask, double>> provenance;

  double sum() const {
    double s = 0.0;
    for (double x : p) s += x;
    return s;
  }
};

/// Maximize sum_i p_i log(lambda_i/p_i) + (1-p_i) log(1/(1-p_i)) over the base
/// polytope of `m`, or over its intersection with that of `other`.
struct EntropyProgram {
  Matroid m;
  std::optional<Matroid> other;
  std::optional<Weights> lambda;

  std::size_t size() const { return m.size(); }
  bool intersection() const { return other.has_value(); }

  /// log(lambda_i), floored at kLogWeightFloor; zero when unweighted.
  std::vector<double> log_weights() const {
    std::vector<double> lw(size(), 0.0);
    if (lambda) {
      if (lambda->size() != size()) throw std::invalid_argument("weights length differs from ground set size");
      for (std::size_t i = 0; i < size(); ++i) lw[i] = std::max(lambda->log_value(i), kLogWeightFloor);
    }
    return lw;
  }

  double objective(std::span<const double> p) const { return objective(p, log_weights()); }

  static double objective(std::span<const double> p, std::span<const double> log_w) {
    double f = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) f += entropy_term(p[i], log_w[i]);
    return f;
  }

  SubsetMask vertex(std::span<const double> w) const {
    if (other) return max_weight_common_basis(m, *other, w);
    return greedy_max_weight_basis(m, w);
  }
};

struct SolveOptions {
  std::optional<double> tol;  // default 1e-6 * n
  std::size_t max_iters = 20000;
  std::uint64_t seed = 0;
  std::size_t line_search_steps = 80;
};

struct SolveResult {
  Point point;
  double tau_found = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
  std::vector<double> objective_trace;  // objective after start and after each step
};

inline double default_tolerance(std::size_t n) { return 1e-6 * static_cast<double>(std::max<std::size_t>(n, 1)); }

namespace detail {

inline std::vector<double> clamped_gradient(std::span<const double> p, std::span<const double> log_w) {
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pc = std::clamp(p[i], kGradientClamp, 1.0 - kGradientClamp);
    g[i] = log_w[i] + std::log1p(-pc) - std::log(pc);
  }
  return g;
}

inline double fw_gap(std::span<const double> g, const SubsetMask& v, std::span<const double> p) {
  double gap = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) gap += g[i] * ((v.contains(i) ? 1.0 : 0.0) - p[i]);
  return gap;
}

}  // namespace detail

/// Frank-Wolfe on the entropy program. Throws Infeasible if the polytope is empty.
inline SolveResult maximize_entropy(const EntropyProgram& prog, const SolveOptions& opts = {}) {
  const std::size_t n = prog.size();
  const double tol = opts.tol.value_or(default_tolerance(n));
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto log_w = prog.log_weights();

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::map<SubsetMask, double> coeffs;
  const std::size_t starts = std::max<std::size_t>(n, 1);
  for (std::size_t k = 0; k < starts; ++k) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = unit(rng);
      if (log_w[i] <= kLogWeightFloor) w[i] += kLogWeightFloor;
    }
    coeffs[prog.vertex(w)] += 1.0 / static_cast<double>(starts);
  }

  std::vector<double> p(n, 0.0);
  for (const auto& [v, c] : coeffs)
    for (auto e : v.elements()) p[e] += c;

  SolveResult result;
  double f = EntropyProgram::objective(p, log_w);
  result.objective_trace.push_back(f);
  double gap = std::numeric_limits<double>::infinity();
  std::vector<double> trial(n);

  std::size_t it = 0;
  for (; it < opts.max_iters; ++it) {
    const auto g = detail::clamped_gradient(p, log_w);
    const SubsetMask v = prog.vertex(g);
    gap = std::max(0.0, detail::fw_gap(g, v, p));
    if (gap <= tol) break;

    auto along = [&](double step) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = p[i] + step * ((v.contains(i) ? 1.0 : 0.0) - p[i]);
      return EntropyProgram::objective(trial, log_w);
    };
    // Objective is concave along the segment.
    double lo = 0.0, hi = 1.0;
    for (std::size_t s = 0; s < opts.line_search_steps; ++s) {
      const double a = lo + (hi - lo) / 3.0;
      const double b = hi - (hi - lo) / 3.0;
      if (along(a) < along(b))
        lo = a;
      else
        hi = b;
    }
    double step = 0.5 * (lo + hi);
    double f_step = along(step);
    if (const double f_one = along(1.0); f_one >= f_step) {
      step = 1.0;
      f_step = f_one;
    }
    if (!(f_step > f)) break;  // no numerical progress left

    for (auto& [u, c] : coeffs) c *= (1.0 - step);
    coeffs[v] += step;
    std::erase_if(coeffs, [](const auto& kv) { return kv.second <= 0.0; });
    for (std::size_t i = 0; i < n; ++i) p[i] += step * ((v.contains(i) ? 1.0 : 0.0) - p[i]);
    f = f_step;
    result.objective_trace.push_back(f);
  }
  result.iterations = it;

  // Rebuild the point from its decomposition so the two agree to rounding.
  double total = 0.0;
  for (const auto& [v, c] : coeffs) total += c;
  result.point.p.assign(n, 0.0);
  for (const auto& [v, c] : coeffs) {
    const double cn = c / total;
    result.point.provenance.emplace_back(v, cn);
    for (auto e : v.elements()) result.point.p[e] += cn;
  }
  for (auto& x : result.point.p) x = std::clamp(x, 0.0, 1.0);
  result.tau_found = EntropyProgram::objective(result.point.p, log_w);
  if (!std::isfinite(result.tau_found)) throw std::logic_error("entropy objective is not finite");

  const auto g = detail::clamped_gradient(result.point.p, log_w);
  result.gap = std::max(0.0, detail::fw_gap(g, prog.vertex(g), result.point.p));
  return result;
}

}  // namespace basiscount
