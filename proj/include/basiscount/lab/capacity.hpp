#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "basiscount/enumerate.hpp"
#include "basiscount/matroid.hpp"
#include "basiscount/weights.hpp"

namespace basiscount::lab {

/// The point lies outside the Newton polytope, so the capacity is zero
/// (its logarithm is unbounded below).
class CapacityUnbounded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CapacityOptions {
  double gradient_tol = 1e-9;
  std::size_t max_iters = 500;
  double certificate_slack = 1e-9;
  double sum_tol = 1e-9;
  std::size_t rank_samples = 200;
  std::uint64_t seed = 0;
};

struct CapacityResult {
  double log_capacity = 0.0;
  std::vector<double> x;  // minimizer estimate in log coordinates
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
};

/// A polynomial sum_k exp(log_coeff_k) z^{S_k} with nonnegative coefficients.
struct PositiveFamily {
  std::size_t n = 0;
  std::vector<SubsetMask> supports;
  std::vector<double> log_coeffs;
};

inline PositiveFamily basis_family(const Matroid& m, const std::optional<Weights>& lambda = std::nullopt,
                                   const EnumerationGuard& guard = {}) {
  PositiveFamily f;
  f.n = m.size();
  for (auto& b : enumerate_bases(m, guard)) {
    double lc = 0.0;
    if (lambda) {
      for (auto e : b.elements()) lc += lambda->log_value(e);
      if (!std::isfinite(lc)) continue;
    }
    f.supports.push_back(std::move(b));
    f.log_coeffs.push_back(lc);
  }
  return f;
}

/// inf over x of log g(e^x) - <p, x>, by damped Newton steps in log coordinates.
/// For p in the Newton polytope the objective never drops below the smallest
/// log-coefficient (weighted AM-GM), so falling below it certifies that the
/// capacity is zero and raises CapacityUnbounded.
inline CapacityResult log_capacity(const PositiveFamily& fam, std::span<const double> p,
                                   const CapacityOptions& opts = {}) {
  const std::size_t n = fam.n;
  if (p.size() != n) throw std::invalid_argument("point length differs from ground set size");
  if (fam.supports.empty()) throw CapacityUnbounded("polynomial is identically zero");
  const auto N = static_cast<Eigen::Index>(n);
  const std::size_t terms = fam.supports.size();

  Eigen::MatrixXd incidence = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(terms), N);
  for (std::size_t k = 0; k < terms; ++k)
    for (auto e : fam.supports[k].elements()) incidence(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(e)) = 1.0;
  const Eigen::Map<const Eigen::VectorXd> coeffs(fam.log_coeffs.data(), static_cast<Eigen::Index>(terms));
  const Eigen::Map<const Eigen::VectorXd> target(p.data(), N);
  const double floor = coeffs.minCoeff() - opts.certificate_slack * std::max(1.0, std::abs(coeffs.minCoeff()));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd q(static_cast<Eigen::Index>(terms));

  auto value = [&](const Eigen::VectorXd& at) {
    const Eigen::VectorXd expo = coeffs + incidence * at;
    const double mx = expo.maxCoeff();
    return mx + std::log((expo.array() - mx).exp().sum()) - target.dot(at);
  };
  // Fills q with the term probabilities at x; returns the objective.
  auto weights = [&](const Eigen::VectorXd& at) {
    const Eigen::VectorXd expo = coeffs + incidence * at;
    const double mx = expo.maxCoeff();
    q = (expo.array() - mx).exp();
    const double s = q.sum();
    q /= s;
    return mx + std::log(s) - target.dot(at);
  };
  auto unbounded = [&] {
    throw CapacityUnbounded("objective fell below its lower bound on the Newton polytope: point lies outside it");
  };

  CapacityResult res;
  double f = weights(x);
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    const Eigen::VectorXd marg = incidence.transpose() * q;
    const Eigen::VectorXd grad = marg - target;
    res.gradient_norm = grad.norm();
    res.iterations = it;
    if (res.gradient_norm <= opts.gradient_tol) break;

    // Hessian is the covariance of the term indicators; invert on its range.
    const Eigen::MatrixXd hess = incidence.transpose() * q.asDiagonal() * incidence - marg * marg.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
    const auto& ev = eig.eigenvalues();
    const double cutoff = std::max(1e-12 * ev.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(N);
    for (Eigen::Index k = 0; k < N; ++k) {
      if (ev[k] > cutoff) {
        const auto u = eig.eigenvectors().col(k);
        dir -= (u.dot(grad) / ev[k]) * u;
      }
    }
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      dir = -grad;
      slope = -grad.squaredNorm();
    }
    double step = 1.0;
    double f_new = value(x + step * dir);
    while (!(f_new <= f + 1e-4 * step * slope) && step > 1e-20) {
      step *= 0.5;
      f_new = value(x + step * dir);
    }
    // Extrapolate while the full step keeps paying off, so escapes to infinity are fast.
    if (step == 1.0) {
      for (int k = 0; k < 60; ++k) {
        const double f_far = value(x + 2.0 * step * dir);
        if (!(f_far <= f + 1e-4 * 2.0 * step * slope)) break;
        step *= 2.0;
        f_new = f_far;
        if (f_new < floor) unbounded();
      }
    }
    if (!(f_new <= f)) break;  // no further numerical progress
    x += step * dir;
    f = weights(x);
    if (f < floor) unbounded();
  }
  if (res.gradient_norm > std::sqrt(opts.gradient_tol))
    throw CapacityUnbounded("capacity minimization did not converge: point appears to lie outside the Newton polytope");
  res.log_capacity = f;
  res.x.assign(x.data(), x.data() + N);
  return res;
}

namespace detail {

inline void require_in_base_polytope(const Matroid& m, std::span<const double> p, const CapacityOptions& opts) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= -opts.sum_tol && x <= 1.0 + opts.sum_tol))
      throw CapacityUnbounded("point has a coordinate outside [0,1]");
    sum += x;
  }
  if (std::abs(sum - static_cast<double>(m.rank())) > opts.sum_tol * std::max<double>(1.0, static_cast<double>(m.size())))
    throw CapacityUnbounded("coordinates sum to " + std::to_string(sum) + ", not the rank " +
                            std::to_string(m.rank()));
  std::mt19937_64 rng(opts.seed);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t t = 0; t < opts.rank_samples; ++t) {
    SubsetMask s(m.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (coin(rng)) {
        s.insert(i);
        mass += p[i];
      }
    }
    if (mass > static_cast<double>(m.rank_of(s)) + 1e-9)
      throw CapacityUnbounded("point violates the rank constraint on " + s.to_string());
  }
}

}  // namespace detail

/// Log-capacity log inf_{z>0} g_M(z) / z^p, optionally with weights lambda on
/// the monomials (lambda^B).
inline double capacity(const Matroid& m, std::span<const double> p, const std::optional<Weights>& lambda = std::nullopt,
                       const CapacityOptions& opts = {}, const EnumerationGuard& guard = {}) {
  if (p.size() != m.size()) throw std::invalid_argument("point length differs from ground set size");
  detail::require_in_base_polytope(m, p, opts);
  return log_capacity(basis_family(m, lambda, guard), p, opts).log_capacity;
}

}  // namespace basiscount::lab
