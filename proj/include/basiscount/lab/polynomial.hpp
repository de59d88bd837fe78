#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "basiscount/enumerate.hpp"
#include "basiscount/matroid.hpp"

namespace basiscount::lab {

/// A multiaffine polynomial in n <= 63 variables; monomials are bitmasks.
struct MultiaffinePolynomial {
  std::size_t n = 0;
  std::vector<std::pair<std::uint64_t, double>> terms;  // sorted by mask

  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [mask, c] : terms) d = std::max<std::size_t>(d, static_cast<std::size_t>(std::popcount(mask)));
    return d;
  }
};

/// g_M(z) = sum over bases B of prod_{i in B} z_i.
inline MultiaffinePolynomial basis_polynomial(const Matroid& m, const EnumerationGuard& guard = {}) {
  MultiaffinePolynomial g;
  g.n = m.size();
  for (const auto& b : enumerate_bases(m, guard)) g.terms.emplace_back(b.to_bits(), 1.0);
  return g;
}

/// D_v g = sum_i v_i dg/dz_i.
inline MultiaffinePolynomial directional_derivative(const MultiaffinePolynomial& g, std::span<const double> v) {
  if (v.size() != g.n) throw std::invalid_argument("direction length differs from variable count");
  for (double x : v)
    if (!(x >= 0.0)) throw std::invalid_argument("direction entries must be nonnegative");
  std::map<std::uint64_t, double> acc;
  for (const auto& [mask, c] : g.terms) {
    std::uint64_t bits = mask;
    while (bits) {
      const int i = std::countr_zero(bits);
      bits &= bits - 1;
      if (v[static_cast<std::size_t>(i)] != 0.0) acc[mask & ~(std::uint64_t{1} << i)] += c * v[static_cast<std::size_t>(i)];
    }
  }
  MultiaffinePolynomial out;
  out.n = g.n;
  out.terms.assign(acc.begin(), acc.end());
  return out;
}

struct EvaluatedPolynomial {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  std::vector<double> at;
  std::size_t degree = 0;
};

inline void require_positive_point(std::span<const double> z, std::size_t n) {
  if (z.size() != n) throw std::invalid_argument("point length differs from variable count");
  for (double x : z)
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("evaluation point must be strictly positive");
}

inline EvaluatedPolynomial evaluate(const MultiaffinePolynomial& g, std::span<const double> z) {
  require_positive_point(z, g.n);
  const auto n = static_cast<Eigen::Index>(g.n);
  EvaluatedPolynomial out;
  out.gradient = Eigen::VectorXd::Zero(n);
  out.hessian = Eigen::MatrixXd::Zero(n, n);
  out.at.assign(z.begin(), z.end());
  out.degree = g.degree();
  std::vector<int> idx;
  for (const auto& [mask, c] : g.terms) {
    idx.clear();
    double mono = c;
    for (std::uint64_t bits = mask; bits; bits &= bits - 1) {
      const int i = std::countr_zero(bits);
      idx.push_back(i);
      mono *= z[static_cast<std::size_t>(i)];
    }
    out.value += mono;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const double da = mono / z[static_cast<std::size_t>(idx[a])];
      out.gradient[idx[a]] += da;
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        const double dab = da / z[static_cast<std::size_t>(idx[b])];
        out.hessian(idx[a], idx[b]) += dab;
        out.hessian(idx[b], idx[a]) += dab;
      }
    }
  }
  return out;
}

/// Value, gradient and Hessian of D_{v_1} ... D_{v_k} g_M at z.
inline EvaluatedPolynomial evaluate_basis_polynomial(const Matroid& m, std::span<const double> z,
                                                     const std::vector<std::vector<double>>& directions = {},
                                                     const EnumerationGuard& guard = {}) {
  require_positive_point(z, m.size());
  auto g = basis_polynomial(m, guard);
  for (const auto& v : directions) g = directional_derivative(g, v);
  return evaluate(g, z);
}

/// Relative residuals of the Euler identities <z, grad> = d g and z' H z = d(d-1) g.
inline std::pair<double, double> euler_residuals(const EvaluatedPolynomial& e) {
  const Eigen::Map<const Eigen::VectorXd> z(e.at.data(), static_cast<Eigen::Index>(e.at.size()));
  const double d = static_cast<double>(e.degree);
  const double scale = std::max(std::abs(e.value), 1e-300);
  const double first = std::abs(z.dot(e.gradient) - d * e.value) / scale;
  const double second = std::abs(z.dot(e.hessian * z) - d * (d - 1.0) * e.value) / scale;
  return {first, second};
}

struct SignatureResult {
  std::size_t positive_eigs = 0;
  bool pass = true;
  Eigen::VectorXd eigenvalues;  // ascending
  double spectral_radius = 0.0;
  double second_largest_ratio = 0.0;  // lambda_{n-1} / spectral radius, 0 if n < 2
};

inline SignatureResult signature_of(const Eigen::MatrixXd& h, double tol) {
  SignatureResult out;
  if (h.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  out.eigenvalues = solver.eigenvalues();
  out.spectral_radius = out.eigenvalues.cwiseAbs().maxCoeff();
  const double threshold = tol * out.spectral_radius;
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i)
    if (out.eigenvalues[i] > threshold) ++out.positive_eigs;
  out.pass = out.positive_eigs <= 1;
  if (out.eigenvalues.size() >= 2 && out.spectral_radius > 0.0)
    out.second_largest_ratio = out.eigenvalues[out.eigenvalues.size() - 2] / out.spectral_radius;
  return out;
}

/// The Hessian of D_V g_M has at most one eigenvalue above tol * spectral radius.
inline SignatureResult hessian_signature_check(const Matroid& m, const std::vector<std::vector<double>>& directions,
                                               std::span<const double> z, double tol = 1e-8,
                                               const EnumerationGuard& guard = {}) {
  return signature_of(evaluate_basis_polynomial(m, z, directions, guard).hessian, tol);
}

struct LogHessianResult {
  double max_eig = 0.0;
  double scale = 0.0;
  bool pass = true;
  Eigen::MatrixXd matrix;  // g * Hess g - grad g grad g^T = g^2 Hess log g
};

inline LogHessianResult log_hessian_of(const EvaluatedPolynomial& e, double tol) {
  if (!(e.value > 0.0)) throw std::domain_error("polynomial vanishes at the evaluation point");
  LogHessianResult out;
  out.matrix = e.value * e.hessian - e.gradient * e.gradient.transpose();
  if (out.matrix.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.matrix, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  out.max_eig = ev.maxCoeff();
  out.scale = ev.cwiseAbs().maxCoeff();
  out.pass = out.max_eig <= tol * out.scale;
  return out;
}

/// log g is concave at z: g * Hess g - grad grad^T is negative semidefinite.
/// Nonempty `directions` checks D_V g instead (complete log-concavity).
inline LogHessianResult log_hessian_nsd_check(const Matroid& m, std::span<const double> z, double tol = 1e-8,
                                              const std::vector<std::vector<double>>& directions = {},
                                              const EnumerationGuard& guard = {}) {
  return log_hessian_of(evaluate_basis_polynomial(m, z, directions, guard), tol);
}

}  // namespace basiscount::lab
