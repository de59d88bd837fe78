#pragma once

#include <Eigen/Dense>
#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "basiscount/counting.hpp"
#include "basiscount/enumerate.hpp"
#include "basiscount/lab/capacity.hpp"
#include "basiscount/matroid.hpp"

namespace basiscount::lab {

/// log of prod_i p_i^{p_i} (1-p_i)^{1-p_i} / (1 + p_i(1-p_i)), with 0^0 = 1.
inline double log_phi(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("phi needs p in [0,1]^n");
    if (x > 0.0) s += x * std::log(x);
    if (x < 1.0) s += (1.0 - x) * std::log1p(-x);
    s -= std::log1p(x * (1.0 - x));
  }
  return s;
}

inline double phi(std::span<const double> p) { return std::exp(log_phi(p)); }

/// log of (p/e^2)^p = sum_i p_i log p_i - 2 p_i.
inline double log_phi_simplified(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("phi needs p in [0,1]^n");
    if (x > 0.0) s += x * std::log(x);
    s -= 2.0 * x;
  }
  return s;
}

/// |B_M ∩ B_N| as the mixed derivative prod_i (d/dy_i + d/dz_i) g_M(y) g_{N*}(z):
/// the term for S survives iff S is a basis of M and E \ S a basis of N*.
inline mpz_class mixed_derivative_count(const Matroid& m, const Matroid& other, const EnumerationGuard& guard = {}) {
  if (m.size() != other.size()) throw std::invalid_argument("matroids on different ground sets");
  const auto dual_bases = enumerate_bases(dual(other), guard);
  const std::set<SubsetMask> lookup(dual_bases.begin(), dual_bases.end());
  mpz_class count = 0;
  for (const auto& b : enumerate_bases(m, guard))
    if (lookup.count(b.complement())) ++count;
  return count;
}

struct PhiCheckResult {
  mpz_class lhs;             // |B_M ∩ B_N| by enumeration of common bases
  mpz_class lhs_mixed;       // the same number via the mixed-derivative expansion
  double log_cap_m = 0.0;    // log inf g_M(y) / y^p  (-inf when zero)
  double log_cap_dual = 0.0; // log inf g_{N*}(z) / z^{1-p}
  double rhs_phi = 0.0;      // phi(p) * exp(log_cap_m + log_cap_dual)
  double rhs_simplified = 0.0;  // (p/e^2)^p * exp(...)
  bool pass = true;
};

inline PhiCheckResult phi_bound_check(const Matroid& m, const Matroid& other, std::span<const double> p,
                                      double tol = 1e-9, const CapacityOptions& cap_opts = {},
                                      const EnumerationGuard& guard = {}) {
  if (m.size() != other.size()) throw std::invalid_argument("matroids on different ground sets");
  if (p.size() != m.size()) throw std::invalid_argument("point length differs from ground set size");
  PhiCheckResult out;
  out.lhs = static_cast<unsigned long>(enumerate_common_bases(m, other, guard).size());
  out.lhs_mixed = mixed_derivative_count(m, other, guard);

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> complement(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) complement[i] = 1.0 - p[i];
  try {
    out.log_cap_m = capacity(m, p, std::nullopt, cap_opts, guard);
  } catch (const CapacityUnbounded&) {
    out.log_cap_m = neg_inf;
  }
  try {
    out.log_cap_dual = capacity(dual(other), complement, std::nullopt, cap_opts, guard);
  } catch (const CapacityUnbounded&) {
    out.log_cap_dual = neg_inf;
  }
  const double log_caps = out.log_cap_m + out.log_cap_dual;
  out.rhs_phi = std::exp(log_phi(p) + log_caps);
  out.rhs_simplified = std::exp(log_phi_simplified(p) + log_caps);
  const double lhs = out.lhs.get_d();
  out.pass = out.lhs == out.lhs_mixed && lhs >= out.rhs_phi - tol && lhs >= out.rhs_simplified - tol;
  return out;
}

/// g(y,z) = a + b y + c z + d y z (nonnegative coefficients) is completely
/// log-concave iff 2bc >= ad.
inline bool bivariate_clc(double a, double b, double c, double d) {
  if (a < 0.0 || b < 0.0 || c < 0.0 || d < 0.0) throw std::invalid_argument("bivariate_clc needs nonnegative coefficients");
  return 2.0 * b * c >= a * d;
}

/// g^2 Hess log g for g = a + b y + c z + d y z at (y, z).
inline Eigen::Matrix2d bivariate_log_hessian(double a, double b, double c, double d, double y, double z) {
  const double gy = b + d * z;
  const double gz = c + d * y;
  Eigen::Matrix2d mtx;
  mtx << -gy * gy, a * d - b * c, a * d - b * c, -gz * gz;
  return mtx;
}

/// Largest eigenvalue of a symmetric 2x2 matrix, computed without cancellation.
inline double max_eigenvalue_2x2(const Eigen::Matrix2d& mtx) {
  const double tr = mtx(0, 0) + mtx(1, 1);
  const double det = mtx(0, 0) * mtx(1, 1) - mtx(0, 1) * mtx(1, 0);
  const double half_diff = 0.5 * (mtx(0, 0) - mtx(1, 1));
  const double root = std::hypot(half_diff, mtx(0, 1));
  const double mean = 0.5 * tr;
  if (mean > 0.0) return mean + root;
  const double lower = mean - root;
  if (lower == 0.0) return 0.0;
  return det / lower;
}

/// Searches the open positive quadrant for a point where g^2 Hess log g has a
/// positive eigenvalue.
inline std::optional<std::array<double, 2>> find_bivariate_witness(double a, double b, double c, double d,
                                                                   std::uint64_t seed = 0, std::size_t samples = 200) {
  std::vector<std::array<double, 2>> points;
  // det(g^2 Hess log g) has the sign of 2bc - ad + bdy + cdz + d^2 yz, so when
  // ad > 2bc the diagonal point t below makes it negative.
  const double deficit = a * d - 2.0 * b * c;
  if (deficit > 0.0) {
    const double t = std::min(1.0, deficit / (2.0 * (b * d + c * d + d * d)));
    points.push_back({t, t});
  }
  for (int k = 0; k <= 12; ++k) {
    const double t = std::pow(10.0, -k);
    points.push_back({t, t});
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(-12.0, 2.0);
  for (std::size_t s = 0; s < samples; ++s) points.push_back({std::pow(10.0, expo(rng)), std::pow(10.0, expo(rng))});
  for (const auto& pt : points)
    if (max_eigenvalue_2x2(bivariate_log_hessian(a, b, c, d, pt[0], pt[1])) > 0.0) return pt;
  return std::nullopt;
}

/// Checks g^2 Hess log g is negative semidefinite (relative tolerance) at seeded
/// random points of the positive quadrant.
inline bool bivariate_nsd_on_samples(double a, double b, double c, double d, std::uint64_t seed = 0,
                                     std::size_t samples = 100, double tol = 1e-12) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(-6.0, 3.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const double y = std::pow(10.0, expo(rng));
    const double z = std::pow(10.0, expo(rng));
    const auto mtx = bivariate_log_hessian(a, b, c, d, y, z);
    const double scale = mtx.cwiseAbs().maxCoeff();
    if (max_eigenvalue_2x2(mtx) > tol * scale) return false;
  }
  return true;
}

}  // namespace basiscount::lab
