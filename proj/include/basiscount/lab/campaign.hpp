#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "basiscount/enumerate.hpp"
#include "basiscount/lab/polynomial.hpp"
#include "basiscount/matroid.hpp"

namespace basiscount::lab {

struct CampaignReport {
  std::string instance;
  std::string op;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst_residual = 0.0;

  void merge(const CampaignReport& other) {
    trials += other.trials;
    failures += other.failures;
    worst_residual = std::max(worst_residual, other.worst_residual);
  }
};

inline nlohmann::ordered_json to_json(const CampaignReport& r) {
  return {{"instance", r.instance},
          {"op", r.op},
          {"trials", r.trials},
          {"failures", r.failures},
          {"worst_residual", r.worst_residual}};
}

/// Log-uniform point in [e^-2, e^2]^n.
inline std::vector<double> random_positive_point(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> expo(-2.0, 2.0);
  std::vector<double> z(n);
  for (auto& x : z) x = std::exp(expo(rng));
  return z;
}

/// `count` directions with entries uniform in [0,1).
inline std::vector<std::vector<double>> random_directions(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> dirs(count, std::vector<double>(n));
  for (auto& v : dirs)
    for (auto& x : v) x = unit(rng);
  return dirs;
}

namespace detail {

inline MultiaffinePolynomial derive(MultiaffinePolynomial g, const std::vector<std::vector<double>>& dirs) {
  for (const auto& v : dirs) g = directional_derivative(g, v);
  return g;
}

}  // namespace detail

/// Hessian signature of D_V g_M with |V| <= r-2; the residual is the second
/// largest eigenvalue relative to the spectral radius.
inline CampaignReport hessian_campaign(const Matroid& m, const std::string& name, std::size_t trials,
                                       std::uint64_t seed, double tol = 1e-8, const EnumerationGuard& guard = {}) {
  CampaignReport rep{name, "hessian_signature", 0, 0, 0.0};
  const auto g = basis_polynomial(m, guard);
  std::mt19937_64 rng(seed);
  const std::size_t max_dirs = m.rank() >= 2 ? m.rank() - 2 : 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, max_dirs)(rng);
    const auto dirs = random_directions(m.size(), k, rng);
    const auto z = random_positive_point(m.size(), rng);
    const auto sig = signature_of(evaluate(detail::derive(g, dirs), z).hessian, tol);
    ++rep.trials;
    if (!sig.pass) ++rep.failures;
    rep.worst_residual = std::max(rep.worst_residual, std::max(0.0, sig.second_largest_ratio));
  }
  return rep;
}

/// Negative semidefiniteness of g^2 Hess log g for D_V g_M with |V| <= r;
/// the residual is the largest eigenvalue relative to the largest magnitude.
inline CampaignReport log_concavity_campaign(const Matroid& m, const std::string& name, std::size_t trials,
                                             std::uint64_t seed, double tol = 1e-8,
                                             const EnumerationGuard& guard = {}) {
  CampaignReport rep{name, "log_hessian_nsd", 0, 0, 0.0};
  const auto g = basis_polynomial(m, guard);
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, m.rank())(rng);
    const auto dirs = random_directions(m.size(), k, rng);
    const auto z = random_positive_point(m.size(), rng);
    const auto res = log_hessian_of(evaluate(detail::derive(g, dirs), z), tol);
    ++rep.trials;
    if (!res.pass) ++rep.failures;
    if (res.scale > 0.0) rep.worst_residual = std::max(rep.worst_residual, std::max(0.0, res.max_eig / res.scale));
  }
  return rep;
}

/// Euler identities for g_M at random points; failure above `tol` relative.
inline CampaignReport euler_campaign(const Matroid& m, const std::string& name, std::size_t trials,
                                     std::uint64_t seed, double tol = 1e-8, const EnumerationGuard& guard = {}) {
  CampaignReport rep{name, "euler_identity", 0, 0, 0.0};
  const auto g = basis_polynomial(m, guard);
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [first, second] = euler_residuals(evaluate(g, random_positive_point(m.size(), rng)));
    const double worst = std::max(first, second);
    ++rep.trials;
    if (!(worst <= tol)) ++rep.failures;
    rep.worst_residual = std::max(rep.worst_residual, worst);
  }
  return rep;
}

}  // namespace basiscount::lab
