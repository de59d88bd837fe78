#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "basiscount/enumerate.hpp"
#include "basiscount/frank_wolfe.hpp"
#include "basiscount/matroid.hpp"
#include "basiscount/weights.hpp"

namespace basiscount::lab {

/// An explicit probability distribution over subsets of an r-homogeneous family.
struct DistributionTable {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<std::pair<SubsetMask, double>> entries;
  std::vector<mpq_class> exact;  // same order as entries
  std::vector<double> marginals;
  double entropy = 0.0;
};

namespace detail {

inline void finish_table(DistributionTable& d) {
  d.marginals.assign(d.n, 0.0);
  std::vector<mpq_class> exact_marginals(d.n, mpq_class(0));
  d.entropy = 0.0;
  for (std::size_t k = 0; k < d.entries.size(); ++k) {
    const double pk = d.entries[k].second;
    for (auto e : d.entries[k].first.elements()) exact_marginals[e] += d.exact[k];
    if (pk > 0.0) d.entropy -= pk * std::log(pk);
  }
  for (std::size_t i = 0; i < d.n; ++i) d.marginals[i] = exact_marginals[i].get_d();
}

}  // namespace detail

/// mu(B) proportional to lambda^B over the bases of m.
inline DistributionTable external_field_distribution(const Matroid& m, const Weights& lambda,
                                                     const EnumerationGuard& guard = {}) {
  if (lambda.size() != m.size()) throw std::invalid_argument("weights length differs from ground set size");
  DistributionTable d;
  d.n = m.size();
  d.r = m.rank();
  std::vector<std::pair<SubsetMask, mpq_class>> weighted;
  mpq_class total = 0;
  for (auto& b : enumerate_bases(m, guard)) {
    mpq_class w = 1;
    for (auto e : b.elements()) w *= lambda.exact()[e];
    if (sgn(w) == 0) continue;
    total += w;
    weighted.emplace_back(std::move(b), std::move(w));
  }
  if (sgn(total) == 0) throw std::domain_error("every basis has zero weight");
  for (auto& [b, w] : weighted) {
    mpq_class prob = w / total;
    prob.canonicalize();
    d.entries.emplace_back(b, prob.get_d());
    d.exact.push_back(std::move(prob));
  }
  detail::finish_table(d);
  return d;
}

/// mu*(S) = mu(E \ S).
inline DistributionTable dual_distribution(const DistributionTable& d) {
  DistributionTable out;
  out.n = d.n;
  out.r = d.n - d.r;
  for (std::size_t k = 0; k < d.entries.size(); ++k) {
    out.entries.emplace_back(d.entries[k].first.complement(), d.entries[k].second);
    out.exact.push_back(d.exact[k]);
  }
  detail::finish_table(out);
  return out;
}

struct SandwichResult {
  double lower = 0.0;     // sum mu_i log(1/mu_i)
  double entropy = 0.0;   // H(mu)
  double upper = 0.0;     // sum H(mu_i)
  double additive = 0.0;  // upper - r
  double half = 0.0;      // upper / 2
  bool pass = true;
};

inline SandwichResult entropy_sandwich_check(const DistributionTable& d, double slack = 1e-9) {
  SandwichResult s;
  for (double mu : d.marginals) {
    if (mu > 0.0) s.lower -= mu * std::log(mu);
    s.upper += binary_entropy(mu);
  }
  s.entropy = d.entropy;
  s.additive = s.upper - static_cast<double>(d.r);
  s.half = s.upper / 2.0;
  s.pass = s.lower - slack <= s.entropy && s.entropy <= s.upper + slack &&
           std::max(s.half, s.additive) <= s.entropy + slack;
  return s;
}

}  // namespace basiscount::lab
