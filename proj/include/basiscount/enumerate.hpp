#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "basiscount/matroid.hpp"

namespace basiscount {

/// Raised when a brute-force path would exceed its configured size limits.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumerationGuard {
  std::size_t max_n = 24;
  double max_candidates = 1e7;
  bool override_limits = false;
};

/// Binomial coefficient as a double; exact for every value the guard admits.
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

inline void check_enumeration_guard(std::size_t n, std::size_t r, const EnumerationGuard& guard) {
  if (n > 63) throw GuardExceeded("enumeration needs n <= 63, got n = " + std::to_string(n));
  if (guard.override_limits) return;
  if (n > guard.max_n)
    throw GuardExceeded("enumeration guard: n = " + std::to_string(n) + " exceeds " + std::to_string(guard.max_n));
  if (binomial(n, r) > guard.max_candidates)
    throw GuardExceeded("enumeration guard: C(" + std::to_string(n) + "," + std::to_string(r) + ") exceeds " +
                        std::to_string(static_cast<long long>(guard.max_candidates)));
}

/// Calls f(bits) for every k-subset of [n] as a bitmask, in increasing numeric order.
template <class F>
void for_each_k_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  if (k == 0) {
    f(std::uint64_t{0});
    return;
  }
  std::uint64_t s = (k == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << k) - 1);
  const std::uint64_t limit = (n == 64) ? 0 : (std::uint64_t{1} << n);
  while (true) {
    f(s);
    // Gosper's hack
    const std::uint64_t c = s & (~s + 1);
    const std::uint64_t r = s + c;
    if (r == 0) break;
    s = (((r ^ s) >> 2) / c) | r;
    if (limit != 0 && s >= limit) break;
  }
}

/// All bases, sorted by mask value.
inline std::vector<SubsetMask> enumerate_bases(const Matroid& m, const EnumerationGuard& guard = {}) {
  check_enumeration_guard(m.size(), m.rank(), guard);
  std::vector<SubsetMask> out;
  for_each_k_subset(m.size(), m.rank(), [&](std::uint64_t bits) {
    auto s = SubsetMask::from_bits(m.size(), bits);
    if (m.is_independent(s)) out.push_back(std::move(s));
  });
  return out;
}

/// Size-k independent sets, sorted by mask value.
inline std::vector<SubsetMask> enumerate_independent_sets_of_size(const Matroid& m, std::size_t k,
                                                                  const EnumerationGuard& guard = {}) {
  check_enumeration_guard(m.size(), k, guard);
  std::vector<SubsetMask> out;
  for_each_k_subset(m.size(), k, [&](std::uint64_t bits) {
    auto s = SubsetMask::from_bits(m.size(), bits);
    if (m.is_independent(s)) out.push_back(std::move(s));
  });
  return out;
}

/// Common bases of two matroids on the same ground set, sorted by mask value.
inline std::vector<SubsetMask> enumerate_common_bases(const Matroid& m, const Matroid& n,
                                                      const EnumerationGuard& guard = {}) {
  if (m.size() != n.size()) throw std::invalid_argument("matroids on different ground sets");
  if (m.rank() != n.rank()) return {};
  std::vector<SubsetMask> out;
  for (auto& b : enumerate_bases(m, guard))
    if (n.is_independent(b)) out.push_back(std::move(b));
  return out;
}

/// Greedy rank with an explicit scan order (a permutation of the ground set).
inline std::size_t greedy_rank_in_order(const Matroid& m, const SubsetMask& s, const std::vector<std::size_t>& order) {
  SubsetMask acc(m.size());
  std::size_t r = 0;
  for (auto e : order) {
    if (!s.contains(e)) continue;
    acc.insert(e);
    if (m.is_independent(acc))
      ++r;
    else
      acc.erase(e);
  }
  return r;
}

struct AxiomViolation {
  enum class Kind { empty_set_dependent, downward_closure, exchange } kind;
  SubsetMask s;
  SubsetMask t;  // for downward closure: t is the dependent subset of s
};

struct ValidationReport {
  bool exhaustive = false;
  std::size_t checks = 0;
  std::vector<AxiomViolation> violations;
  bool passed() const { return violations.empty(); }
};

/// Checks the independence axioms. Exhaustive for n <= 12; otherwise uses
/// `trials` seeded random pairs. Stops recording after `max_violations`.
inline ValidationReport validate_matroid(const Matroid& m, std::size_t trials = 1000, std::uint64_t seed = 0,
                                         std::size_t max_violations = 16) {
  ValidationReport report;
  const std::size_t n = m.size();
  auto record = [&](AxiomViolation v) {
    if (report.violations.size() < max_violations) report.violations.push_back(std::move(v));
  };
  if (!m.is_independent(m.empty_set()))
    record({AxiomViolation::Kind::empty_set_dependent, m.empty_set(), m.empty_set()});

  if (n <= 12) {
    report.exhaustive = true;
    std::vector<std::vector<SubsetMask>> by_size(n + 1);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      auto s = SubsetMask::from_bits(n, bits);
      if (m.is_independent(s)) by_size[s.count()].push_back(std::move(s));
    }
    for (const auto& layer : by_size) {
      for (const auto& s : layer) {
        for (auto e : s.elements()) {
          ++report.checks;
          auto sub = s.without(e);
          if (!m.is_independent(sub)) record({AxiomViolation::Kind::downward_closure, s, sub});
        }
      }
    }
    // Under downward closure, exchange for |T| = |S| + 1 implies it for all |T| > |S|.
    for (std::size_t k = 0; k + 1 <= n; ++k) {
      for (const auto& s : by_size[k]) {
        for (const auto& t : by_size[k + 1]) {
          ++report.checks;
          bool ok = false;
          for (auto e : (t - s).elements()) {
            if (m.is_independent(s.with(e))) {
              ok = true;
              break;
            }
          }
          if (!ok) record({AxiomViolation::Kind::exchange, s, t});
        }
      }
    }
    return report;
  }

  std::mt19937_64 rng(seed);
  auto random_independent = [&]() {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t target = std::uniform_int_distribution<std::size_t>(0, m.rank())(rng);
    SubsetMask acc(n);
    for (auto e : order) {
      if (acc.count() >= target) break;
      acc.insert(e);
      if (!m.is_independent(acc)) acc.erase(e);
    }
    return acc;
  };
  for (std::size_t trial = 0; trial < trials; ++trial) {
    auto t = random_independent();
    if (!t.empty()) {
      auto elems = t.elements();
      const auto drop = elems[std::uniform_int_distribution<std::size_t>(0, elems.size() - 1)(rng)];
      ++report.checks;
      if (!m.is_independent(t.without(drop))) record({AxiomViolation::Kind::downward_closure, t, t.without(drop)});
    }
    auto s = random_independent();
    if (s.count() >= t.count()) std::swap(s, t);
    if (s.count() < t.count()) {
      ++report.checks;
      bool ok = false;
      for (auto e : (t - s).elements()) {
        if (m.is_independent(s.with(e))) {
          ok = true;
          break;
        }
      }
      if (!ok) record({AxiomViolation::Kind::exchange, s, t});
    }
  }
  return report;
}

}  // namespace basiscount
