#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "basiscount/matroid.hpp"

namespace basiscount {

/// No common basis exists (including rank mismatch).
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Elements by decreasing weight, smaller index first among equal weights.
inline std::vector<std::size_t> greedy_order(std::span<const double> w) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  return order;
}

}  // namespace detail

/// Maximum-weight basis by the matroid greedy algorithm. Ties go to the smaller
/// index; weights may be negative since every basis has the same size.
inline SubsetMask greedy_max_weight_basis(const Matroid& m, std::span<const double> w) {
  if (w.size() != m.size()) throw std::invalid_argument("weight vector length differs from ground set size");
  const auto order = detail::greedy_order(w);
  SubsetMask basis(m.size());
  std::size_t size = 0;

  if (m.kind() == MatroidKind::graphic) {
    // Kruskal: one incremental union-find instead of a fresh oracle call per element.
    const auto& g = std::get<detail::GraphicData>(m.node().payload);
    UnionFind uf(g.vertices);
    for (auto e : order) {
      if (size == m.rank()) break;
      if (uf.unite(g.edges[e].u, g.edges[e].v)) {
        basis.insert(e);
        ++size;
      }
    }
    return basis;
  }

  for (auto e : order) {
    if (size == m.rank()) break;
    basis.insert(e);
    if (m.is_independent(basis))
      ++size;
    else
      basis.erase(e);
  }
  return basis;
}

inline double weight_of(const SubsetMask& s, std::span<const double> w) {
  double total = 0.0;
  for (auto e : s.elements()) total += w[e];
  return total;
}

/// Maximum-weight common basis by weighted matroid intersection (successive
/// shortest augmenting paths in the exchange graph). Throws Infeasible when
/// no common basis exists.
inline SubsetMask max_weight_common_basis(const Matroid& m1, const Matroid& m2, std::span<const double> w) {
  const std::size_t n = m1.size();
  if (m2.size() != n) throw std::invalid_argument("matroids on different ground sets");
  if (w.size() != n) throw std::invalid_argument("weight vector length differs from ground set size");
  if (m1.rank() != m2.rank()) throw Infeasible("matroid ranks differ; no common basis");
  const std::size_t target = m1.rank();

  // Shift to strictly positive weights; every common basis has the same size,
  // so the argmax is unchanged.
  std::vector<double> wp(w.begin(), w.end());
  if (n > 0) {
    const double lo = *std::min_element(wp.begin(), wp.end());
    for (auto& x : wp) x = x - lo + 1.0;
  }
  double scale = 1.0;
  for (auto x : wp) scale += std::abs(x);
  const double eps = 1e-13 * scale;

  SubsetMask current(n);
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::size_t none = static_cast<std::size_t>(-1);

  for (std::size_t size = 0; size < target; ++size) {
    std::vector<std::size_t> inside, outside;
    for (std::size_t i = 0; i < n; ++i) (current.contains(i) ? inside : outside).push_back(i);

    std::vector<char> is_source(n, 0), is_sink(n, 0);
    for (auto x : outside) {
      const auto grown = current.with(x);
      is_source[x] = m1.is_independent(grown);
      is_sink[x] = m2.is_independent(grown);
    }
    // Arcs y -> x when I - y + x is independent in m1; x -> y when it is in m2.
    std::vector<std::vector<std::size_t>> out_arcs(n);
    for (auto y : inside) {
      const auto shrunk = current.without(y);
      for (auto x : outside) {
        const auto swapped = shrunk.with(x);
        if (m1.is_independent(swapped)) out_arcs[y].push_back(x);
        if (m2.is_independent(swapped)) out_arcs[x].push_back(y);
      }
    }

    // Vertex costs: leaving elements add their weight, entering ones subtract it.
    std::vector<double> cost(n);
    for (std::size_t i = 0; i < n; ++i) cost[i] = current.contains(i) ? wp[i] : -wp[i];

    std::vector<double> dist(n, inf);
    std::vector<std::size_t> arcs(n, none), pred(n, none);
    for (auto x : outside) {
      if (is_source[x]) {
        dist[x] = cost[x];
        arcs[x] = 0;
      }
    }
    auto better = [&](double d, std::size_t a, std::size_t v) {
      if (dist[v] == inf) return true;
      if (d < dist[v] - eps) return true;
      if (d <= dist[v] + eps && a < arcs[v]) return true;
      return false;
    };
    // Bellman-Ford; the extreme-set invariant rules out negative cycles.
    for (std::size_t round = 0; round < n; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < n; ++u) {
        if (dist[u] == inf) continue;
        for (auto v : out_arcs[u]) {
          const double d = dist[u] + cost[v];
          if (better(d, arcs[u] + 1, v)) {
            dist[v] = d;
            arcs[v] = arcs[u] + 1;
            pred[v] = u;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }

    std::size_t sink = none;
    for (auto x : outside) {
      if (!is_sink[x] || dist[x] == inf) continue;
      if (sink == none || dist[x] < dist[sink] - eps ||
          (dist[x] <= dist[sink] + eps && arcs[x] < arcs[sink]))
        sink = x;
    }
    if (sink == none) throw Infeasible("no common basis: largest common independent set has size " +
                                       std::to_string(size) + " < rank " + std::to_string(target));

    std::vector<char> on_path(n, 0);
    for (std::size_t v = sink; v != none; v = pred[v]) {
      if (on_path[v]) throw std::logic_error("matroid intersection: cycle in augmenting path");
      on_path[v] = 1;
      if (current.contains(v))
        current.erase(v);
      else
        current.insert(v);
    }
  }
  return current;
}

}  // namespace basiscount
