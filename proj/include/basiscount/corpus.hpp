#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "basiscount/matroid.hpp"

namespace basiscount::corpus {

struct Named {
  std::string name;
  Matroid matroid;
};

struct NamedPair {
  std::string name;
  Matroid first;
  Matroid second;
};

inline Matroid complete_graph(std::size_t vertices) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < vertices; ++u)
    for (std::size_t v = u + 1; v < vertices; ++v) edges.push_back({u, v});
  return Matroid::graphic(vertices, std::move(edges));
}

/// Perfect matchings of K_{a,a} as common bases: element (i, j) has index i*a + j.
inline std::pair<Matroid, Matroid> bipartite_matching_pair(std::size_t a) {
  std::vector<PartitionBlock> rows(a), cols(a);
  for (std::size_t i = 0; i < a; ++i) {
    rows[i].cap = 1;
    cols[i].cap = 1;
    for (std::size_t j = 0; j < a; ++j) {
      rows[i].elements.push_back(i * a + j);
      cols[i].elements.push_back(j * a + i);
    }
  }
  return {Matroid::partition(std::move(rows), a * a), Matroid::partition(std::move(cols), a * a)};
}

/// Connected simple graphs on exactly `vertices` vertices, one per isomorphism class.
inline std::vector<Named> connected_graphs(std::size_t vertices) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t u = 0; u < vertices; ++u)
    for (std::size_t v = u + 1; v < vertices; ++v) slots.emplace_back(u, v);
  std::vector<std::size_t> perm(vertices);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  auto slot_of = [&](std::size_t u, std::size_t v) {
    if (u > v) std::swap(u, v);
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (slots[s].first == u && slots[s].second == v) return s;
    return slots.size();
  };
  std::set<std::uint64_t> seen;
  std::vector<Named> out;
  const std::uint64_t total = std::uint64_t{1} << slots.size();
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    std::uint64_t canon = bits;
    for (const auto& pm : perms) {
      std::uint64_t image = 0;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if ((bits >> s) & 1u) image |= std::uint64_t{1} << slot_of(pm[slots[s].first], pm[slots[s].second]);
      canon = std::min(canon, image);
    }
    if (!seen.insert(canon).second) continue;
    std::vector<Edge> edges;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if ((canon >> s) & 1u) edges.push_back({slots[s].first, slots[s].second});
    auto m = Matroid::graphic(vertices, edges);
    if (m.rank() + 1 != vertices) continue;  // disconnected
    std::string name = "graph" + std::to_string(vertices) + "[";
    for (std::size_t e = 0; e < edges.size(); ++e)
      name += (e ? "," : "") + std::to_string(edges[e].u) + std::to_string(edges[e].v);
    out.push_back({name + "]", std::move(m)});
  }
  return out;
}

inline std::vector<Named> connected_graphs_up_to(std::size_t max_vertices) {
  std::vector<Named> out;
  for (std::size_t v = 1; v <= max_vertices; ++v) {
    auto g = connected_graphs(v);
    out.insert(out.end(), std::make_move_iterator(g.begin()), std::make_move_iterator(g.end()));
  }
  return out;
}

inline std::vector<Named> uniform_matroids_up_to(std::size_t max_n) {
  std::vector<Named> out;
  for (std::size_t n = 1; n <= max_n; ++n)
    for (std::size_t r = 0; r <= n; ++r)
      out.push_back({"U(" + std::to_string(r) + "," + std::to_string(n) + ")", Matroid::uniform(n, r)});
  return out;
}

/// Each matroid, its dual, and its truncation to one rank lower.
inline std::vector<Named> with_duals_and_truncations(const std::vector<Named>& base) {
  std::vector<Named> out;
  for (const auto& [name, m] : base) {
    out.push_back({name, m});
    out.push_back({"dual(" + name + ")", dual(m)});
    if (m.rank() >= 1)
      out.push_back({"trunc(" + name + "," + std::to_string(m.rank() - 1) + ")", truncation(m, m.rank() - 1)});
  }
  return out;
}

/// The enumerable corpus: connected graphs on <= 5 vertices and uniform
/// matroids on <= 8 elements, with duals and truncations.
inline std::vector<Named> enumerable_corpus() {
  auto base = connected_graphs_up_to(5);
  auto uni = uniform_matroids_up_to(8);
  base.insert(base.end(), uni.begin(), uni.end());
  return with_duals_and_truncations(base);
}

/// A partition matroid on n elements with a random block structure and rank r.
inline Matroid random_partition_matroid(std::size_t n, std::size_t r, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t blocks = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, std::min(n, r + 2)))(rng);
  std::vector<PartitionBlock> parts(blocks);
  for (std::size_t k = 0; k < n; ++k) parts[k < blocks ? k : std::uniform_int_distribution<std::size_t>(0, blocks - 1)(rng)].elements.push_back(order[k]);
  // Hand out r units of capacity, never exceeding a block's size.
  std::size_t left = r;
  while (left > 0) {
    auto& b = parts[std::uniform_int_distribution<std::size_t>(0, blocks - 1)(rng)];
    if (b.cap < b.elements.size()) {
      ++b.cap;
      --left;
    }
  }
  for (auto& b : parts) std::sort(b.elements.begin(), b.elements.end());
  return Matroid::partition(std::move(parts), n);
}

/// Seeded pairs of partition matroids with equal rank (n <= max_n, r <= max_rank).
inline std::vector<NamedPair> random_partition_pairs(std::size_t count, std::uint64_t seed, std::size_t max_n = 16,
                                                     std::size_t max_rank = 5) {
  std::mt19937_64 rng(seed);
  std::vector<NamedPair> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, max_n)(rng);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(1, std::min(max_rank, n))(rng);
    auto a = random_partition_matroid(n, r, rng);
    auto b = random_partition_matroid(n, r, rng);
    out.push_back({"partition-pair#" + std::to_string(k) + "(n=" + std::to_string(n) + ",r=" + std::to_string(r) + ")",
                   std::move(a), std::move(b)});
  }
  return out;
}

}  // namespace basiscount::corpus
