#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "basiscount/rational.hpp"
#include "basiscount/subset_mask.hpp"
#include "basiscount/union_find.hpp"

namespace basiscount {

enum class MatroidKind {
  uniform,
  partition,
  graphic,
  linear,
  explicit_bases,
  dual_of,
  truncation_of,
  minor_of,
  direct_sum_of,
  parallel_extension_of,
};

inline const char* kind_name(MatroidKind k) {
  switch (k) {
    case MatroidKind::uniform: return "uniform";
    case MatroidKind::partition: return "partition";
    case MatroidKind::graphic: return "graphic";
    case MatroidKind::linear: return "linear";
    case MatroidKind::explicit_bases: return "bases";
    case MatroidKind::dual_of: return "dual";
    case MatroidKind::truncation_of: return "truncation";
    case MatroidKind::minor_of: return "minor";
    case MatroidKind::direct_sum_of: return "direct_sum";
    case MatroidKind::parallel_extension_of: return "parallel_extension";
  }
  return "unknown";
}

struct PartitionBlock {
  std::vector<std::size_t> elements;
  std::size_t cap = 0;
};

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
};

struct RationalField {};
struct PrimeField {
  std::uint64_t p = 2;
};
using LinearField = std::variant<RationalField, PrimeField>;

namespace detail {
struct MatroidNode;
}

/// An immutable matroid on the ground set {0, ..., n-1}, backed by an
/// independence oracle. Copies share the underlying representation.
class Matroid {
 public:
  static Matroid uniform(std::size_t n, std::size_t r);
  /// Elements not covered by any block are loops.
  static Matroid partition(std::vector<PartitionBlock> blocks, std::optional<std::size_t> n = std::nullopt);
  /// Ground set is the edge list in input order; self-loops are loop elements.
  static Matroid graphic(std::size_t vertices, std::vector<Edge> edges);
  /// Columns of `matrix` are the elements.
  static Matroid linear(LinearField field, std::vector<std::vector<mpq_class>> matrix, std::size_t columns);
  /// Independent sets are the subsets of listed bases. The family is not
  /// required to satisfy the basis axioms; see validate_matroid.
  static Matroid from_bases(std::size_t n, std::vector<SubsetMask> bases);

  std::size_t size() const noexcept;
  std::size_t rank() const noexcept;
  MatroidKind kind() const noexcept;

  bool is_independent(const SubsetMask& s) const;
  std::size_t rank_of(const SubsetMask& s) const;

  SubsetMask empty_set() const { return SubsetMask(size()); }
  SubsetMask ground_set() const { return SubsetMask::full(size()); }

  const detail::MatroidNode& node() const { return *node_; }

 private:
  friend Matroid dual(const Matroid&);
  friend Matroid truncation(const Matroid&, std::size_t);
  friend Matroid minor(const Matroid&, const SubsetMask&, const SubsetMask&);
  friend Matroid direct_sum(std::span<const Matroid>);
  friend Matroid parallel_extension(const Matroid&, std::span<const std::size_t>);

  explicit Matroid(std::shared_ptr<const detail::MatroidNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::MatroidNode> node_;
};

Matroid dual(const Matroid& m);
Matroid truncation(const Matroid& m, std::size_t k);
/// Contract `contract`, delete `del`; survivors are re-indexed in ascending
/// order of their original index.
Matroid minor(const Matroid& m, const SubsetMask& contract, const SubsetMask& del);
/// Part j's elements are shifted by the total size of parts 0..j-1.
Matroid direct_sum(std::span<const Matroid> parts);
/// Replaces element i by multiplicity[i] parallel copies (zero deletes it).
/// Copies of element i occupy a contiguous run, runs ordered by i.
Matroid parallel_extension(const Matroid& m, std::span<const std::size_t> multiplicity);

namespace detail {

struct UniformData {};

struct PartitionData {
  std::vector<PartitionBlock> blocks;
  std::vector<std::ptrdiff_t> block_of;  // -1 for loops
};

struct GraphicData {
  std::size_t vertices = 0;
  std::vector<Edge> edges;
};

struct LinearData {
  LinearField field;
  std::vector<std::vector<mpq_class>> matrix;
  // Rational field: each row scaled by the lcm of its denominators.
  std::vector<std::vector<mpz_class>> integer_rows;
  // Prime field: entries reduced into [0, p).
  std::vector<std::vector<std::uint64_t>> residue_rows;
};

struct BasesData {
  std::vector<SubsetMask> bases;
};

struct DualData {
  Matroid of;
};

struct TruncationData {
  Matroid of;
  std::size_t k;
};

struct MinorData {
  Matroid of;
  SubsetMask contract;
  SubsetMask removed;
  std::vector<std::size_t> kept;  // new index -> parent index
};

struct DirectSumData {
  std::vector<Matroid> parts;
  std::vector<std::size_t> offsets;
};

struct ParallelData {
  Matroid of;
  std::vector<std::size_t> multiplicity;
  std::vector<std::size_t> origin;  // new index -> parent index
};

using Payload = std::variant<UniformData, PartitionData, GraphicData, LinearData, BasesData, DualData,
                             TruncationData, MinorData, DirectSumData, ParallelData>;

struct MatroidNode {
  std::size_t n = 0;
  std::size_t r = 0;
  MatroidKind kind = MatroidKind::uniform;
  Payload payload;
};

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) result = mulmod(result, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return result;
}

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Fraction-free elimination; columns are dependent as soon as one has no pivot.
inline bool columns_independent_rational(const std::vector<std::vector<mpz_class>>& rows,
                                         const std::vector<std::size_t>& cols) {
  const std::size_t k = cols.size();
  const std::size_t m = rows.size();
  if (k > m) return false;
  std::vector<std::vector<mpz_class>> a(m, std::vector<mpz_class>(k));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i][j] = rows[i][cols[j]];
  mpz_class prev = 1;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) return false;
    std::swap(a[piv], a[col]);
    for (std::size_t i = col + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < k; ++j) {
        a[i][j] = a[i][j] * a[col][col] - a[i][col] * a[col][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][col] = 0;
    }
    prev = a[col][col];
  }
  return true;
}

inline bool columns_independent_mod_p(const std::vector<std::vector<std::uint64_t>>& rows,
                                      const std::vector<std::size_t>& cols, std::uint64_t p) {
  const std::size_t k = cols.size();
  const std::size_t m = rows.size();
  if (k > m) return false;
  std::vector<std::vector<std::uint64_t>> a(m, std::vector<std::uint64_t>(k));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i][j] = rows[i][cols[j]];
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) return false;
    std::swap(a[piv], a[col]);
    const std::uint64_t inv = powmod(a[col][col], p - 2, p);
    for (std::size_t i = col + 1; i < m; ++i) {
      if (a[i][col] == 0) continue;
      const std::uint64_t factor = mulmod(a[i][col], inv, p);
      for (std::size_t j = col; j < k; ++j) {
        const std::uint64_t sub = mulmod(factor, a[col][j], p);
        a[i][j] = (a[i][j] + p - sub) % p;
      }
    }
  }
  return true;
}

inline void require_universe(const Matroid& m, const SubsetMask& s) {
  if (s.universe() != m.size())
    throw std::out_of_range("subset over ground set of size " + std::to_string(s.universe()) +
                            " used with matroid on " + std::to_string(m.size()) + " elements");
}

// Generic greedy rank: ascending scan, keep whatever stays independent.
inline std::size_t greedy_rank(const Matroid& m, const SubsetMask& s) {
  SubsetMask acc(m.size());
  std::size_t r = 0;
  for (auto e : s.elements()) {
    acc.insert(e);
    if (m.is_independent(acc))
      ++r;
    else
      acc.erase(e);
  }
  return r;
}

inline SubsetMask lift_to_parent(const SubsetMask& s, std::span<const std::size_t> to_parent,
                                 std::size_t parent_n) {
  SubsetMask out(parent_n);
  for (auto e : s.elements()) out.insert(to_parent[e]);
  return out;
}

inline std::shared_ptr<MatroidNode> make_node(std::size_t n, MatroidKind kind, Payload payload) {
  auto node = std::make_shared<MatroidNode>();
  node->n = n;
  node->kind = kind;
  node->payload = std::move(payload);
  return node;
}

}  // namespace detail

inline std::size_t Matroid::size() const noexcept { return node_->n; }
inline std::size_t Matroid::rank() const noexcept { return node_->r; }
inline MatroidKind Matroid::kind() const noexcept { return node_->kind; }

inline bool Matroid::is_independent(const SubsetMask& s) const {
  detail::require_universe(*this, s);
  const auto& nd = *node_;
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, detail::UniformData>) {
          return s.count() <= nd.r;
        } else if constexpr (std::is_same_v<T, detail::PartitionData>) {
          std::vector<std::size_t> used(d.blocks.size(), 0);
          for (auto e : s.elements()) {
            const auto b = d.block_of[e];
            if (b < 0) return false;
            if (++used[static_cast<std::size_t>(b)] > d.blocks[static_cast<std::size_t>(b)].cap) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, detail::GraphicData>) {
          UnionFind uf(d.vertices);
          for (auto e : s.elements())
            if (!uf.unite(d.edges[e].u, d.edges[e].v)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, detail::LinearData>) {
          const auto cols = s.elements();
          if (std::holds_alternative<RationalField>(d.field))
            return detail::columns_independent_rational(d.integer_rows, cols);
          return detail::columns_independent_mod_p(d.residue_rows, cols, std::get<PrimeField>(d.field).p);
        } else if constexpr (std::is_same_v<T, detail::BasesData>) {
          for (const auto& b : d.bases)
            if (s.is_subset_of(b)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, detail::DualData>) {
          return d.of.rank_of(s.complement()) == d.of.rank();
        } else if constexpr (std::is_same_v<T, detail::TruncationData>) {
          return s.count() <= d.k && d.of.is_independent(s);
        } else if constexpr (std::is_same_v<T, detail::MinorData>) {
          return d.of.is_independent(detail::lift_to_parent(s, d.kept, d.of.size()) | d.contract);
        } else if constexpr (std::is_same_v<T, detail::DirectSumData>) {
          for (std::size_t j = 0; j < d.parts.size(); ++j) {
            SubsetMask part(d.parts[j].size());
            for (std::size_t i = 0; i < d.parts[j].size(); ++i)
              if (s.contains(d.offsets[j] + i)) part.insert(i);
            if (!d.parts[j].is_independent(part)) return false;
          }
          return true;
        } else {
          static_assert(std::is_same_v<T, detail::ParallelData>);
          SubsetMask projected(d.of.size());
          for (auto e : s.elements()) {
            if (projected.contains(d.origin[e])) return false;
            projected.insert(d.origin[e]);
          }
          return d.of.is_independent(projected);
        }
      },
      nd.payload);
}

inline std::size_t Matroid::rank_of(const SubsetMask& s) const {
  detail::require_universe(*this, s);
  const auto& nd = *node_;
  switch (nd.kind) {
    case MatroidKind::uniform:
      return std::min(s.count(), nd.r);
    case MatroidKind::partition: {
      const auto& d = std::get<detail::PartitionData>(nd.payload);
      std::vector<std::size_t> used(d.blocks.size(), 0);
      for (auto e : s.elements())
        if (d.block_of[e] >= 0) ++used[static_cast<std::size_t>(d.block_of[e])];
      std::size_t r = 0;
      for (std::size_t b = 0; b < used.size(); ++b) r += std::min(used[b], d.blocks[b].cap);
      return r;
    }
    case MatroidKind::graphic: {
      const auto& d = std::get<detail::GraphicData>(nd.payload);
      UnionFind uf(d.vertices);
      std::size_t r = 0;
      for (auto e : s.elements())
        if (uf.unite(d.edges[e].u, d.edges[e].v)) ++r;
      return r;
    }
    case MatroidKind::dual_of: {
      // r*(S) = |S| + r(E \ S) - r(E)
      const auto& d = std::get<detail::DualData>(nd.payload);
      return s.count() + d.of.rank_of(s.complement()) - d.of.rank();
    }
    case MatroidKind::truncation_of: {
      const auto& d = std::get<detail::TruncationData>(nd.payload);
      return std::min(d.of.rank_of(s), d.k);
    }
    default:
      return detail::greedy_rank(*this, s);
  }
}

inline Matroid Matroid::uniform(std::size_t n, std::size_t r) {
  if (r > n) throw std::invalid_argument("uniform matroid needs r <= n");
  auto node = detail::make_node(n, MatroidKind::uniform, detail::UniformData{});
  node->r = r;
  return Matroid(std::move(node));
}

inline Matroid Matroid::partition(std::vector<PartitionBlock> blocks, std::optional<std::size_t> n) {
  std::size_t size = 0;
  for (const auto& b : blocks)
    for (auto e : b.elements) size = std::max(size, e + 1);
  if (n) {
    if (*n < size) throw std::invalid_argument("partition block element exceeds declared n");
    size = *n;
  }
  detail::PartitionData d;
  d.block_of.assign(size, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (auto e : blocks[b].elements) {
      if (d.block_of[e] != -1)
        throw std::invalid_argument("element " + std::to_string(e) + " appears in more than one block");
      d.block_of[e] = static_cast<std::ptrdiff_t>(b);
    }
  }
  d.blocks = std::move(blocks);
  auto node = detail::make_node(size, MatroidKind::partition, std::move(d));
  Matroid m(node);
  node->r = m.rank_of(m.ground_set());
  return m;
}

inline Matroid Matroid::graphic(std::size_t vertices, std::vector<Edge> edges) {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].u >= vertices || edges[i].v >= vertices)
      throw std::invalid_argument("edge " + std::to_string(i) + " references a vertex outside [0, " +
                                  std::to_string(vertices) + ")");
  const std::size_t n = edges.size();
  auto node = detail::make_node(n, MatroidKind::graphic, detail::GraphicData{vertices, std::move(edges)});
  Matroid m(node);
  node->r = detail::greedy_rank(m, m.ground_set());
  return m;
}

inline Matroid Matroid::linear(LinearField field, std::vector<std::vector<mpq_class>> matrix, std::size_t columns) {
  for (const auto& row : matrix)
    if (row.size() != columns) throw std::invalid_argument("linear matroid matrix rows have unequal length");
  detail::LinearData d;
  d.field = field;
  if (std::holds_alternative<RationalField>(field)) {
    for (const auto& row : matrix) {
      const mpz_class scale = lcm_of_denominators(row);
      std::vector<mpz_class> irow;
      irow.reserve(row.size());
      for (const auto& q : row) {
        mpq_class scaled = q * scale;
        irow.push_back(scaled.get_num());
      }
      d.integer_rows.push_back(std::move(irow));
    }
  } else {
    const std::uint64_t p = std::get<PrimeField>(field).p;
    if (!detail::is_prime(p)) throw std::invalid_argument("field modulus " + std::to_string(p) + " is not prime");
    const mpz_class mp(static_cast<unsigned long>(p));
    for (const auto& row : matrix) {
      std::vector<std::uint64_t> rrow;
      rrow.reserve(row.size());
      for (const auto& q : row) {
        mpz_class num, den;
        mpz_mod(num.get_mpz_t(), q.get_num_mpz_t(), mp.get_mpz_t());
        mpz_mod(den.get_mpz_t(), q.get_den_mpz_t(), mp.get_mpz_t());
        if (den == 0) throw std::invalid_argument("matrix entry denominator vanishes modulo " + std::to_string(p));
        const std::uint64_t inv = detail::powmod(den.get_ui(), p - 2, p);
        rrow.push_back(detail::mulmod(num.get_ui(), inv, p));
      }
      d.residue_rows.push_back(std::move(rrow));
    }
  }
  d.matrix = std::move(matrix);
  auto node = detail::make_node(columns, MatroidKind::linear, std::move(d));
  Matroid m(node);
  node->r = detail::greedy_rank(m, m.ground_set());
  return m;
}

inline Matroid Matroid::from_bases(std::size_t n, std::vector<SubsetMask> bases) {
  if (bases.empty()) throw std::invalid_argument("basis family must be non-empty");
  for (const auto& b : bases)
    if (b.universe() != n) throw std::invalid_argument("basis over wrong ground set size");
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  auto node = detail::make_node(n, MatroidKind::explicit_bases, detail::BasesData{std::move(bases)});
  Matroid m(node);
  node->r = detail::greedy_rank(m, m.ground_set());
  return m;
}

inline Matroid dual(const Matroid& m) {
  auto node = detail::make_node(m.size(), MatroidKind::dual_of, detail::DualData{m});
  node->r = m.size() - m.rank();
  return Matroid(std::move(node));
}

inline Matroid truncation(const Matroid& m, std::size_t k) {
  if (k > m.rank())
    throw std::invalid_argument("truncation rank " + std::to_string(k) + " exceeds matroid rank " +
                                std::to_string(m.rank()));
  auto node = detail::make_node(m.size(), MatroidKind::truncation_of, detail::TruncationData{m, k});
  node->r = k;
  return Matroid(std::move(node));
}

inline Matroid minor(const Matroid& m, const SubsetMask& contract, const SubsetMask& del) {
  detail::require_universe(m, contract);
  detail::require_universe(m, del);
  if (!(contract & del).empty()) throw std::invalid_argument("minor: contract and delete sets overlap");
  if (!m.is_independent(contract)) throw std::invalid_argument("minor: contract set is dependent");
  detail::MinorData d{m, contract, contract | del, {}};
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!d.removed.contains(i)) d.kept.push_back(i);
  const std::size_t r = m.rank_of(m.ground_set() - del) - contract.count();
  const std::size_t n = d.kept.size();
  auto node = detail::make_node(n, MatroidKind::minor_of, std::move(d));
  node->r = r;
  return Matroid(std::move(node));
}

inline Matroid direct_sum(std::span<const Matroid> parts) {
  detail::DirectSumData d;
  std::size_t n = 0, r = 0;
  for (const auto& p : parts) {
    d.offsets.push_back(n);
    d.parts.push_back(p);
    n += p.size();
    r += p.rank();
  }
  auto node = detail::make_node(n, MatroidKind::direct_sum_of, std::move(d));
  node->r = r;
  return Matroid(std::move(node));
}

inline Matroid parallel_extension(const Matroid& m, std::span<const std::size_t> multiplicity) {
  if (multiplicity.size() != m.size()) throw std::invalid_argument("parallel_extension: one multiplicity per element");
  detail::ParallelData d{m, {multiplicity.begin(), multiplicity.end()}, {}};
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t c = 0; c < multiplicity[i]; ++c) d.origin.push_back(i);
  const std::size_t n = d.origin.size();
  SubsetMask support(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    if (multiplicity[i] > 0) support.insert(i);
  const std::size_t r = m.rank_of(support);
  auto node = detail::make_node(n, MatroidKind::parallel_extension_of, std::move(d));
  node->r = r;
  return Matroid(std::move(node));
}

/// Derivation requests accepted by derive_matroid.
struct DualOf {
  Matroid of;
};
struct TruncationOf {
  Matroid of;
  std::size_t k;
};
struct MinorOf {
  Matroid of;
  std::vector<std::size_t> contract;
  std::vector<std::size_t> del;
};
struct DirectSumOf {
  std::vector<Matroid> parts;
};
using Derivation = std::variant<DualOf, TruncationOf, MinorOf, DirectSumOf>;

inline Matroid derive_matroid(const Derivation& spec) {
  return std::visit(
      [](const auto& d) -> Matroid {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DualOf>) {
          return dual(d.of);
        } else if constexpr (std::is_same_v<T, TruncationOf>) {
          return truncation(d.of, d.k);
        } else if constexpr (std::is_same_v<T, MinorOf>) {
          return minor(d.of, SubsetMask::from_elements(d.of.size(), d.contract),
                       SubsetMask::from_elements(d.of.size(), d.del));
        } else {
          return direct_sum(d.parts);
        }
      },
      spec);
}

}  // namespace basiscount
