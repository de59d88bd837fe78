#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "basiscount/corpus.hpp"
#include "basiscount/enumerate.hpp"
#include "basiscount/matroid.hpp"

using namespace basiscount;

namespace {

// Oracle: all size-r subsets that the independence oracle accepts, by plain bit loops.
std::vector<std::uint64_t> brute_bases(const Matroid& m) {
  std::vector<std::uint64_t> out;
  const std::size_t n = m.size();
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b)
    if (static_cast<std::size_t>(__builtin_popcountll(b)) == m.rank() && m.is_independent(SubsetMask::from_bits(n, b)))
      out.push_back(b);
  return out;
}

std::vector<std::uint64_t> bits_of(const std::vector<SubsetMask>& v) {
  std::vector<std::uint64_t> out;
  for (const auto& s : v) out.push_back(s.to_bits());
  return out;
}

Matroid k3() { return Matroid::graphic(3, {{0, 1}, {1, 2}, {0, 2}}); }

}  // namespace

TEST(Independence, GraphicTriangle) {
  const auto m = k3();
  EXPECT_TRUE(m.is_independent(SubsetMask(3, {0, 1})));
  EXPECT_FALSE(m.is_independent(SubsetMask(3, {0, 1, 2})));
  EXPECT_THROW((void)m.is_independent(SubsetMask(4, {0})), std::exception);
}

TEST(Independence, UniformAndSelfLoops) {
  EXPECT_FALSE(Matroid::uniform(4, 2).is_independent(SubsetMask(4, {0, 1, 2})));
  const auto g = Matroid::graphic(2, {{0, 0}, {0, 1}, {0, 1}});
  EXPECT_FALSE(g.is_independent(SubsetMask(3, {0})));
  EXPECT_FALSE(g.is_independent(SubsetMask(3, {1, 2})));
  EXPECT_EQ(g.rank(), 1u);
}

TEST(Independence, LinearRationalAndPrime) {
  // Columns (1,0), (0,1), (1,1), (2,2): last two are parallel over Q.
  std::vector<std::vector<mpq_class>> a = {{1, 0, 1, 2}, {0, 1, 1, 2}};
  const auto q = Matroid::linear(RationalField{}, a, 4);
  EXPECT_EQ(q.rank(), 2u);
  EXPECT_FALSE(q.is_independent(SubsetMask(4, {2, 3})));
  EXPECT_TRUE(q.is_independent(SubsetMask(4, {0, 3})));
  // Mod 2 the last column vanishes and is a loop.
  const auto f2 = Matroid::linear(PrimeField{2}, a, 4);
  EXPECT_FALSE(f2.is_independent(SubsetMask(4, {3})));
  EXPECT_FALSE(f2.is_independent(SubsetMask(4, {0, 1, 2})));
  EXPECT_THROW(Matroid::linear(PrimeField{4}, a, 4), std::invalid_argument);
  // Fractional entries: (1/2, 1/3) and (3, 2) are parallel.
  std::vector<std::vector<mpq_class>> b = {{mpq_class(1, 2), 3}, {mpq_class(1, 3), 2}};
  EXPECT_EQ(Matroid::linear(RationalField{}, b, 2).rank(), 1u);
}

TEST(Independence, LinearAgreesWithGraphicIncidence) {
  // Signed incidence matrix of K4 over Q represents the graphic matroid.
  const auto g = corpus::complete_graph(4);
  std::vector<std::vector<mpq_class>> inc(4, std::vector<mpq_class>(6, 0));
  const auto& edges = std::get<detail::GraphicData>(g.node().payload).edges;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    inc[edges[e].u][e] = 1;
    inc[edges[e].v][e] = -1;
  }
  const auto lin = Matroid::linear(RationalField{}, inc, 6);
  for (std::uint64_t b = 0; b < 64; ++b)
    EXPECT_EQ(lin.is_independent(SubsetMask::from_bits(6, b)), g.is_independent(SubsetMask::from_bits(6, b)));
}

TEST(RankOf, Examples) {
  EXPECT_EQ(corpus::complete_graph(4).rank_of(SubsetMask::full(6)), 3u);
  EXPECT_EQ(Matroid::uniform(4, 2).rank_of(SubsetMask(4, {0, 1, 2})), 2u);
  const auto d = dual(k3());
  EXPECT_EQ(d.rank_of(d.ground_set()), 1u);
  // Oracle: the dual rank equals the size of any dual basis, which are the complements.
  const auto dual_bases = brute_bases(d);
  ASSERT_FALSE(dual_bases.empty());
  EXPECT_EQ(static_cast<std::size_t>(__builtin_popcountll(dual_bases.front())), 1u);
}

TEST(Derive, DualTruncationDirectSum) {
  EXPECT_EQ(bits_of(enumerate_bases(dual(k3()))), (std::vector<std::uint64_t>{1, 2, 4}));
  const auto t = derive_matroid(TruncationOf{Matroid::uniform(5, 3), 2});
  EXPECT_EQ(bits_of(enumerate_bases(t)), bits_of(enumerate_bases(Matroid::uniform(5, 2))));
  const auto ds = derive_matroid(DirectSumOf{{Matroid::uniform(2, 1), Matroid::uniform(2, 1)}});
  EXPECT_EQ(enumerate_bases(ds).size(), 4u);
  EXPECT_EQ(ds.rank(), 2u);
  EXPECT_THROW(truncation(Matroid::uniform(3, 1), 2), std::invalid_argument);
}

TEST(Derive, MinorContractDelete) {
  // K4 / {e01} \ {e23}: a multigraph on 3 vertices with 4 edges.
  const auto k4 = corpus::complete_graph(4);  // edges 01,02,03,12,13,23
  const auto mm = derive_matroid(MinorOf{k4, {0}, {5}});
  EXPECT_EQ(mm.size(), 4u);
  EXPECT_EQ(mm.rank(), 2u);
  // Survivors 02,03,12,13 -> 0..3; contracting 01 merges vertices 0 and 1,
  // so 02 and 12 become parallel, as do 03 and 13.
  EXPECT_FALSE(mm.is_independent(SubsetMask(4, {0, 2})));
  EXPECT_TRUE(mm.is_independent(SubsetMask(4, {0, 1})));
  // Oracle: bases of the minor are B \ C for bases B of K4 with C in B and B disjoint from D.
  std::set<std::uint64_t> expected;
  for (auto b : brute_bases(k4)) {
    if (!(b & 1u) || (b & 32u)) continue;
    std::uint64_t packed = 0;
    int out = 0;
    for (int i = 1; i <= 4; ++i, ++out)
      if (b >> i & 1u) packed |= std::uint64_t{1} << out;
    expected.insert(packed);
  }
  const auto got = bits_of(enumerate_bases(mm));
  EXPECT_EQ(std::set<std::uint64_t>(got.begin(), got.end()), expected);
  EXPECT_THROW(derive_matroid(MinorOf{k3(), {0, 1, 2}, {}}), std::invalid_argument);
  EXPECT_THROW(derive_matroid(MinorOf{k3(), {0}, {0}}), std::invalid_argument);
}

TEST(Enumerate, Examples) {
  EXPECT_EQ(enumerate_bases(k3()).size(), 3u);
  EXPECT_EQ(enumerate_bases(corpus::complete_graph(4)).size(), 16u);
  EXPECT_EQ(enumerate_bases(Matroid::uniform(4, 2)).size(), 6u);
  const auto b = enumerate_bases(Matroid::uniform(6, 3));
  EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
}

TEST(Enumerate, GuardRefusesAndOverrides) {
  EXPECT_THROW(enumerate_bases(Matroid::uniform(30, 2)), GuardExceeded);
  EnumerationGuard small;
  small.max_candidates = 1e5;
  EXPECT_THROW(enumerate_bases(Matroid::uniform(20, 10), small), GuardExceeded);  // C(20,10) = 184756
  EnumerationGuard force;
  force.override_limits = true;
  EXPECT_EQ(enumerate_bases(Matroid::uniform(30, 1), force).size(), 30u);
}

TEST(Validate, Examples) {
  const auto u = validate_matroid(Matroid::uniform(4, 2));
  EXPECT_TRUE(u.exhaustive);
  EXPECT_TRUE(u.passed());
  EXPECT_TRUE(validate_matroid(corpus::complete_graph(4)).passed());
  const auto bad = Matroid::from_bases(4, {SubsetMask(4, {0, 1}), SubsetMask(4, {2, 3})});
  const auto rep = validate_matroid(bad);
  ASSERT_FALSE(rep.passed());
  // Oracle: S = {0} and T = {2,3}: neither {0,2} nor {0,3} lies inside a listed basis.
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.kind == AxiomViolation::Kind::exchange) found = true;
  EXPECT_TRUE(found);
}

TEST(Validate, RandomizedForLargeGroundSets) {
  const auto rep = validate_matroid(Matroid::uniform(20, 5), 300, 7);
  EXPECT_FALSE(rep.exhaustive);
  EXPECT_TRUE(rep.passed());
}

// Properties over the enumerable corpus.

TEST(Properties, DualBasesAreComplements) {
  for (const auto& [name, m] : corpus::enumerable_corpus()) {
    const auto b = bits_of(enumerate_bases(m));
    const auto d = bits_of(enumerate_bases(dual(m)));
    ASSERT_EQ(b.size(), d.size()) << name;
    const std::uint64_t full = m.size() == 0 ? 0 : (~std::uint64_t{0} >> (64 - m.size()));
    std::set<std::uint64_t> bs(b.begin(), b.end());
    for (auto x : d) EXPECT_TRUE(bs.count(full & ~x)) << name;
  }
}

TEST(Properties, FullRankEqualsRankAndMatchesBruteForce) {
  for (const auto& [name, m] : corpus::enumerable_corpus()) {
    EXPECT_EQ(m.rank_of(m.ground_set()), m.rank()) << name;
    EXPECT_EQ(bits_of(enumerate_bases(m)), brute_bases(m)) << name;
  }
}

TEST(Properties, TruncationBasesAreIndependentSetsOfSizeK) {
  for (const auto& [name, m] : corpus::uniform_matroids_up_to(6)) {
    for (std::size_t k = 0; k <= m.rank(); ++k)
      EXPECT_EQ(bits_of(enumerate_bases(truncation(m, k))), bits_of(enumerate_independent_sets_of_size(m, k))) << name;
  }
  for (const auto& [name, m] : corpus::connected_graphs(4))
    for (std::size_t k = 0; k <= m.rank(); ++k)
      EXPECT_EQ(bits_of(enumerate_bases(truncation(m, k))), bits_of(enumerate_independent_sets_of_size(m, k))) << name;
}

TEST(Properties, DirectSumCountIsProduct) {
  const auto graphs = corpus::connected_graphs(4);
  for (std::size_t i = 0; i + 1 < graphs.size(); ++i) {
    const auto& a = graphs[i].matroid;
    const auto& b = graphs[i + 1].matroid;
    std::vector<Matroid> parts{a, b};
    EXPECT_EQ(enumerate_bases(direct_sum(parts)).size(), enumerate_bases(a).size() * enumerate_bases(b).size());
  }
}

TEST(Properties, GreedyRankIsOrderIndependent) {
  std::mt19937_64 rng(11);
  for (const auto& [name, m] : corpus::enumerable_corpus()) {
    std::vector<std::size_t> order(m.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int t = 0; t < 5; ++t) {
      std::uint64_t bits = m.size() == 0 ? 0 : (rng() >> (64 - m.size()));
      const auto s = SubsetMask::from_bits(m.size(), bits);
      std::shuffle(order.begin(), order.end(), rng);
      EXPECT_EQ(greedy_rank_in_order(m, s, order), m.rank_of(s)) << name;
    }
  }
}

TEST(Properties, CorpusSatisfiesAxioms) {
  for (const auto& [name, m] : corpus::enumerable_corpus())
    if (m.size() <= 10) EXPECT_TRUE(validate_matroid(m).passed()) << name;
}

TEST(Properties, ParallelExtensionAndLinearMinorsValidate) {
  const std::vector<std::size_t> mult{2, 0, 3};
  const auto pe = parallel_extension(k3(), mult);
  EXPECT_EQ(pe.size(), 5u);
  EXPECT_TRUE(validate_matroid(pe).passed());
  EXPECT_EQ(enumerate_bases(pe).size(), 6u);  // edges 01 and 02 survive, 2*3 choices
}

TEST(Corpus, GraphCountsUpToIsomorphism) {
  // Connected graphs on 1..5 vertices: 1, 1, 2, 6, 21.
  EXPECT_EQ(corpus::connected_graphs(3).size(), 2u);
  EXPECT_EQ(corpus::connected_graphs(4).size(), 6u);
  EXPECT_EQ(corpus::connected_graphs(5).size(), 21u);
}
