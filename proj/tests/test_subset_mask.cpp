#include <gtest/gtest.h>

#include <random>
#include <set>

#include "basiscount/rational.hpp"
#include "basiscount/subset_mask.hpp"
#include "basiscount/union_find.hpp"

using basiscount::SubsetMask;

TEST(SubsetMask, InsertEraseAndElements) {
  SubsetMask s(5, {4, 0, 2});
  EXPECT_EQ(s.count(), 3u);
  EXPECT_EQ(s.elements(), (std::vector<std::size_t>{0, 2, 4}));
  s.erase(2);
  EXPECT_FALSE(s.contains(2));
  EXPECT_EQ(s.to_string(), "{0,4}");
  EXPECT_THROW(s.insert(5), std::out_of_range);
  EXPECT_THROW((void)s.contains(7), std::out_of_range);
}

TEST(SubsetMask, SetAlgebraAcrossWords) {
  SubsetMask a(130, {0, 64, 129});
  SubsetMask b(130, {64, 100});
  EXPECT_EQ((a | b).count(), 4u);
  EXPECT_EQ((a & b).elements(), (std::vector<std::size_t>{64}));
  EXPECT_EQ((a - b).elements(), (std::vector<std::size_t>{0, 129}));
  EXPECT_EQ(a.complement().count(), 127u);
  EXPECT_TRUE((a & b).is_subset_of(a));
  EXPECT_EQ(SubsetMask::full(130).count(), 130u);
}

TEST(SubsetMask, OrderMatchesNumericValue) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t x = rng() >> 4, y = rng() >> 4;
    const auto a = SubsetMask::from_bits(60, x), b = SubsetMask::from_bits(60, y);
    EXPECT_EQ(a < b, x < y);
    EXPECT_EQ(a.to_bits(), x);
  }
  EXPECT_THROW(SubsetMask::from_bits(3, 8), std::out_of_range);
}

TEST(UnionFind, DetectsCycles) {
  basiscount::UnionFind uf(4);
  EXPECT_TRUE(uf.unite(0, 1));
  EXPECT_TRUE(uf.unite(2, 3));
  EXPECT_TRUE(uf.unite(1, 3));
  EXPECT_FALSE(uf.unite(0, 2));
  EXPECT_EQ(uf.find(0), uf.find(3));
}

TEST(Rational, ParsesAndRejects) {
  EXPECT_EQ(basiscount::parse_rational("3/6"), mpq_class(1, 2));
  EXPECT_EQ(basiscount::parse_rational("-7"), mpq_class(-7));
  EXPECT_THROW(basiscount::parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(basiscount::parse_rational("x"), std::invalid_argument);
  EXPECT_THROW(basiscount::parse_rational(""), std::invalid_argument);
  const mpq_class huge(mpz_class("1" + std::string(400, '0')));
  EXPECT_NEAR(basiscount::log_rational(huge), 400.0 * std::log(10.0), 1e-9);
}
