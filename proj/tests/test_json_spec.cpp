#include <gtest/gtest.h>

#include "basiscount/corpus.hpp"
#include "basiscount/enumerate.hpp"
#include "basiscount/json_spec.hpp"

using namespace basiscount;

namespace {

std::string error_path(const std::string& text) {
  try {
    parse_matroid(json::parse(text));
  } catch (const SpecError& e) {
    return e.path();
  }
  return "<no error>";
}

void expect_round_trip(const Matroid& m, const std::string& name) {
  const auto j = matroid_to_json(m);
  const auto again = parse_matroid(json::parse(j.dump()));
  EXPECT_EQ(again.size(), m.size()) << name;
  EXPECT_EQ(again.rank(), m.rank()) << name;
  EXPECT_EQ(matroid_to_json(again), j) << name;
  EXPECT_EQ(enumerate_bases(again), enumerate_bases(m)) << name;
}

}  // namespace

TEST(JsonSpec, ParsesEveryType) {
  EXPECT_EQ(parse_matroid(json::parse(R"({"type":"uniform","n":4,"r":2})")).rank(), 2u);
  const auto part = parse_matroid(json::parse(R"({"type":"partition","blocks":[{"elements":[0,1,2],"cap":1},{"elements":[3],"cap":1}]})"));
  EXPECT_EQ(part.size(), 4u);
  EXPECT_EQ(part.rank(), 2u);
  EXPECT_EQ(parse_matroid(json::parse(R"({"type":"graphic","vertices":4,"edges":[[0,1],[1,2],[2,3],[3,0]]})")).rank(), 3u);
  const auto lin = parse_matroid(json::parse(R"({"type":"linear","field":"rational","matrix":[[1,0,"1/2"],[0,1,"1/3"]]})"));
  EXPECT_EQ(lin.size(), 3u);
  EXPECT_EQ(lin.rank(), 2u);
  const auto lp = parse_matroid(json::parse(R"({"type":"linear","field":{"prime":2},"matrix":[[1,0,1],[0,1,1]]})"));
  EXPECT_FALSE(lp.is_independent(SubsetMask::full(3)));
  EXPECT_EQ(parse_matroid(json::parse(R"({"type":"bases","n":4,"bases":[[0,1],[0,2]]})")).rank(), 2u);
  EXPECT_EQ(parse_matroid(json::parse(R"({"type":"dual","of":{"type":"uniform","n":5,"r":2}})")).rank(), 3u);
  EXPECT_EQ(parse_matroid(json::parse(R"({"type":"truncation","of":{"type":"uniform","n":5,"r":3},"k":2})")).rank(), 2u);
  const auto mn = parse_matroid(json::parse(
      R"({"type":"minor","of":{"type":"uniform","n":5,"r":3},"contract":[0],"delete":[4]})"));
  EXPECT_EQ(mn.size(), 3u);
  EXPECT_EQ(mn.rank(), 2u);
  const auto ds = parse_matroid(json::parse(
      R"({"type":"direct_sum","parts":[{"type":"uniform","n":2,"r":1},{"type":"uniform","n":2,"r":1}]})"));
  EXPECT_EQ(enumerate_bases(ds).size(), 4u);
}

TEST(JsonSpec, ErrorsNameThePath) {
  EXPECT_EQ(error_path(R"({"n":4})"), "$.type");
  EXPECT_EQ(error_path(R"({"type":"uniform","n":4})"), "$.r");
  EXPECT_EQ(error_path(R"({"type":"uniform","n":4,"r":5})"), "$.r");
  EXPECT_EQ(error_path(R"({"type":"graphic","vertices":3,"edges":[[0,1],[1,2],[2,7]]})"), "$.edges[2][1]");
  EXPECT_EQ(error_path(R"({"type":"graphic","vertices":3,"edges":[[0,1],[1]]})"), "$.edges[1]");
  EXPECT_EQ(error_path(R"({"type":"partition","blocks":[{"elements":[0],"cap":1},{"elements":[-1],"cap":1}]})"),
            "$.blocks[1].elements[0]");
  EXPECT_EQ(error_path(R"({"type":"linear","field":"rational","matrix":[[1,2],[1,"x"]]})"), "$.matrix[1][1]");
  EXPECT_EQ(error_path(R"({"type":"linear","field":{"prime":4},"matrix":[[1]]})"), "$");
  EXPECT_EQ(error_path(R"({"type":"direct_sum","parts":[{"type":"uniform","n":2,"r":1},{"type":"bogus"}]})"),
            "$.parts[1].type");
  EXPECT_EQ(error_path(R"({"type":"truncation","of":{"type":"uniform","n":3,"r":1},"k":2})"), "$.k");
  EXPECT_EQ(error_path(R"({"type":"minor","of":{"type":"uniform","n":3,"r":1},"contract":[0,1]})"), "$");
  EXPECT_EQ(error_path(R"({"type":"bases","n":3,"bases":[[0,1],[2]]})"), "$.bases[1]");
}

TEST(JsonSpec, Weights) {
  const auto w = parse_weights(json::parse(R"([1, "3/4", 0, 2.5])"));
  EXPECT_EQ(w.exact()[1], mpq_class(3, 4));
  EXPECT_EQ(w.exact()[3], mpq_class(5, 2));
  EXPECT_THROW(parse_weights(json::parse(R"([1, -2])")), SpecError);
  try {
    parse_weights(json::parse(R"([1, "a/b"])"));
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.path(), "$[1]");
  }
}

TEST(JsonSpec, Files) {
  const std::string dir = BASISCOUNT_DATA_DIR;
  EXPECT_EQ(load_matroid(dir + "/k4.json").rank(), 3u);
  try {
    load_matroid(dir + "/missing.json");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.json"), std::string::npos);
  }
}

TEST(Properties, RoundTripCorpus) {
  for (const auto& [name, m] : corpus::enumerable_corpus()) expect_round_trip(m, name);
  for (const auto& [name, a, b] : corpus::random_partition_pairs(10, 4)) {
    expect_round_trip(a, name);
    expect_round_trip(b, name);
  }
  std::vector<std::vector<mpq_class>> a = {{1, 0, mpq_class(1, 2), 2}, {0, 1, mpq_class(-1, 3), 2}};
  expect_round_trip(Matroid::linear(RationalField{}, a, 4), "linear-q");
  expect_round_trip(Matroid::linear(PrimeField{5}, a, 4), "linear-f5");
  expect_round_trip(Matroid::from_bases(4, {SubsetMask(4, {0, 1}), SubsetMask(4, {2, 3})}), "bases");
  expect_round_trip(minor(corpus::complete_graph(4), SubsetMask(6, {0}), SubsetMask(6, {5})), "minor");
  std::vector<Matroid> parts{Matroid::uniform(3, 1), corpus::complete_graph(3)};
  expect_round_trip(direct_sum(parts), "direct-sum");
  const std::vector<std::size_t> mult{2, 0, 1};
  expect_round_trip(parallel_extension(corpus::complete_graph(3), mult), "parallel");
}
