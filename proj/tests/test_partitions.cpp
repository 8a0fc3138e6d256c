#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "symkit/partitions.hpp"

using namespace symkit;
using testkit::Rng;

namespace {

std::vector<PartitionPtr> layouts() {
  return {pairs_partition(),           a0_partition(),           intervals_growing_partition(),
          intervals_shuffled_partition(), sparse_growing_partition(), singletons_partition()};
}

}  // namespace

TEST_CASE("blocks cover the points exactly once") {
  for (const auto& a : layouts()) {
    CAPTURE(a->name());
    std::map<Point, int> seen;
    BlockId prev = -1;
    for (std::int64_t r = 0; r < 40; ++r) {
      BlockId b = a->block_at(r);
      CHECK(b > prev);
      CHECK(a->block_rank(b) == r);
      prev = b;
      auto m = a->members(b);
      CHECK(m.front() == b);
      CHECK(std::is_sorted(m.begin(), m.end()));
      for (Point x : m) {
        ++seen[x];
        CHECK(a->block_of(x) == b);
      }
    }
    for (Point x = 0; x < 30; ++x) CHECK(seen[x] == 1);
  }
}

TEST_CASE("block layouts") {
  CHECK(intervals_growing_partition()->members(3) == std::vector<Point>{3, 4, 5});
  CHECK(a0_partition()->members(4) == std::vector<Point>{4, 5});
  CHECK(a0_partition()->members(6) == std::vector<Point>{6});
  CHECK(intervals_shuffled_partition()->members(0) == std::vector<Point>{0, 1});
  CHECK(intervals_shuffled_partition()->members(2) == std::vector<Point>{2});
  auto par = parity_partition();
  CHECK(par->block_of(9) == 1);
  CHECK(par->members(0, 5) == std::vector<Point>{0, 2, 4, 6, 8});
}

TEST_CASE("classification by profile") {
  CHECK(classify_partition(*pairs_partition()).tag == PartitionClassTag::Tag::InQ);
  CHECK(classify_partition(*a0_partition()).tag == PartitionClassTag::Tag::InQ);
  CHECK(classify_partition(*intervals_growing_partition()).tag == PartitionClassTag::Tag::InP);
  CHECK(classify_partition(*sparse_growing_partition()).tag == PartitionClassTag::Tag::InP);
  CHECK(classify_partition(*singletons_partition()).tag == PartitionClassTag::Tag::Neither);
  CHECK(classify_partition(*parity_partition()).tag == PartitionClassTag::Tag::Neither);
  auto liar = layout_partition("liar", [](std::int64_t) { return 3; }, Profile::bounded(2, std::nullopt));
  CHECK_THROWS_AS(classify_partition(*liar), Error);
}

TEST_CASE("explicit partitions from json") {
  nlohmann::json spec = {{"blocks", {{1, 4}, {2, 3, 7}}},
                         {"rest", "singletons"},
                         {"profile", {{"kind", "bounded"}, {"bound", 3}, {"nonsingletons", 2}}}};
  auto a = explicit_partition(spec);
  CHECK(a->block_of(7) == 2);
  CHECK(a->block_of(4) == 1);
  CHECK(a->block_of(5) == 5);
  CHECK(classify_partition(*a).tag == PartitionClassTag::Tag::Neither);
  nlohmann::json bad = {{"blocks", {{1, 2}, {2, 3}}}, {"profile", {{"kind", "bounded"}, {"bound", 2}}}};
  CHECK_THROWS_AS(explicit_partition(bad), Error);

  std::string path = (std::filesystem::temp_directory_path() / "symkit_explicit_partition.json").string();
  std::ofstream(path) << spec.dump();
  CHECK(parse_partition("partition:explicit@" + path)->block_of(3) == 2);
  CHECK_THROWS_AS(parse_partition("partition:nope"), Error);
}

TEST_CASE("stabilizer membership") {
  Rng r(31);
  for (const auto& a : layouts()) {
    for (int t = 0; t < 10; ++t) {
      auto f = testkit::random_block_preserving(r, *a, 120);
      CHECK(stabilizer_membership(f, *a, 100).answer == Tri::Yes);
    }
  }
  auto ig = intervals_growing_partition();
  auto leak = Permutation::transposition(0, 1);
  auto rep = stabilizer_membership(leak, *ig, 50);
  CHECK(rep.answer == Tri::No);
  CHECK(*rep.witness_block == 0);
  CHECK(*first_unpreserved_block(leak, *ig, 50) == 0);
  // Block-preserving rule without certificate: probing cannot settle it.
  auto sp = Permutation::builtin("swap-pairs", {{"offset", "0"}}).with_label("plain");
  CHECK(stabilizer_membership(sp, *pairs_partition(), 50).answer != Tri::No);
}

TEST_CASE("conjugator carries blocks onto blocks of equal size") {
  auto a = intervals_growing_partition(), b = intervals_shuffled_partition();
  auto c = conjugator(a, b, 12);
  for (std::int64_t r = 0; r < 10; ++r) {
    auto m = a->members(a->block_at(r));
    BlockId target = b->block_of(c(m.front()));
    auto tm = b->members(target);
    CHECK(tm.size() == m.size());
    for (Point x : m) {
      CHECK(b->block_of(c(x)) == target);
      CHECK(c.apply_inverse(c(x)) == x);
    }
  }
  CHECK_THROWS_AS(conjugator(parity_partition(), a, 4), Error);
}
