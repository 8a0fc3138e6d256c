#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "symkit/trees.hpp"

using namespace symkit;

namespace {

TreeState binary_a0(std::size_t depth) {
  TreeOptions o;
  o.mode = TreeMode::Binary;
  o.depth = depth;
  return build_tree(*partition_stabilizer_oracle(a0_partition()), o);
}

}  // namespace

TEST_CASE("oracles answer orbits") {
  auto full = full_group_oracle();
  auto o = full->orbit({0, 1}, 2, 5);
  CHECK_FALSE(o.complete);
  CHECK(o.points.size() == 5);
  CHECK(trivial_group_oracle()->orbit({}, 7, 5).points == std::vector<Point>{7});

  auto pairs = partition_stabilizer_oracle(pairs_partition());
  CHECK(pairs->orbit({}, 4, 10).points == std::vector<Point>{4, 5});
  CHECK(pairs->orbit({5}, 4, 10).points == std::vector<Point>{4});
  auto act = pairs->act({}, 4, 5);
  REQUIRE(act);
  CHECK((*act)(4) == 5);
  CHECK_FALSE(pairs->act({}, 4, 6).has_value());

  auto fin = finite_generated_oracle({Permutation::cycles({{0, 1, 2}}), Permutation::cycles({{2, 3}})});
  auto orb = fin->orbit({}, 0, 10);
  CHECK(orb.complete);
  CHECK(orb.points == std::vector<Point>{0, 1, 2, 3});
  CHECK(fin->orbit({3}, 0, 10).points == std::vector<Point>{0, 1, 2});
  auto a = fin->act({}, 0, 3);
  REQUIRE(a);
  CHECK((*a)(0) == 3);
}

TEST_CASE("binary tree branches realize every bit pattern") {
  auto t = binary_a0(5);
  CHECK(t.nodes.size() == 63);
  CHECK(check_tree(t).pass);
  for (std::size_t mask = 0; mask < 32; ++mask) {
    std::vector<std::size_t> choice;
    for (std::size_t i = 0; i < 5; ++i) choice.push_back((mask >> i) & 1);
    auto g = limit(branch_sequence(t, choice), 8);
    for (std::size_t i = 0; i < 5; ++i) {
      Point want = choice[i] ? t.betas[i] : t.alphas[i];
      CHECK(g(t.alphas[i]) == want);
    }
    CHECK(verify_window(g, 64).pass);
  }
}

TEST_CASE("inf-orbit trees over the full group") {
  TreeOptions o;
  o.depth = 6;
  auto t = build_tree(*full_group_oracle(), o);
  auto c = check_tree(t);
  CHECK(c.pass);
  CHECK(c.pairs_checked > 0);
  for (std::size_t i = 0; i + 1 < t.levels.size(); ++i) CHECK(t.levels[i].size() <= t.levels[i + 1].size());
}

TEST_CASE("unbounded-orbit mode needs large orbits") {
  TreeOptions o;
  o.mode = TreeMode::UnboundedOrbits;
  o.depth = 3;
  CHECK_THROWS_AS(build_tree(*partition_stabilizer_oracle(pairs_partition()), o), Error);
  auto t = build_tree(*partition_stabilizer_oracle(intervals_growing_partition()), o);
  CHECK(check_tree(t).pass);
}

TEST_CASE("tree json and mode names") {
  auto t = binary_a0(2);
  auto j = t.to_json();
  CHECK(j.contains("alphas"));
  CHECK(parse_tree_mode("binary") == TreeMode::Binary);
  CHECK(std::string(to_string(TreeMode::InfOrbits)) == "inf-orbits");
  CHECK_THROWS_AS(parse_tree_mode("bushy"), Error);
}

TEST_CASE("e-tree level sizes over injective tuples") {
  auto d = injective_tuples_family();
  auto t = build_e_tree(*d, ETreeMode::Fresh, {0, 1, 3, 6}, 3);
  REQUIRE(t.levels.size() == 4);
  CHECK(t.levels[0].size() == 1);
  CHECK(t.levels[1].size() == 1);
  CHECK(t.levels[2].size() == 2);
  CHECK(t.levels[3].size() == 12);
  // Tuples are injective and extend their parents.
  for (std::size_t m = 1; m < t.levels.size(); ++m)
    for (const auto& n : t.levels[m]) {
      std::set<Point> s(n.tuple.begin(), n.tuple.end());
      CHECK(s.size() == n.tuple.size());
      const auto& p = t.levels[m - 1][*n.parent].tuple;
      CHECK(std::equal(p.begin(), p.end(), n.tuple.begin()));
    }
}

TEST_CASE("realized tuples carry pivots onto the tuple") {
  auto d = injective_tuples_family();
  std::vector<Point> tuple{5, 2, 9, 0};
  auto g = d->realize(tuple);
  for (std::size_t i = 0; i < tuple.size(); ++i) CHECK(g(d->pivot(i)) == tuple[i]);
  auto blocks = block_choice_family(intervals_growing_partition());
  auto h = blocks->realize({0, 2, 4, 8});
  CHECK(h(blocks->pivot(2)) == 4);
  CHECK(stabilizer_membership(h, *intervals_growing_partition(), 100).answer == Tri::Yes);
}

TEST_CASE("the conjugating permutation intertwines pi") {
  auto d = injective_tuples_family();
  auto t = build_e_tree(*d, ETreeMode::Fresh, {0, 2, 4, 6, 8}, 4);
  auto s = build_s(t);
  auto rep = verify_conjugation(t, s, *d, {1, 0, 3, 2, 4, 5, 7, 6}, 8);
  CHECK(rep.pass);
  CHECK_FALSE(rep.checked.empty());
  CHECK_THROWS_AS(verify_conjugation(t, s, *d, {2, 1, 0, 3}, 4), Error);
}

TEST_CASE("jump mode over block choices") {
  auto d = block_choice_family(intervals_growing_partition());
  auto t = build_e_tree(*d, ETreeMode::Jump, {0, 1, 3}, 2);
  CHECK(t.jumps == std::vector<std::size_t>{0, 4, 5});
  CHECK(t.round_bounds == std::vector<std::uint64_t>{1, 5});
  auto s = build_s(t);
  CHECK(verify_conjugation(t, s, *d, {0, 2, 1}, 3).pass);
}

TEST_CASE("tree family from a built tree") {
  auto tree = std::make_shared<TreeState>(binary_a0(4));
  auto d = tree_family(tree);
  CHECK(d->branching(1) == 2u);
  CHECK(d->pivot(0) == tree->alphas[0]);
  auto ext = d->extensions({}, 10);
  CHECK(ext.size() == 2);
  auto g = d->realize({ext[1]});
  CHECK(g(d->pivot(0)) == ext[1]);
}
