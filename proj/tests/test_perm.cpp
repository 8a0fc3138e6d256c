#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "symkit/perm.hpp"

using namespace symkit;
using testkit::Rng;

TEST_CASE("cycles evaluate in both directions") {
  auto p = Permutation::cycles({{0, 3, 5}, {1, 2}});
  CHECK(p(0) == 3);
  CHECK(p(3) == 5);
  CHECK(p(5) == 0);
  CHECK(p(1) == 2);
  CHECK(p(7) == 7);
  CHECK(p.apply_inverse(3) == 0);
  CHECK(*p.support_bound() == 6);
  CHECK(support_of(p) == std::vector<Point>{0, 1, 2, 3, 5});
}

TEST_CASE("words apply the leftmost factor first") {
  auto a = Permutation::transposition(0, 1);
  auto b = Permutation::transposition(1, 2);
  auto ab = a.then(b);
  CHECK(ab(0) == 2);
  CHECK(ab(1) == 0);
  CHECK(ab(2) == 1);
}

TEST_CASE("from_map rejects non-bijections") {
  CHECK_THROWS_AS(Permutation::from_map({{0, 1}, {1, 1}}), Error);
  CHECK_THROWS_AS(Permutation::from_map({{0, 1}}), Error);
}

TEST_CASE("group laws on random finite permutations") {
  Rng r(11);
  for (int t = 0; t < 100; ++t) {
    auto f = testkit::random_finite(r, 20);
    auto g = testkit::random_finite(r, 20);
    auto h = testkit::random_finite(r, 20);
    auto lhs = f.then(g).then(h);
    auto rhs = f.then(g.then(h));
    for (Point x = 0; x < 25; ++x) {
      CHECK(lhs(x) == rhs(x));
      CHECK(f.then(f.inverse())(x) == x);
      CHECK(f.inverse().then(f)(x) == x);
      CHECK(to_cycles(lhs)(x) == lhs(x));
    }
  }
}

TEST_CASE("builtin rules and their certificates") {
  auto s = Permutation::builtin("shift-z", {{"k", "3"}});
  CHECK(n_to_z(s(z_to_n(-5))) == -2);
  CHECK(s.displacement_bound()->bound == 3);
  CHECK(s.displacement_bound()->metric == "standard-z");
  auto sp = Permutation::builtin("swap-pairs", {{"offset", "0"}});
  CHECK(sp(4) == 5);
  CHECK(sp(5) == 4);
  auto rot = Permutation::builtin("rotate-blocks", {{"size", "4"}, {"by", "1"}});
  CHECK(rot(3) == 0);
  CHECK(rot(4) == 5);
  CHECK(rot.displacement_bound()->bound == 3);
  for (Point x = 0; x < 200; ++x) {
    CHECK(rot.inverse()(rot(x)) == x);
    CHECK(sp(sp(x)) == x);
  }
}

TEST_CASE("z embedding is a bijection") {
  for (std::int64_t z = -500; z <= 500; ++z) CHECK(n_to_z(z_to_n(z)) == z);
  for (Point n = 0; n < 1000; ++n) CHECK(z_to_n(n_to_z(n)) == n);
}

TEST_CASE("text and json round trips") {
  Rng r(5);
  for (int t = 0; t < 30; ++t) {
    auto f = testkit::random_bounded_rule(r).then(testkit::random_finite(r, 12));
    auto g = parse_permutation(f.to_string());
    auto h = permutation_from_json(f.to_json());
    for (Point x = 0; x < 100; ++x) {
      CHECK(g(x) == f(x));
      CHECK(h(x) == f(x));
    }
  }
  CHECK_THROWS_AS(parse_permutation("cycles:(1 2"), Error);
  CHECK_THROWS_AS(parse_permutation("nonsense"), Error);
}

TEST_CASE("parity is a homomorphism and matches cycle counting") {
  Rng r(7);
  for (int t = 0; t < 200; ++t) {
    auto f = testkit::random_finite(r, 9);
    auto g = testkit::random_finite(r, 9);
    bool pf = parity(f) == Parity::Odd, pg = parity(g) == Parity::Odd;
    CHECK(pf == testkit::odd_by_cycles(f));
    CHECK((parity(f.then(g)) == Parity::Odd) == (pf != pg));
  }
}

TEST_CASE("memoized permutations agree with the original") {
  Rng r(3);
  auto f = testkit::random_bounded_rule(r);
  auto m = f.memoized();
  for (Point x = 0; x < 300; ++x) {
    CHECK(m(x) == f(x));
    CHECK(m.apply_inverse(x) == f.apply_inverse(x));
  }
}

TEST_CASE("window verification finds a broken rule") {
  auto bad = Permutation::rule(
      "bad", [](Point x) -> std::optional<Point> { return x / 2; },
      [](Point x) -> std::optional<Point> { return 2 * x; });
  CHECK_FALSE(verify_window(bad, 10).pass);
  CHECK(verify_window(Permutation::builtin("swap-pairs", {{"offset", "1"}}), 50).pass);
}

TEST_CASE("limits of convergent sequences") {
  // Successive transpositions pushing 0 further out do not converge; constant tail does.
  auto seq = std::make_shared<ConvergentSequence>([](std::size_t j) {
    ConvergentSequence::Term t;
    t.g = Permutation::transposition(0, 1);
    for (Point i = 0; i < static_cast<Point>(j) + 2; ++i) t.gamma.push_back(i);
    return t;
  });
  auto lim = limit(seq, 6);
  CHECK(lim(0) == 1);
  CHECK(lim(1) == 0);
  CHECK(lim(2) == 2);

  auto bad = std::make_shared<ConvergentSequence>([](std::size_t j) {
    ConvergentSequence::Term t;
    t.g = Permutation::transposition(0, static_cast<Point>(j) + 1);
    for (Point i = 0; i <= static_cast<Point>(j); ++i) t.gamma.push_back(i);
    return t;
  });
  CHECK_THROWS_AS(bad->verify_to(4), Error);
}

TEST_CASE("step budget guards runaway evaluation") {
  auto loop = Permutation::rule(
      "slow", [](Point x) -> std::optional<Point> { return x; },
      [](Point x) -> std::optional<Point> { return x; });
  auto prev = step_budget();
  set_step_budget(3);
  std::vector<Permutation> many(10, loop);
  CHECK_THROWS_AS(Permutation::word(many)(0), Error);
  set_step_budget(prev);
  CHECK(Permutation::word(many)(0) == 0);
}
