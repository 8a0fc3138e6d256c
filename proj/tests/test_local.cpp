#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "symkit/local_decomp.hpp"

using namespace symkit;
using testkit::Rng;

namespace {

// Scans upward for the least admissible next breakpoint.
std::vector<Point> brute_breakpoints(const Permutation& f, std::size_t count) {
  std::vector<Point> a{0};
  while (a.size() < count) {
    Point prev = a.back();
    for (Point n = prev + 1;; ++n) {
      bool ok = true;
      for (Point x = 0; x < prev && ok; ++x) ok = f(x) < n && f.apply_inverse(x) < n;
      if (ok) {
        a.push_back(n);
        break;
      }
    }
  }
  return a;
}

void check_decomposition(const Permutation& f, Point window) {
  auto d = decompose_local(f, 64);
  for (Point x = 0; x < window; ++x) {
    REQUIRE(d.g.then(d.h)(x) == f(x));
    auto i = d.breaks->interval_of(x);
    CHECK(d.breaks->interval_of(d.g(x)) / 2 == i / 2);
    CHECK((d.breaks->interval_of(d.h(x)) + 1) / 2 == (i + 1) / 2);
  }
}

}  // namespace

TEST_CASE("breakpoints match the brute-force scan") {
  Rng r(41);
  for (int t = 0; t < 40; ++t) {
    auto f = testkit::random_finite(r, r.range(2, 40));
    CHECK(breakpoints(f, 12).a == brute_breakpoints(f, 12));
  }
  for (int t = 0; t < 10; ++t) {
    auto f = testkit::random_bounded_rule(r);
    CHECK(breakpoints(f, 20).a == brute_breakpoints(f, 20));
  }
}

TEST_CASE("small worked decomposition") {
  auto f = Permutation::cycles({{0, 1, 2}});
  auto d = decompose_local(f, 8);
  CHECK(d.breaks->prefix(4) == std::vector<Point>{0, 1, 3, 4});
  CHECK(d.g(0) == 2);
  CHECK(d.g(1) == 1);
  CHECK(d.h(1) == 2);
  check_decomposition(f, 20);
}

TEST_CASE("decomposition of random local permutations") {
  Rng r(43);
  for (int t = 0; t < 40; ++t) check_decomposition(testkit::random_finite(r, r.range(1, 120)), 300);
  for (int t = 0; t < 10; ++t) check_decomposition(testkit::random_bounded_rule(r), 300);
  for (int t = 0; t < 10; ++t) check_decomposition(testkit::random_local(r, 200, 9), 300);
  check_decomposition(Permutation::builtin("shift-z", {{"k", "2"}}), 300);
}

TEST_CASE("both factors are involutions on crossers") {
  Rng r(47);
  auto f = testkit::random_finite(r, 50);
  auto d = decompose_local(f, 40);
  for (Point x = 0; x < 100; ++x) CHECK(d.g(d.g(x)) == x);
}

TEST_CASE("crossing counts balance at every breakpoint") {
  Rng r(53);
  for (int t = 0; t < 20; ++t) {
    auto f = testkit::random_finite(r, 60);
    auto a = breakpoints(f, 10).a;
    for (const auto& c : crossing_counts(f, a)) {
      CHECK(c.up == c.down);
      std::int64_t up = 0;
      for (Point x = 0; x < c.boundary; ++x) up += f(x) >= c.boundary;
      CHECK(up == c.up);
    }
  }
}

TEST_CASE("locality") {
  auto fin = is_local(Permutation::cycles({{3, 9}}), 20);
  CHECK(fin.answer == Tri::Yes);
  CHECK_FALSE(fin.at_budget);
  CHECK(fin.invariant_prefixes.front() == 10);

  auto pairs = is_local(Permutation::builtin("swap-pairs", {{"offset", "0"}}), 40);
  CHECK(pairs.answer == Tri::Yes);
  CHECK(pairs.at_budget);
  CHECK(pairs.invariant_prefixes.size() == 20);

  auto shift = is_local(Permutation::builtin("shift-z", {{"k", "1"}}), 40);
  CHECK(shift.answer == Tri::No);
  CHECK(shift.stuck_at.has_value());

  auto certified = Permutation::builtin("rotate-blocks", {{"size", "5"}, {"by", "2"}})
                       .with_locality_certificate([](Point n) {
                         std::vector<Point> out;
                         for (Point j = 5; j <= n; j += 5) out.push_back(j);
                         return out;
                       });
  auto c = is_local(certified, 30);
  CHECK(c.answer == Tri::Yes);
  CHECK_FALSE(c.at_budget);

  auto lying = Permutation::builtin("rotate-blocks", {{"size", "5"}, {"by", "2"}})
                   .with_locality_certificate([](Point) { return std::vector<Point>{3}; });
  CHECK(is_local(lying, 30).answer == Tri::No);
}
