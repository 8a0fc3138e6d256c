#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "symkit/partitions.hpp"
#include "symkit/perm.hpp"

namespace testkit {

using symkit::Permutation;
using symkit::Point;

// splitmix64; stable across platforms so frozen expectations stay valid.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::int64_t below(std::int64_t n) { return static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(n)); }
  std::int64_t range(std::int64_t lo, std::int64_t hi) { return lo + below(hi - lo); }
  bool coin() { return next() & 1; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(below(static_cast<std::int64_t>(i)))]);
  }

 private:
  std::uint64_t s_;
};

inline Permutation from_images(const std::vector<Point>& domain, const std::vector<Point>& image) {
  std::vector<std::pair<Point, Point>> m;
  for (std::size_t i = 0; i < domain.size(); ++i) m.emplace_back(domain[i], image[i]);
  return Permutation::from_map(m);
}

// Uniform permutation of [0, n).
inline Permutation random_finite(Rng& r, Point n) {
  std::vector<Point> d(static_cast<std::size_t>(n));
  std::iota(d.begin(), d.end(), 0);
  auto img = d;
  r.shuffle(img);
  return from_images(d, img);
}

// A single cycle through the given points in random order.
inline Permutation random_cycle(Rng& r, std::vector<Point> pts) {
  r.shuffle(pts);
  return Permutation::cycles({pts});
}

// Shuffles consecutive windows of length <= width inside [0, n): displacement < width.
inline Permutation random_local(Rng& r, Point n, Point width) {
  std::vector<Point> d, img;
  for (Point lo = 0; lo < n;) {
    Point len = std::min<Point>(n - lo, 1 + r.below(width));
    std::vector<Point> w(static_cast<std::size_t>(len));
    std::iota(w.begin(), w.end(), lo);
    auto s = w;
    r.shuffle(s);
    d.insert(d.end(), w.begin(), w.end());
    img.insert(img.end(), s.begin(), s.end());
    lo += len;
  }
  return from_images(d, img);
}

// Shuffles every block of `a` lying inside [0, window); certified for `a`.
inline Permutation random_block_preserving(Rng& r, const symkit::Partition& a, Point window) {
  std::vector<Point> d, img;
  for (std::int64_t k = 0;; ++k) {
    auto b = a.block_at(k);
    if (b >= window) break;
    auto m = a.members(b);
    if (m.back() >= window) break;
    auto s = m;
    r.shuffle(s);
    d.insert(d.end(), m.begin(), m.end());
    img.insert(img.end(), s.begin(), s.end());
  }
  return from_images(d, img).with_block_certificate(a.name());
}

// Word of two or three rules with certified standard-omega displacement.
inline Permutation random_bounded_rule(Rng& r) {
  std::vector<Permutation> fs;
  int n = 2 + static_cast<int>(r.below(2));
  for (int i = 0; i < n; ++i) {
    switch (r.below(3)) {
      case 0:
        fs.push_back(Permutation::builtin("rotate-blocks", {{"size", std::to_string(r.range(2, 7))},
                                                            {"by", std::to_string(r.range(1, 6))}}));
        break;
      case 1: fs.push_back(Permutation::builtin("reverse-blocks", {{"size", std::to_string(r.range(2, 9))}})); break;
      default: fs.push_back(Permutation::builtin("swap-pairs", {{"offset", std::to_string(r.below(5))}})); break;
    }
  }
  return Permutation::word(fs);
}

// Brute-force parity: count cycles of the finite map.
inline bool odd_by_cycles(const Permutation& p) {
  auto sup = symkit::support_of(p);
  std::set<Point> seen;
  std::size_t transpositions = 0;
  for (Point x : sup) {
    if (seen.count(x)) continue;
    std::size_t len = 0;
    for (Point y = x; !seen.count(y); y = p.apply(y)) {
      seen.insert(y);
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 1;
}

// Closure of generators acting on [0, n) as image vectors.
inline std::set<std::vector<int>> closure(const std::vector<std::vector<int>>& gens, int n) {
  std::vector<int> id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> group{id};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& e : frontier)
      for (const auto& g : gens) {
        std::vector<int> c(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) c[i] = g[static_cast<std::size_t>(e[i])];
        if (group.insert(c).second) next.push_back(c);
      }
    frontier = std::move(next);
  }
  return group;
}

inline bool odd_vector(const std::vector<int>& p) {
  std::size_t inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) inv += p[i] > p[j];
  return inv % 2 == 1;
}

inline Permutation vector_perm(const std::vector<int>& p) {
  std::vector<std::pair<Point, Point>> m;
  for (std::size_t i = 0; i < p.size(); ++i) m.emplace_back(static_cast<Point>(i), p[i]);
  return Permutation::from_map(m);
}

}  // namespace testkit
