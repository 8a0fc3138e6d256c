#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "symkit/perm.hpp"

namespace symkit {

// Least breakpoints 0 = a(0) < a(1) < ... such that [0, a(i-1)) and its image and
// preimage under f all lie inside [0, a(i)). Extended on demand.
class BreakpointSequence {
 public:
  explicit BreakpointSequence(Permutation f);
  Point at(std::size_t i) const;
  std::vector<Point> prefix(std::size_t count) const;
  // The i with a(i) <= x < a(i+1).
  std::size_t interval_of(Point x) const;
  const Permutation& target() const { return f_; }

 private:
  void extend() const;
  Permutation f_;
  mutable std::mutex mu_;
  mutable std::vector<Point> a_{0};
  mutable Point scanned_ = 0;
  mutable Point reach_ = 0;  // 1 + max image/preimage of [0, scanned_)
};

struct Breakpoints {
  std::vector<Point> a;
};
Breakpoints breakpoints(const Permutation& f, std::size_t count);

// Involution exchanging, inside each [a(2i), a(2i+2)), the points that f carries up across
// a(2i+1) with those it carries down, matched in increasing order of source point.
Permutation crosser_pairing(const Permutation& f, std::function<Point(std::size_t)> a,
                            std::function<std::size_t(Point)> interval_of, std::string label);

struct CrossingCount {
  Point boundary;
  std::int64_t up = 0;
  std::int64_t down = 0;
};
// Crossers of each interior boundary a(1..) of the given breakpoint list.
std::vector<CrossingCount> crossing_counts(const Permutation& f, const std::vector<Point>& a);

struct LocalDecomposition {
  Permutation g;  // preserves each [a(2i), a(2i+2))
  Permutation h;  // preserves each [a(2i-1), a(2i+1)); g then h equals f
  std::shared_ptr<const BreakpointSequence> breaks;
};
LocalDecomposition decompose_local(const Permutation& f, std::size_t count);

struct LocalityReport {
  Tri answer = Tri::Unknown;
  bool at_budget = false;               // answer rests on probing, not a certificate
  std::vector<Point> invariant_prefixes;  // j with [0, j) mapped onto itself
  std::optional<Point> stuck_at;        // for No: an i with no invariant j in (i, probe]
  std::string detail;
};
LocalityReport is_local(const Permutation& f, Point probe_prefix);

}  // namespace symkit
