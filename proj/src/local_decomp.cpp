#include "symkit/local_decomp.hpp"

#include <algorithm>
#include <map>

namespace symkit {

BreakpointSequence::BreakpointSequence(Permutation f) : f_(std::move(f)) {}

void BreakpointSequence::extend() const {
  Point prev = a_.back();
  while (scanned_ < prev) {
    reach_ = std::max({reach_, f_.apply(scanned_) + 1, f_.apply_inverse(scanned_) + 1});
    ++scanned_;
  }
  a_.push_back(std::max(prev + 1, reach_));
}

Point BreakpointSequence::at(std::size_t i) const {
  std::lock_guard<std::mutex> lock(mu_);
  while (a_.size() <= i) extend();
  return a_[i];
}

std::vector<Point> BreakpointSequence::prefix(std::size_t count) const {
  std::lock_guard<std::mutex> lock(mu_);
  while (a_.size() < count) extend();
  return {a_.begin(), a_.begin() + static_cast<std::ptrdiff_t>(count)};
}

std::size_t BreakpointSequence::interval_of(Point x) const {
  std::lock_guard<std::mutex> lock(mu_);
  while (a_.back() <= x) extend();
  return static_cast<std::size_t>(std::upper_bound(a_.begin(), a_.end(), x) - a_.begin()) - 1;
}

Breakpoints breakpoints(const Permutation& f, std::size_t count) {
  BreakpointSequence seq(f);
  Breakpoints b{seq.prefix(count)};
  for (std::size_t i = 1; i < b.a.size(); ++i) {
    for (Point x = 0; x < b.a[i - 1]; ++x)
      if (f.apply(x) >= b.a[i] || f.apply_inverse(x) >= b.a[i])
        throw Error(ErrorKind::Precondition, "breakpoint invariant fails at a(" + std::to_string(i) + ")");
  }
  return b;
}

namespace {

struct PairingState {
  Permutation f;
  std::function<Point(std::size_t)> a;
  std::function<std::size_t(Point)> interval_of;
  std::string label;
  std::mutex mu;
  std::map<std::size_t, std::map<Point, Point>> blocks;  // pair index -> swaps

  const std::map<Point, Point>& block(std::size_t i) {
    auto it = blocks.find(i);
    if (it != blocks.end()) return it->second;
    Point lo = a(2 * i), mid = a(2 * i + 1), hi = a(2 * i + 2);
    std::vector<Point> up, down;
    for (Point x = lo; x < mid; ++x)
      if (f.apply(x) >= mid) up.push_back(x);
    for (Point x = mid; x < hi; ++x)
      if (f.apply(x) < mid) down.push_back(x);
    if (up.size() != down.size())
      throw Error(ErrorKind::Precondition,
                  label + ": crossers of " + std::to_string(mid) + " do not balance (" +
                      std::to_string(up.size()) + " up, " + std::to_string(down.size()) + " down)");
    std::map<Point, Point> swaps;
    for (std::size_t k = 0; k < up.size(); ++k) {
      swaps[up[k]] = down[k];
      swaps[down[k]] = up[k];
    }
    return blocks.emplace(i, std::move(swaps)).first->second;
  }

  Point eval(Point x) {
    std::lock_guard<std::mutex> lock(mu);
    const auto& s = block(interval_of(x) / 2);
    auto it = s.find(x);
    return it == s.end() ? x : it->second;
  }
};

}  // namespace

Permutation crosser_pairing(const Permutation& f, std::function<Point(std::size_t)> a,
                            std::function<std::size_t(Point)> interval_of, std::string label) {
  auto st = std::make_shared<PairingState>();
  st->f = f;
  st->a = std::move(a);
  st->interval_of = std::move(interval_of);
  st->label = label;
  auto fn = [st](Point x) -> std::optional<Point> { return st->eval(x); };
  return Permutation::rule(std::move(label), fn, fn);
}

std::vector<CrossingCount> crossing_counts(const Permutation& f, const std::vector<Point>& a) {
  std::vector<CrossingCount> out;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    CrossingCount c{a[i]};
    for (Point x = a[i - 1]; x < a[i]; ++x)
      if (f.apply(x) >= a[i]) ++c.up;
    for (Point x = a[i]; x < a[i + 1]; ++x)
      if (f.apply(x) < a[i]) ++c.down;
    out.push_back(c);
  }
  return out;
}

LocalDecomposition decompose_local(const Permutation& f, std::size_t count) {
  auto seq = std::make_shared<BreakpointSequence>(f);
  seq->prefix(count);
  auto g = crosser_pairing(
      f, [seq](std::size_t i) { return seq->at(i); },
      [seq](Point x) { return seq->interval_of(x); }, "local-pairing");
  auto even_prefixes = [seq](Point limit) {
    std::vector<Point> out;
    for (std::size_t i = 1; seq->at(2 * i) <= limit; ++i) out.push_back(seq->at(2 * i));
    return out;
  };
  auto odd_prefixes = [seq](Point limit) {
    std::vector<Point> out;
    for (std::size_t i = 0; seq->at(2 * i + 1) <= limit; ++i) out.push_back(seq->at(2 * i + 1));
    return out;
  };
  g = g.with_locality_certificate(even_prefixes);
  auto h = Permutation::word({g.inverse(), f}).with_locality_certificate(odd_prefixes);
  return {g, h, seq};
}

LocalityReport is_local(const Permutation& f, Point probe_prefix) {
  LocalityReport r;
  if (auto sb = f.support_bound()) {
    r.answer = Tri::Yes;
    for (Point j = *sb; j <= std::max(*sb, probe_prefix); ++j)
      if (j > 0) r.invariant_prefixes.push_back(j);
    r.detail = "finite support below " + std::to_string(*sb);
    return r;
  }
  Point max_image = -1;
  for (Point j = 1; j <= probe_prefix; ++j) {
    max_image = std::max(max_image, f.apply(j - 1));
    if (max_image < j) r.invariant_prefixes.push_back(j);
  }
  if (auto cert = f.locality_certificate()) {
    for (Point j : cert(probe_prefix)) {
      if (!std::binary_search(r.invariant_prefixes.begin(), r.invariant_prefixes.end(), j)) {
        r.answer = Tri::No;
        r.stuck_at = j;
        r.detail = "certified prefix " + std::to_string(j) + " is not invariant";
        return r;
      }
    }
    r.answer = Tri::Yes;
    r.detail = "locality certificate";
    return r;
  }
  r.at_budget = true;
  if (probe_prefix < 2) {
    r.detail = "probe too short";
    return r;
  }
  Point last = r.invariant_prefixes.empty() ? 0 : r.invariant_prefixes.back();
  if (2 * last >= probe_prefix) {
    r.answer = Tri::Yes;
    r.detail = "invariant prefixes reach " + std::to_string(last) + " of " + std::to_string(probe_prefix);
  } else {
    r.answer = Tri::No;
    r.stuck_at = last;
    r.detail = "no invariant prefix in (" + std::to_string(last) + ", " + std::to_string(probe_prefix) + "]";
  }
  return r;
}

}  // namespace symkit
