#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_set>

#include "symkit/metrics.hpp"

namespace symkit {

std::string rational_text(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      std::int64_t v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing");
      return Rational(v);
    }
    std::int64_t n = std::stoll(s.substr(0, slash));
    std::int64_t d = std::stoll(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational(n, d);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "'" + s + "' is not a rational number");
  }
}

namespace {

// Largest integer strictly below r, for r > 0.
std::int64_t below(const Rational& r) {
  std::int64_t p = r.numerator(), q = r.denominator();
  std::int64_t ceil = (p + q - 1) / q;
  return ceil - 1;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

Ball interval_ball(std::int64_t lo, std::int64_t hi, std::size_t cap,
                   const std::function<Point(std::int64_t)>& to_point) {
  Ball b;
  for (std::int64_t z = lo; z <= hi; ++z) {
    if (b.points.size() >= cap) {
      b.complete = false;
      break;
    }
    b.points.push_back(to_point(z));
  }
  std::sort(b.points.begin(), b.points.end());
  return b;
}

class StandardOmega : public GeneralizedMetric {
 public:
  std::string name() const override { return "standard-omega"; }
  ExtendedDistance dist(Point a, Point b) const override { return ExtendedDistance(a > b ? a - b : b - a); }
  Ball ball(Point a, const Rational& r, std::size_t cap) const override {
    if (r <= 0) return {};
    std::int64_t k = below(r);
    return interval_ball(std::max<std::int64_t>(0, a - k), a + k, cap, [](std::int64_t z) { return z; });
  }
  std::optional<std::uint64_t> uniform_bound(const Rational& r) const override {
    if (r <= 0) return 0;
    return 2 * below(r) + 1;
  }
};

class StandardZ : public GeneralizedMetric {
 public:
  std::string name() const override { return "standard-z"; }
  ExtendedDistance dist(Point a, Point b) const override {
    std::int64_t d = n_to_z(a) - n_to_z(b);
    return ExtendedDistance(d < 0 ? -d : d);
  }
  Ball ball(Point a, const Rational& r, std::size_t cap) const override {
    if (r <= 0) return {};
    std::int64_t k = below(r), z = n_to_z(a);
    return interval_ball(z - k, z + k, cap, [](std::int64_t v) { return z_to_n(v); });
  }
  std::optional<std::uint64_t> uniform_bound(const Rational& r) const override {
    if (r <= 0) return 0;
    return 2 * below(r) + 1;
  }
};

// Points are the square roots of the naturals with the distance of the real line.
class SqrtMetric : public GeneralizedMetric {
 public:
  std::string name() const override { return "sqrt"; }
  bool rational_valued() const override { return false; }
  ExtendedDistance dist(Point, Point) const override {
    throw Error(ErrorKind::UnsupportedMetric, "sqrt metric answers comparisons only");
  }
  bool less_than(Point a, Point b, const Rational& r) const override {
    using boost::multiprecision::cpp_int;
    if (r <= 0) return false;
    if (a > b) std::swap(a, b);
    // sqrt(b) - sqrt(a) < p/q  <=>  M < 2 p q sqrt(a)  with  M = (b - a) q^2 - p^2.
    cpp_int p = r.numerator(), q = r.denominator();
    cpp_int m = cpp_int(b - a) * q * q - p * p;
    if (m < 0) return true;
    return m * m < 4 * p * p * q * q * cpp_int(a);
  }
  Ball ball(Point a, const Rational& r, std::size_t cap) const override {
    Ball out;
    if (r <= 0) return out;
    out.points.push_back(a);
    for (Point b = a - 1; b >= 0 && less_than(a, b, r); --b) {
      if (out.points.size() >= cap) { out.complete = false; break; }
      out.points.push_back(b);
    }
    for (Point b = a + 1; out.complete && less_than(a, b, r); ++b) {
      if (out.points.size() >= cap) { out.complete = false; break; }
      out.points.push_back(b);
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
  }
};

// Distance is one more than the highest bit in which the binary expansions differ.
class UltraBase2 : public GeneralizedMetric {
 public:
  std::string name() const override { return "ultra-base2"; }
  ExtendedDistance dist(Point a, Point b) const override {
    std::uint64_t x = static_cast<std::uint64_t>(a ^ b);
    std::int64_t w = 0;
    while (x) { ++w; x >>= 1; }
    return ExtendedDistance(w);
  }
  Ball ball(Point a, const Rational& r, std::size_t cap) const override {
    Ball out;
    if (r <= 0) return out;
    std::int64_t bits = std::min<std::int64_t>(below(r), 40);
    Point base = a & ~((Point(1) << bits) - 1);
    for (Point t = 0; t < (Point(1) << bits); ++t) {
      if (out.points.size() >= cap) { out.complete = false; break; }
      out.points.push_back(base + t);
    }
    return out;
  }
  std::optional<std::uint64_t> uniform_bound(const Rational& r) const override {
    if (r <= 0) return 0;
    std::int64_t bits = below(r);
    if (bits >= 63) return std::numeric_limits<std::uint64_t>::max();
    return std::uint64_t(1) << bits;
  }
};

class DiscreteMetric : public GeneralizedMetric {
 public:
  std::string name() const override { return "discrete"; }
  ExtendedDistance dist(Point a, Point b) const override {
    return a == b ? ExtendedDistance(0) : ExtendedDistance::infinity();
  }
  Ball ball(Point a, const Rational& r, std::size_t) const override {
    if (r <= 0) return {};
    return Ball{{a}, true};
  }
  std::optional<std::uint64_t> uniform_bound(const Rational& r) const override { return r <= 0 ? 0 : 1; }
  std::optional<Rational> finite_distance_cap() const override { return Rational(1); }
};

class FlatMetric : public GeneralizedMetric {
 public:
  std::string name() const override { return "flat"; }
  ExtendedDistance dist(Point a, Point b) const override {
    return a == b ? ExtendedDistance(0) : ExtendedDistance(Rational(1, 2));
  }
  Ball ball(Point a, const Rational& r, std::size_t cap) const override {
    if (r <= 0) return {};
    if (r <= Rational(1, 2)) return Ball{{a}, true};
    Ball out;
    out.complete = false;  // every point lies in the ball
    for (Point b = 0; out.points.size() < cap; ++b) out.points.push_back(b);
    if (!std::binary_search(out.points.begin(), out.points.end(), a)) out.points.back() = a;
    std::sort(out.points.begin(), out.points.end());
    return out;
  }
};

class CayleyZ2 : public GeneralizedMetric {
 public:
  std::string name() const override { return "cayley-z2"; }
  ExtendedDistance dist(Point a, Point b) const override {
    auto [x1, y1] = z2_decode(a);
    auto [x2, y2] = z2_decode(b);
    return ExtendedDistance(std::llabs(x1 - x2) + std::llabs(y1 - y2));
  }
  Ball ball(Point a, const Rational& r, std::size_t cap) const override {
    Ball out;
    if (r <= 0) return out;
    auto [x, y] = z2_decode(a);
    std::int64_t m = below(r);
    for (std::int64_t dx = -m; dx <= m && out.complete; ++dx) {
      std::int64_t rest = m - std::llabs(dx);
      for (std::int64_t dy = -rest; dy <= rest; ++dy) {
        if (out.points.size() >= cap) { out.complete = false; break; }
        out.points.push_back(z2_code(x + dx, y + dy));
      }
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
  }
  std::optional<std::uint64_t> uniform_bound(const Rational& r) const override {
    if (r <= 0) return 0;
    std::uint64_t m = static_cast<std::uint64_t>(below(r));
    return 2 * m * m + 2 * m + 1;
  }
};

int letter_index(char c) {
  switch (c) {
    case 'a': return 0;
    case 'A': return 1;
    case 'b': return 2;
    case 'B': return 3;
  }
  throw Error(ErrorKind::Parse, std::string("bad free-group letter '") + c + "'");
}
const char kLetters[] = {'a', 'A', 'b', 'B'};
int inverse_letter(int i) { return i ^ 1; }

std::string reduce_append(std::string w, int letter) {
  if (!w.empty() && letter_index(w.back()) == inverse_letter(letter)) {
    w.pop_back();
  } else {
    w.push_back(kLetters[letter]);
  }
  return w;
}

class CayleyF2 : public GeneralizedMetric {
 public:
  std::string name() const override { return "cayley-f2"; }
  ExtendedDistance dist(Point a, Point b) const override {
    std::string u = f2_word(a), v = f2_word(b);
    std::size_t k = 0;
    while (k < u.size() && k < v.size() && u[k] == v[k]) ++k;
    return ExtendedDistance(static_cast<std::int64_t>(u.size() + v.size() - 2 * k));
  }
  Ball ball(Point a, const Rational& r, std::size_t cap) const override {
    Ball out;
    if (r <= 0) return out;
    std::int64_t m = below(r);
    std::deque<std::pair<std::string, std::int64_t>> queue{{f2_word(a), 0}};
    std::unordered_set<std::string> seen{queue.front().first};
    while (!queue.empty()) {
      auto [w, d] = queue.front();
      queue.pop_front();
      if (out.points.size() >= cap) { out.complete = false; break; }
      out.points.push_back(f2_code(w));
      if (d == m) continue;
      for (int l = 0; l < 4; ++l) {
        std::string next = reduce_append(w, l);
        if (seen.insert(next).second) queue.emplace_back(next, d + 1);
      }
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
  }
  std::optional<std::uint64_t> uniform_bound(const Rational& r) const override {
    if (r <= 0) return 0;
    std::uint64_t total = 1, layer = 4;
    for (std::int64_t l = 1; l <= below(r); ++l) {
      total += layer;
      layer = sat_mul(layer, 3);
    }
    return total;
  }
};

class PartitionMetric : public GeneralizedMetric {
 public:
  explicit PartitionMetric(PartitionPtr a) : a_(std::move(a)) {
    if (a_->profile().kind == Profile::Kind::HasInfiniteBlock)
      throw Error(ErrorKind::UnsupportedMetric, "partition " + a_->name() + " has an infinite block");
  }
  std::string name() const override { return "partition@" + a_->name(); }
  ExtendedDistance dist(Point a, Point b) const override {
    if (a == b) return ExtendedDistance(0);
    return a_->block_of(a) == a_->block_of(b) ? ExtendedDistance(1) : ExtendedDistance::infinity();
  }
  Ball ball(Point a, const Rational& r, std::size_t cap) const override {
    if (r <= 0) return {};
    if (r <= 1) return Ball{{a}, true};
    Ball out;
    out.points = a_->members(a_->block_of(a), cap + 1);
    if (out.points.size() > cap) {
      out.points.resize(cap);
      out.complete = false;
    }
    return out;
  }
  std::optional<std::uint64_t> uniform_bound(const Rational& r) const override {
    Profile p = a_->profile();
    if (p.kind != Profile::Kind::BoundedBy) return std::nullopt;
    if (r <= 0) return 0;
    return r <= 1 ? 1 : static_cast<std::uint64_t>(p.bound);
  }
  std::optional<Rational> finite_distance_cap() const override { return Rational(2); }

 private:
  PartitionPtr a_;
};

}  // namespace

Point z2_code(std::int64_t x, std::int64_t y) {
  Point u = z_to_n(x), v = z_to_n(y);
  return (u + v) * (u + v + 1) / 2 + v;
}

std::pair<std::int64_t, std::int64_t> z2_decode(Point n) {
  auto w = static_cast<std::int64_t>((std::sqrt(8.0L * n + 1) - 1) / 2);
  while (w * (w + 1) / 2 > n) --w;
  while ((w + 1) * (w + 2) / 2 <= n) ++w;
  Point v = n - w * (w + 1) / 2;
  Point u = w - v;
  return {n_to_z(u), n_to_z(v)};
}

std::string f2_word(Point n) {
  if (n < 0) throw Error(ErrorKind::Precondition, "negative point");
  std::int64_t len = 0, count = 1;
  while (n >= count) {
    n -= count;
    ++len;
    count = len == 1 ? 4 : count * 3;
  }
  std::string w;
  std::int64_t tail = count;
  for (std::int64_t i = 0; i < len; ++i) {
    tail /= (i == 0 ? 4 : 3);
    std::int64_t choice = n / tail;
    n %= tail;
    int idx = 0;
    for (int l = 0; l < 4; ++l) {
      if (!w.empty() && l == inverse_letter(letter_index(w.back()))) continue;
      if (idx++ == choice) {
        w.push_back(kLetters[l]);
        break;
      }
    }
  }
  return w;
}

Point f2_code(const std::string& w) {
  Point base = 0, count = 1;
  for (std::size_t l = 0; l < w.size(); ++l) {
    base += count;
    count = l == 0 ? 4 : count * 3;
  }
  Point rank = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    int li = letter_index(w[i]);
    if (i > 0 && li == inverse_letter(letter_index(w[i - 1])))
      throw Error(ErrorKind::Precondition, "word '" + w + "' is not reduced");
    int idx = 0;
    for (int l = 0; l < li; ++l)
      if (i == 0 || l != inverse_letter(letter_index(w[i - 1]))) ++idx;
    rank = rank * (i == 0 ? 4 : 3) + idx;
  }
  return base + rank;
}

MetricPtr standard_omega_metric() {
  static auto m = std::make_shared<StandardOmega>();
  return m;
}
MetricPtr standard_z_metric() {
  static auto m = std::make_shared<StandardZ>();
  return m;
}
MetricPtr sqrt_metric() {
  static auto m = std::make_shared<SqrtMetric>();
  return m;
}
MetricPtr ultra_base2_metric() {
  static auto m = std::make_shared<UltraBase2>();
  return m;
}
MetricPtr discrete_metric() {
  static auto m = std::make_shared<DiscreteMetric>();
  return m;
}
MetricPtr flat_metric() {
  static auto m = std::make_shared<FlatMetric>();
  return m;
}
MetricPtr cayley_z2_metric() {
  static auto m = std::make_shared<CayleyZ2>();
  return m;
}
MetricPtr cayley_f2_metric() {
  static auto m = std::make_shared<CayleyF2>();
  return m;
}
MetricPtr partition_metric(PartitionPtr a) { return std::make_shared<PartitionMetric>(std::move(a)); }

namespace {

// Splits at top-level occurrences of `sep`, ignoring separators nested in brackets.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::size_t top_level_find(const std::string& s, const std::string& needle) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(' || s[i] == '[') ++depth;
    if (s[i] == ')' || s[i] == ']') --depth;
    if (depth == 0 && s.compare(i, needle.size(), needle) == 0) return i;
  }
  return std::string::npos;
}

}  // namespace

MetricPtr parse_metric(const std::string& spec) {
  std::string s = spec;
  if (s.rfind("metric:", 0) == 0) s = s.substr(7);
  if (s == "standard-omega") return standard_omega_metric();
  if (s == "standard-z") return standard_z_metric();
  if (s == "sqrt") return sqrt_metric();
  if (s == "ultra-base2") return ultra_base2_metric();
  if (s == "discrete") return discrete_metric();
  if (s == "flat") return flat_metric();
  if (s == "cayley-z2") return cayley_z2_metric();
  if (s == "cayley-f2") return cayley_f2_metric();
  if (s.rfind("partition@", 0) == 0) return partition_metric(parse_partition(s.substr(10)));
  if (s.rfind("refine(", 0) == 0 && s.back() == ')') {
    std::string inner = s.substr(7, s.size() - 8);
    std::size_t at = top_level_find(inner, ";U=");
    if (at == std::string::npos)
      throw Error(ErrorKind::Parse, "expected refine(<base>;U=<perm>,...) in '" + spec + "'");
    std::vector<Permutation> moves;
    std::string base = inner.substr(0, at), list = inner.substr(at + 3);
    if (!list.empty())
      for (const auto& p : split_top(list, ',')) moves.push_back(parse_permutation(p));
    return refine_metric(parse_metric(base), moves);
  }
  throw Error(ErrorKind::Parse, "unknown metric '" + spec + "'");
}

}  // namespace symkit
