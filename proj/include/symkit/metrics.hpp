#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symkit/partitions.hpp"
#include "symkit/perm.hpp"

namespace symkit {

using Rational = boost::rational<std::int64_t>;

std::string rational_text(const Rational& r);
Rational parse_rational(const std::string& s);

// Exact nonnegative rational or infinity.
class ExtendedDistance {
 public:
  ExtendedDistance() = default;
  ExtendedDistance(Rational v) : value_(v) {}  // NOLINT(implicit)
  ExtendedDistance(std::int64_t v) : value_(v) {}  // NOLINT(implicit)
  static ExtendedDistance infinity() {
    ExtendedDistance d;
    d.infinite_ = true;
    return d;
  }
  bool is_infinite() const { return infinite_; }
  const Rational& value() const { return value_; }
  std::string to_string() const { return infinite_ ? "inf" : rational_text(value_); }

  friend bool operator==(const ExtendedDistance& a, const ExtendedDistance& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator<(const ExtendedDistance& a, const ExtendedDistance& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtendedDistance& a, const ExtendedDistance& b) { return !(b < a); }
  friend bool operator>(const ExtendedDistance& a, const ExtendedDistance& b) { return b < a; }
  friend bool operator>=(const ExtendedDistance& a, const ExtendedDistance& b) { return !(a < b); }
  friend ExtendedDistance operator+(const ExtendedDistance& a, const ExtendedDistance& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtendedDistance(a.value_ + b.value_);
  }

 private:
  bool infinite_ = false;
  Rational value_{0};
};

struct Ball {
  std::vector<Point> points;  // ascending
  bool complete = true;       // false when enumeration stopped at the size cap
};

class GeneralizedMetric {
 public:
  virtual ~GeneralizedMetric() = default;
  virtual std::string name() const = 0;
  // Comparison-only metrics answer less_than and ball but not dist.
  virtual bool rational_valued() const { return true; }
  virtual ExtendedDistance dist(Point a, Point b) const = 0;
  virtual bool less_than(Point a, Point b, const Rational& r) const { return dist(a, b) < r; }
  // The open ball {b : dist(a, b) < r}, enumerated up to `cap` points.
  virtual Ball ball(Point a, const Rational& r, std::size_t cap) const = 0;
  // Declared bound on |ball(a, r)| valid for every center.
  virtual std::optional<std::uint64_t> uniform_bound(const Rational& /*r*/) const {
    return std::nullopt;
  }
  // A c such that every finite distance is < c, when one is known.
  virtual std::optional<Rational> finite_distance_cap() const { return std::nullopt; }
};
using MetricPtr = std::shared_ptr<const GeneralizedMetric>;

MetricPtr standard_omega_metric();
MetricPtr standard_z_metric();
MetricPtr sqrt_metric();
MetricPtr ultra_base2_metric();
MetricPtr discrete_metric();
// Every pair of distinct points at distance 1/2, so unit balls are infinite.
MetricPtr flat_metric();
MetricPtr cayley_z2_metric();
MetricPtr cayley_f2_metric();
MetricPtr partition_metric(PartitionPtr a);

// Cayley codings, exposed for tests.
Point z2_code(std::int64_t x, std::int64_t y);
std::pair<std::int64_t, std::int64_t> z2_decode(Point n);
// Reduced words over {a, A, b, B} (A, B the inverses), coded in shortlex order.
std::string f2_word(Point n);
Point f2_code(const std::string& reduced_word);

// Parses `metric:<name>` specs, including `partition@<partition-spec>` and
// `refine(<base>;U=<perm>,<perm>...)`.
MetricPtr parse_metric(const std::string& spec);

// Refinement of a rational-valued metric so that each listed permutation moves points by at most 1.
class RefinedMetric : public GeneralizedMetric {
 public:
  struct Answer {
    bool exact = false;     // false: the true value is >= `value` (the radius budget)
    bool infinite = false;  // exact and no connecting path exists
    Rational value{0};
  };

  RefinedMetric(MetricPtr base, std::vector<Permutation> moves, Rational max_radius = Rational(64));

  std::string name() const override;
  ExtendedDistance dist(Point a, Point b) const override;
  bool less_than(Point a, Point b, const Rational& r) const override;
  Ball ball(Point a, const Rational& r, std::size_t cap) const override;
  std::optional<std::uint64_t> uniform_bound(const Rational& r) const override;

  // Shortest-path value if below `radius`, otherwise AtLeast(radius).
  Answer query(Point a, Point b, const Rational& radius) const;
  const MetricPtr& base() const { return base_; }
  const std::vector<Permutation>& moves() const { return moves_; }

 private:
  MetricPtr base_;
  std::vector<Permutation> moves_;
  Rational max_radius_;
};

std::shared_ptr<const RefinedMetric> refine_metric(MetricPtr d, std::vector<Permutation> moves);

// Counting bound on refined ball sizes from the base metric's uniform bound.
std::optional<std::uint64_t> refined_ball_bound(const GeneralizedMetric& base, std::size_t moves,
                                                const Rational& r);

struct NormReport {
  enum class Kind { CertifiedFinite, CertifiedInfinite, Unknown };
  ExtendedDistance lower_bound;
  Kind kind = Kind::Unknown;
  ExtendedDistance bound;                        // CertifiedFinite
  std::vector<std::pair<Point, Point>> witness;  // CertifiedInfinite
  std::string note;
};

NormReport norm(const Permutation& g, const GeneralizedMetric& d, Point window);
// Upper bound on the norm derived from certificates alone.
std::optional<ExtendedDistance> certified_norm(const Permutation& g, const GeneralizedMetric& d);
Tri fn_contains(const Permutation& g, const GeneralizedMetric& d, Point window);

// Enumeration of a point set: nth(i) is the i-th point, nullopt once exhausted.
struct PointEnumeration {
  std::function<std::optional<Point>(std::size_t)> nth;
  std::size_t probe_limit = 1 << 16;
};
PointEnumeration enumerate_all();
PointEnumeration enumerate_block(PartitionPtr a, Point member);

Permutation unbounded_witness(const GeneralizedMetric& d, const PointEnumeration& sigma,
                              std::size_t count);
// Pairs drawn block by block from `a`: pair j comes from the least-rank block holding two fresh
// points at distance >= j. The result preserves every block of `a`.
Permutation unbounded_witness_in_blocks(const GeneralizedMetric& d, const Partition& a, std::size_t count,
                                        std::size_t block_limit = 4096);
// The same pairing continued indefinitely, carrying a growth certificate.
Permutation unbounded_witness_rule(MetricPtr d, PointEnumeration sigma);

enum class MetricCase { I, II, III, IV, Unknown };
const char* to_string(MetricCase c);

struct MetricBudget {
  std::vector<Rational> radii{Rational(1), Rational(2), Rational(4), Rational(8)};
  std::size_t centers = 512;
  std::size_t ball_cap = 4096;
};

struct MetricClassification {
  MetricCase result = MetricCase::Unknown;
  nlohmann::json evidence;
};
MetricClassification classify_metric(const GeneralizedMetric& d, const MetricBudget& budget = {});

struct FlowValue {
  std::vector<std::pair<std::int64_t, std::int64_t>> per_cut;  // (cut, up - down)
  std::optional<std::int64_t> common_value;
};
// Cuts c in [lo, hi) of the integers; a cut c separates c-1 from c.
FlowValue net_flow(const Permutation& f, std::int64_t lo, std::int64_t hi);
// Certified displacement of f for the standard metric on the integers.
std::optional<std::int64_t> z_displacement(const Permutation& f);

struct OmegaFactors {
  std::int64_t width = 0;  // the certified norm n; intervals [n i, n (i + 1))
  Permutation first;       // preserves [2in, (2i+2)n)
  Permutation second;      // preserves [(2i-1)n, (2i+1)n)
};
OmegaFactors factor_fn_omega(const Permutation& f);

}  // namespace symkit
