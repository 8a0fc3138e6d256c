#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "symkit/local_decomp.hpp"
#include "symkit/metrics.hpp"

namespace symkit {

const char* to_string(MetricCase c) {
  switch (c) {
    case MetricCase::I: return "CaseI";
    case MetricCase::II: return "CaseII";
    case MetricCase::III: return "CaseIII";
    case MetricCase::IV: return "CaseIV";
    case MetricCase::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<ExtendedDistance> certified_norm(const Permutation& g, const GeneralizedMetric& d) {
  if (auto db = g.displacement_bound(); db && db->metric == d.name()) return ExtendedDistance(db->bound);
  if (auto sb = g.support_bound(); sb && d.rational_valued()) {
    ExtendedDistance best(0);
    for (Point a = 0; a < *sb; ++a) best = std::max(best, d.dist(a, g.apply(a)));
    return best;
  }
  if (g.form() == Permutation::Form::Word) {
    ExtendedDistance total(0);
    for (const auto& f : g.factors()) {
      auto part = certified_norm(f, d);
      if (!part) return std::nullopt;
      total = total + *part;
    }
    return total;
  }
  return std::nullopt;
}

NormReport norm(const Permutation& g, const GeneralizedMetric& d, Point window) {
  NormReport r;
  if (!d.rational_valued()) {
    r.note = d.name() + " answers comparisons only; no distances reported";
    return r;
  }
  std::optional<std::pair<Point, Point>> worst;
  for (Point a = 0; a < window; ++a) {
    Point b = g.apply(a);
    ExtendedDistance v = d.dist(a, b);
    if (v > r.lower_bound || (!worst && a != b)) {
      if (v > r.lower_bound) r.lower_bound = v;
      worst = {a, b};
    }
  }
  if (auto cert = certified_norm(g, d)) {
    if (r.lower_bound > *cert) {
      r.note = "certificate " + cert->to_string() + " contradicted by probe " + r.lower_bound.to_string();
      return r;
    }
    if (cert->is_infinite()) {
      // The certified value is exact only for finite support.
      if (g.support_bound() && worst && r.lower_bound.is_infinite()) {
        r.kind = NormReport::Kind::CertifiedInfinite;
        r.witness.push_back(*worst);
        r.note = "finite support with a pair at infinite distance";
      } else {
        r.note = "certificate gives no finite bound";
      }
      return r;
    }
    r.kind = NormReport::Kind::CertifiedFinite;
    r.bound = *cert;
    r.note = "certified";
    return r;
  }
  if (auto w = g.growth_witness(); w && w->metric == d.name()) {
    ExtendedDistance prev(-1);
    std::size_t count = static_cast<std::size_t>(std::clamp<Point>(window, 1, 32));
    for (std::size_t j = 1; j <= count; ++j) {
      auto [a, b] = w->pair(j);
      ExtendedDistance v = d.dist(a, b);
      bool grows = prev < v || (v.is_infinite() && prev.is_infinite());
      if (g.apply(a) != b || v < ExtendedDistance(static_cast<std::int64_t>(j)) || !grows) {
        r.note = "growth witness fails at j=" + std::to_string(j);
        r.witness.clear();
        return r;
      }
      prev = v;
      r.witness.emplace_back(a, b);
      if (v > r.lower_bound) r.lower_bound = v;
    }
    r.kind = NormReport::Kind::CertifiedInfinite;
    r.note = "growth witness checked to j=" + std::to_string(count);
    return r;
  }
  r.note = "no certificate";
  return r;
}

Tri fn_contains(const Permutation& g, const GeneralizedMetric& d, Point window) {
  auto r = norm(g, d, window);
  switch (r.kind) {
    case NormReport::Kind::CertifiedFinite: return Tri::Yes;
    case NormReport::Kind::CertifiedInfinite: return Tri::No;
    default: return Tri::Unknown;
  }
}

PointEnumeration enumerate_all() {
  return {[](std::size_t i) -> std::optional<Point> { return static_cast<Point>(i); }};
}

PointEnumeration enumerate_block(PartitionPtr a, Point member) {
  BlockId b = a->block_of(member);
  PointEnumeration e;
  auto pts = std::make_shared<std::vector<Point>>(a->members(b, e.probe_limit));
  e.nth = [pts](std::size_t i) -> std::optional<Point> {
    if (i < pts->size()) return (*pts)[i];
    return std::nullopt;
  };
  return e;
}

namespace {

// The pair selection of the swap construction; `used` holds every chosen point.
std::pair<Point, Point> next_pair(const GeneralizedMetric& d, const PointEnumeration& sigma, std::size_t j,
                                  std::set<Point>& used) {
  std::optional<Point> alpha;
  std::size_t i = 0;
  for (; i < sigma.probe_limit; ++i) {
    auto p = sigma.nth(i);
    if (!p) break;
    if (!used.count(*p)) {
      alpha = p;
      break;
    }
  }
  if (!alpha)
    throw Error(ErrorKind::InsufficientSet, "no fresh point left for pair " + std::to_string(j));
  Rational radius(static_cast<std::int64_t>(j));
  for (std::size_t k = i + 1; k < sigma.probe_limit; ++k) {
    auto p = sigma.nth(k);
    if (!p) break;
    if (!used.count(*p) && !d.less_than(*alpha, *p, radius)) {
      used.insert(*alpha);
      used.insert(*p);
      return {*alpha, *p};
    }
  }
  throw Error(ErrorKind::InsufficientSet, "no point at distance >= " + std::to_string(j) + " from " +
                                              std::to_string(*alpha) + " in the probed set");
}

}  // namespace

Permutation unbounded_witness(const GeneralizedMetric& d, const PointEnumeration& sigma, std::size_t count) {
  std::set<Point> used;
  std::vector<std::vector<Point>> swaps;
  for (std::size_t j = 1; j <= count; ++j) {
    auto [a, b] = next_pair(d, sigma, j, used);
    swaps.push_back({a, b});
  }
  return Permutation::cycles(swaps);
}

Permutation unbounded_witness_in_blocks(const GeneralizedMetric& d, const Partition& a, std::size_t count,
                                        std::size_t block_limit) {
  std::set<Point> used;
  std::vector<std::vector<Point>> swaps;
  for (std::size_t j = 1; j <= count; ++j) {
    bool placed = false;
    for (std::size_t rank = 0; rank < block_limit && !placed; ++rank) {
      auto pts = a.members(a.block_at(static_cast<std::int64_t>(rank)), 1 << 16);
      PointEnumeration sigma{[&pts](std::size_t i) -> std::optional<Point> {
        if (i < pts.size()) return pts[i];
        return std::nullopt;
      }};
      try {
        std::set<Point> trial = used;
        auto [x, y] = next_pair(d, sigma, j, trial);
        used = std::move(trial);
        swaps.push_back({x, y});
        placed = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientSet) throw;
      }
    }
    if (!placed)
      throw Error(ErrorKind::InsufficientSet, "no block among the first " + std::to_string(block_limit) +
                                                  " holds a pair at distance >= " + std::to_string(j));
  }
  return Permutation::cycles(swaps);
}

namespace {

struct WitnessState {
  MetricPtr d;
  PointEnumeration sigma;
  std::mutex mu;
  std::set<Point> used;
  std::vector<std::pair<Point, Point>> pairs;
  std::map<Point, Point> partner;

  void extend() {
    auto p = next_pair(*d, sigma, pairs.size() + 1, used);
    pairs.push_back(p);
    partner[p.first] = p.second;
    partner[p.second] = p.first;
  }
  Point eval(Point x) {
    std::lock_guard<std::mutex> lock(mu);
    // The first points are the least fresh members of an increasing set, so once they pass x,
    // x is either paired already or fixed for good.
    while (pairs.empty() || pairs.back().first <= x) extend();
    auto it = partner.find(x);
    return it == partner.end() ? x : it->second;
  }
  std::pair<Point, Point> pair(std::size_t j) {
    std::lock_guard<std::mutex> lock(mu);
    while (pairs.size() < j) extend();
    return pairs[j - 1];
  }
};

}  // namespace

Permutation unbounded_witness_rule(MetricPtr d, PointEnumeration sigma) {
  for (std::size_t i = 1; i < 64; ++i) {
    auto prev = sigma.nth(i - 1), cur = sigma.nth(i);
    if (!cur) break;
    if (!prev || *cur <= *prev)
      throw Error(ErrorKind::Precondition, "the point set must be enumerated in increasing order");
  }
  auto st = std::make_shared<WitnessState>();
  st->d = d;
  st->sigma = std::move(sigma);
  auto fn = [st](Point x) -> std::optional<Point> { return st->eval(x); };
  auto growth = std::make_shared<GrowthWitness>();
  growth->metric = d->name();
  growth->pair = [st](std::size_t j) { return st->pair(j); };
  return Permutation::rule("unbounded-witness", fn, fn, {{"metric", d->name()}}).with_growth_witness(growth);
}

MetricClassification classify_metric(const GeneralizedMetric& d, const MetricBudget& budget) {
  using nlohmann::json;
  MetricClassification out;
  json probes = json::array();
  json budget_json = {{"centers", budget.centers}, {"ball_cap", budget.ball_cap}, {"radii", json::array()}};
  for (const auto& r : budget.radii) budget_json["radii"].push_back(rational_text(r));
  out.evidence["metric"] = d.name();
  out.evidence["budget"] = budget_json;

  std::size_t half = budget.centers / 2;
  bool grows = false, nonsingleton_tail = false, contradicted = false;
  json trigger;
  for (const auto& r : budget.radii) {
    std::size_t first_max = 0, second_max = 0, tail_nonsingleton = 0;
    std::optional<Point> tail_example;
    auto declared = d.uniform_bound(r);
    for (std::size_t c = 0; c < budget.centers; ++c) {
      Ball b = d.ball(static_cast<Point>(c), r, budget.ball_cap);
      if (!b.complete) {
        out.result = MetricCase::I;
        out.evidence["case"] = to_string(out.result);
        out.evidence["trigger"] = {{"center", c}, {"radius", rational_text(r)},
                                   {"reason", "ball enumeration exceeded the cap"}};
        out.evidence["probes"] = probes;
        return out;
      }
      std::size_t size = b.points.size();
      if (declared && size > *declared && !contradicted) {
        contradicted = true;
        trigger = {{"center", c}, {"radius", rational_text(r)}, {"size", size}, {"declared_bound", *declared}};
      }
      if (c < half) {
        first_max = std::max(first_max, size);
      } else {
        second_max = std::max(second_max, size);
        if (size > 1) {
          ++tail_nonsingleton;
          if (!tail_example) tail_example = static_cast<Point>(c);
        }
      }
    }
    json probe = {{"radius", rational_text(r)},
                  {"max_ball_first_half", first_max},
                  {"max_ball_second_half", second_max},
                  {"nonsingleton_second_half", tail_nonsingleton}};
    if (declared) probe["declared_bound"] = *declared;
    probes.push_back(probe);
    if (!declared && second_max > first_max) grows = true;
    if (tail_nonsingleton > 0) nonsingleton_tail = true;
  }
  out.evidence["probes"] = probes;
  if (contradicted) {
    out.result = MetricCase::Unknown;
    out.evidence["trigger"] = trigger;
    out.evidence["reason"] = "declared uniform bound contradicted by a probe";
  } else if (grows) {
    out.result = MetricCase::II;
    out.evidence["reason"] = "balls finite; maximal ball size keeps growing with the center";
  } else if (nonsingleton_tail) {
    out.result = MetricCase::III;
    out.evidence["reason"] = "ball sizes bounded; nonsingleton balls persist among late centers";
  } else {
    out.result = MetricCase::IV;
    out.evidence["reason"] = "every late center has singleton balls at every probed radius";
  }
  out.evidence["case"] = to_string(out.result);
  return out;
}

std::optional<std::int64_t> z_displacement(const Permutation& f) {
  auto n = certified_norm(f, *standard_z_metric());
  if (!n || n->is_infinite()) return std::nullopt;
  const Rational& v = n->value();
  return (v.numerator() + v.denominator() - 1) / v.denominator();
}

FlowValue net_flow(const Permutation& f, std::int64_t lo, std::int64_t hi) {
  auto b = z_displacement(f);
  if (!b) throw Error(ErrorKind::NoCertificate, f.to_string() + " has no certified displacement on the integers");
  auto image = [&](std::int64_t z) { return n_to_z(f.apply(z_to_n(z))); };
  FlowValue out;
  for (std::int64_t c = lo; c < hi; ++c) {
    std::int64_t up = 0, down = 0;
    for (std::int64_t z = c - *b; z < c; ++z)
      if (image(z) >= c) ++up;
    for (std::int64_t z = c; z < c + *b; ++z)
      if (image(z) < c) ++down;
    out.per_cut.emplace_back(c, up - down);
  }
  if (!out.per_cut.empty()) {
    std::int64_t v = out.per_cut.front().second;
    bool same = std::all_of(out.per_cut.begin(), out.per_cut.end(), [v](const auto& p) { return p.second == v; });
    if (same) out.common_value = v;
  }
  return out;
}

OmegaFactors factor_fn_omega(const Permutation& f) {
  auto n = certified_norm(f, *standard_omega_metric());
  if (!n || n->is_infinite())
    throw Error(ErrorKind::NoCertificate, f.to_string() + " has no certified norm under standard-omega");
  const Rational& v = n->value();
  std::int64_t width = std::max<std::int64_t>(1, (v.numerator() + v.denominator() - 1) / v.denominator());
  OmegaFactors out;
  out.width = width;
  out.first = crosser_pairing(
      f, [width](std::size_t i) { return static_cast<Point>(i) * width; },
      [width](Point x) { return static_cast<std::size_t>(x / width); }, "omega-pairing");
  out.first = out.first.with_displacement_bound("standard-omega", 2 * width - 1);
  out.second = Permutation::word({out.first.inverse(), f});
  return out;
}

}  // namespace symkit
