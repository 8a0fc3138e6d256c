#include <algorithm>
#include <map>
#include <set>

#include "symkit/classifier.hpp"
#include "symkit/witnesses.hpp"

namespace symkit {

using nlohmann::json;

json OrbitReport::to_json() const {
  json j{{"gamma", gamma}, {"alpha", alpha}, {"max_observed", max_observed}};
  switch (result) {
    case Result::Full: j["result"] = {{"full", points}}; break;
    case Result::AtLeast: j["result"] = {{"at_least", at_least}}; break;
    case Result::Unknown: j["result"] = {{"unknown", points.size()}}; break;
  }
  return j;
}

namespace {

std::vector<Point> sorted_unique(std::vector<Point> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

OrbitReport probe(const GroupOracle& o, const std::vector<Point>& gamma, Point alpha, std::size_t budget) {
  OrbitReport r;
  r.gamma = gamma;
  r.alpha = alpha;
  auto p = o.orbit(gamma, alpha, budget);
  if (p.complete) {
    r.result = OrbitReport::Result::Full;
    r.points = std::move(p.points);
  } else if (p.points.size() >= budget) {
    r.result = OrbitReport::Result::AtLeast;
    r.at_least = budget;
  } else {
    r.result = OrbitReport::Result::Unknown;
    r.points = std::move(p.points);
  }
  r.max_observed = r.result == OrbitReport::Result::Full ? r.points.size() : (r.at_least ? r.at_least : r.points.size());
  return r;
}

std::vector<Point> gamma_of(const GroupDescriptor& g, std::size_t k) {
  std::vector<Point> out = g.kind == GroupDescriptor::Kind::Fix ? g.fixed : std::vector<Point>{};
  for (Point i = 0; i < static_cast<Point>(k); ++i) out.push_back(i);
  return sorted_unique(std::move(out));
}

// Summary of the probes made with one fixed set.
struct GammaStats {
  std::vector<Point> gamma;
  bool any_at_least = false, any_unknown = false;
  std::size_t max_full = 0, low_max = 0, high_max = 0;
  bool all_full() const { return !any_at_least && !any_unknown; }
  bool growing() const { return high_max > low_max && high_max >= 3; }
};

struct Decision {
  ClassName label = ClassName::Unknown;
  std::optional<std::vector<Point>> gamma;
  std::string reason;
};

// The probe-level rule, shared by classification and replay.
Decision decide(const std::vector<GammaStats>& stats) {
  Decision d;
  if (stats.empty()) {
    d.reason = "no probes";
    return d;
  }
  if (std::all_of(stats.begin(), stats.end(), [](const GammaStats& s) { return s.any_at_least; })) {
    d.label = ClassName::CS;
    d.reason = "every probed set leaves an orbit of at least the orbit budget";
    return d;
  }
  std::size_t first = stats.size();
  for (std::size_t k = 0; k < stats.size(); ++k)
    if (stats[k].all_full()) {
      first = k;
      break;
    }
  if (first == stats.size()) {
    d.reason = "no probed set gives only exact finite orbits";
    return d;
  }
  for (std::size_t k = first; k < stats.size(); ++k)
    if (stats[k].all_full() && stats[k].max_full <= 1) {
      d.label = ClassName::C1;
      d.gamma = stats[k].gamma;
      d.reason = "all probed orbits are singletons";
      return d;
    }
  bool all_growing = true, all_bounded = true;
  std::size_t bound = stats[first].max_full;
  for (std::size_t k = first; k < stats.size(); ++k) {
    if (!stats[k].all_full()) continue;
    all_growing = all_growing && stats[k].growing();
    all_bounded = all_bounded && !stats[k].growing() && stats[k].max_full <= bound;
  }
  d.gamma = stats[first].gamma;
  if (all_growing) {
    d.label = ClassName::CP;
    d.reason = "orbits finite but their sizes keep growing across the sample";
  } else if (all_bounded && bound >= 2) {
    d.label = ClassName::CQ;
    d.reason = "orbits bounded by " + std::to_string(bound) + " with nontrivial orbits at every larger set";
  } else {
    d.gamma.reset();
    d.reason = "finite orbits with no consistent growth pattern";
  }
  return d;
}

GammaStats stats_of(const std::vector<Point>& gamma, const std::vector<std::pair<Point, OrbitReport::Result>>& ps,
                    const std::vector<std::size_t>& sizes) {
  GammaStats s;
  s.gamma = gamma;
  std::size_t half = ps.size() / 2;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    switch (ps[i].second) {
      case OrbitReport::Result::AtLeast: s.any_at_least = true; break;
      case OrbitReport::Result::Unknown: s.any_unknown = true; break;
      case OrbitReport::Result::Full:
        s.max_full = std::max(s.max_full, sizes[i]);
        (i < half ? s.low_max : s.high_max) = std::max(i < half ? s.low_max : s.high_max, sizes[i]);
        break;
    }
  }
  return s;
}

json budgets_json(const ClassifyBudgets& b) {
  return {{"gamma_max", b.gamma_max}, {"samples", b.samples}, {"orbit_budget", b.orbit_budget}};
}

json profile_json(const Profile& p) {
  json j;
  switch (p.kind) {
    case Profile::Kind::BoundedBy:
      j["kind"] = "bounded";
      j["bound"] = p.bound;
      j["finite_nonsingletons"] = p.finite_nonsingletons ? json(*p.finite_nonsingletons) : json(nullptr);
      break;
    case Profile::Kind::UnboundedFinite: j["kind"] = "unbounded-finite"; break;
    case Profile::Kind::HasInfiniteBlock:
      j["kind"] = "infinite-block";
      j["block"] = p.infinite_block_id;
      break;
  }
  return j;
}

ClassName label_of_profile(const json& p) {
  std::string k = p.at("kind");
  if (k == "infinite-block") return ClassName::CS;
  if (k == "unbounded-finite") return ClassName::CP;
  if (p.at("bound").get<std::int64_t>() <= 1 || !p.at("finite_nonsingletons").is_null()) return ClassName::C1;
  return ClassName::CQ;
}

bool fn_worked_example(const std::string& metric) { return metric == "standard-omega" || metric == "standard-z"; }

// Points of the nonsingleton blocks when there are finitely many of them.
std::optional<std::vector<Point>> nonsingleton_points(const Partition& a) {
  Profile p = a.profile();
  if (p.kind != Profile::Kind::BoundedBy) return std::nullopt;
  if (p.bound > 1 && !p.finite_nonsingletons) return std::nullopt;
  std::int64_t want = p.bound <= 1 ? 0 : *p.finite_nonsingletons;
  std::vector<Point> out;
  for (std::int64_t r = 0, found = 0; found < want; ++r) {
    if (r > (1 << 16)) throw Error(ErrorKind::Budget, "nonsingleton blocks of " + a.name() + " not found");
    auto m = a.members(a.block_at(r));
    if (m.size() < 2) continue;
    ++found;
    out.insert(out.end(), m.begin(), m.end());
  }
  return out;
}

// A finite set whose pointwise stabilizer is certainly trivial.
std::optional<std::vector<Point>> triviality_set(const GroupDescriptor& g) {
  switch (g.kind) {
    case GroupDescriptor::Kind::Trivial: return std::vector<Point>{};
    case GroupDescriptor::Kind::Gens: return sfinite_class(g.gens).domain;
    case GroupDescriptor::Kind::Stabilizer: return nonsingleton_points(*g.partition);
    case GroupDescriptor::Kind::Fix: {
      auto s = triviality_set(*g.inner);
      if (!s) return std::nullopt;
      return sorted_unique(*s);
    }
    default: return std::nullopt;
  }
}

}  // namespace

OrbitReport orbit(const GroupDescriptor& g, const std::vector<Point>& gamma, Point alpha, std::size_t budget) {
  auto o = descriptor_oracle(std::make_shared<GroupDescriptor>(g));
  return probe(*o, sorted_unique(gamma), alpha, budget);
}

const char* to_string(ClassName c) {
  switch (c) {
    case ClassName::CS: return "C_S";
    case ClassName::CP: return "C_P";
    case ClassName::CQ: return "C_Q";
    case ClassName::C1: return "C_1";
    default: return "Unknown";
  }
}

const char* lambda_case(ClassName c) {
  switch (c) {
    case ClassName::CS: return "aleph_1";
    case ClassName::CP: return "aleph_0";
    case ClassName::CQ: return "finite>=3";
    case ClassName::C1: return "2";
    default: return "unknown";
  }
}

std::optional<int> class_rank(ClassName c) {
  switch (c) {
    case ClassName::C1: return 0;
    case ClassName::CQ: return 1;
    case ClassName::CP: return 2;
    case ClassName::CS: return 3;
    default: return std::nullopt;
  }
}

ClassName parse_class(const std::string& s) {
  for (ClassName c : {ClassName::CS, ClassName::CP, ClassName::CQ, ClassName::C1, ClassName::Unknown})
    if (s == to_string(c)) return c;
  throw Error(ErrorKind::Parse, "unknown class '" + s + "'");
}

ClassLabel classify_group(const GroupDescriptor& g, const ClassifyBudgets& b) {
  ClassLabel out;
  json ev{{"descriptor", g.to_string()}, {"budgets", budgets_json(b)}, {"probes", json::array()}, {"gamma", nullptr}};
  auto finish = [&](ClassName c, bool certified) {
    out.label = c;
    out.certified = certified;
    ev["label"] = to_string(c);
    ev["lambda_case"] = lambda_case(c);
    ev["certified"] = certified;
    out.evidence = std::move(ev);
    return out;
  };
  auto oracle = descriptor_oracle(std::make_shared<GroupDescriptor>(g));

  switch (g.kind) {
    case GroupDescriptor::Kind::Full:
      ev["certificate"] = {{"kind", "full"}};
      ev["probes"].push_back(probe(*oracle, {}, 0, b.orbit_budget).to_json());
      return finish(ClassName::CS, true);
    case GroupDescriptor::Kind::Trivial:
      ev["certificate"] = {{"kind", "trivial"}};
      ev["gamma"] = json::array();
      return finish(ClassName::C1, true);
    case GroupDescriptor::Kind::Gens: {
      auto rep = sfinite_class(g.gens);
      ev["certificate"] = {{"kind", "finite"}, {"order", rep.order}, {"domain", rep.domain}};
      ev["gamma"] = rep.domain;
      return finish(ClassName::C1, true);
    }
    case GroupDescriptor::Kind::Stabilizer: {
      try {
        classify_partition(*g.partition);
      } catch (const Error& e) {
        ev["reason"] = e.what();
        return finish(ClassName::Unknown, false);
      }
      json cert{{"kind", "stabilizer"}, {"partition", g.partition->name()}, {"profile", profile_json(g.partition->profile())}};
      ClassName c = label_of_profile(cert["profile"]);
      if (c == ClassName::C1) ev["gamma"] = *nonsingleton_points(*g.partition);
      ev["certificate"] = std::move(cert);
      for (Point a = 0; a < 4; ++a) ev["probes"].push_back(probe(*oracle, {}, a, b.orbit_budget).to_json());
      return finish(c, true);
    }
    case GroupDescriptor::Kind::FN: {
      auto mc = classify_metric(*g.metric);
      ev["metric_case"] = to_string(mc.result);
      ev["metric_evidence"] = mc.evidence;
      if (fn_worked_example(g.metric->name())) {
        ev["certificate"] = {{"kind", "fn-worked-example"}, {"metric", g.metric->name()}};
        return finish(ClassName::CQ, true);
      }
      ev["certificate"] = {{"kind", "fn-open"}, {"metric", g.metric->name()}};
      ev["reason"] = "no recorded argument places this bounded-permutation group";
      return finish(ClassName::Unknown, false);
    }
    case GroupDescriptor::Kind::Fix:
    case GroupDescriptor::Kind::Oracle: break;
  }

  // Probe initial segments: enlarging the fixed set only shrinks orbits, so these suffice.
  std::vector<GammaStats> stats;
  for (std::size_t k = 0; k <= b.gamma_max; ++k) {
    auto gamma = gamma_of(g, k);
    std::vector<std::pair<Point, OrbitReport::Result>> ps;
    std::vector<std::size_t> sizes;
    for (Point a = 0; a < static_cast<Point>(b.samples); ++a) {
      if (std::binary_search(gamma.begin(), gamma.end(), a)) continue;
      auto r = probe(*oracle, gamma, a, b.orbit_budget);
      ps.emplace_back(a, r.result);
      sizes.push_back(r.size());
      ev["probes"].push_back(r.to_json());
    }
    stats.push_back(stats_of(gamma, ps, sizes));
  }
  Decision d = decide(stats);
  ev["reason"] = d.reason;
  if (d.gamma) ev["gamma"] = *d.gamma;
  ev["budget_qualified"] = true;
  return finish(d.label, false);
}

std::optional<ClassName> replay_evidence(const json& ev) {
  try {
    if (ev.contains("certificate")) {
      const json& c = ev.at("certificate");
      std::string kind = c.at("kind");
      if (kind == "full") return ClassName::CS;
      if (kind == "trivial") return ClassName::C1;
      if (kind == "finite") return c.at("order").get<std::size_t>() >= 1 ? ClassName::C1 : ClassName::Unknown;
      if (kind == "stabilizer") return label_of_profile(c.at("profile"));
      if (kind == "fn-worked-example")
        return fn_worked_example(c.at("metric")) ? ClassName::CQ : ClassName::Unknown;
      if (kind == "fn-open") return ClassName::Unknown;
      return std::nullopt;
    }
    const json& probes = ev.at("probes");
    if (probes.empty()) return ClassName::Unknown;
    std::vector<GammaStats> stats;
    std::vector<Point> cur_gamma;
    std::vector<std::pair<Point, OrbitReport::Result>> ps;
    std::vector<std::size_t> sizes;
    bool open = false;
    auto flush = [&] {
      if (open) stats.push_back(stats_of(cur_gamma, ps, sizes));
      ps.clear();
      sizes.clear();
    };
    for (const json& p : probes) {
      auto gamma = p.at("gamma").get<std::vector<Point>>();
      if (!open || gamma != cur_gamma) {
        flush();
        cur_gamma = gamma;
        open = true;
      }
      const json& r = p.at("result");
      Point alpha = p.at("alpha");
      if (r.contains("full")) {
        auto pts = r.at("full").get<std::vector<Point>>();
        if (!std::binary_search(pts.begin(), pts.end(), alpha)) return std::nullopt;
        ps.emplace_back(alpha, OrbitReport::Result::Full);
        sizes.push_back(pts.size());
      } else if (r.contains("at_least")) {
        ps.emplace_back(alpha, OrbitReport::Result::AtLeast);
        sizes.push_back(r.at("at_least"));
      } else {
        ps.emplace_back(alpha, OrbitReport::Result::Unknown);
        sizes.push_back(0);
      }
    }
    flush();
    return decide(stats).label;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

Verdict discreteness(const GroupDescriptor& g, std::size_t budget) {
  Verdict v;
  v.evidence = {{"descriptor", g.to_string()}, {"budget", budget}};
  if (auto s = triviality_set(g)) {
    v.answer = Tri::Yes;
    v.evidence["gamma"] = *s;
    v.evidence["reason"] = "the stabilizer of this set is trivial";
    return v;
  }
  if (g.kind == GroupDescriptor::Kind::Oracle) {
    v.evidence["reason"] = "the oracle carries no certificates";
    return v;
  }
  auto oracle = descriptor_oracle(std::make_shared<GroupDescriptor>(g));
  auto& wit = v.evidence["witnesses"] = json::array();
  constexpr Point kScan = 4096;
  for (std::size_t k = 0; k <= budget; ++k) {
    auto gamma = gamma_of(g, k);
    bool found = false;
    for (Point a = 0; a < kScan && !found; ++a) {
      if (std::binary_search(gamma.begin(), gamma.end(), a)) continue;
      auto p = oracle->orbit(gamma, a, 2);
      if (p.points.size() < 2) continue;
      Point b = p.points[0] == a ? p.points[1] : p.points[0];
      auto h = oracle->act(gamma, a, b);
      if (!h || h->apply(a) != b) continue;
      bool fixes = std::all_of(gamma.begin(), gamma.end(), [&](Point x) { return h->apply(x) == x; });
      if (!fixes) continue;
      wit.push_back({{"gamma", gamma}, {"alpha", a}, {"image", b}, {"element", h->to_string()}});
      found = true;
    }
    if (!found) {
      v.evidence["reason"] = "no nonidentity element found for a fixed set of size " + std::to_string(gamma.size());
      return v;
    }
  }
  v.answer = Tri::No;
  v.evidence["reason"] = "every probed stabilizer contains a nonidentity element";
  return v;
}

Verdict compactness_criterion(const GroupDescriptor& g, std::size_t budget) {
  Verdict v;
  v.evidence = {{"descriptor", g.to_string()}, {"budget", budget}};
  auto oracle = descriptor_oracle(std::make_shared<GroupDescriptor>(g));

  const GroupDescriptor* base = g.kind == GroupDescriptor::Kind::Fix ? g.inner.get() : &g;
  Tri closed = Tri::Yes;
  if (base->kind == GroupDescriptor::Kind::FN) closed = Tri::Unknown;
  if (base->kind == GroupDescriptor::Kind::Oracle) closed = base->oracle->closed() ? Tri::Yes : Tri::No;
  v.evidence["closed"] = to_string(closed);

  Tri finite = Tri::Unknown;
  switch (base->kind) {
    case GroupDescriptor::Kind::Trivial:
    case GroupDescriptor::Kind::Gens: finite = Tri::Yes; break;
    case GroupDescriptor::Kind::Stabilizer:
      if (base->partition->profile().kind != Profile::Kind::HasInfiniteBlock) finite = Tri::Yes;
      break;
    default: break;
  }
  if (finite == Tri::Yes) {
    v.evidence["orbits"] = "finite by the descriptor";
  } else {
    auto& probes = v.evidence["probes"] = json::array();
    std::vector<Point> gamma = g.kind == GroupDescriptor::Kind::Fix ? g.fixed : std::vector<Point>{};
    for (Point a = 0; a < static_cast<Point>(budget); ++a) {
      auto r = probe(*oracle, gamma, a, 4096);
      probes.push_back(r.to_json());
      if (r.result == OrbitReport::Result::AtLeast) {
        finite = Tri::No;
        break;
      }
    }
  }
  v.evidence["finite_orbits"] = to_string(finite);
  if (finite == Tri::No || closed == Tri::No)
    v.answer = Tri::No;
  else if (finite == Tri::Yes && closed == Tri::Yes)
    v.answer = Tri::Yes;
  return v;
}

}  // namespace symkit
