#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <random>
#include <sstream>

#include "symkit/classifier.hpp"
#include "symkit/local_decomp.hpp"
#include "symkit/metrics.hpp"
#include "symkit/partitions.hpp"
#include "symkit/perm.hpp"
#include "symkit/trees.hpp"
#include "symkit/witnesses.hpp"

using namespace symkit;
using nlohmann::json;

namespace {

struct Globals {
  Point window = 64;
  std::uint64_t budget = 1000000;
  bool json = false;
  std::uint64_t seed = 1;
};

Globals G;

constexpr int kDefinite = 0;
constexpr int kError = 1;
constexpr int kUnknown = 2;

int emit(const json& j, const std::string& text, int code = kDefinite) {
  if (G.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
  return code;
}

int tri_code(Tri t) { return t == Tri::Unknown ? kUnknown : kDefinite; }

std::vector<Point> images(const Permutation& p, Point window) {
  std::vector<Point> out;
  for (Point x = 0; x < window; ++x) out.push_back(p.apply(x));
  return out;
}

std::string join(const std::vector<Point>& v, const char* sep = " ") {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
  return os.str();
}

std::vector<bool> parse_bits(const std::string& s) {
  std::vector<bool> out;
  for (char c : s) {
    if (c != '0' && c != '1') throw Error(ErrorKind::Parse, "bit string expected, got '" + s + "'");
    out.push_back(c == '1');
  }
  return out;
}

DFamilyPtr family_for(const std::string& spec, std::shared_ptr<const TreeState> tree) {
  if (spec == "injective") return injective_tuples_family();
  if (spec.rfind("blocks:", 0) == 0) return block_choice_family(parse_partition(spec.substr(7)));
  if (spec == "tree") return tree_family(std::move(tree));
  throw Error(ErrorKind::Parse, "unknown tuple family '" + spec + "' (injective, blocks:<partition>, tree)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symkit: computable permutations of the naturals and closed-subgroup classification"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--window", G.window, "probe window [0, n)")->capture_default_str();
  app.add_option("--budget", G.budget, "evaluation step budget per query")->capture_default_str();
  app.add_flag("--json", G.json, "print JSON");
  app.add_option("--seed", G.seed, "seed for sampled probes")->capture_default_str();

  std::function<int()> action;

  // classify / orbit
  std::string desc;
  ClassifyBudgets cb;
  bool with_predicates = false;
  auto* classify = app.add_subcommand("classify", "classify a group descriptor");
  classify->add_option("descriptor", desc)->required();
  classify->add_option("--gamma-max", cb.gamma_max)->capture_default_str();
  classify->add_option("--samples", cb.samples)->capture_default_str();
  classify->add_option("--orbit-budget", cb.orbit_budget)->capture_default_str();
  classify->add_flag("--predicates", with_predicates, "also report discreteness and compactness");
  classify->callback([&] {
    action = [&] {
      auto g = parse_descriptor(desc);
      auto l = classify_group(*g, cb);
      json j = l.evidence;
      std::string text = std::string(to_string(l.label)) + (l.certified ? " (certified)" : " (at budget)") +
                         "  lambda: " + lambda_case(l.label);
      if (with_predicates) {
        auto d = discreteness(*g, cb.gamma_max);
        auto c = compactness_criterion(*g, cb.samples);
        j["discrete"] = {{"answer", to_string(d.answer)}, {"evidence", d.evidence}};
        j["compact"] = {{"answer", to_string(c.answer)}, {"evidence", c.evidence}};
        text += std::string("\ndiscrete: ") + to_string(d.answer) + "\ncompact: " + to_string(c.answer);
      }
      return emit(j, text, l.label == ClassName::Unknown ? kUnknown : kDefinite);
    };
  });

  std::vector<Point> gamma;
  Point alpha = 0;
  std::size_t orbit_budget = 4096;
  auto* orb = app.add_subcommand("orbit", "orbit of a point under a pointwise stabilizer");
  orb->add_option("descriptor", desc)->required();
  orb->add_option("--gamma", gamma)->delimiter(',');
  orb->add_option("--alpha", alpha)->required();
  orb->add_option("--orbit-budget", orbit_budget)->capture_default_str();
  orb->callback([&] {
    action = [&] {
      auto g = parse_descriptor(desc);
      auto r = orbit(*g, gamma, alpha, orbit_budget);
      std::string text;
      switch (r.result) {
        case OrbitReport::Result::Full: text = "{" + join(r.points, ",") + "}"; break;
        case OrbitReport::Result::AtLeast: text = "AtLeast(" + std::to_string(r.at_least) + ")"; break;
        case OrbitReport::Result::Unknown: text = "Unknown (at least " + std::to_string(r.points.size()) + ")"; break;
      }
      return emit(r.to_json(), text, r.result == OrbitReport::Result::Unknown ? kUnknown : kDefinite);
    };
  });

  // metric
  auto* metric = app.add_subcommand("metric", "generalized metrics");
  metric->require_subcommand(1);
  std::string mspec, pspec, pspec2;
  std::vector<std::string> moves;
  Point pa = 0, pb = 0;
  std::string radius = "64";
  auto* mclass = metric->add_subcommand("classify", "four-case classification of a metric");
  mclass->add_option("metric", mspec)->required();
  mclass->callback([&] {
    action = [&] {
      auto m = parse_metric(mspec);
      auto c = classify_metric(*m);
      return emit(c.evidence, to_string(c.result),
                  c.result == MetricCase::Unknown ? kUnknown : kDefinite);
    };
  });
  auto* mrefine = metric->add_subcommand("refine", "distance in the refinement by a set of moves");
  mrefine->add_option("metric", mspec)->required();
  mrefine->add_option("--move", moves, "permutation that should move points by at most 1")->required();
  mrefine->add_option("--a", pa)->required();
  mrefine->add_option("--b", pb)->required();
  mrefine->add_option("--radius", radius)->capture_default_str();
  mrefine->callback([&] {
    action = [&] {
      std::vector<Permutation> us;
      for (const auto& s : moves) us.push_back(parse_permutation(s));
      auto d = std::make_shared<RefinedMetric>(parse_metric(mspec), us, parse_rational(radius));
      auto ans = d->query(pa, pb, parse_rational(radius));
      std::string v = ans.infinite ? "inf" : rational_text(ans.value);
      json j{{"a", pa}, {"b", pb}, {"exact", ans.exact}, {"value", v}};
      return emit(j, ans.exact ? v : "AtLeast(" + v + ")", ans.exact ? kDefinite : kUnknown);
    };
  });
  auto* mnorm = metric->add_subcommand("norm", "norm of a permutation");
  mnorm->add_option("metric", mspec)->required();
  mnorm->add_option("perm", pspec)->required();
  mnorm->callback([&] {
    action = [&] {
      auto r = norm(parse_permutation(pspec), *parse_metric(mspec), G.window);
      const char* kinds[] = {"certified-finite", "certified-infinite", "unknown"};
      json j{{"kind", kinds[static_cast<int>(r.kind)]}, {"lower_bound", r.lower_bound.to_string()}, {"note", r.note}};
      std::string text = std::string(kinds[static_cast<int>(r.kind)]) + " lower bound " + r.lower_bound.to_string();
      if (r.kind == NormReport::Kind::CertifiedFinite) {
        j["bound"] = r.bound.to_string();
        text += ", bound " + r.bound.to_string();
      }
      return emit(j, text, r.kind == NormReport::Kind::Unknown ? kUnknown : kDefinite);
    };
  });
  std::int64_t lo = -8, hi = 8;
  auto* mflow = metric->add_subcommand("flow", "net flow of a bounded permutation of the integers");
  mflow->add_option("perm", pspec)->required();
  mflow->add_option("--lo", lo)->capture_default_str();
  mflow->add_option("--hi", hi)->capture_default_str();
  mflow->callback([&] {
    action = [&] {
      auto f = net_flow(parse_permutation(pspec), lo, hi);
      json j{{"per_cut", f.per_cut}, {"value", f.common_value ? json(*f.common_value) : json(nullptr)}};
      return emit(j, f.common_value ? std::to_string(*f.common_value) : "cuts disagree",
                  f.common_value ? kDefinite : kUnknown);
    };
  });

  // local
  auto* local = app.add_subcommand("local", "products of local permutations");
  local->require_subcommand(1);
  std::size_t count = 16;
  auto* ldec = local->add_subcommand("decompose", "factor into two local permutations");
  ldec->add_option("perm", pspec)->required();
  ldec->add_option("--count", count)->capture_default_str();
  ldec->callback([&] {
    action = [&] {
      auto f = parse_permutation(pspec);
      auto d = decompose_local(f, count);
      auto gi = images(d.g, G.window), hi_ = images(d.h, G.window);
      bool ok = true;
      for (Point x = 0; x < G.window; ++x) ok = ok && d.h.apply(d.g.apply(x)) == f.apply(x);
      json j{{"breakpoints", d.breaks->prefix(count)}, {"g", gi}, {"h", hi_}, {"product_matches", ok}};
      return emit(j, "breakpoints " + join(d.breaks->prefix(count)) + "\ng " + join(gi) + "\nh " + join(hi_),
                  ok ? kDefinite : kError);
    };
  });
  auto* lbp = local->add_subcommand("breakpoints", "least breakpoints");
  lbp->add_option("perm", pspec)->required();
  lbp->add_option("--count", count)->capture_default_str();
  lbp->callback([&] {
    action = [&] {
      auto b = breakpoints(parse_permutation(pspec), count);
      return emit(json{{"a", b.a}}, join(b.a));
    };
  });
  auto* lcheck = local->add_subcommand("check", "look for invariant initial segments");
  lcheck->add_option("perm", pspec)->required();
  lcheck->callback([&] {
    action = [&] {
      auto r = is_local(parse_permutation(pspec), G.window);
      json j{{"answer", to_string(r.answer)}, {"at_budget", r.at_budget}, {"invariant_prefixes", r.invariant_prefixes},
             {"detail", r.detail}};
      return emit(j, std::string(to_string(r.answer)) + (r.at_budget ? " (at budget)" : ""), tri_code(r.answer));
    };
  });

  // witness
  auto* wit = app.add_subcommand("witness", "equivalence witnesses");
  wit->require_subcommand(1);
  std::size_t depth = 6;
  auto* wp = wit->add_subcommand("p-equiv", "witness for two unbounded-size partitions");
  wp->add_option("a", pspec)->required();
  wp->add_option("b", pspec2)->required();
  wp->add_option("--depth", depth)->capture_default_str();
  wp->callback([&] {
    action = [&] {
      auto w = p_equiv_witness(parse_partition(pspec), parse_partition(pspec2), depth);
      auto pack = [](const std::vector<PackingEntry>& v) {
        json a = json::array();
        for (const auto& e : v) a.push_back({{"target", e.target}, {"source", e.source}, {"dumped", e.dumped}});
        return a;
      };
      json j{{"f", images(w.f, G.window)}, {"g", images(w.g, G.window)}, {"packing_f", pack(w.packing_f)},
             {"packing_g", pack(w.packing_g)}};
      return emit(j, "f " + join(images(w.f, G.window)) + "\ng " + join(images(w.g, G.window)));
    };
  });
  auto* wq = wit->add_subcommand("q-equiv", "red/green witness for a bounded-size partition");
  wq->add_option("a", pspec)->required();
  wq->add_option("--depth", depth)->capture_default_str();
  wq->add_option("--factor", pspec2, "finite block-preserving permutation to factor");
  wq->callback([&] {
    action = [&] {
      auto w = q_equiv_witness(parse_partition(pspec), depth);
      json j{{"bound", w.bound()}, {"f", images(w.f(), G.window)}, {"g", images(w.g(), G.window)}};
      std::string text = "bound " + std::to_string(w.bound()) + "\nf " + join(images(w.f(), G.window)) + "\ng " +
                         join(images(w.g(), G.window));
      if (!pspec2.empty()) {
        auto fs = w.factorize(parse_permutation(pspec2));
        json a = json::array();
        for (const auto& q : fs) {
          a.push_back({{"perm", q.perm.to_string()}, {"color", to_string(q.color)}, {"certified", q.certified}});
          text += "\n" + q.perm.to_string() + " " + to_string(q.color) + (q.certified ? "" : " (uncertified)");
        }
        j["factors"] = a;
      }
      return emit(j, text);
    };
  });
  auto* we = wit->add_subcommand("even-shift", "shift element over the marked points of a partition");
  we->add_option("a", pspec)->required();
  we->callback([&] {
    action = [&] {
      auto w = even_shift_witness(parse_partition(pspec));
      std::vector<Point> marked;
      for (std::int64_t i = -4; i < 8; ++i) marked.push_back(w.marked(i));
      json j{{"marked_from_-4", marked}, {"shift", images(w.shift(), G.window)}};
      return emit(j, "marked(-4..7) " + join(marked) + "\nshift " + join(images(w.shift(), G.window)));
    };
  });
  std::int64_t clo = 0, anchor = 0;
  std::string target = "1";
  bool anchor_bit = false;
  auto* wc = wit->add_subcommand("commutator", "realize a block pattern as a commutator");
  wc->add_option("--lo", clo)->capture_default_str();
  wc->add_option("--target", target, "bit per block, starting at --lo")->required();
  wc->add_option("--anchor", anchor)->capture_default_str();
  wc->add_option("--anchor-bit", anchor_bit)->capture_default_str();
  wc->callback([&] {
    action = [&] {
      auto s = commutator_solve(clo, parse_bits(target), anchor, anchor_bit);
      json flips = json::object();
      for (auto [i, b] : s.flips) flips[std::to_string(i)] = b;
      std::string pattern;
      for (std::int64_t i = s.lo; i < s.hi; ++i) {
        auto [x, y] = commutator_block(i);
        pattern += s.commutator.apply(x) == y ? '1' : '0';
      }
      json j{{"lo", s.lo}, {"hi", s.hi}, {"flips", flips}, {"realized", pattern}};
      return emit(j, "realized " + pattern, pattern == target ? kDefinite : kError);
    };
  });
  auto* w3 = wit->add_subcommand("three-cycle", "commutator of two finite permutations meeting in one point");
  w3->add_option("g", pspec)->required();
  w3->add_option("s", pspec2)->required();
  w3->callback([&] {
    action = [&] {
      auto c = three_cycle_extract(parse_permutation(pspec), parse_permutation(pspec2));
      return emit(json{{"result", c.to_string()}}, c.to_string());
    };
  });

  // tree
  auto* tree = app.add_subcommand("tree", "stabilizer trees");
  tree->require_subcommand(1);
  std::string mode = "binary", oracle_desc = "stab:partition:a0", family = "injective";
  std::size_t tdepth = 3, edepth = 2;
  std::vector<std::size_t> choice, bps{0, 2, 4}, pi;
  bool jump = false;
  auto tree_opts = [&](CLI::App* c) {
    c->add_option("--mode", mode, "inf | unbounded | binary")->capture_default_str();
    c->add_option("--depth", tdepth)->capture_default_str();
    c->add_option("--oracle", oracle_desc, "group descriptor")->capture_default_str();
  };
  auto build = [&] {
    TreeOptions o;
    o.mode = parse_tree_mode(mode);
    o.depth = tdepth;
    return std::make_shared<const TreeState>(build_tree(*descriptor_oracle(parse_descriptor(oracle_desc)), o));
  };
  auto* tb = tree->add_subcommand("build", "build and check a tree");
  tree_opts(tb);
  tb->callback([&] {
    action = [&] {
      auto t = build();
      auto c = check_tree(*t);
      json j = t->to_json();
      j["check"] = {{"pass", c.pass}, {"pairs", c.pairs_checked}, {"failures", c.failures}};
      std::string text = std::string(to_string(t->mode)) + " tree, " + std::to_string(t->nodes.size()) +
                         " nodes, pivots " + join(t->alphas) + "\ncheck " + (c.pass ? "pass" : "FAIL");
      for (const auto& f : c.failures) text += "\n  " + f;
      return emit(j, text, c.pass ? kDefinite : kError);
    };
  });
  auto* tbr = tree->add_subcommand("branch", "limit along a path of choices");
  tree_opts(tbr);
  tbr->add_option("--choice", choice)->delimiter(',')->required();
  tbr->callback([&] {
    action = [&] {
      auto t = build();
      auto g = limit(branch_sequence(*t, choice), std::min(choice.size(), t->alphas.size()));
      std::vector<Point> piv;
      for (std::size_t i = 0; i < t->alphas.size(); ++i) piv.push_back(g.apply(t->alphas[i]));
      json j{{"pivots", t->alphas}, {"pivot_images", piv}, {"images", images(g, G.window)}};
      return emit(j, "pivots " + join(t->alphas) + "\nimages " + join(piv));
    };
  });
  auto e_opts = [&](CLI::App* c) {
    tree_opts(c);
    c->add_option("--family", family, "injective | blocks:<partition> | tree")->capture_default_str();
    c->add_option("--breakpoints", bps)->delimiter(',')->capture_default_str();
    c->add_option("--levels", edepth)->capture_default_str();
    c->add_flag("--jump", jump, "spread fresh components over indices with enough branching");
  };
  auto* ts = tree->add_subcommand("s", "build a tuple tree and its conjugating permutation");
  e_opts(ts);
  ts->callback([&] {
    action = [&] {
      auto d = family_for(family, family == "tree" ? build() : nullptr);
      auto et = build_e_tree(*d, jump ? ETreeMode::Jump : ETreeMode::Fresh, bps, edepth);
      auto s = build_s(et);
      json j = et.to_json();
      j["s"] = s.to_string();
      std::string text = "levels";
      for (const auto& l : et.levels) text += " " + std::to_string(l.size());
      return emit(j, text + "\ns " + s.to_string());
    };
  });
  auto* tv = tree->add_subcommand("verify", "check the conjugation identity along the branch chosen by pi");
  e_opts(tv);
  tv->add_option("--pi", pi, "images of 0..n-1")->delimiter(',')->required();
  tv->callback([&] {
    action = [&] {
      auto d = family_for(family, family == "tree" ? build() : nullptr);
      auto et = build_e_tree(*d, jump ? ETreeMode::Jump : ETreeMode::Fresh, bps, edepth);
      auto s = build_s(et);
      auto r = verify_conjugation(et, s, *d, pi, pi.size());
      json j{{"pass", r.pass}, {"checked", r.checked}, {"detail", r.detail}};
      return emit(j, r.pass ? "pass" : "FAIL " + r.detail, r.pass ? kDefinite : kError);
    };
  });

  // perm
  auto* perm = app.add_subcommand("perm", "permutations");
  perm->require_subcommand(1);
  std::vector<Point> points;
  auto* pe = perm->add_subcommand("eval", "images of points (default: the window)");
  pe->add_option("perm", pspec)->required();
  pe->add_option("--points", points)->delimiter(',');
  pe->callback([&] {
    action = [&] {
      auto p = parse_permutation(pspec);
      if (points.empty())
        for (Point x = 0; x < G.window; ++x) points.push_back(x);
      std::vector<Point> out;
      for (Point x : points) out.push_back(p.apply(x));
      return emit(json{{"points", points}, {"images", out}}, join(out));
    };
  });
  std::size_t samples = 0;
  auto* pv = perm->add_subcommand("verify", "check bijectivity on the window and on sampled points");
  pv->add_option("perm", pspec)->required();
  pv->add_option("--samples", samples, "extra seeded points beyond the window")->capture_default_str();
  pv->callback([&] {
    action = [&] {
      auto p = parse_permutation(pspec);
      auto r = verify_window(p, G.window);
      std::mt19937_64 rng(G.seed);
      std::uniform_int_distribution<Point> dist(G.window, G.window * 64 + 1024);
      for (std::size_t i = 0; i < samples && r.pass; ++i) {
        Point x = dist(rng);
        if (p.apply_inverse(p.apply(x)) != x) {
          r.pass = false;
          r.counterexample = x;
          r.detail = "inverse does not undo the image of " + std::to_string(x);
        }
      }
      json j{{"pass", r.pass}, {"detail", r.detail}};
      if (r.counterexample) j["counterexample"] = *r.counterexample;
      return emit(j, r.pass ? "pass" : "FAIL " + r.detail, r.pass ? kDefinite : kError);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kError;
  }
  set_step_budget(G.budget);
  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (G.json) std::cout << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump(2) << "\n";
    return kError;
  }
}
