#include <algorithm>
#include <set>
#include <sstream>

#include "symkit/trees.hpp"

namespace symkit {

namespace {

class InjectiveTuples : public DFamily {
 public:
  std::string name() const override { return "injective-tuples"; }
  Point pivot(std::size_t i) const override { return static_cast<Point>(i); }
  std::vector<Point> extensions(const std::vector<Point>& prefix, std::size_t limit) const override {
    std::set<Point> used(prefix.begin(), prefix.end());
    std::vector<Point> out;
    for (Point x = 0; out.size() < limit; ++x)
      if (!used.count(x)) out.push_back(x);
    return out;
  }
  std::optional<std::size_t> branching(std::size_t) const override { return std::nullopt; }

  // i -> tuple[i]; the tuple points outside [0, n) go back onto the uncovered part of [0, n) in order.
  Permutation realize(const std::vector<Point>& tuple) const override {
    Point n = static_cast<Point>(tuple.size());
    std::set<Point> targets(tuple.begin(), tuple.end());
    if (targets.size() != tuple.size()) throw Error(ErrorKind::Precondition, "tuple is not injective");
    std::vector<std::pair<Point, Point>> m;
    for (Point i = 0; i < n; ++i) m.emplace_back(i, tuple[static_cast<std::size_t>(i)]);
    std::vector<Point> extra_src, extra_dst;
    for (Point b : targets)
      if (b >= n) extra_src.push_back(b);
    for (Point i = 0; i < n; ++i)
      if (!targets.count(i)) extra_dst.push_back(i);
    for (std::size_t k = 0; k < extra_src.size(); ++k) m.emplace_back(extra_src[k], extra_dst[k]);
    return Permutation::from_map(m);
  }
};

class BlockChoice : public DFamily {
 public:
  explicit BlockChoice(PartitionPtr a) : a_(std::move(a)) {}
  std::string name() const override { return "block-choice(" + a_->name() + ")"; }
  Point pivot(std::size_t i) const override { return a_->block_at(static_cast<std::int64_t>(i)); }
  std::vector<Point> extensions(const std::vector<Point>& prefix, std::size_t limit) const override {
    return a_->members(pivot(prefix.size()), limit);
  }
  std::optional<std::size_t> branching(std::size_t i) const override {
    constexpr std::size_t cap = std::size_t{1} << 20;
    auto m = a_->members(pivot(i), cap);
    if (m.size() >= cap) return std::nullopt;
    return m.size();
  }
  Permutation realize(const std::vector<Point>& tuple) const override {
    std::vector<std::pair<Point, Point>> m;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      Point p = pivot(i);
      if (a_->block_of(tuple[i]) != p)
        throw Error(ErrorKind::Precondition, std::to_string(tuple[i]) + " lies outside block " + std::to_string(p));
      if (tuple[i] != p) {
        m.emplace_back(p, tuple[i]);
        m.emplace_back(tuple[i], p);
      }
    }
    return Permutation::from_map(m).with_block_certificate(a_->name());
  }

 private:
  PartitionPtr a_;
};

class TreeTuples : public DFamily {
 public:
  explicit TreeTuples(std::shared_ptr<const TreeState> t) : t_(std::move(t)) {
    for (std::size_t id = 0; id < t_->nodes.size(); ++id) {
      const auto& n = t_->nodes[id];
      std::vector<Point> tup;
      for (std::size_t i = 0; i < n.index.size(); ++i) tup.push_back(n.g.apply(t_->alphas[i]));
      node_of_[tup] = id;
      if (!tup.empty()) {
        Point last = tup.back();
        tup.pop_back();
        ext_[tup].insert(last);
      }
    }
  }
  std::string name() const override { return std::string("tree(") + to_string(t_->mode) + ")"; }
  Point pivot(std::size_t i) const override {
    if (i >= t_->alphas.size())
      throw Error(ErrorKind::Precondition, "tree has only " + std::to_string(t_->alphas.size()) + " pivots");
    return t_->alphas[i];
  }
  std::vector<Point> extensions(const std::vector<Point>& prefix, std::size_t limit) const override {
    std::vector<Point> out;
    auto it = ext_.find(prefix);
    if (it == ext_.end()) return out;
    for (Point x : it->second) {
      if (out.size() >= limit) break;
      out.push_back(x);
    }
    return out;
  }
  std::optional<std::size_t> branching(std::size_t i) const override {
    switch (t_->mode) {
      case TreeMode::Binary: return 2;
      case TreeMode::UnboundedOrbits: return i < t_->branching.size() ? t_->branching[i] : 0;
      default: return std::nullopt;
    }
  }
  Permutation realize(const std::vector<Point>& tuple) const override {
    auto it = node_of_.find(tuple);
    if (it == node_of_.end()) throw Error(ErrorKind::Precondition, "tuple is not realized by a built tree node");
    return limit(branch_sequence(*t_, t_->nodes[it->second].index), tuple.size());
  }

 private:
  std::shared_ptr<const TreeState> t_;
  std::map<std::vector<Point>, std::size_t> node_of_;
  std::map<std::vector<Point>, std::set<Point>> ext_;
};

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

constexpr std::size_t kMaxInterval = 8;
constexpr std::size_t kMaxLevels = 12;
constexpr std::size_t kJumpScan = std::size_t{1} << 20;

}  // namespace

DFamilyPtr injective_tuples_family() { return std::make_shared<InjectiveTuples>(); }
DFamilyPtr block_choice_family(PartitionPtr a) { return std::make_shared<BlockChoice>(std::move(a)); }
DFamilyPtr tree_family(std::shared_ptr<const TreeState> t) { return std::make_shared<TreeTuples>(std::move(t)); }

nlohmann::json ETree::to_json() const {
  nlohmann::json j;
  j["mode"] = mode == ETreeMode::Fresh ? "fresh" : "jump";
  j["family"] = family;
  j["breakpoints"] = breakpoints;
  j["jumps"] = jumps;
  if (mode == ETreeMode::Jump) j["round_bounds"] = round_bounds;
  auto& lv = j["levels"] = nlohmann::json::array();
  for (const auto& l : levels) {
    auto arr = nlohmann::json::array();
    for (const auto& n : l) arr.push_back({{"tuple", n.tuple}, {"pis", n.pis}});
    lv.push_back(std::move(arr));
  }
  return j;
}

ETree build_e_tree(const DFamily& d, ETreeMode mode, const std::vector<std::size_t>& breakpoints, std::size_t depth) {
  if (breakpoints.empty() || breakpoints[0] != 0)
    throw Error(ErrorKind::Precondition, "breakpoints must start at 0");
  for (std::size_t r = 1; r < breakpoints.size(); ++r) {
    if (breakpoints[r] <= breakpoints[r - 1]) throw Error(ErrorKind::Precondition, "breakpoints must increase");
    if (breakpoints[r] - breakpoints[r - 1] > kMaxInterval)
      throw Error(ErrorKind::Budget, "interval longer than " + std::to_string(kMaxInterval));
  }
  depth = std::min(depth, breakpoints.size() - 1);
  if (depth > kMaxLevels) throw Error(ErrorKind::Budget, "more than " + std::to_string(kMaxLevels) + " levels");

  ETree t;
  t.mode = mode;
  t.family = d.name();
  t.breakpoints.assign(breakpoints.begin(), breakpoints.begin() + static_cast<std::ptrdiff_t>(depth) + 1);
  t.levels.push_back({ENode{}});

  std::set<Point> prohibited;  // fresh components so far
  auto failure = [&](std::size_t r, const std::vector<Point>& prefix, const std::string& why) {
    std::ostringstream os;
    os << "level " << r << ", prefix length " << prefix.size() << ": " << why;
    return Error(ErrorKind::HypothesisFailure, os.str());
  };

  for (std::size_t r = 1; r <= depth; ++r) {
    std::size_t lo = t.breakpoints[r - 1], hi = t.breakpoints[r], len = hi - lo;
    if (mode == ETreeMode::Fresh) {
      for (std::size_t j = lo; j < hi; ++j) t.jumps.push_back(j);
    } else {
      std::uint64_t bound = t.levels[r - 1].size() * (len * factorial(len) + lo);
      t.round_bounds.push_back(bound);
      for (std::size_t j = lo; j < hi; ++j) {
        std::size_t i = t.jumps.empty() ? 0 : t.jumps.back() + 1;
        for (std::size_t tried = 0;; ++i, ++tried) {
          if (tried >= kJumpScan)
            throw Error(ErrorKind::HypothesisFailure,
                        "no index with branching " + std::to_string(bound) + " for position " + std::to_string(j));
          auto b = d.branching(i);
          if (!b || *b >= bound) break;
        }
        t.jumps.push_back(i);
      }
    }
    std::set<std::size_t> jump_set(t.jumps.begin() + static_cast<std::ptrdiff_t>(lo), t.jumps.end());
    std::size_t target_len = t.jumps.back() + 1;

    std::vector<ENode> next;
    for (std::size_t pid = 0; pid < t.levels[r - 1].size(); ++pid) {
      const ENode& parent = t.levels[r - 1][pid];
      std::vector<std::size_t> perm(len);
      for (std::size_t k = 0; k < len; ++k) perm[k] = lo + k;
      do {
        ENode n;
        n.parent = pid;
        n.pis = parent.pis;
        n.pis.push_back(perm);
        n.tuple = parent.tuple;
        while (n.tuple.size() < target_len) {
          bool fresh = mode == ETreeMode::Fresh || jump_set.count(n.tuple.size());
          std::size_t want = fresh ? prohibited.size() + 1 : 1;
          auto ext = d.extensions(n.tuple, want);
          std::optional<Point> pick;
          for (Point x : ext)
            if (!fresh || !prohibited.count(x)) {
              pick = x;
              break;
            }
          if (!pick) throw failure(r, n.tuple, fresh ? "no fresh extension" : "no extension");
          if (fresh) prohibited.insert(*pick);
          n.tuple.push_back(*pick);
        }
        next.push_back(std::move(n));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    t.levels.push_back(std::move(next));
  }
  return t;
}

Permutation build_s(const ETree& t) {
  std::map<Point, Point> s;
  for (std::size_t r = 1; r < t.levels.size(); ++r) {
    std::size_t lo = t.breakpoints[r - 1];
    for (const auto& n : t.levels[r]) {
      const auto& pi = n.pis[r - 1];
      for (std::size_t k = 0; k < pi.size(); ++k) {
        Point from = n.tuple[t.jumps[lo + k]];
        Point to = n.tuple[t.jumps[pi[k]]];
        auto [it, ok] = s.emplace(from, to);
        if (!ok && it->second != to)
          throw Error(ErrorKind::IllFormedTree, "component " + std::to_string(from) + " assigned twice");
      }
    }
  }
  try {
    return Permutation::from_map({s.begin(), s.end()}).with_label("s");
  } catch (const Error& e) {
    throw Error(ErrorKind::IllFormedTree, e.what());
  }
}

ConjugationReport verify_conjugation(const ETree& t, const Permutation& s, const DFamily& d,
                                     const std::vector<std::size_t>& pi, std::size_t window) {
  ConjugationReport rep;
  std::size_t levels = 0;
  while (levels < t.levels_built() && t.breakpoints[levels] < window) ++levels;
  if (t.breakpoints[levels] < window)
    throw Error(ErrorKind::Precondition, "window " + std::to_string(window) + " exceeds the built levels");
  std::size_t covered = t.breakpoints[levels];
  std::vector<std::size_t> full(covered);
  for (std::size_t k = 0; k < covered; ++k) full[k] = k < pi.size() ? pi[k] : k;

  std::size_t node = 0;
  for (std::size_t r = 1; r <= levels; ++r) {
    std::size_t lo = t.breakpoints[r - 1], hi = t.breakpoints[r];
    std::vector<std::size_t> piece(full.begin() + static_cast<std::ptrdiff_t>(lo),
                                   full.begin() + static_cast<std::ptrdiff_t>(hi));
    auto sorted = piece;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k)
      if (sorted[k] != lo + k)
        throw Error(ErrorKind::Precondition, "pi does not preserve [" + std::to_string(lo) + ", " +
                                                 std::to_string(hi) + ")");
    const auto& lvl = t.levels[r];
    auto it = std::find_if(lvl.begin(), lvl.end(), [&](const ENode& n) {
      return n.parent == node && n.pis.back() == piece;
    });
    if (it == lvl.end()) throw Error(ErrorKind::IllFormedTree, "no node for level " + std::to_string(r));
    node = static_cast<std::size_t>(it - lvl.begin());
  }
  const auto& tuple = t.levels[levels][node].tuple;
  Permutation g = d.realize(tuple);
  for (std::size_t i = 0; i < window; ++i) {
    Point lhs = s.apply(g.apply(d.pivot(t.jumps[i])));
    Point rhs = g.apply(d.pivot(t.jumps[full[i]]));
    rep.checked.push_back(i);
    if (lhs != rhs) {
      rep.pass = false;
      rep.detail = "index " + std::to_string(i) + ": " + std::to_string(lhs) + " != " + std::to_string(rhs);
      break;
    }
  }
  return rep;
}

}  // namespace symkit
