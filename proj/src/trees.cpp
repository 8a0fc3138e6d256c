#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

#include "symkit/trees.hpp"

namespace symkit {

namespace {

bool contains(const std::vector<Point>& sorted, Point x) { return std::binary_search(sorted.begin(), sorted.end(), x); }

std::string list_text(const std::vector<Point>& v, std::size_t cap = 16) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < v.size() && i < cap; ++i) os << (i ? "," : "") << v[i];
  if (v.size() > cap) os << ",... (" << v.size() << " points)";
  os << "}";
  return os.str();
}

class FullOracle : public GroupOracle {
 public:
  std::string name() const override { return "full"; }
  OrbitProbe orbit(const std::vector<Point>& gamma, Point alpha, std::size_t n) const override {
    if (contains(gamma, alpha)) return {true, {alpha}};
    OrbitProbe p;
    for (Point x = 0; p.points.size() < n; ++x)
      if (!contains(gamma, x)) p.points.push_back(x);
    return p;
  }
  std::optional<Permutation> act(const std::vector<Point>& gamma, Point alpha, Point target) const override {
    if (alpha == target) return Permutation::identity();
    if (contains(gamma, alpha) || contains(gamma, target)) return std::nullopt;
    return Permutation::transposition(alpha, target);
  }
};

class TrivialOracle : public GroupOracle {
 public:
  std::string name() const override { return "trivial"; }
  OrbitProbe orbit(const std::vector<Point>&, Point alpha, std::size_t) const override { return {true, {alpha}}; }
  std::optional<Permutation> act(const std::vector<Point>&, Point alpha, Point target) const override {
    if (alpha == target) return Permutation::identity();
    return std::nullopt;
  }
  std::optional<std::size_t> orbit_bound() const override { return 1; }
};

class StabilizerOracle : public GroupOracle {
 public:
  explicit StabilizerOracle(PartitionPtr a) : a_(std::move(a)) {}
  std::string name() const override { return "stabilizer(" + a_->name() + ")"; }

  OrbitProbe orbit(const std::vector<Point>& gamma, Point alpha, std::size_t n) const override {
    if (contains(gamma, alpha)) return {true, {alpha}};
    std::size_t cap = n + gamma.size() + 1;
    auto m = a_->members(a_->block_of(alpha), cap);
    OrbitProbe p;
    p.complete = m.size() < cap;
    for (Point x : m)
      if (!contains(gamma, x)) p.points.push_back(x);
    if (!p.complete && p.points.size() > n) p.points.resize(n);
    return p;
  }

  std::optional<Permutation> act(const std::vector<Point>& gamma, Point alpha, Point target) const override {
    if (alpha == target) return Permutation::identity();
    if (contains(gamma, alpha) || contains(gamma, target)) return std::nullopt;
    if (a_->block_of(alpha) != a_->block_of(target)) return std::nullopt;
    return Permutation::transposition(alpha, target).with_block_certificate(a_->name());
  }

  std::optional<std::size_t> orbit_bound() const override {
    auto p = a_->profile();
    if (p.kind != Profile::Kind::BoundedBy) return std::nullopt;
    return static_cast<std::size_t>(p.bound);
  }

 private:
  PartitionPtr a_;
};

class FiniteOracle : public GroupOracle {
 public:
  FiniteOracle(std::vector<Permutation> gens, std::size_t cap) {
    std::set<Point> dom;
    for (const auto& g : gens) {
      if (!g.support_bound()) throw Error(ErrorKind::NoSupportCertificate, g.to_string());
      for (Point x : support_of(g)) dom.insert(x);
    }
    domain_.assign(dom.begin(), dom.end());
    std::vector<std::vector<std::size_t>> gen_maps;
    for (const auto& g : gens) {
      std::vector<std::size_t> m(domain_.size());
      for (std::size_t i = 0; i < domain_.size(); ++i) m[i] = local(g.apply(domain_[i]));
      gen_maps.push_back(std::move(m));
    }
    std::vector<std::size_t> id(domain_.size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
    std::set<std::vector<std::size_t>> seen{id};
    std::deque<std::vector<std::size_t>> queue{id};
    while (!queue.empty()) {
      auto cur = queue.front();
      queue.pop_front();
      elements_.push_back(cur);
      for (const auto& gm : gen_maps) {
        std::vector<std::size_t> next(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) next[i] = gm[cur[i]];
        if (seen.insert(next).second) {
          if (seen.size() > cap) throw Error(ErrorKind::Budget, "group order exceeds " + std::to_string(cap));
          queue.push_back(std::move(next));
        }
      }
    }
  }

  std::string name() const override { return "finite(" + std::to_string(elements_.size()) + ")"; }

  OrbitProbe orbit(const std::vector<Point>& gamma, Point alpha, std::size_t) const override {
    if (!std::binary_search(domain_.begin(), domain_.end(), alpha)) return {true, {alpha}};
    std::set<Point> out;
    for (const auto& e : elements_)
      if (fixes(e, gamma)) out.insert(domain_[e[local(alpha)]]);
    return {true, {out.begin(), out.end()}};
  }

  std::optional<Permutation> act(const std::vector<Point>& gamma, Point alpha, Point target) const override {
    if (alpha == target) return Permutation::identity();
    if (!std::binary_search(domain_.begin(), domain_.end(), alpha) ||
        !std::binary_search(domain_.begin(), domain_.end(), target))
      return std::nullopt;
    for (const auto& e : elements_) {
      if (domain_[e[local(alpha)]] != target || !fixes(e, gamma)) continue;
      std::vector<std::pair<Point, Point>> m;
      for (std::size_t i = 0; i < e.size(); ++i) m.emplace_back(domain_[i], domain_[e[i]]);
      return Permutation::from_map(m);
    }
    return std::nullopt;
  }

  std::optional<std::size_t> orbit_bound() const override { return std::max<std::size_t>(1, domain_.size()); }

 private:
  std::size_t local(Point x) const { return std::lower_bound(domain_.begin(), domain_.end(), x) - domain_.begin(); }
  bool fixes(const std::vector<std::size_t>& e, const std::vector<Point>& gamma) const {
    for (Point x : gamma) {
      if (!std::binary_search(domain_.begin(), domain_.end(), x)) continue;
      std::size_t i = local(x);
      if (e[i] != i) return false;
    }
    return true;
  }

  std::vector<Point> domain_;
  std::vector<std::vector<std::size_t>> elements_;
};

}  // namespace

OraclePtr full_group_oracle() { return std::make_shared<FullOracle>(); }
OraclePtr trivial_group_oracle() { return std::make_shared<TrivialOracle>(); }
OraclePtr partition_stabilizer_oracle(PartitionPtr a) { return std::make_shared<StabilizerOracle>(std::move(a)); }
OraclePtr finite_generated_oracle(std::vector<Permutation> gens, std::size_t cap) {
  return std::make_shared<FiniteOracle>(std::move(gens), cap);
}

const char* to_string(TreeMode m) {
  switch (m) {
    case TreeMode::InfOrbits: return "inf-orbits";
    case TreeMode::UnboundedOrbits: return "unbounded-orbits";
    default: return "binary";
  }
}

TreeMode parse_tree_mode(const std::string& s) {
  if (s == "inf-orbits" || s == "inf") return TreeMode::InfOrbits;
  if (s == "unbounded-orbits" || s == "unbounded") return TreeMode::UnboundedOrbits;
  if (s == "binary") return TreeMode::Binary;
  throw Error(ErrorKind::Parse, "unknown tree mode '" + s + "'");
}

const TreeNode* TreeState::find(const std::vector<std::size_t>& index) const {
  auto it = by_index.find(index);
  return it == by_index.end() ? nullptr : &nodes[it->second];
}

nlohmann::json TreeState::to_json() const {
  nlohmann::json j;
  j["mode"] = to_string(mode);
  j["depth"] = depth;
  j["oracle"] = oracle;
  j["alphas"] = alphas;
  if (mode == TreeMode::Binary) j["betas"] = betas;
  if (mode == TreeMode::UnboundedOrbits) j["branching"] = branching;
  j["gammas"] = gammas;
  j["level_sizes"] = nlohmann::json::array();
  for (const auto& l : levels) j["level_sizes"].push_back(l.size());
  auto& arr = j["nodes"] = nlohmann::json::array();
  for (const auto& n : nodes) {
    nlohmann::json e;
    e["index"] = n.index;
    e["level"] = n.level;
    e["step"] = n.step.to_string();
    e["fixed_count"] = n.fixed.size();
    std::vector<Point> images;
    for (std::size_t i = 0; i < n.index.size(); ++i) images.push_back(n.g.apply(alphas[i]));
    e["pivot_images"] = images;
    arr.push_back(std::move(e));
  }
  return j;
}

namespace {

constexpr std::size_t kMaxDepth = 12;

class Builder {
 public:
  Builder(const GroupOracle& g, const TreeOptions& o) : g_(g), o_(o) {
    t_.mode = o.mode;
    t_.depth = o.depth;
    t_.oracle = g.name();
    TreeNode root;
    root.g = Permutation::identity();
    root.step = Permutation::identity();
    t_.nodes.push_back(root);
    t_.by_index[{}] = 0;
    t_.levels.push_back({0});
  }

  TreeState run() {
    if (o_.depth > kMaxDepth)
      throw Error(ErrorKind::Budget, "tree depth " + std::to_string(o_.depth) + " exceeds " + std::to_string(kMaxDepth));
    if (o_.mode == TreeMode::Binary && (!g_.orbit_bound() || *g_.orbit_bound() < 2))
      throw Error(ErrorKind::Precondition, "binary trees need an orbit bound of at least 2 from " + g_.name());
    for (std::size_t j = 1; j <= o_.depth; ++j) {
      prepare_pivot(j - 1);
      t_.levels.emplace_back();
      switch (o_.mode) {
        case TreeMode::Binary: grow_binary(j); break;
        case TreeMode::UnboundedOrbits: grow_unbounded(j); break;
        case TreeMode::InfOrbits: grow_inf(j); break;
      }
    }
    return std::move(t_);
  }

 private:
  // Preimages of the first i+1 enumeration points and of the earlier pivots under every built element.
  std::vector<Point> gamma_for(std::size_t i) const {
    std::vector<Point> seeds;
    for (Point e = 0; e <= static_cast<Point>(i); ++e) seeds.push_back(e);
    for (std::size_t t = 0; t < i; ++t) {
      seeds.push_back(t_.alphas[t]);
      if (t < t_.betas.size()) seeds.push_back(t_.betas[t]);
    }
    std::set<Point> out;
    for (const auto& lvl : t_.levels)
      for (std::size_t id : lvl)
        for (Point s : seeds) out.insert(t_.nodes[id].g.apply_inverse(s));
    return {out.begin(), out.end()};
  }

  [[noreturn]] void fail(std::size_t j, const std::string& why) const {
    throw Error(ErrorKind::HypothesisFailure, std::string(to_string(o_.mode)) + " level " + std::to_string(j) + ": " +
                                                  why + "; stabilized set " + list_text(t_.gammas[j]));
  }

  std::size_t demand(std::size_t i) const {
    return std::max<std::size_t>(2, t_.levels[i].size() * t_.branching[i]);
  }

  void prepare_pivot(std::size_t i) {
    t_.gammas.push_back(gamma_for(i));
    const auto& gamma = t_.gammas[i];
    if (o_.mode == TreeMode::UnboundedOrbits) t_.branching.push_back(o_.branching(i));
    std::size_t tried = 0;
    for (Point a = 0; tried < o_.scan_limit; ++a) {
      if (contains(gamma, a)) continue;
      ++tried;
      switch (o_.mode) {
        case TreeMode::Binary: {
          std::size_t m = *g_.orbit_bound();
          auto p = g_.orbit(gamma, a, m + 1);
          if (!p.complete || p.points.size() != m) continue;
          t_.alphas.push_back(a);
          t_.betas.push_back(p.points[0] == a ? p.points[1] : p.points[0]);
          return;
        }
        case TreeMode::UnboundedOrbits: {
          std::size_t need = demand(i);
          if (need > o_.orbit_budget) fail(i, "orbit of size " + std::to_string(need) + " exceeds the orbit budget");
          auto p = g_.orbit(gamma, a, need);
          if (p.points.size() < need) continue;
          t_.alphas.push_back(a);
          orbits_.push_back(p.points);
          return;
        }
        case TreeMode::InfOrbits: {
          // A pivot no earlier step moves cannot be a parent preimage of an enumeration point.
          if (touched_.count(a)) continue;
          auto p = g_.orbit(gamma, a, o_.orbit_budget);
          if (p.complete) continue;
          t_.alphas.push_back(a);
          return;
        }
      }
    }
    switch (o_.mode) {
      case TreeMode::Binary: fail(i, "no point outside the set has an orbit of the full size");
      case TreeMode::UnboundedOrbits:
        fail(i, "no point has an orbit of size " + std::to_string(demand(i)) + " within " +
                    std::to_string(o_.scan_limit) + " candidates");
      default: fail(i, "no point with an infinite orbit within " + std::to_string(o_.scan_limit) + " candidates");
    }
  }

  void add(std::size_t parent, std::size_t k, Permutation h, std::vector<Point> fixed, std::size_t level) {
    TreeNode n;
    n.index = t_.nodes[parent].index;
    n.index.push_back(k);
    n.parent = parent;
    n.g = Permutation::word({h, t_.nodes[parent].g}).memoized();
    if (h.support_bound())
      for (Point x : support_of(h)) touched_.insert(x);
    n.step = std::move(h);
    n.fixed = std::move(fixed);
    n.level = level;
    std::size_t id = t_.nodes.size();
    t_.by_index[n.index] = id;
    t_.nodes.push_back(std::move(n));
    t_.levels[level].push_back(id);
  }

  void grow_binary(std::size_t j) {
    std::size_t i = j - 1;
    const auto& gamma = t_.gammas[i];
    for (std::size_t pid : std::vector<std::size_t>(t_.levels[i])) {
      const Permutation gp = t_.nodes[pid].g;
      for (std::size_t bit = 0; bit < 2; ++bit) {
        Point want = bit == 0 ? t_.alphas[i] : t_.betas[i];
        auto h = g_.act(gamma, t_.alphas[i], gp.apply_inverse(want));
        if (!h) fail(i, "no stabilizer element carries " + std::to_string(t_.alphas[i]) + " to " +
                            std::to_string(gp.apply_inverse(want)));
        add(pid, bit, *h, gamma, j);
      }
    }
  }

  void grow_unbounded(std::size_t j) {
    std::size_t i = j - 1;
    const auto& gamma = t_.gammas[i];
    std::unordered_set<Point> used;
    for (std::size_t pid : std::vector<std::size_t>(t_.levels[i])) {
      const Permutation gp = t_.nodes[pid].g;
      for (std::size_t k = 0; k < t_.branching[i]; ++k) {
        std::optional<Permutation> h;
        for (Point o : orbits_[i]) {
          if (used.count(gp.apply(o))) continue;
          h = g_.act(gamma, t_.alphas[i], o);
          if (h) {
            used.insert(gp.apply(o));
            break;
          }
        }
        if (!h) fail(i, "the orbit of " + std::to_string(t_.alphas[i]) + " ran out of fresh images");
        add(pid, k, *h, gamma, j);
      }
    }
  }

  void grow_inf(std::size_t j) {
    // Index tuples (k_0..k_{r-1}) with r + sum = j; the parent drops the last entry.
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t, std::size_t)> gen = [&](std::size_t r, std::size_t left) {
      if (cur.size() == r) {
        if (left == 0) tuples.push_back(cur);
        return;
      }
      for (std::size_t k = 0; k <= left; ++k) {
        cur.push_back(k);
        gen(r, left - k);
        cur.pop_back();
      }
    };
    for (std::size_t r = 1; r <= j; ++r) gen(r, j - r);

    std::vector<std::unordered_set<Point>> avoid(j);
    for (std::size_t r = 0; r < j; ++r)
      for (std::size_t l = 0; l < j; ++l)
        for (std::size_t id : t_.levels[l]) avoid[r].insert(t_.nodes[id].g.apply(t_.alphas[r]));

    for (const auto& idx : tuples) {
      std::size_t r = idx.size() - 1;  // the pivot being moved
      std::vector<std::size_t> pidx(idx.begin(), idx.end() - 1);
      std::size_t pid = t_.by_index.at(pidx);
      const Permutation gp = t_.nodes[pid].g;
      Point alpha = t_.alphas[r];

      std::set<Point> widened(t_.gammas[r].begin(), t_.gammas[r].end());
      for (Point e = 0; e <= static_cast<Point>(r); ++e) widened.insert(gp.apply_inverse(e));
      std::vector<std::vector<Point>> attempts{{widened.begin(), widened.end()}, t_.gammas[r]};

      bool placed = false;
      for (const auto& gamma : attempts) {
        auto p = g_.orbit(gamma, alpha, avoid[r].size() + t_.alphas.size() + 1);
        for (Point o : p.points) {
          if (o != alpha && std::find(t_.alphas.begin(), t_.alphas.end(), o) != t_.alphas.end()) continue;
          Point img = gp.apply(o);
          if (avoid[r].count(img)) continue;
          auto h = g_.act(gamma, alpha, o);
          if (!h) continue;
          avoid[r].insert(img);
          add(pid, idx.back(), *h, gamma, j);
          placed = true;
          break;
        }
        if (placed) break;
      }
      if (!placed) fail(r, "no fresh image for pivot " + std::to_string(alpha) + " below node level " + std::to_string(j));
    }
  }

  const GroupOracle& g_;
  const TreeOptions& o_;
  TreeState t_;
  std::vector<std::vector<Point>> orbits_;
  std::set<Point> touched_;
};

}  // namespace

TreeState build_tree(const GroupOracle& g, const TreeOptions& opts) { return Builder(g, opts).run(); }

TreeCheck check_tree(const TreeState& t, Point probe) {
  TreeCheck c;
  auto bad = [&](const TreeNode& n, const std::string& why) {
    std::ostringstream os;
    os << "node (";
    for (std::size_t i = 0; i < n.index.size(); ++i) os << (i ? "," : "") << n.index[i];
    os << "): " << why;
    c.failures.push_back(os.str());
    c.pass = false;
  };
  std::map<std::pair<std::size_t, Point>, std::size_t> sibling_images;
  for (const auto& n : t.nodes) {
    if (!n.parent) continue;
    const TreeNode& p = t.nodes[*n.parent];
    ++c.pairs_checked;
    for (Point x : n.fixed)
      if (n.step.apply(x) != x) bad(n, "step moves fixed point " + std::to_string(x));
    for (Point x = 0; x < probe; ++x)
      if (n.g.apply(x) != p.g.apply(n.step.apply(x))) {
        bad(n, "element differs from step then parent at " + std::to_string(x));
        break;
      }
    std::size_t r = n.index.size();
    for (Point e = 0; e < static_cast<Point>(r); ++e) {
      if (!contains(n.fixed, e)) bad(n, "enumeration point " + std::to_string(e) + " not fixed");
      if (!contains(n.fixed, p.g.apply_inverse(e)))
        bad(n, "parent preimage of " + std::to_string(e) + " not fixed");
    }
    for (std::size_t i = 0; i + 1 < r; ++i)
      if (n.g.apply(t.alphas[i]) != p.g.apply(t.alphas[i])) bad(n, "earlier pivot image changed");
    auto key = std::make_pair(*n.parent, n.g.apply(t.alphas[r - 1]));
    if (!sibling_images.emplace(key, n.index.back()).second) bad(n, "sibling with the same pivot image");
  }
  return c;
}

std::shared_ptr<const ConvergentSequence> branch_sequence(const TreeState& t, const std::vector<std::size_t>& choice) {
  std::vector<ConvergentSequence::Term> path{{Permutation::identity(), {}}};
  std::vector<std::size_t> idx;
  for (std::size_t k : choice) {
    idx.push_back(k);
    const TreeNode* n = t.find(idx);
    if (!n) break;
    path.push_back({n->g, n->fixed});
  }
  std::ostringstream label;
  label << "branch(";
  for (std::size_t i = 0; i + 1 < path.size(); ++i) label << (i ? "," : "") << choice[i];
  label << ")";
  auto producer = [path](std::size_t m) -> ConvergentSequence::Term {
    if (m < path.size()) return path[m];
    const Permutation& g = path.back().g;
    std::set<Point> gamma;
    for (Point i = 0; i < static_cast<Point>(m); ++i) {
      gamma.insert(i);
      gamma.insert(g.apply_inverse(i));
    }
    return {g, {gamma.begin(), gamma.end()}};
  };
  return std::make_shared<ConvergentSequence>(producer, label.str());
}

}  // namespace symkit
