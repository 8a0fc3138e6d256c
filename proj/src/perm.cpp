#include "symkit/perm.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <unordered_set>

#include "perm_node.hpp"

namespace symkit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EvaluationBudget: return "evaluation-budget";
    case ErrorKind::Undefined: return "undefined-value";
    case ErrorKind::NoSupportCertificate: return "no-support-certificate";
    case ErrorKind::NoCertificate: return "no-certificate";
    case ErrorKind::ConvergenceViolated: return "convergence-condition-violated";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::UnsupportedMetric: return "unsupported-metric";
    case ErrorKind::NotUncrowded: return "not-uncrowded";
    case ErrorKind::InsufficientSet: return "insufficient-set";
    case ErrorKind::ProfileViolation: return "profile-violation";
    case ErrorKind::NotIsomorphic: return "not-isomorphic-at-depth";
    case ErrorKind::Precondition: return "precondition-violated";
    case ErrorKind::HypothesisFailure: return "hypothesis-failure";
    case ErrorKind::IllFormedTree: return "ill-formed-tree";
    case ErrorKind::Budget: return "budget-exceeded";
  }
  return "error";
}

namespace {

std::atomic<std::uint64_t> g_step_budget{1'000'000};

struct Budget {
  std::uint64_t left;
  void tick() {
    if (left == 0) throw Error(ErrorKind::EvaluationBudget, "step budget exhausted");
    --left;
  }
};

std::int64_t param_int(const std::map<std::string, std::string>& params, const std::string& key,
                       std::int64_t fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "rule parameter " + key + "=" + it->second + " is not an integer");
  }
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

void set_step_budget(std::uint64_t steps) { g_step_budget = steps; }
std::uint64_t step_budget() { return g_step_budget; }

struct NodeAccess {
  static const Permutation::Node& node(const Permutation& p) { return *p.node_; }
  static Permutation make(std::shared_ptr<const Permutation::Node> n, bool inv = false) {
    return Permutation(std::move(n), inv);
  }

  static Point eval(const Permutation& p, Point a, bool inv, Budget& budget) {
    inv = inv != p.inverted_;
    const auto& n = *p.node_;
    if (n.memo) {
      std::lock_guard<std::mutex> lock(n.memo->mu);
      auto& table = inv ? n.memo->backward : n.memo->forward;
      auto it = table.find(a);
      if (it != table.end()) return it->second;
    }
    Point out = a;
    switch (n.form) {
      case Permutation::Form::FiniteSupport: {
        budget.tick();
        const auto& m = inv ? n.bwd : n.fwd;
        auto it = m.find(a);
        out = it == m.end() ? a : it->second;
        break;
      }
      case Permutation::Form::Rule: {
        budget.tick();
        auto r = inv ? n.backward(a) : n.forward(a);
        if (!r || *r < 0)
          throw Error(ErrorKind::Undefined, "rule " + n.name + (inv ? " (backward)" : "") +
                                                " undefined at " + std::to_string(a));
        out = *r;
        break;
      }
      case Permutation::Form::Word: {
        if (!inv) {
          for (const auto& f : n.factors) out = eval(f, out, false, budget);
        } else {
          for (auto it = n.factors.rbegin(); it != n.factors.rend(); ++it)
            out = eval(*it, out, true, budget);
        }
        break;
      }
      case Permutation::Form::Limit: {
        auto j = static_cast<std::size_t>(a) + 1;
        n.seq->verify_to(j);
        out = eval(n.seq->term(j).g, a, inv, budget);
        break;
      }
    }
    if (n.memo) {
      std::lock_guard<std::mutex> lock(n.memo->mu);
      (inv ? n.memo->backward : n.memo->forward)[a] = out;
    }
    return out;
  }
};

const Permutation::Node& node_of(const Permutation& p) { return NodeAccess::node(p); }

namespace {

std::shared_ptr<Permutation::Node> finite_node(const std::vector<std::pair<Point, Point>>& pairs) {
  auto n = std::make_shared<Permutation::Node>();
  n->form = Permutation::Form::FiniteSupport;
  Point bound = 0;
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0) throw Error(ErrorKind::Precondition, "negative point");
    if (a == b) continue;
    if (!n->fwd.emplace(a, b).second)
      throw Error(ErrorKind::Precondition, "point " + std::to_string(a) + " mapped twice");
    if (!n->bwd.emplace(b, a).second)
      throw Error(ErrorKind::Precondition, "point " + std::to_string(b) + " hit twice");
    bound = std::max({bound, a + 1, b + 1});
  }
  for (const auto& [a, b] : n->fwd)
    if (!n->bwd.count(a))
      throw Error(ErrorKind::Precondition, "mapping is not a permutation of its domain at " +
                                               std::to_string(a));
  n->support_bound = bound;
  return n;
}

}  // namespace

Permutation::Permutation() : node_(finite_node({})), inverted_(false) {}

Permutation Permutation::cycles(const std::vector<std::vector<Point>>& cs) {
  std::vector<std::pair<Point, Point>> pairs;
  std::unordered_set<Point> seen;
  for (const auto& c : cs) {
    for (Point x : c)
      if (!seen.insert(x).second)
        throw Error(ErrorKind::Precondition, "cycles are not disjoint at " + std::to_string(x));
    for (std::size_t i = 0; i < c.size(); ++i) pairs.emplace_back(c[i], c[(i + 1) % c.size()]);
  }
  return Permutation(finite_node(pairs));
}

Permutation Permutation::transposition(Point a, Point b) {
  if (a == b) return identity();
  return cycles({{a, b}});
}

Permutation Permutation::from_map(const std::vector<std::pair<Point, Point>>& mapping) {
  return Permutation(finite_node(mapping));
}

Permutation Permutation::rule(std::string name, RuleFn forward, RuleFn backward,
                              std::map<std::string, std::string> params) {
  auto n = std::make_shared<Node>();
  n->form = Form::Rule;
  n->name = std::move(name);
  n->forward = std::move(forward);
  n->backward = std::move(backward);
  n->params = std::move(params);
  return Permutation(n);
}

Permutation Permutation::builtin(const std::string& name,
                                 const std::map<std::string, std::string>& params) {
  if (name == "identity") {
    return identity();
  }
  if (name == "shift-z") {
    std::int64_t k = param_int(params, "k", 1);
    auto f = [k](Point a) -> std::optional<Point> { return z_to_n(n_to_z(a) + k); };
    auto b = [k](Point a) -> std::optional<Point> { return z_to_n(n_to_z(a) - k); };
    return rule(name, f, b, params).with_displacement_bound("standard-z", k < 0 ? -k : k);
  }
  if (name == "swap-pairs") {
    std::int64_t off = param_int(params, "offset", 0);
    if (off < 0) throw Error(ErrorKind::Parse, "swap-pairs offset must be >= 0");
    auto f = [off](Point a) -> std::optional<Point> { return a < off ? a : off + ((a - off) ^ 1); };
    auto p = rule(name, f, f, params).with_displacement_bound("standard-omega", 1);
    return off == 0 ? p.with_block_certificate("pairs") : p;
  }
  if (name == "rotate-blocks" || name == "reverse-blocks") {
    std::int64_t s = param_int(params, "size", 2);
    if (s < 1) throw Error(ErrorKind::Parse, name + " size must be >= 1");
    RuleFn f, b;
    if (name == "rotate-blocks") {
      std::int64_t t = floor_mod(param_int(params, "by", 1), s);
      f = [s, t](Point a) -> std::optional<Point> { return s * (a / s) + (a % s + t) % s; };
      b = [s, t](Point a) -> std::optional<Point> { return s * (a / s) + (a % s + s - t) % s; };
    } else {
      f = b = [s](Point a) -> std::optional<Point> { return s * (a / s) + (s - 1 - a % s); };
    }
    return rule(name, f, b, params).with_displacement_bound("standard-omega", s - 1);
  }
  throw Error(ErrorKind::Parse, "unknown rule '" + name + "'");
}

Permutation Permutation::word(std::vector<Permutation> factors) {
  auto n = std::make_shared<Node>();
  n->form = Form::Word;
  bool all_support = true, all_disp = true;
  Point sb = 0;
  std::int64_t disp = 0;
  std::string metric;
  std::vector<std::string> blocks;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    auto s = f.support_bound();
    if (s) sb = std::max(sb, *s); else all_support = false;
    auto d = f.displacement_bound();
    if (d && (metric.empty() || metric == d->metric)) {
      metric = d->metric;
      disp += d->bound;
    } else if (!(s && *s == 0)) {
      all_disp = false;
    }
    if (i == 0) {
      blocks = f.block_certificates();
    } else {
      std::vector<std::string> keep;
      for (const auto& b : blocks)
        if (std::find(f.block_certificates().begin(), f.block_certificates().end(), b) !=
            f.block_certificates().end())
          keep.push_back(b);
      blocks = keep;
    }
  }
  if (all_support) n->support_bound = sb;
  if (all_disp && !metric.empty()) n->displacement = DisplacementBound{metric, disp};
  n->blocks = blocks;
  n->factors = std::move(factors);
  return Permutation(n);
}

Permutation Permutation::limit_of(std::shared_ptr<const ConvergentSequence> seq) {
  auto n = std::make_shared<Node>();
  n->form = Form::Limit;
  n->label = seq->label();
  n->seq = std::move(seq);
  return Permutation(n);
}

Point Permutation::apply(Point a) const {
  if (a < 0) throw Error(ErrorKind::Precondition, "negative point");
  Budget b{g_step_budget};
  return NodeAccess::eval(*this, a, false, b);
}

Point Permutation::apply_inverse(Point a) const {
  if (a < 0) throw Error(ErrorKind::Precondition, "negative point");
  Budget b{g_step_budget};
  return NodeAccess::eval(*this, a, true, b);
}

Permutation Permutation::inverse() const { return Permutation(node_, !inverted_); }

Permutation::Form Permutation::form() const { return node_->form; }
const std::string& Permutation::rule_name() const { return node_->name; }
const std::map<std::string, std::string>& Permutation::rule_params() const {
  return node_->params;
}

std::vector<Permutation> Permutation::factors() const {
  if (node_->form != Form::Word) return {};
  if (!inverted_) return node_->factors;
  std::vector<Permutation> out;
  for (auto it = node_->factors.rbegin(); it != node_->factors.rend(); ++it)
    out.push_back(it->inverse());
  return out;
}

std::vector<std::vector<Point>> Permutation::cycle_list() const {
  std::vector<std::vector<Point>> out;
  if (node_->form != Form::FiniteSupport) return out;
  const auto& m = inverted_ ? node_->bwd : node_->fwd;
  std::vector<Point> keys;
  for (const auto& kv : m) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  std::unordered_set<Point> done;
  for (Point start : keys) {
    if (done.count(start)) continue;
    std::vector<Point> c;
    for (Point x = start; !done.count(x); x = m.at(x)) {
      done.insert(x);
      c.push_back(x);
    }
    out.push_back(c);
  }
  return out;
}

std::optional<Point> Permutation::support_bound() const { return node_->support_bound; }
std::optional<DisplacementBound> Permutation::displacement_bound() const {
  return node_->displacement;
}
const std::vector<std::string>& Permutation::block_certificates() const { return node_->blocks; }

std::shared_ptr<const GrowthWitness> Permutation::growth_witness() const {
  if (!node_->growth || !inverted_) return node_->growth;
  auto inner = node_->growth;
  auto w = std::make_shared<GrowthWitness>();
  w->metric = inner->metric;
  w->pair = [inner](std::size_t j) {
    auto [a, b] = inner->pair(j);
    return std::make_pair(b, a);
  };
  return w;
}

std::function<std::vector<Point>(Point)> Permutation::locality_certificate() const {
  return node_->locality;
}

namespace {
template <class F>
Permutation with_node_change(const std::shared_ptr<const Permutation::Node>& node, bool inv, F f) {
  auto n = std::make_shared<Permutation::Node>(*node);
  f(*n);
  return NodeAccess::make(n, inv);
}
}  // namespace

Permutation Permutation::with_displacement_bound(std::string metric, std::int64_t bound) const {
  return with_node_change(node_, inverted_, [&](Node& n) {
    n.displacement = DisplacementBound{std::move(metric), bound};
  });
}

Permutation Permutation::with_block_certificate(std::string partition) const {
  return with_node_change(node_, inverted_, [&](Node& n) {
    if (std::find(n.blocks.begin(), n.blocks.end(), partition) == n.blocks.end())
      n.blocks.push_back(std::move(partition));
  });
}

Permutation Permutation::with_growth_witness(std::shared_ptr<const GrowthWitness> w) const {
  if (inverted_) return inverse().with_growth_witness(w).inverse();
  return with_node_change(node_, false, [&](Node& n) { n.growth = std::move(w); });
}

Permutation Permutation::with_locality_certificate(
    std::function<std::vector<Point>(Point)> prefixes) const {
  return with_node_change(node_, inverted_, [&](Node& n) { n.locality = std::move(prefixes); });
}

Permutation Permutation::with_label(std::string label) const {
  return with_node_change(node_, inverted_, [&](Node& n) { n.label = std::move(label); });
}

Permutation Permutation::memoized() const {
  return with_node_change(node_, inverted_,
                          [&](Node& n) { n.memo = std::make_shared<Node::Memo>(); });
}

Permutation to_cycles(const Permutation& p) {
  if (p.form() == Permutation::Form::FiniteSupport && !p.inverted()) return p;
  auto sb = p.support_bound();
  if (!sb) throw Error(ErrorKind::NoSupportCertificate, "permutation has no finite-support bound");
  std::vector<std::pair<Point, Point>> pairs;
  for (Point a = 0; a < *sb; ++a) {
    Point b = p.apply(a);
    if (b != a) pairs.emplace_back(a, b);
  }
  auto out = Permutation::from_map(pairs);
  for (const auto& c : p.block_certificates()) out = out.with_block_certificate(c);
  return out;
}

std::vector<Point> support_of(const Permutation& p) {
  std::vector<Point> out;
  if (p.form() == Permutation::Form::FiniteSupport) {
    for (const auto& kv : node_of(p).fwd) out.push_back(kv.first);
    std::sort(out.begin(), out.end());
    return out;
  }
  auto sb = p.support_bound();
  if (!sb) throw Error(ErrorKind::NoSupportCertificate, "permutation has no finite-support bound");
  for (Point a = 0; a < *sb; ++a)
    if (p.apply(a) != a) out.push_back(a);
  return out;
}

WindowReport verify_window(const Permutation& p, Point n) {
  WindowReport r;
  std::unordered_set<Point> images;
  for (Point a = 0; a < n; ++a) {
    try {
      Point b = p.apply(a);
      if (p.apply_inverse(b) != a) {
        r.pass = false;
        r.counterexample = a;
        r.detail = "backward(forward(" + std::to_string(a) + ")) != " + std::to_string(a);
        return r;
      }
      if (!images.insert(b).second) {
        r.pass = false;
        r.counterexample = a;
        r.detail = "forward not injective at " + std::to_string(a);
        return r;
      }
      Point c = p.apply_inverse(a);
      if (p.apply(c) != a) {
        r.pass = false;
        r.counterexample = a;
        r.detail = "forward(backward(" + std::to_string(a) + ")) != " + std::to_string(a);
        return r;
      }
    } catch (const Error& e) {
      r.pass = false;
      r.counterexample = a;
      r.detail = e.what();
      return r;
    }
  }
  r.detail = "checked " + std::to_string(n) + " points";
  return r;
}

Parity parity(const Permutation& p) {
  auto sb = p.support_bound();
  if (!sb) throw Error(ErrorKind::NoSupportCertificate, "parity needs a finite-support certificate");
  std::vector<char> seen(static_cast<std::size_t>(*sb), 0);
  std::int64_t cycles = 0;
  for (Point a = 0; a < *sb; ++a) {
    if (seen[a]) continue;
    ++cycles;
    for (Point x = a; !seen[x]; x = p.apply(x)) {
      if (x >= *sb) throw Error(ErrorKind::NoSupportCertificate, "support bound is wrong");
      seen[x] = 1;
    }
  }
  return ((*sb - cycles) % 2 == 0) ? Parity::Even : Parity::Odd;
}

ConvergentSequence::ConvergentSequence(Producer producer, std::string label)
    : producer_(std::move(producer)), label_(std::move(label)) {}

const ConvergentSequence::Term& ConvergentSequence::term(std::size_t j) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  while (terms_.size() <= j) terms_.push_back(nullptr);
  if (!terms_[j]) terms_[j] = std::make_unique<Term>(producer_(j));
  return *terms_[j];
}

void ConvergentSequence::verify_to(std::size_t depth) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  for (std::size_t j = verified_ + 1; j <= depth; ++j) {
    const Term& prev = term(j - 1);
    const Term& cur = term(j);
    std::unordered_set<Point> gamma(cur.gamma.begin(), cur.gamma.end());
    auto fail = [&](Point x, const std::string& why) {
      throw Error(ErrorKind::ConvergenceViolated,
                  label_ + ": level " + std::to_string(j) + ", point " + std::to_string(x) + ": " + why);
    };
    for (Point i = 0; i < static_cast<Point>(j); ++i) {
      if (!gamma.count(i)) fail(i, "enumeration point missing from the stabilized set");
      Point back = prev.g.apply_inverse(i);
      if (!gamma.count(back)) fail(back, "inverse image under the previous term missing");
    }
    for (Point x : cur.gamma)
      if (cur.g.apply(x) != prev.g.apply(x))
        fail(x, "consecutive terms disagree on the stabilized set");
    verified_ = j;
  }
}

std::size_t ConvergentSequence::verified_depth() const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  return verified_;
}

Permutation limit(std::shared_ptr<const ConvergentSequence> seq, std::size_t depth) {
  seq->verify_to(depth);
  return Permutation::limit_of(std::move(seq));
}

}  // namespace symkit
