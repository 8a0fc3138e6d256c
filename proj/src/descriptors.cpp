#include <algorithm>
#include <set>

#include "symkit/classifier.hpp"

namespace symkit {

namespace {

std::shared_ptr<GroupDescriptor> make(GroupDescriptor::Kind k) {
  auto d = std::make_shared<GroupDescriptor>();
  d->kind = k;
  return d;
}

struct Plugin {
  const char* name;
  OraclePtr (*make)();
};

const std::vector<Plugin>& plugins() {
  static const std::vector<Plugin> p{
      {"full", [] { return full_group_oracle(); }},
      {"trivial", [] { return trivial_group_oracle(); }},
      {"stab-pairs", [] { return partition_stabilizer_oracle(pairs_partition()); }},
      {"stab-a0", [] { return partition_stabilizer_oracle(a0_partition()); }},
      {"stab-intervals-growing", [] { return partition_stabilizer_oracle(intervals_growing_partition()); }},
      {"stab-parity", [] { return partition_stabilizer_oracle(parity_partition()); }},
  };
  return p;
}

// Orbits of FN(d) stabilizers: a transposition of two points at finite distance has finite norm,
// so the orbit of a point is its finite-distance component minus the fixed set.
class FnOracle : public GroupOracle {
 public:
  explicit FnOracle(MetricPtr d) : d_(std::move(d)) {}
  std::string name() const override { return "fn(" + d_->name() + ")"; }

  OrbitProbe orbit(const std::vector<Point>& gamma, Point alpha, std::size_t n) const override {
    if (std::binary_search(gamma.begin(), gamma.end(), alpha)) return {true, {alpha}};
    std::size_t cap = n + gamma.size() + 1;
    auto strip = [&](const Ball& b) {
      OrbitProbe p;
      p.complete = b.complete;
      for (Point x : b.points)
        if (!std::binary_search(gamma.begin(), gamma.end(), x)) p.points.push_back(x);
      if (!p.complete && p.points.size() > n) p.points.resize(n);
      return p;
    };
    if (auto c = d_->finite_distance_cap()) return strip(d_->ball(alpha, *c, cap));
    OrbitProbe last;
    for (std::int64_t r = 1; r <= (std::int64_t{1} << 30); r *= 2) {
      last = strip(d_->ball(alpha, Rational(r), cap));
      if (!last.complete || last.points.size() >= n) {
        last.complete = false;
        if (last.points.size() > n) last.points.resize(n);
        return last;
      }
    }
    // Finite at every radius tried; the component may still be larger.
    last.complete = false;
    return last;
  }

  std::optional<Permutation> act(const std::vector<Point>& gamma, Point alpha, Point target) const override {
    if (alpha == target) return Permutation::identity();
    if (std::binary_search(gamma.begin(), gamma.end(), alpha) ||
        std::binary_search(gamma.begin(), gamma.end(), target))
      return std::nullopt;
    if (d_->rational_valued() ? d_->dist(alpha, target).is_infinite()
                              : !d_->ball(alpha, Rational(std::int64_t{1} << 30), std::size_t{1} << 16).complete)
      return std::nullopt;
    return Permutation::transposition(alpha, target);
  }

  bool closed() const override { return false; }

 private:
  MetricPtr d_;
};

class FixOracle : public GroupOracle {
 public:
  FixOracle(OraclePtr inner, std::vector<Point> fixed) : inner_(std::move(inner)), fixed_(std::move(fixed)) {}
  std::string name() const override { return "fix(" + inner_->name() + ")"; }
  OrbitProbe orbit(const std::vector<Point>& gamma, Point alpha, std::size_t n) const override {
    return inner_->orbit(merged(gamma), alpha, n);
  }
  std::optional<Permutation> act(const std::vector<Point>& gamma, Point alpha, Point target) const override {
    return inner_->act(merged(gamma), alpha, target);
  }
  bool closed() const override { return inner_->closed(); }
  std::optional<std::size_t> orbit_bound() const override { return inner_->orbit_bound(); }

 private:
  std::vector<Point> merged(const std::vector<Point>& gamma) const {
    std::vector<Point> out;
    std::set_union(gamma.begin(), gamma.end(), fixed_.begin(), fixed_.end(), std::back_inserter(out));
    return out;
  }
  OraclePtr inner_;
  std::vector<Point> fixed_;
};

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  DescriptorPtr run() {
    auto d = descriptor();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing text");
    return d;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::Parse, "descriptor at position " + std::to_string(pos_) + ": " + why);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(const std::string& w) {
    skip_ws();
    if (s_.compare(pos_, w.size(), w) != 0) return false;
    pos_ += w.size();
    return true;
  }
  // Text up to the next ';' or ')' outside brackets.
  std::string operand() {
    skip_ws();
    std::size_t start = pos_;
    int depth = 0;
    for (; pos_ < s_.size(); ++pos_) {
      char c = s_[pos_];
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ';' && depth == 0) break;
    }
    if (depth != 0) fail("unbalanced brackets");
    std::string out = s_.substr(start, pos_ - start);
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    if (out.empty()) fail("empty operand");
    return out;
  }
  template <class F>
  auto guarded(std::size_t at, F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      pos_ = at;
      fail(e.what());
    }
  }

  DescriptorPtr descriptor() {
    skip_ws();
    std::size_t at = pos_;
    if (eat("fix(")) {
      auto inner = descriptor();
      if (!eat(";")) fail("expected ';' after the inner descriptor");
      std::vector<Point> pts;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] != ')') {
        do {
          skip_ws();
          std::size_t st = pos_;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
          if (st == pos_) fail("expected a point");
          pts.push_back(std::stoll(s_.substr(st, pos_ - st)));
        } while (eat(","));
      }
      if (!eat(")")) fail("expected ')'");
      return fix_descriptor(inner, pts);
    }
    if (eat("stab:")) {
      std::string p = operand();
      return guarded(at, [&] { return stabilizer_descriptor(parse_partition(p)); });
    }
    if (eat("fn:")) {
      std::string m = operand();
      return guarded(at, [&] { return fn_descriptor(parse_metric(m)); });
    }
    if (eat("oracle:")) {
      std::string name = operand();
      return guarded(at, [&] { return oracle_descriptor(name); });
    }
    if (eat("gens:")) {
      if (!eat("[")) fail("expected '['");
      std::vector<Permutation> gens;
      skip_ws();
      if (!eat("]")) {
        for (;;) {
          skip_ws();
          std::size_t st = pos_;
          int depth = 0;
          for (; pos_ < s_.size(); ++pos_) {
            char c = s_[pos_];
            if (c == '(' || c == '[') ++depth;
            if ((c == ')' || c == ']') && depth-- == 0) break;
            if (c == ',' && depth == 0) break;
          }
          std::string text = s_.substr(st, pos_ - st);
          gens.push_back(guarded(st, [&] { return parse_permutation(text); }));
          if (eat(",")) continue;
          if (eat("]")) break;
          fail("expected ',' or ']'");
        }
      }
      return guarded(at, [&] { return gens_descriptor(gens); });
    }
    if (eat("full")) return full_descriptor();
    if (eat("trivial")) return trivial_descriptor();
    fail("expected full, trivial, stab:, fix(, fn:, oracle: or gens:");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string GroupDescriptor::to_string() const {
  switch (kind) {
    case Kind::Full: return "full";
    case Kind::Trivial: return "trivial";
    case Kind::Stabilizer: return "stab:partition:" + partition->name();
    case Kind::FN: return "fn:" + metric->name();
    case Kind::Oracle: return "oracle:" + plugin;
    case Kind::Gens: {
      std::string s = "gens:[";
      for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? "," : "") + gens[i].to_string();
      return s + "]";
    }
    case Kind::Fix: {
      std::string s = "fix(" + inner->to_string() + ";";
      for (std::size_t i = 0; i < fixed.size(); ++i) s += (i ? "," : "") + std::to_string(fixed[i]);
      return s + ")";
    }
  }
  return "?";
}

DescriptorPtr full_descriptor() { return make(GroupDescriptor::Kind::Full); }
DescriptorPtr trivial_descriptor() { return make(GroupDescriptor::Kind::Trivial); }

DescriptorPtr stabilizer_descriptor(PartitionPtr a) {
  auto d = make(GroupDescriptor::Kind::Stabilizer);
  d->partition = std::move(a);
  return d;
}

DescriptorPtr fix_descriptor(DescriptorPtr inner, std::vector<Point> points) {
  std::set<Point> pts(points.begin(), points.end());
  if (inner->kind == GroupDescriptor::Kind::Fix) {
    pts.insert(inner->fixed.begin(), inner->fixed.end());
    inner = inner->inner;
  }
  for (Point p : pts)
    if (p < 0) throw Error(ErrorKind::Precondition, "negative point in a fixed set");
  auto d = make(GroupDescriptor::Kind::Fix);
  d->inner = std::move(inner);
  d->fixed.assign(pts.begin(), pts.end());
  return d;
}

DescriptorPtr fn_descriptor(MetricPtr m) {
  auto d = make(GroupDescriptor::Kind::FN);
  d->metric = std::move(m);
  return d;
}

DescriptorPtr oracle_descriptor(const std::string& plugin) {
  for (const auto& p : plugins())
    if (plugin == p.name) {
      auto d = make(GroupDescriptor::Kind::Oracle);
      d->plugin = plugin;
      d->oracle = p.make();
      return d;
    }
  throw Error(ErrorKind::Parse, "unknown oracle plugin '" + plugin + "'");
}

DescriptorPtr gens_descriptor(std::vector<Permutation> gens) {
  for (const auto& g : gens)
    if (!g.support_bound()) throw Error(ErrorKind::NoSupportCertificate, g.to_string() + " has no finite support");
  auto d = make(GroupDescriptor::Kind::Gens);
  d->gens = std::move(gens);
  return d;
}

DescriptorPtr parse_descriptor(const std::string& text) { return Parser(text).run(); }

std::vector<std::string> oracle_plugins() {
  std::vector<std::string> out;
  for (const auto& p : plugins()) out.push_back(p.name);
  return out;
}

OraclePtr descriptor_oracle(DescriptorPtr g) {
  switch (g->kind) {
    case GroupDescriptor::Kind::Full: return full_group_oracle();
    case GroupDescriptor::Kind::Trivial: return trivial_group_oracle();
    case GroupDescriptor::Kind::Stabilizer: return partition_stabilizer_oracle(g->partition);
    case GroupDescriptor::Kind::FN: return std::make_shared<FnOracle>(g->metric);
    case GroupDescriptor::Kind::Oracle: return g->oracle;
    case GroupDescriptor::Kind::Gens: return finite_generated_oracle(g->gens);
    case GroupDescriptor::Kind::Fix: return std::make_shared<FixOracle>(descriptor_oracle(g->inner), g->fixed);
  }
  throw Error(ErrorKind::Precondition, "unknown descriptor");
}

}  // namespace symkit
