#include "symkit/partitions.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <unordered_map>

namespace symkit {

std::string Profile::to_string() const {
  switch (kind) {
    case Kind::BoundedBy:
      return "bounded-by(" + std::to_string(bound) + ", " +
             (finite_nonsingletons ? std::to_string(*finite_nonsingletons) + " nonsingletons"
                                   : std::string("infinitely many nonsingletons")) +
             ")";
    case Kind::UnboundedFinite:
      return "unbounded-finite";
    case Kind::HasInfiniteBlock:
      return "has-infinite-block(" + std::to_string(infinite_block_id) + ")";
  }
  return "";
}

std::int64_t Partition::block_rank(BlockId b) const {
  std::int64_t rank = 0;
  for (Point x = 0; x < b; ++x)
    if (block_of(x) == x) ++rank;
  return rank;
}

BlockId Partition::block_at(std::int64_t rank) const {
  std::int64_t seen = -1;
  for (Point x = 0;; ++x) {
    if (block_of(x) == x && ++seen == rank) return x;
  }
}

namespace {

class LayoutPartition : public Partition {
 public:
  LayoutPartition(std::string name, std::function<std::int64_t(std::int64_t)> sizes, Profile prof)
      : name_(std::move(name)), sizes_(std::move(sizes)), profile_(prof) {}

  std::string name() const override { return name_; }
  Profile profile() const override { return profile_; }

  BlockId block_of(Point a) const override {
    std::lock_guard<std::mutex> lock(mu_);
    cover(a);
    auto it = std::upper_bound(starts_.begin(), starts_.end(), a);
    return *(it - 1);
  }

  std::vector<Point> members(BlockId b, std::size_t cap) const override {
    std::lock_guard<std::mutex> lock(mu_);
    cover(b);
    auto it = std::lower_bound(starts_.begin(), starts_.end(), b);
    if (it == starts_.end() || *it != b)
      throw Error(ErrorKind::Precondition, std::to_string(b) + " is not a block of " + name_);
    std::vector<Point> out;
    for (Point x = b; x < *(it + 1) && out.size() < cap; ++x) out.push_back(x);
    return out;
  }

  std::int64_t block_rank(BlockId b) const override {
    std::lock_guard<std::mutex> lock(mu_);
    cover(b);
    return std::lower_bound(starts_.begin(), starts_.end(), b) - starts_.begin();
  }

  BlockId block_at(std::int64_t rank) const override {
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<std::int64_t>(starts_.size()) <= rank + 1) extend();
    return starts_[rank];
  }

 private:
  void extend() const {
    std::int64_t m = static_cast<std::int64_t>(starts_.size()) - 1;
    std::int64_t s = sizes_(m);
    if (s < 1) throw Error(ErrorKind::ProfileViolation, name_ + ": block size must be >= 1");
    starts_.push_back(starts_.back() + s);
  }
  void cover(Point a) const {
    while (starts_.back() <= a) extend();
  }

  std::string name_;
  std::function<std::int64_t(std::int64_t)> sizes_;
  Profile profile_;
  mutable std::mutex mu_;
  mutable std::vector<Point> starts_{0};
};

class A0Partition : public Partition {
 public:
  std::string name() const override { return "a0"; }
  Profile profile() const override { return Profile::bounded(2, std::nullopt); }
  BlockId block_of(Point a) const override { return a % 4 == 1 ? a - 1 : a; }
  std::vector<Point> members(BlockId b, std::size_t) const override {
    if (b % 4 == 1) throw Error(ErrorKind::Precondition, std::to_string(b) + " is not a block of a0");
    if (b % 4 == 0) return {b, b + 1};
    return {b};
  }
  std::int64_t block_rank(BlockId b) const override {
    std::int64_t k = b / 4, r = b % 4;
    return 3 * k + (r == 0 ? 0 : r - 1);
  }
  BlockId block_at(std::int64_t rank) const override {
    std::int64_t k = rank / 3, t = rank % 3;
    return 4 * k + (t == 0 ? 0 : t + 1);
  }
};

class SingletonPartition : public Partition {
 public:
  std::string name() const override { return "singletons"; }
  Profile profile() const override { return Profile::bounded(1, 0); }
  BlockId block_of(Point a) const override { return a; }
  std::vector<Point> members(BlockId b, std::size_t) const override { return {b}; }
  std::int64_t block_rank(BlockId b) const override { return b; }
  BlockId block_at(std::int64_t rank) const override { return rank; }
};

class ParityPartition : public Partition {
 public:
  std::string name() const override { return "parity"; }
  Profile profile() const override { return Profile::infinite_block(0); }
  BlockId block_of(Point a) const override { return a % 2; }
  std::vector<Point> members(BlockId b, std::size_t cap) const override {
    std::vector<Point> out;
    for (Point x = b; out.size() < std::min<std::size_t>(cap, 1u << 20); x += 2) out.push_back(x);
    return out;
  }
  std::int64_t block_rank(BlockId b) const override { return b; }
  BlockId block_at(std::int64_t rank) const override {
    if (rank > 1) throw Error(ErrorKind::Precondition, "parity has two blocks");
    return rank;
  }
};

class ExplicitPartition : public Partition {
 public:
  ExplicitPartition(std::vector<std::vector<Point>> blocks, Profile prof, std::string name)
      : profile_(prof), name_(std::move(name)) {
    for (auto& b : blocks) {
      if (b.empty()) throw Error(ErrorKind::Parse, "empty block");
      std::sort(b.begin(), b.end());
      for (Point x : b) {
        if (x < 0) throw Error(ErrorKind::Parse, "negative point in block");
        if (!owner_.emplace(x, b.front()).second)
          throw Error(ErrorKind::Parse, "point " + std::to_string(x) + " lies in two blocks");
      }
      blocks_[b.front()] = b;
    }
  }
  std::string name() const override { return name_; }
  Profile profile() const override { return profile_; }
  BlockId block_of(Point a) const override {
    auto it = owner_.find(a);
    return it == owner_.end() ? a : it->second;
  }
  std::vector<Point> members(BlockId b, std::size_t) const override {
    auto it = blocks_.find(b);
    if (it != blocks_.end()) return it->second;
    if (owner_.count(b)) throw Error(ErrorKind::Precondition, std::to_string(b) + " is not a block");
    return {b};
  }

 private:
  std::unordered_map<Point, BlockId> owner_;
  std::map<BlockId, std::vector<Point>> blocks_;
  Profile profile_;
  std::string name_;
};

Profile profile_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind");
  if (kind == "bounded") {
    std::optional<std::int64_t> ns;
    if (j.contains("nonsingletons") && !j["nonsingletons"].is_string())
      ns = j["nonsingletons"].get<std::int64_t>();
    return Profile::bounded(j.at("bound").get<std::int64_t>(), ns);
  }
  if (kind == "unbounded-finite") return Profile::unbounded_finite();
  if (kind == "has-infinite-block") return Profile::infinite_block(j.at("block").get<BlockId>());
  throw Error(ErrorKind::Parse, "unknown profile kind '" + kind + "'");
}

}  // namespace

PartitionPtr pairs_partition() {
  static auto p = layout_partition(
      "pairs", [](std::int64_t) { return 2; }, Profile::bounded(2, std::nullopt));
  return p;
}

PartitionPtr a0_partition() {
  static auto p = std::make_shared<A0Partition>();
  return p;
}

PartitionPtr intervals_growing_partition() {
  static auto p = layout_partition(
      "intervals-growing", [](std::int64_t m) { return m + 1; }, Profile::unbounded_finite());
  return p;
}

PartitionPtr singletons_partition() {
  static auto p = std::make_shared<SingletonPartition>();
  return p;
}

PartitionPtr layout_partition(std::string name, std::function<std::int64_t(std::int64_t)> sizes,
                              Profile profile) {
  return std::make_shared<LayoutPartition>(std::move(name), std::move(sizes), profile);
}

PartitionPtr intervals_shuffled_partition() {
  static auto p = layout_partition(
      "intervals-shuffled", [](std::int64_t m) { return (m ^ 1) + 1; }, Profile::unbounded_finite());
  return p;
}

PartitionPtr sparse_growing_partition() {
  static auto p = layout_partition(
      "sparse-growing", [](std::int64_t m) { return m % 2 == 0 ? 1 : m / 2 + 4; },
      Profile::unbounded_finite());
  return p;
}

PartitionPtr parity_partition() {
  static auto p = std::make_shared<ParityPartition>();
  return p;
}

PartitionPtr explicit_partition(const nlohmann::json& spec, std::string name) {
  try {
    auto blocks = spec.at("blocks").get<std::vector<std::vector<Point>>>();
    std::string rest = spec.value("rest", "singletons");
    if (rest != "singletons") throw Error(ErrorKind::Parse, "only rest:singletons is supported");
    return std::make_shared<ExplicitPartition>(blocks, profile_from_json(spec.at("profile")), name);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("explicit partition: ") + e.what());
  }
}

PartitionPtr parse_partition(const std::string& spec) {
  std::string s = spec;
  if (s.rfind("partition:", 0) == 0) s = s.substr(10);
  if (s == "pairs") return pairs_partition();
  if (s == "a0") return a0_partition();
  if (s == "intervals-growing") return intervals_growing_partition();
  if (s == "intervals-shuffled") return intervals_shuffled_partition();
  if (s == "sparse-growing") return sparse_growing_partition();
  if (s == "singletons") return singletons_partition();
  if (s == "parity") return parity_partition();
  if (s.rfind("explicit@", 0) == 0) {
    std::string path = s.substr(9);
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open partition file '" + path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
    return explicit_partition(j, s);
  }
  throw Error(ErrorKind::Parse, "unknown partition '" + spec + "'");
}

const char* to_string(PartitionClassTag::Tag t) {
  switch (t) {
    case PartitionClassTag::Tag::InP: return "P";
    case PartitionClassTag::Tag::InQ: return "Q";
    default: return "neither";
  }
}

PartitionClassTag classify_partition(const Partition& a, std::size_t probe_blocks) {
  Profile prof = a.profile();
  PartitionClassTag out;
  auto violation = [&](BlockId b, const std::string& why) {
    throw Error(ErrorKind::ProfileViolation,
                a.name() + ": block " + std::to_string(b) + " " + why + " (declared " + prof.to_string() + ")");
  };
  if (prof.kind == Profile::Kind::HasInfiniteBlock) {
    constexpr std::size_t cap = 4096;
    if (a.members(prof.infinite_block_id, cap).size() < cap)
      violation(prof.infinite_block_id, "is finite at the probe cap");
    out.tag = PartitionClassTag::Tag::Neither;
    out.reason = "has an infinite block " + std::to_string(prof.infinite_block_id);
    return out;
  }
  std::int64_t nonsingletons = 0, records = 0, best = 0;
  for (std::size_t r = 0; r < probe_blocks; ++r) {
    BlockId b = a.block_at(static_cast<std::int64_t>(r));
    auto size = static_cast<std::int64_t>(a.members(b).size());
    if (size > 1) ++nonsingletons;
    if (size > best) {
      best = size;
      ++records;
    }
    if (prof.kind == Profile::Kind::BoundedBy) {
      if (size > prof.bound) violation(b, "has size " + std::to_string(size));
      if (prof.finite_nonsingletons && nonsingletons > *prof.finite_nonsingletons)
        violation(b, "exceeds the declared number of nonsingletons");
    }
  }
  std::string probe = " over " + std::to_string(probe_blocks) + " probed blocks";
  if (prof.kind == Profile::Kind::UnboundedFinite) {
    if (records < 3) violation(a.block_at(0), "probes show no growth in block size");
    out.tag = PartitionClassTag::Tag::InP;
    out.reason = "unbounded finite blocks; " + std::to_string(records) + " size records up to " +
                 std::to_string(best) + probe;
    return out;
  }
  if (prof.bound >= 2 && !prof.finite_nonsingletons) {
    if (nonsingletons == 0) violation(a.block_at(0), "no nonsingleton block among probes");
    out.tag = PartitionClassTag::Tag::InQ;
    out.reason = "sizes bounded by " + std::to_string(prof.bound) + ", infinitely many nonsingletons; " +
                 std::to_string(nonsingletons) + " seen" + probe;
    return out;
  }
  out.tag = PartitionClassTag::Tag::Neither;
  out.reason = "bounded with finitely many nonsingletons" + probe;
  return out;
}

std::optional<BlockId> first_unpreserved_block(const Permutation& f, const Partition& a, Point window) {
  for (Point x = 0; x < window; ++x) {
    BlockId b = a.block_of(x);
    if (a.block_of(f.apply(x)) != b) return b;
  }
  if (window > 0) {
    BlockId last = a.block_of(window - 1);
    for (Point x : a.members(last, 1u << 16))
      if (a.block_of(f.apply(x)) != last) return last;
  }
  return std::nullopt;
}

MembershipReport stabilizer_membership(const Permutation& f, const Partition& a, Point window) {
  MembershipReport r;
  auto sb = f.support_bound();
  Point probe = sb ? std::max(window, *sb) : window;
  if (auto b = first_unpreserved_block(f, a, probe)) {
    r.answer = Tri::No;
    r.witness_block = *b;
    r.detail = "block " + std::to_string(*b) + " is not mapped onto itself";
    return r;
  }
  const auto& certs = f.block_certificates();
  if (std::find(certs.begin(), certs.end(), a.name()) != certs.end()) {
    r.answer = Tri::Yes;
    r.detail = "block certificate for " + a.name();
  } else if (sb) {
    r.answer = Tri::Yes;
    r.detail = "finite support below " + std::to_string(*sb) + " checked exhaustively";
  } else {
    r.detail = "no violation below " + std::to_string(window) + ", no certificate";
  }
  return r;
}

namespace {

// Back-and-forth greedy matching of blocks, extended on demand.
class Matcher {
 public:
  Matcher(PartitionPtr a, PartitionPtr b, std::size_t slack) : a_(a), b_(b), slack_(slack) {}

  Point forward(Point x) {
    std::lock_guard<std::mutex> lock(mu_);
    BlockId blk = a_->block_of(x);
    while (!a2b_.count(blk)) round();
    auto src = a_->members(blk);
    auto dst = b_->members(a2b_[blk]);
    return dst[std::lower_bound(src.begin(), src.end(), x) - src.begin()];
  }

  Point backward(Point y) {
    std::lock_guard<std::mutex> lock(mu_);
    BlockId blk = b_->block_of(y);
    while (!b2a_.count(blk)) round();
    auto src = b_->members(blk);
    auto dst = a_->members(b2a_[blk]);
    return dst[std::lower_bound(src.begin(), src.end(), y) - src.begin()];
  }

  void rounds(std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    while (round_ < static_cast<std::int64_t>(n)) round();
  }

 private:
  // Least-rank unmatched block of `side` with the given size.
  BlockId find(const Partition& side, const std::map<BlockId, BlockId>& used,
               std::map<std::size_t, std::int64_t>& cursor, std::size_t size) {
    std::int64_t& r = cursor[size];
    std::int64_t limit = round_ + static_cast<std::int64_t>(slack_);
    for (; r <= limit; ++r) {
      BlockId cand = side.block_at(r);
      if (!used.count(cand) && side.members(cand).size() == size) return cand;
    }
    throw Error(ErrorKind::NotIsomorphic,
                "no block of size " + std::to_string(size) + " in " + side.name() +
                    " up to rank " + std::to_string(limit) + " (round " + std::to_string(round_) + ")");
  }

  void round() {
    BlockId a = a_->block_at(round_);
    if (!a2b_.count(a)) {
      BlockId b = find(*b_, b2a_, b_cursor_, a_->members(a).size());
      a2b_[a] = b;
      b2a_[b] = a;
    }
    BlockId b = b_->block_at(round_);
    if (!b2a_.count(b)) {
      BlockId a2 = find(*a_, a2b_, a_cursor_, b_->members(b).size());
      a2b_[a2] = b;
      b2a_[b] = a2;
    }
    ++round_;
  }

  PartitionPtr a_, b_;
  std::size_t slack_;
  std::mutex mu_;
  std::map<BlockId, BlockId> a2b_, b2a_;
  std::map<std::size_t, std::int64_t> a_cursor_, b_cursor_;
  std::int64_t round_ = 0;
};

}  // namespace

Permutation conjugator(PartitionPtr a, PartitionPtr b, std::size_t depth) {
  for (const auto& p : {a, b})
    if (p->profile().kind == Profile::Kind::HasInfiniteBlock)
      throw Error(ErrorKind::Precondition, p->name() + " has an infinite block");
  auto m = std::make_shared<Matcher>(a, b, 4 * depth + 64);
  m->rounds(depth);
  return Permutation::rule(
      "conjugator", [m](Point x) -> std::optional<Point> { return m->forward(x); },
      [m](Point y) -> std::optional<Point> { return m->backward(y); },
      {{"from", a->name()}, {"to", b->name()}});
}

}  // namespace symkit
