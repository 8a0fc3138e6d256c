#include <algorithm>
#include <mutex>

#include "symkit/witnesses.hpp"

namespace symkit {

const char* to_string(EdgeColor c) { return c == EdgeColor::Red ? "red" : "green"; }

// Position of each nonsingleton block among the nonsingleton blocks of A.
struct QChains {
  PartitionPtr a;
  std::mutex mu;
  std::int64_t scanned = 0;
  std::vector<BlockId> nonsingletons;

  std::int64_t index_of(BlockId b) {
    std::lock_guard<std::mutex> lock(mu);
    std::int64_t rank = a->block_rank(b);
    while (scanned <= rank) {
      BlockId next = a->block_at(scanned++);
      if (a->members(next, 2).size() > 1) nonsingletons.push_back(next);
    }
    return std::lower_bound(nonsingletons.begin(), nonsingletons.end(), b) - nonsingletons.begin();
  }

  // Edge k of the chain through the t-th nonsingleton block is red when k + t is even.
  bool red(BlockId b, std::size_t edge) { return (static_cast<std::int64_t>(edge) + index_of(b)) % 2 == 0; }
};

namespace {

// The matching formed by the edges of one color, all other points singletons.
class MatchingPartition : public Partition {
 public:
  MatchingPartition(PartitionPtr a, std::shared_ptr<QChains> chains, EdgeColor color)
      : a_(std::move(a)), chains_(std::move(chains)), color_(color) {}

  std::string name() const override { return std::string(to_string(color_)) + "-matching(" + a_->name() + ")"; }
  Profile profile() const override { return Profile::bounded(2, std::nullopt); }

  BlockId block_of(Point x) const override {
    BlockId b = a_->block_of(x);
    auto m = a_->members(b);
    if (m.size() == 1) return x;
    std::size_t k = std::lower_bound(m.begin(), m.end(), x) - m.begin();
    if (k + 1 < m.size() && has(b, k)) return x;
    if (k >= 1 && has(b, k - 1)) return m[k - 1];
    return x;
  }

  std::vector<Point> members(BlockId id, std::size_t) const override {
    BlockId b = a_->block_of(id);
    auto m = a_->members(b);
    std::size_t k = std::lower_bound(m.begin(), m.end(), id) - m.begin();
    if (k + 1 < m.size() && has(b, k)) return {m[k], m[k + 1]};
    if (k >= 1 && has(b, k - 1)) throw Error(ErrorKind::Precondition, std::to_string(id) + " is not a block");
    return {id};
  }

  std::int64_t block_rank(BlockId b) const override {
    std::lock_guard<std::mutex> lock(mu_);
    while (ids_.empty() || ids_.back() < b) extend();
    return std::lower_bound(ids_.begin(), ids_.end(), b) - ids_.begin();
  }

  BlockId block_at(std::int64_t rank) const override {
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<std::int64_t>(ids_.size()) <= rank) extend();
    return ids_[static_cast<std::size_t>(rank)];
  }

 private:
  bool has(BlockId b, std::size_t edge) const { return chains_->red(b, edge) == (color_ == EdgeColor::Red); }
  void extend() const {
    while (block_of(next_) != next_) ++next_;
    ids_.push_back(next_++);
  }

  PartitionPtr a_;
  std::shared_ptr<QChains> chains_;
  EdgeColor color_;
  mutable std::mutex mu_;
  mutable std::vector<BlockId> ids_;
  mutable Point next_ = 0;
};

}  // namespace

QWitness::QWitness(PartitionPtr a, std::size_t depth) : a_(std::move(a)) {
  auto tag = classify_partition(*a_);
  if (tag.tag != PartitionClassTag::Tag::InQ)
    throw Error(ErrorKind::Precondition, a_->name() + " is not of bounded block sizes with infinitely many "
                                                      "nonsingletons: " + tag.reason);
  bound_ = a_->profile().bound;
  chains_ = std::make_shared<QChains>();
  chains_->a = a_;
  red_ = std::make_shared<MatchingPartition>(a_, chains_, EdgeColor::Red);
  green_ = std::make_shared<MatchingPartition>(a_, chains_, EdgeColor::Green);
  f_ = conjugator(a0_partition(), red_, depth);
  g_ = conjugator(a0_partition(), green_, depth);
}

EdgeColor QWitness::color(BlockId block, std::size_t edge) const {
  return chains_->red(block, edge) ? EdgeColor::Red : EdgeColor::Green;
}

std::vector<QFactor> QWitness::factorize(const Permutation& h) const {
  const auto& certs = h.block_certificates();
  bool certified = std::find(certs.begin(), certs.end(), a_->name()) != certs.end();
  if (!h.support_bound()) {
    if (certified) throw Error(ErrorKind::Precondition, "factorization needs a finite-support element");
    throw Error(ErrorKind::NoCertificate, h.to_string() + " carries no block certificate for " + a_->name());
  }
  if (!certified && stabilizer_membership(h, *a_, *h.support_bound()).answer != Tri::Yes)
    throw Error(ErrorKind::NoCertificate, h.to_string() + " does not preserve the blocks of " + a_->name());

  std::vector<BlockId> blocks;
  for (Point x : support_of(h)) blocks.push_back(a_->block_of(x));
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());

  std::vector<QFactor> word;
  auto a0 = a0_partition();
  for (BlockId b : blocks) {
    auto m = a_->members(b);
    std::vector<std::size_t> pi(m.size());
    for (std::size_t k = 0; k < m.size(); ++k)
      pi[k] = std::lower_bound(m.begin(), m.end(), h.apply(m[k])) - m.begin();
    // Peel adjacent transpositions off the right end; each step removes one inversion.
    std::vector<std::size_t> peeled;
    for (;;) {
      std::vector<std::size_t> pos(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) pos[pi[i]] = i;
      std::size_t k = 0;
      while (k + 1 < m.size() && pos[k + 1] > pos[k]) ++k;
      if (k + 1 >= m.size()) break;
      for (auto& v : pi) v = v == k ? k + 1 : (v == k + 1 ? k : v);
      peeled.push_back(k);
    }
    for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) {
      std::size_t k = *it;
      EdgeColor c = color(b, k);
      const Permutation& conj = c == EdgeColor::Red ? f_ : g_;
      QFactor fac{Permutation::transposition(m[k], m[k + 1]), c, b, k};
      fac.certified = a0->block_of(conj.apply_inverse(m[k])) == a0->block_of(conj.apply_inverse(m[k + 1]));
      word.push_back(std::move(fac));
    }
  }
  return word;
}

QWitness q_equiv_witness(PartitionPtr a, std::size_t depth) { return QWitness(std::move(a), depth); }

}  // namespace symkit
