#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symkit/perm.hpp"

namespace symkit {

// Blocks are identified by their least member.
using BlockId = Point;

struct Profile {
  enum class Kind { BoundedBy, UnboundedFinite, HasInfiniteBlock };
  Kind kind = Kind::BoundedBy;
  std::int64_t bound = 1;                          // BoundedBy
  std::optional<std::int64_t> finite_nonsingletons;  // BoundedBy; nullopt means infinitely many
  BlockId infinite_block_id = 0;                     // HasInfiniteBlock

  static Profile bounded(std::int64_t n, std::optional<std::int64_t> nonsingletons) {
    Profile p;
    p.bound = n;
    p.finite_nonsingletons = nonsingletons;
    return p;
  }
  static Profile unbounded_finite() {
    Profile p;
    p.kind = Kind::UnboundedFinite;
    return p;
  }
  static Profile infinite_block(BlockId b) {
    Profile p;
    p.kind = Kind::HasInfiniteBlock;
    p.infinite_block_id = b;
    return p;
  }
  std::string to_string() const;
};

class Partition {
 public:
  virtual ~Partition() = default;
  virtual std::string name() const = 0;
  virtual BlockId block_of(Point a) const = 0;
  // Members in ascending order, truncated to `cap` for infinite blocks.
  virtual std::vector<Point> members(BlockId b,
                                     std::size_t cap = std::numeric_limits<std::size_t>::max()) const = 0;
  virtual Profile profile() const = 0;
  // Position of the block in the order of least members.
  virtual std::int64_t block_rank(BlockId b) const;
  // The block at a given position.
  virtual BlockId block_at(std::int64_t rank) const;
};
using PartitionPtr = std::shared_ptr<const Partition>;

PartitionPtr pairs_partition();
PartitionPtr a0_partition();
PartitionPtr intervals_growing_partition();
PartitionPtr singletons_partition();
// Consecutive intervals: block m has size sizes(m) >= 1.
PartitionPtr layout_partition(std::string name, std::function<std::int64_t(std::int64_t)> sizes,
                              Profile profile);
// Sizes 2,1,4,3,6,5,...: the growing intervals in a different order.
PartitionPtr intervals_shuffled_partition();
// Singletons alternating with blocks of sizes 4,5,6,...
PartitionPtr sparse_growing_partition();
// Evens and odds.
PartitionPtr parity_partition();
// JSON: {"blocks": [[...], ...], "rest": "singletons", "profile": {...}}
PartitionPtr explicit_partition(const nlohmann::json& spec, std::string name = "explicit");
// Accepts `partition:<name>` or a bare name; `explicit@<file>` reads a JSON file.
PartitionPtr parse_partition(const std::string& spec);

struct PartitionClassTag {
  enum class Tag { InP, InQ, Neither };
  Tag tag = Tag::Neither;
  std::string reason;
};
const char* to_string(PartitionClassTag::Tag t);

PartitionClassTag classify_partition(const Partition& a, std::size_t probe_blocks = 256);

struct MembershipReport {
  Tri answer = Tri::Unknown;
  std::optional<BlockId> witness_block;
  std::string detail;
};
// Probe-only check: first block meeting [0, window) that f does not map onto itself.
std::optional<BlockId> first_unpreserved_block(const Permutation& f, const Partition& a, Point window);
MembershipReport stabilizer_membership(const Permutation& f, const Partition& a, Point window);

// Permutation carrying each block of `a` onto a block of `b`, matched greedily by size.
Permutation conjugator(PartitionPtr a, PartitionPtr b, std::size_t depth);

}  // namespace symkit
