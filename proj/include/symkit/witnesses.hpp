#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symkit/partitions.hpp"
#include "symkit/perm.hpp"

namespace symkit {

// ---- Unbounded-size partitions ----

struct PackingEntry {
  BlockId target;   // a block of the covered half of B
  BlockId source;   // the A-block whose image contains it
  std::vector<BlockId> dumped;  // A-blocks sent wholesale into the other half in the same round
};

struct PWitness {
  PartitionPtr a, b;
  Permutation f;  // A-blocks cover the even-rank blocks of B
  Permutation g;  // A-blocks cover the odd-rank blocks of B
  std::vector<PackingEntry> packing_f, packing_g;
  std::size_t depth = 0;
};

PWitness p_equiv_witness(PartitionPtr a, PartitionPtr b, std::size_t depth);

struct FactorThrough {
  Permutation p;  // h on even-rank blocks of B, identity elsewhere
  Permutation q;  // h on odd-rank blocks of B, identity elsewhere
  bool product_matches = false;
  Tri p_conjugate_in_stabilizer = Tri::Unknown;  // f p f^-1 preserves the blocks of A
  Tri q_conjugate_in_stabilizer = Tri::Unknown;
  Point window = 0;
};

// h must preserve every block of B, shown by a block certificate or by finite support.
FactorThrough factor_through(const Permutation& h, const PWitness& w, Point window);

// ---- Even subgroup ----

class EvenShift {
 public:
  explicit EvenShift(PartitionPtr a);
  // The marked point with a given integer index: nonnegative indices take the four least members
  // of each nonsingleton block, negative indices the singletons in order.
  Point marked(std::int64_t index) const;
  std::optional<std::int64_t> index_of(Point x) const;
  // Sends marked(i) to marked(i + 2) and fixes everything else.
  const Permutation& shift() const { return shift_; }
  // The element of the pair-stabilizer that swaps marked(2j), marked(2j+1) exactly where bits[j] is set.
  Permutation pair_element(const std::vector<bool>& bits) const;
  const PartitionPtr& partition() const { return a_; }

 private:
  struct Index;
  PartitionPtr a_;
  std::shared_ptr<Index> index_;
  Permutation shift_;
};

EvenShift even_shift_witness(PartitionPtr a);

struct Z2Split {
  std::vector<bool> x;  // x[2i] == x[2i+1]
  std::vector<bool> y;  // y[0] == 0, y[2i+1] == y[2i+2]
};
Z2Split decompose_z2(const std::vector<bool>& a);

// ---- Bounded-size partitions ----

enum class EdgeColor { Red, Green };
const char* to_string(EdgeColor c);

struct QFactor {
  Permutation perm;  // transposition of two chain neighbours
  EdgeColor color;
  BlockId block;
  std::size_t edge;        // position in the block's chain
  bool certified = false;  // its conjugate lies in the stabilizer of A0
};

struct QChains;

class QWitness {
 public:
  QWitness(PartitionPtr a, std::size_t depth);
  const Permutation& f() const { return f_; }  // carries A0 onto the red matching
  const Permutation& g() const { return g_; }  // carries A0 onto the green matching
  const PartitionPtr& red() const { return red_; }
  const PartitionPtr& green() const { return green_; }
  std::int64_t bound() const { return bound_; }
  EdgeColor color(BlockId block, std::size_t edge) const;
  // Adjacent transpositions, in application order, whose product is h.
  std::vector<QFactor> factorize(const Permutation& h) const;

 private:
  PartitionPtr a_, red_, green_;
  std::shared_ptr<QChains> chains_;
  Permutation f_, g_;
  std::int64_t bound_ = 0;
};

QWitness q_equiv_witness(PartitionPtr a, std::size_t depth);

// ---- Commutators ----

// Blocks of the two-point family indexed by the integers, and the block shift.
std::pair<Point, Point> commutator_block(std::int64_t i);
Permutation block_shift();
// Swaps block i exactly where active(i) holds.
Permutation block_flips(std::function<bool(std::int64_t)> active);

struct CommutatorSolution {
  std::int64_t lo = 0, hi = 0;  // the target covers blocks [lo, hi)
  std::map<std::int64_t, bool> flips;  // on [lo - 1, hi); constant beyond
  Permutation f;
  Permutation commutator;  // h^-1 f^-1 h f
};

// Solves target(i) = f(i-1) xor f(i) for i in [lo, hi) given f(anchor) = anchor_bit.
CommutatorSolution commutator_solve(std::int64_t lo, const std::vector<bool>& target, std::int64_t anchor,
                                    bool anchor_bit);

Permutation three_cycle_extract(const Permutation& g, const Permutation& s);

enum class FiniteClass { Trivial, EvenFinite, OddFinite };
const char* to_string(FiniteClass c);
struct FiniteGroupReport {
  FiniteClass cls = FiniteClass::Trivial;
  std::size_t order = 1;
  std::vector<Point> domain;
};
FiniteGroupReport sfinite_class(const std::vector<Permutation>& gens, std::size_t cap = 40320);

}  // namespace symkit
