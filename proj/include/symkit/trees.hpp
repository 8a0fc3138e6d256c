#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symkit/partitions.hpp"
#include "symkit/perm.hpp"

namespace symkit {

// An orbit of a pointwise stabilizer: the whole orbit, or at least `points.size()` of its members.
struct OrbitProbe {
  bool complete = false;
  std::vector<Point> points;  // ascending when complete
};

class GroupOracle {
 public:
  virtual ~GroupOracle() = default;
  virtual std::string name() const = 0;
  // Orbit of alpha under the subgroup fixing gamma pointwise, enumerated up to n points.
  virtual OrbitProbe orbit(const std::vector<Point>& gamma, Point alpha, std::size_t n) const = 0;
  // An element fixing gamma pointwise and sending alpha to target, if one exists.
  virtual std::optional<Permutation> act(const std::vector<Point>& gamma, Point alpha, Point target) const = 0;
  virtual bool closed() const { return true; }
  // Bound on every orbit of every pointwise stabilizer, when one is known.
  virtual std::optional<std::size_t> orbit_bound() const { return std::nullopt; }
};
using OraclePtr = std::shared_ptr<const GroupOracle>;

OraclePtr full_group_oracle();
OraclePtr trivial_group_oracle();
OraclePtr partition_stabilizer_oracle(PartitionPtr a);
// The finite group generated by finite-support permutations.
OraclePtr finite_generated_oracle(std::vector<Permutation> gens, std::size_t cap = 40320);

enum class TreeMode { InfOrbits, UnboundedOrbits, Binary };
const char* to_string(TreeMode m);
TreeMode parse_tree_mode(const std::string& s);

struct TreeOptions {
  TreeMode mode = TreeMode::InfOrbits;
  std::size_t depth = 3;
  // Branching N_i of the unbounded-orbit mode.
  std::function<std::size_t(std::size_t)> branching = [](std::size_t i) { return i + 1; };
  std::size_t scan_limit = 4096;    // candidate pivots tried per level
  std::size_t orbit_budget = 4096;  // largest orbit requested from the oracle
};

struct TreeNode {
  std::vector<std::size_t> index;  // (k_0, ..., k_{r-1})
  Permutation g;
  std::optional<std::size_t> parent;
  Permutation step;          // g = step, then parent
  std::vector<Point> fixed;  // points the step fixes by construction
  std::size_t level = 0;     // the K-set holding g
};

struct TreeState {
  TreeMode mode = TreeMode::InfOrbits;
  std::size_t depth = 0;
  std::string oracle;
  std::vector<Point> alphas, betas;
  std::vector<std::vector<Point>> gammas;  // gammas[j], ascending
  std::vector<std::size_t> branching;      // N_i used, unbounded mode
  std::vector<TreeNode> nodes;
  std::map<std::vector<std::size_t>, std::size_t> by_index;
  std::vector<std::vector<std::size_t>> levels;  // node ids of each K-set

  const TreeNode* find(const std::vector<std::size_t>& index) const;
  nlohmann::json to_json() const;
};

TreeState build_tree(const GroupOracle& g, const TreeOptions& opts);

struct TreeCheck {
  bool pass = true;
  std::size_t pairs_checked = 0;
  std::vector<std::string> failures;
};
// Re-checks parent-child steps, sibling distinctness and the set containments on probes.
TreeCheck check_tree(const TreeState& t, Point probe = 64);

// Successive elements along a path of choices, then constant once the path or the tree ends.
std::shared_ptr<const ConvergentSequence> branch_sequence(const TreeState& t,
                                                          const std::vector<std::size_t>& choice);

// ---- Tuple families and E-trees ----

class DFamily {
 public:
  virtual ~DFamily() = default;
  virtual std::string name() const = 0;
  virtual Point pivot(std::size_t i) const = 0;
  // Points b with prefix + (b) in the family, ascending, at most `limit`.
  virtual std::vector<Point> extensions(const std::vector<Point>& prefix, std::size_t limit) const = 0;
  // Declared lower bound on the number of extensions at length i; nullopt means infinitely many.
  virtual std::optional<std::size_t> branching(std::size_t i) const = 0;
  // A group element carrying pivot(i) to tuple[i] for every i < tuple.size().
  virtual Permutation realize(const std::vector<Point>& tuple) const = 0;
};
using DFamilyPtr = std::shared_ptr<const DFamily>;

// Injective tuples: the family of the full symmetric group with pivots 0, 1, 2, ...
DFamilyPtr injective_tuples_family();
// Tuples choosing one point from each block in order: the family of a partition stabilizer
// with pivots the least members of the blocks.
DFamilyPtr block_choice_family(PartitionPtr a);
// Images of the pivots under the elements of a built tree; realization goes through branch limits.
DFamilyPtr tree_family(std::shared_ptr<const TreeState> t);

enum class ETreeMode { Fresh, Jump };

struct ENode {
  std::vector<Point> tuple;
  std::vector<std::vector<std::size_t>> pis;  // pis[m-1][t] = image of breakpoint(m-1) + t under pi_m
  std::optional<std::size_t> parent;
};

struct ETree {
  ETreeMode mode = ETreeMode::Fresh;
  std::vector<std::size_t> breakpoints;        // n_0 = 0 < n_1 < ...
  std::vector<std::size_t> jumps;              // i(j); the identity in fresh mode
  std::vector<std::uint64_t> round_bounds;     // the branching demanded in each jump round
  std::vector<std::vector<ENode>> levels;      // E_0, E_1, ...
  std::string family;

  std::size_t levels_built() const { return levels.empty() ? 0 : levels.size() - 1; }
  nlohmann::json to_json() const;
};

ETree build_e_tree(const DFamily& d, ETreeMode mode, const std::vector<std::size_t>& breakpoints,
                   std::size_t depth);

Permutation build_s(const ETree& t);

struct ConjugationReport {
  bool pass = true;
  std::vector<std::size_t> checked;
  std::string detail;
};
// pi given by its images on [0, window); it must preserve each breakpoint interval.
ConjugationReport verify_conjugation(const ETree& t, const Permutation& s, const DFamily& d,
                                     const std::vector<std::size_t>& pi, std::size_t window);

}  // namespace symkit
