#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "symkit/error.hpp"

namespace symkit {

// A point of the ground set. Points are the naturals; the enumeration is the identity.
using Point = std::int64_t;

// Fixed bijection from the integers onto the naturals: n >= 0 -> 2n, n < 0 -> -2n-1.
inline Point z_to_n(std::int64_t z) { return z >= 0 ? 2 * z : -2 * z - 1; }
inline std::int64_t n_to_z(Point n) { return (n % 2 == 0) ? n / 2 : -(n + 1) / 2; }

struct DisplacementBound {
  std::string metric;  // name of the metric the bound refers to, e.g. "standard-z"
  std::int64_t bound = 0;
};

// Lazily generated pairs (a_j, b_j) with a_j g = b_j and dist(a_j, b_j) >= j.
struct GrowthWitness {
  std::string metric;
  std::function<std::pair<Point, Point>(std::size_t)> pair;
};

class ConvergentSequence;

class Permutation {
 public:
  enum class Form { FiniteSupport, Rule, Word, Limit };
  using RuleFn = std::function<std::optional<Point>(Point)>;

  Permutation();  // identity

  static Permutation identity() { return Permutation(); }
  static Permutation cycles(const std::vector<std::vector<Point>>& cs);
  static Permutation transposition(Point a, Point b);
  // Finite bijection given as (point, image) pairs; must be a permutation of its domain.
  static Permutation from_map(const std::vector<std::pair<Point, Point>>& mapping);
  static Permutation rule(std::string name, RuleFn forward, RuleFn backward,
                          std::map<std::string, std::string> params = {});
  static Permutation builtin(const std::string& name,
                             const std::map<std::string, std::string>& params = {});
  static Permutation word(std::vector<Permutation> factors);
  static Permutation limit_of(std::shared_ptr<const ConvergentSequence> seq);

  Point apply(Point a) const;
  Point apply_inverse(Point a) const;
  Point operator()(Point a) const { return apply(a); }

  Permutation inverse() const;
  // Word[*this, next]: apply *this first.
  Permutation then(const Permutation& next) const { return word({*this, next}); }

  Form form() const;
  bool inverted() const { return inverted_; }
  const std::string& rule_name() const;
  const std::map<std::string, std::string>& rule_params() const;
  std::vector<Permutation> factors() const;  // Word form only, already oriented
  std::vector<std::vector<Point>> cycle_list() const;  // FiniteSupport form only

  // Certificates.
  std::optional<Point> support_bound() const;
  std::optional<DisplacementBound> displacement_bound() const;
  const std::vector<std::string>& block_certificates() const;
  std::shared_ptr<const GrowthWitness> growth_witness() const;
  std::function<std::vector<Point>(Point)> locality_certificate() const;

  Permutation with_displacement_bound(std::string metric, std::int64_t bound) const;
  Permutation with_block_certificate(std::string partition) const;
  Permutation with_growth_witness(std::shared_ptr<const GrowthWitness> w) const;
  // Certificate listing invariant initial segments [0, j) with j <= the argument.
  Permutation with_locality_certificate(std::function<std::vector<Point>(Point)> prefixes) const;
  Permutation with_label(std::string label) const;
  // Same permutation with a thread-safe per-point cache.
  Permutation memoized() const;

  std::string to_string() const;
  nlohmann::json to_json() const;

  struct Node;

 private:
  explicit Permutation(std::shared_ptr<const Node> node, bool inverted = false)
      : node_(std::move(node)), inverted_(inverted) {}
  std::shared_ptr<const Node> node_;
  bool inverted_ = false;
  friend struct NodeAccess;
};

Permutation parse_permutation(const std::string& text);
Permutation permutation_from_json(const nlohmann::json& j);

// Materializes a finite-support permutation as explicit cycles.
Permutation to_cycles(const Permutation& p);
// Moved points of a finite-support permutation, ascending.
std::vector<Point> support_of(const Permutation& p);

struct WindowReport {
  bool pass = true;
  std::optional<Point> counterexample;
  std::string detail;
};
WindowReport verify_window(const Permutation& p, Point n);

enum class Parity { Even, Odd };
Parity parity(const Permutation& p);

// Default bound on primitive evaluation steps for a single query.
void set_step_budget(std::uint64_t steps);
std::uint64_t step_budget();

class ConvergentSequence {
 public:
  struct Term {
    Permutation g;
    std::vector<Point> gamma;
  };
  using Producer = std::function<Term(std::size_t)>;

  explicit ConvergentSequence(Producer producer, std::string label = "limit");

  const Term& term(std::size_t j) const;
  // Checks the convergence hypotheses at every level 0 < j <= depth.
  void verify_to(std::size_t depth) const;
  std::size_t verified_depth() const;
  const std::string& label() const { return label_; }

 private:
  Producer producer_;
  std::string label_;
  mutable std::recursive_mutex mu_;
  mutable std::vector<std::unique_ptr<Term>> terms_;
  mutable std::size_t verified_ = 0;
};

Permutation limit(std::shared_ptr<const ConvergentSequence> seq, std::size_t depth);

}  // namespace symkit
