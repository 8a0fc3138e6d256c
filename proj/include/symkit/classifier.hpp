#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symkit/metrics.hpp"
#include "symkit/partitions.hpp"
#include "symkit/perm.hpp"
#include "symkit/trees.hpp"

namespace symkit {

struct GroupDescriptor;
using DescriptorPtr = std::shared_ptr<const GroupDescriptor>;

struct GroupDescriptor {
  enum class Kind { Full, Stabilizer, Fix, FN, Oracle, Trivial, Gens };
  Kind kind = Kind::Trivial;
  PartitionPtr partition;          // Stabilizer
  DescriptorPtr inner;             // Fix; never itself a Fix
  std::vector<Point> fixed;        // Fix, ascending
  MetricPtr metric;                // FN
  OraclePtr oracle;                // Oracle
  std::string plugin;              // Oracle
  std::vector<Permutation> gens;   // Gens

  std::string to_string() const;
};

DescriptorPtr full_descriptor();
DescriptorPtr trivial_descriptor();
DescriptorPtr stabilizer_descriptor(PartitionPtr a);
// Pointwise stabilizer; nested fixes merge their point sets.
DescriptorPtr fix_descriptor(DescriptorPtr inner, std::vector<Point> points);
DescriptorPtr fn_descriptor(MetricPtr d);
DescriptorPtr oracle_descriptor(const std::string& plugin);
DescriptorPtr gens_descriptor(std::vector<Permutation> gens);

// full | trivial | stab:<partition> | fix(<descriptor>;p,q,...) | fn:<metric> | oracle:<name> | gens:[<perm>,...]
DescriptorPtr parse_descriptor(const std::string& text);
std::vector<std::string> oracle_plugins();

// Orbits of pointwise stabilizers, computed exactly where the descriptor allows.
OraclePtr descriptor_oracle(DescriptorPtr g);

struct OrbitReport {
  enum class Result { Full, AtLeast, Unknown };
  std::vector<Point> gamma;
  Point alpha = 0;
  Result result = Result::Unknown;
  std::vector<Point> points;  // the orbit when Full
  std::size_t at_least = 0;   // AtLeast
  std::size_t max_observed = 0;

  std::size_t size() const { return result == Result::Full ? points.size() : at_least; }
  nlohmann::json to_json() const;
};

OrbitReport orbit(const GroupDescriptor& g, const std::vector<Point>& gamma, Point alpha, std::size_t budget);

enum class ClassName { CS, CP, CQ, C1, Unknown };
const char* to_string(ClassName c);
const char* lambda_case(ClassName c);
// Position in the chain C_1 < C_Q < C_P < C_S; nullopt for Unknown.
std::optional<int> class_rank(ClassName c);
ClassName parse_class(const std::string& s);

struct ClassifyBudgets {
  std::size_t gamma_max = 16;
  std::size_t samples = 64;
  std::size_t orbit_budget = 4096;
};

struct ClassLabel {
  ClassName label = ClassName::Unknown;
  bool certified = false;  // decided by the descriptor itself rather than by probes
  nlohmann::json evidence;
};

ClassLabel classify_group(const GroupDescriptor& g, const ClassifyBudgets& b = {});

// Re-derives the label from evidence alone; nullopt when the evidence does not support any label.
std::optional<ClassName> replay_evidence(const nlohmann::json& evidence);

struct Verdict {
  Tri answer = Tri::Unknown;
  nlohmann::json evidence;
};

Verdict discreteness(const GroupDescriptor& g, std::size_t budget = 16);
Verdict compactness_criterion(const GroupDescriptor& g, std::size_t budget = 64);

}  // namespace symkit
