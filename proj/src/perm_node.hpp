#pragma once

#include "symkit/perm.hpp"

namespace symkit {

struct Permutation::Node {
  struct Memo {
    std::mutex mu;
    std::unordered_map<Point, Point> forward, backward;
  };

  Form form = Form::FiniteSupport;
  std::unordered_map<Point, Point> fwd, bwd;
  std::string name;
  std::map<std::string, std::string> params;
  RuleFn forward, backward;
  std::vector<Permutation> factors;
  std::shared_ptr<const ConvergentSequence> seq;
  std::string label;

  std::optional<Point> support_bound;
  std::optional<DisplacementBound> displacement;
  std::vector<std::string> blocks;
  std::shared_ptr<const GrowthWitness> growth;
  std::function<std::vector<Point>(Point)> locality;

  std::shared_ptr<Memo> memo;
};

const Permutation::Node& node_of(const Permutation& p);

}  // namespace symkit
