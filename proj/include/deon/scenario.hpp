#ifndef DEON_SCENARIO_HPP
#define DEON_SCENARIO_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "deon/formula.hpp"
#include "deon/prover.hpp"

namespace deon {

class ScenarioCapError : public std::length_error {
public:
  using std::length_error::length_error;
};

struct ScenarioLeaf {
  std::vector<bool> assignment;  // parallel to ScenarioGraph::unknowns
  bool consistentWithKB = true;
  std::vector<bool> derivable;   // parallel to ScenarioGraph::outcomes

  friend bool operator==(const ScenarioLeaf&, const ScenarioLeaf&) = default;
};

// Complete binary decision tree over the unknowns, in the given order. Leaf i
// corresponds to the path that takes `true` at level j iff bit (k-1-j) of i is
// clear, so leaf 0 is all-true and leaf 2^k - 1 is all-false.
struct ScenarioGraph {
  std::vector<std::string> unknowns;
  std::vector<Formula> facts;
  std::vector<Formula> outcomes;
  std::vector<ScenarioLeaf> leaves;

  std::size_t internalNodeCount() const noexcept { return leaves.size() - 1; }
  friend bool operator==(const ScenarioGraph&, const ScenarioGraph&) = default;
};

struct EnumerateOptions {
  std::size_t maxUnknowns = 12;
  std::size_t threads = 0;  // 0: hardware concurrency; 1: sequential
  ProverOptions prover;
};

ScenarioGraph enumerate(const std::vector<Formula>& kb, const std::vector<Formula>& facts,
                        const std::vector<std::string>& unknowns, const std::vector<Formula>& outcomes,
                        const EnumerateOptions& options = {});

std::string renderDot(const ScenarioGraph& g);
nlohmann::json toJson(const ScenarioGraph& g);

}  // namespace deon

#endif  // DEON_SCENARIO_HPP
