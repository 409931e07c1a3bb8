#ifndef DEON_SRC_SAT_HPP
#define DEON_SRC_SAT_HPP

// Small CDCL solver backing the bounded countermodel search. Internal only.

#include <cstdint>
#include <vector>

namespace deon::sat {

// Literal encoding: 2 * var for the positive literal, 2 * var + 1 negated.
inline int pos(int var) { return 2 * var; }
inline int neg(int var) { return 2 * var + 1; }
inline int negate(int lit) { return lit ^ 1; }

class Solver {
public:
  int addVar();
  int varCount() const { return static_cast<int>(assigns_.size()); }
  void addClause(std::vector<int> lits);
  bool solve();
  bool value(int var) const { return assigns_[var] == kTrue; }

private:
  static constexpr std::int8_t kFalse = 0, kTrue = 1, kUndef = 2;

  std::int8_t litValue(int lit) const {
    const std::int8_t v = assigns_[lit >> 1];
    return v == kUndef ? kUndef : static_cast<std::int8_t>((v == kTrue) != (lit & 1));
  }
  int level() const { return static_cast<int>(trailLim_.size()); }
  void enqueue(int lit, int reason);
  int propagate();
  void analyze(int conflict, std::vector<int>& learnt, int& backtrackLevel);
  void cancelUntil(int lvl);
  int pickBranch() const;
  void bump(int var);

  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;  // by literal
  std::vector<std::int8_t> assigns_;
  std::vector<int> levelOf_, reason_;
  std::vector<double> activity_;
  std::vector<char> seen_;
  std::vector<int> trail_, trailLim_;
  std::size_t qhead_ = 0;
  double increment_ = 1.0;
  bool unsat_ = false;
};

}  // namespace deon::sat

#endif  // DEON_SRC_SAT_HPP
