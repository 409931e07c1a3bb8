#ifndef DEON_PROVER_HPP
#define DEON_PROVER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "deon/formula.hpp"
#include "deon/semantics.hpp"

namespace deon {

// One step away from the actual world along a relation: (modality, n).
struct PrefixStep {
  Modality modality;
  unsigned index;
  friend bool operator==(const PrefixStep&, const PrefixStep&) = default;
};

// Empty prefix = actual world. Rendered "0", "0.i1", "0.i1.a2", ...
using Prefix = std::vector<PrefixStep>;
std::string renderPrefix(const Prefix& p);

struct LabeledFormula {
  Prefix prefix;
  Formula formula;
  friend bool operator==(const LabeledFormula&, const LabeledFormula&) = default;
};

enum class Rule { Alpha, Beta, Pi, NuK, NuD, Close };
std::string_view name(Rule r) noexcept;

// For Beta, produced = {left, right}; the left branch's steps follow, then
// the right branch's. For Close, source and produced[0] are complementary
// literals (produced is empty when source is Bottom).
struct ProofStep {
  Rule rule;
  LabeledFormula source;
  std::vector<LabeledFormula> produced;
  std::size_t depth = 0;  // number of enclosing Beta splits
};

struct ProofTrace {
  LabeledFormula root;  // NNF of the negated input at the empty prefix
  std::vector<ProofStep> steps;
};

// Re-runs the trace from {root}; true iff every rule application is legal and
// every branch ends closed. On failure, *why describes the first bad step.
bool replay(const ProofTrace& trace, std::string* why = nullptr);

std::string renderTrace(const ProofTrace& trace);

struct ProverOptions {
  std::size_t nodeBudget = 10'000'000;  // labeled formulas created, over the whole search
};

struct ProverStats {
  std::size_t labeledFormulas = 0;
  std::size_t branchings = 0;
  std::size_t maxPrefixLength = 0;
  std::size_t maxSuccessorsPerPrefix = 0;  // per (prefix, modality)
};

class ResourceLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Theorem {
  ProofTrace trace;
};

struct NonTheorem {
  KripkeModel countermodel;  // serial; the input is false at its root
};

struct Verdict {
  std::variant<Theorem, NonTheorem> result;
  ProverStats stats;

  bool isTheorem() const noexcept { return std::holds_alternative<Theorem>(result); }
  const ProofTrace& trace() const { return std::get<Theorem>(result).trace; }
  const KripkeModel& countermodel() const { return std::get<NonTheorem>(result).countermodel; }
};

// Validity in bimodal KD (both relations serial).
Verdict prove(const Formula& f, const ProverOptions& options = {});

// prove((A1 & ... & An) -> goal); assumptions hold at the actual world only.
Verdict entails(const std::vector<Formula>& assumptions, const Formula& goal,
                const ProverOptions& options = {});

bool consistent(const std::vector<Formula>& assumptions, const ProverOptions& options = {});

// result[i] is true iff member i does not follow from the others.
std::vector<bool> independent(const std::vector<Formula>& assumptions,
                              const ProverOptions& options = {});

}  // namespace deon

#endif  // DEON_PROVER_HPP
