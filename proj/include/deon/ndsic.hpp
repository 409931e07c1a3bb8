#ifndef DEON_NDSIC_HPP
#define DEON_NDSIC_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deon/formula.hpp"
#include "deon/prover.hpp"

namespace deon {

enum class Flavor { Obligation, Permission };

struct Conditional {
  Formula antecedent;
  Formula consequent;
  Flavor flavor = Flavor::Obligation;
};

// Normative detachment structure with ideal conditions: ideal statements
// (compiled to Id(Ob(A))), normative conditionals, factual relations and the
// circumstances that trigger conditionals.
struct Ndsic {
  std::vector<Formula> ideals;
  std::vector<Conditional> conditionals;
  std::vector<Formula> relations;
  std::vector<Formula> circumstances;
};

// ideals ++ conditionals ++ relations ++ circumstances, in that order.
std::vector<Formula> compile(const Ndsic& s);

class UnknownCorpusError : public std::invalid_argument {
public:
  explicit UnknownCorpusError(const std::string& name)
      : std::invalid_argument("unknown corpus '" + name + "'") {}
};

struct Corpus {
  std::string name;
  std::string description;
  Ndsic structure;
  std::vector<Formula> formulas;               // compile(structure)
  std::vector<Formula> violationCores;         // default for violation queries
  std::vector<Formula> suggestedCircumstances; // not part of `formulas`
};

// Built-in corpora: "un", "chisholm", "stcp".
const Corpus& corpus(std::string_view name);
std::vector<std::string> corpusNames();

// Knowledge-base text: one formula per line, '#' starts a comment.
std::vector<Formula> parseKnowledgeBase(std::string_view text);
std::string renderKnowledgeBase(const Corpus& c);

// Cores A of every Id(Ob(A)) member, in order.
std::vector<Formula> idealCores(const std::vector<Formula>& kb);

enum class QueryKind { Violation, ActualObligation, ActualPermission, IdealObligation };

QueryKind parseQueryKind(std::string_view text);  // throws std::invalid_argument
std::string_view name(QueryKind k) noexcept;

struct QuerySpec {
  QueryKind kind = QueryKind::Violation;
  std::vector<Formula> facts;
  Formula target;                       // ignored for Violation
  std::vector<Formula> violationCores;  // Violation only
};

// Violation: ~c1 ; ... ; ~cn.  ActualObligation: Ob(t).  ActualPermission:
// Pm(t).  IdealObligation: Id(Ob(t)).
Formula goalOf(const QuerySpec& q);

Verdict answer(const std::vector<Formula>& kb, const QuerySpec& q, const ProverOptions& options = {});

}  // namespace deon

#endif  // DEON_NDSIC_HPP
