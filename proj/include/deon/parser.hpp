#ifndef DEON_PARSER_HPP
#define DEON_PARSER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deon/formula.hpp"

namespace deon {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

private:
  std::size_t position_;
  std::string message_;
};

// A query in the ([assumptions],goal) program form.
struct Problem {
  std::vector<Formula> assumptions;
  Formula goal;

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Parses the query language.
///
///   ~ F          negation            F , G     conjunction
///   F ; G        disjunction         F => G    implication (right assoc.)
///   F <=> G      equivalence         true, false
///   Id F, Aw F   boxes               Di F, Da F   diamonds
///   Ob F, Pm F   Ought*, Perm*       OJ F      legacy Jones-Porn ought
///   NO(F,G)      conditional obligation
///   NP(F,G)      conditional permission
///   un           conjunction of the 18 Convention formulas
///
/// Binding, tightest first: prefix operators, `,`, `;`, `=>`, `<=>`. Prefix
/// operators accept a parenthesised argument or a bare operand (`Ob d12`).
Formula parseFormula(std::string_view text);

// Parses "([A1,...,An],G)".
Problem parseProblem(std::string_view text);

// Comma-separated formulas, e.g. "d01,(~ d3)"; blank text gives an empty list.
std::vector<Formula> parseFormulaList(std::string_view text);

// Fully parenthesised rendering; parseFormula(renderCanonical(f)) == f.
std::string renderCanonical(const Formula& f);
std::string renderCanonical(const Problem& p);

// MleanCoP problem text: f(G). with defined forms expanded.
std::string renderMleanCoP(const Problem& p);

// The 18 formulas of the Convention knowledge base, in order.
const std::vector<Formula>& unConventionFormulas();
const std::vector<std::string>& unConventionSource();

}  // namespace deon

#endif  // DEON_PARSER_HPP
