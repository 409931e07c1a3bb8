#include "deon/ndsic.hpp"

#include <algorithm>
#include <cctype>

#include "deon/parser.hpp"

namespace deon {

std::vector<Formula> compile(const Ndsic& s) {
  std::vector<Formula> out;
  for (const auto& a : s.ideals) out.push_back(Formula::id(Formula::ob(a)));
  for (const auto& c : s.conditionals)
    out.push_back(c.flavor == Flavor::Obligation ? Formula::condOb(c.antecedent, c.consequent)
                                                 : Formula::condPm(c.antecedent, c.consequent));
  out.insert(out.end(), s.relations.begin(), s.relations.end());
  out.insert(out.end(), s.circumstances.begin(), s.circumstances.end());
  return out;
}

namespace {

Formula f(std::string_view text) { return parseFormula(text); }

Corpus makeUn() {
  Corpus c;
  c.name = "un";
  c.description = "UN Convention on Contracts for the International Sale of Goods, "
                  "articles 30-32, 45 and 53";
  const auto& un = unConventionFormulas();
  // (1)-(2) ideal statements, (3)-(13) conditionals, (14)-(18) relations
  for (std::size_t i = 0; i < 2; ++i) c.structure.ideals.push_back(un[i].operand().operand());
  for (std::size_t i = 2; i < 13; ++i)
    c.structure.conditionals.push_back(
        {un[i].left(), un[i].right(),
         un[i].kind() == Formula::Kind::CondOb ? Flavor::Obligation : Flavor::Permission});
  for (std::size_t i = 13; i < 18; ++i) c.structure.relations.push_back(un[i]);
  c.formulas = compile(c.structure);
  // The violation goal names G as well, although only D and P are ideals.
  c.violationCores = {f("d"), f("p"), f("g")};
  return c;
}

Corpus makeChisholm() {
  Corpus c;
  c.name = "chisholm";
  c.description = "Chisholm's contrary-to-duty scenario: p = Jane helps her neighbors, "
                  "q = she tells them she is coming";
  c.structure.ideals = {f("p")};
  c.structure.conditionals = {{f("p"), f("q"), Flavor::Obligation},
                              {f("~ p"), f("~ q"), Flavor::Obligation}};
  c.formulas = compile(c.structure);
  c.violationCores = c.structure.ideals;
  c.suggestedCircumstances = {f("~ p")};
  return c;
}

Corpus makeStcp() {
  Corpus c;
  c.name = "stcp";
  c.description = "Porto bus travel guidelines: ticket ready, validate, buy on board, "
                  "pay with exact amount";
  c.structure.ideals = {f("ready")};
  c.structure.conditionals = {{f("ready"), f("validate"), Flavor::Obligation},
                              {f("~ ready"), f("buy"), Flavor::Obligation},
                              {f("Ob buy"), f("pay_exact"), Flavor::Obligation}};
  c.formulas = compile(c.structure);
  c.violationCores = c.structure.ideals;
  c.suggestedCircumstances = {f("~ ready")};
  return c;
}

const std::vector<Corpus>& registry() {
  static const std::vector<Corpus> all{makeUn(), makeChisholm(), makeStcp()};
  return all;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

}  // namespace

const Corpus& corpus(std::string_view name) {
  for (const auto& c : registry())
    if (c.name == name) return c;
  throw UnknownCorpusError(std::string(name));
}

std::vector<std::string> corpusNames() {
  std::vector<std::string> out;
  for (const auto& c : registry()) out.push_back(c.name);
  return out;
}

std::vector<Formula> parseKnowledgeBase(std::string_view text) {
  std::vector<Formula> out;
  std::size_t lineStart = 0;
  while (lineStart <= text.size()) {
    std::size_t lineEnd = text.find('\n', lineStart);
    if (lineEnd == std::string_view::npos) lineEnd = text.size();
    std::string_view line = text.substr(lineStart, lineEnd - lineStart);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parseFormula(line));
      } catch (const ParseError& e) {
        throw ParseError(lineStart + e.position(), e.message());
      }
    }
    lineStart = lineEnd + 1;
  }
  return out;
}

std::string renderKnowledgeBase(const Corpus& c) {
  std::string out = "# " + c.name + ": " + c.description + "\n";
  for (const auto& fm : c.formulas) out += renderCanonical(fm) + "\n";
  if (!c.suggestedCircumstances.empty()) {
    out += "# circumstances, supplied as facts:";
    for (const auto& fm : c.suggestedCircumstances) out += " " + renderCanonical(fm);
    out += "\n";
  }
  return out;
}

std::vector<Formula> idealCores(const std::vector<Formula>& kb) {
  std::vector<Formula> out;
  for (const auto& fm : kb)
    if (fm.kind() == Formula::Kind::Box && fm.modality() == Modality::Ideal &&
        fm.operand().kind() == Formula::Kind::Ob)
      out.push_back(fm.operand().operand());
  return out;
}

QueryKind parseQueryKind(std::string_view text) {
  const std::string t = lower(text);
  if (t == "violation") return QueryKind::Violation;
  if (t == "obligation" || t == "actualobligation") return QueryKind::ActualObligation;
  if (t == "permission" || t == "permitted" || t == "actualpermission") return QueryKind::ActualPermission;
  if (t == "ideal" || t == "idealobligation") return QueryKind::IdealObligation;
  throw std::invalid_argument("unknown query kind '" + std::string(text) + "'");
}

std::string_view name(QueryKind k) noexcept {
  switch (k) {
    case QueryKind::Violation: return "violation";
    case QueryKind::ActualObligation: return "obligation";
    case QueryKind::ActualPermission: return "permission";
    case QueryKind::IdealObligation: return "ideal";
  }
  return "?";
}

Formula goalOf(const QuerySpec& q) {
  switch (q.kind) {
    case QueryKind::Violation: {
      std::vector<Formula> negated;
      for (const auto& core : q.violationCores) negated.push_back(Formula::negation(core));
      return Formula::disjunction(negated);
    }
    case QueryKind::ActualObligation:
      return Formula::ob(q.target);
    case QueryKind::ActualPermission:
      return Formula::pm(q.target);
    case QueryKind::IdealObligation:
      return Formula::id(Formula::ob(q.target));
  }
  return q.target;
}

Verdict answer(const std::vector<Formula>& kb, const QuerySpec& q, const ProverOptions& options) {
  std::vector<Formula> assumptions = kb;
  assumptions.insert(assumptions.end(), q.facts.begin(), q.facts.end());
  return entails(assumptions, goalOf(q), options);
}

}  // namespace deon
