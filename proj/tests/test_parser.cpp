#include "doctest.h"

#include "deon/parser.hpp"
#include "support/random_formula.hpp"

using namespace deon;

namespace {

Formula at(const char* n) { return Formula::atom(n); }
Formula no(Formula f) { return Formula::negation(std::move(f)); }

std::size_t errorOffset(std::string_view text) {
  try {
    parseFormula(text);
  } catch (const ParseError& e) {
    return e.position();
  }
  FAIL("no parse error for: " << text);
  return 0;
}

}  // namespace

TEST_SUITE("parser") {

TEST_CASE("listing formulas") {
  CHECK(parseFormula("(~ d);((~ p);(~ g))") ==
        Formula::disj(no(at("d")), Formula::disj(no(at("p")), no(at("g")))));
  CHECK(parseFormula("Ob d12") == Formula::ob(at("d12")));
  CHECK(parseFormula("(Ob d12)") == Formula::ob(at("d12")));
  CHECK(parseFormula("Id(Ob(d))") == Formula::id(Formula::ob(at("d"))));
  CHECK(parseFormula("NO(((~ d01),(~ d02)),d3)") ==
        Formula::condOb(Formula::conj(no(at("d01")), no(at("d02"))), at("d3")));
  CHECK(parseFormula("NP((~ d),e1)") == Formula::condPm(no(at("d")), at("e1")));
}

TEST_CASE("precedence and associativity") {
  CHECK(parseFormula("a , b ; c") == Formula::disj(Formula::conj(at("a"), at("b")), at("c")));
  CHECK(parseFormula("a ; b , c") == Formula::disj(at("a"), Formula::conj(at("b"), at("c"))));
  CHECK(parseFormula("a => b => c") == Formula::implies(at("a"), Formula::implies(at("b"), at("c"))));
  CHECK(parseFormula("a => b <=> c") == Formula::iff(Formula::implies(at("a"), at("b")), at("c")));
  CHECK(parseFormula("~ a , b") == Formula::conj(no(at("a")), at("b")));
  CHECK(parseFormula("Ob a , b") == Formula::conj(Formula::ob(at("a")), at("b")));
  CHECK(parseFormula("a , b , c") == Formula::conj(at("a"), Formula::conj(at("b"), at("c"))));
  CHECK(parseFormula("~ ~ a") == no(no(at("a"))));
}

TEST_CASE("whitespace is insignificant") {
  CHECK(parseFormula("  (  Ob   d12 )  ") == parseFormula("(Ob d12)"));
  CHECK(parseFormula("(~d);((~p);(~g))") == parseFormula("(~ d);((~ p);(~ g))"));
  CHECK(parseProblem("([un, d01,d1,(~ d11)],(Ob d12))") == parseProblem("([un,d01,d1,(~ d11)],(Ob d12))"));
}

TEST_CASE("constants and extra operators") {
  CHECK(parseFormula("true") == Formula::top());
  CHECK(parseFormula("false") == Formula::bottom());
  CHECK(parseFormula("Di a") == Formula::dia(Modality::Ideal, at("a")));
  CHECK(parseFormula("Da a") == Formula::dia(Modality::Awful, at("a")));
  CHECK(parseFormula("Aw a") == Formula::box(Modality::Awful, at("a")));
  CHECK(parseFormula("OJ a") == Formula::oughtJP(at("a")));
}

TEST_CASE("un is the 18-formula conjunction") {
  const Formula un = parseFormula("un");
  std::size_t conjuncts = 1;
  Formula f = un;
  while (f.kind() == Formula::Kind::And) {
    CHECK(f.left() == unConventionFormulas()[conjuncts - 1]);
    f = f.right();
    ++conjuncts;
  }
  CHECK(conjuncts == 18);
  CHECK(unConventionFormulas().size() == 18);
  CHECK(f == unConventionFormulas()[17]);
}

TEST_CASE("problems") {
  const Problem p = parseProblem("([un,d01,d3],((~ d);((~ p);(~ g))))");
  REQUIRE(p.assumptions.size() == 3);
  CHECK(p.assumptions[0] == parseFormula("un"));
  CHECK(p.assumptions[1] == at("d01"));
  CHECK(p.goal == parseFormula("(~ d);((~ p);(~ g))"));

  const Problem empty = parseProblem("([],true)");
  CHECK(empty.assumptions.empty());
  CHECK(empty.goal == Formula::top());

  const Problem ideal = parseProblem("([un],(Id (Ob g)))");
  CHECK(ideal.goal == Formula::id(Formula::ob(at("g"))));

  // Inside the list a comma separates; parentheses restore conjunction.
  CHECK(parseProblem("([(a,b)],c)").assumptions.size() == 1);
  CHECK(parseProblem("([a,b],c , d)").goal == Formula::conj(at("c"), at("d")));
}

TEST_CASE("errors carry offsets") {
  CHECK(errorOffset("P") == 0);
  CHECK(errorOffset("a , D1") == 4);
  CHECK(errorOffset("(a ; b") == 5);
  CHECK(errorOffset("a $ b") == 2);
  CHECK(errorOffset("") == 0);
  CHECK(errorOffset("a b") == 2);
  CHECK_THROWS_AS(parseProblem("([,)"), ParseError);
  CHECK_THROWS_AS(parseProblem("([un],(Id (Ob g))"), ParseError);  // unbalanced listing row
  CHECK_THROWS_AS(parseProblem("[a],b"), ParseError);
  try {
    parseProblem("([,)");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
    CHECK(e.position() < 4);
  }
}

TEST_CASE("formula lists") {
  CHECK(parseFormulaList("").empty());
  CHECK(parseFormulaList("   ").empty());
  CHECK(parseFormulaList("d01,(~ d3)") == std::vector<Formula>{at("d01"), no(at("d3"))});
  CHECK(parseFormulaList("(Ob d11),(Ob d12)").size() == 2);
  CHECK_THROWS_AS(parseFormulaList("a,,b"), ParseError);
}

TEST_CASE("canonical rendering") {
  CHECK(renderCanonical(Formula::ob(at("a"))) == "(Ob a)");
  CHECK(renderCanonical(Formula::conj(at("a"), Formula::disj(at("b"), at("c")))) == "(a,(b;c))");
  CHECK(renderCanonical(Formula::box(Modality::Ideal, at("a"))) == "(Id a)");
  CHECK(renderCanonical(Formula::condOb(at("a"), at("b"))) == "NO(a,b)");
  CHECK(renderCanonical(no(at("a"))) == "(~ a)");
  CHECK(renderCanonical(parseProblem("([a,b],c)")) == "([a,b],c)");
}

TEST_CASE("round trip on random surface formulas") {
  gen::Shape shape;
  shape.everything = true;
  shape.maxConnectives = 14;
  shape.maxModalDepth = 3;
  shape.atoms = {"a", "b", "d01", "pay_exact"};
  gen::Generator g(2024, shape);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = g.next();
    const std::string text = renderCanonical(f);
    CHECK_MESSAGE(parseFormula(text) == f, text);
  }
  for (const auto& f : unConventionFormulas()) CHECK(parseFormula(renderCanonical(f)) == f);
}

TEST_CASE("MleanCoP export") {
  CHECK(renderMleanCoP({{}, Formula::id(at("a"))}) == "f(# 1^d: a).");
  CHECK(renderMleanCoP({{}, Formula::dia(Modality::Awful, no(at("a")))}) == "f(* 2^d: (~ a)).");
  CHECK(renderMleanCoP({{at("a")}, at("b")}) == "f(a => b).");
  CHECK(renderMleanCoP({{at("a"), at("b")}, at("c")}) == "f((a,b) => c).");
  CHECK(renderMleanCoP({{}, Formula::ob(at("a"))}) == "f((# 1^d: a),(# 2^d: (~ a))).");
  CHECK(renderMleanCoP({{}, Formula::top()}) == "f($true).");
  const std::string un = renderMleanCoP(parseProblem("([un],(Id (Ob g)))"));
  CHECK(un.rfind("f(", 0) == 0);
  CHECK(un.find("Ob") == std::string::npos);
  CHECK(un.find("# 1^d:") != std::string::npos);
}

}  // TEST_SUITE
