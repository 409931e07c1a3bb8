#include "doctest.h"

#include <functional>
#include <set>
#include <thread>

#include "deon/parser.hpp"
#include "deon/prover.hpp"
#include "support/oracle.hpp"
#include "support/random_formula.hpp"

using namespace deon;

namespace {

bool theorem(std::string_view text) { return prove(parseFormula(text)).isTheorem(); }

std::vector<Formula> chisholm() {
  return {parseFormula("Id (Ob p)"), parseFormula("NO(p,q)"), parseFormula("NO((~ p),(~ q))"),
          parseFormula("~ p")};
}

void distinctDiamonds(const Formula& f, std::set<Formula>& out) {
  if (f.kind() == Formula::Kind::Dia) out.insert(f);
  for (std::size_t i = 0; i < f.arity(); ++i) distinctDiamonds(i ? f.right() : f.left(), out);
}

// The countermodel must falsify the input under the test-side semantics too.
void checkCountermodel(const Formula& f, const Verdict& v) {
  const auto t = oracle::fromKripke(v.countermodel(), atoms(f));
  CHECK(oracle::serial(t));
  CHECK_FALSE(oracle::eval(t, 0, f));
}

}  // namespace

TEST_SUITE("prover") {

TEST_CASE("basic verdicts") {
  CHECK(theorem("(Id a) => (~ (Id (~ a)))"));

  const Verdict p = prove(parseFormula("p"));
  REQUIRE_FALSE(p.isTheorem());
  const KripkeModel& m = p.countermodel();
  CHECK(m.size() == 1);
  CHECK_FALSE(m.holds(m.root(), "p"));
  CHECK(m.successors(Modality::Ideal, m.root()) == std::vector<World>{m.root()});
  CHECK(m.successors(Modality::Awful, m.root()) == std::vector<World>{m.root()});

  CHECK_FALSE(theorem("((Id a),(Aw a)) => a"));
  CHECK_FALSE(theorem("((~ a),(~ b)) => ((Ob a) => (Ob (a ; b)))"));
}

TEST_CASE("K and D for both modalities") {
  for (const char* box : {"Id", "Aw"}) {
    const std::string b(box), d = b == "Id" ? "Di" : "Da";
    CHECK(theorem("(" + b + " (a => b)) => ((" + b + " a) => (" + b + " b))"));
    CHECK(theorem("(" + b + " a) => (" + d + " a)"));
    CHECK(theorem("(" + b + " a) => (~ (" + b + " (~ a)))"));
    CHECK_FALSE(theorem("(" + b + " a) => a"));
    CHECK_FALSE(theorem("(" + b + " a) => (" + b + " (" + b + " a))"));
  }
  CHECK_FALSE(theorem("(Id a) => (Aw a)"));
}

TEST_CASE("necessitation of tautologies") {
  for (const char* t : {"a ; ~ a", "a => a", "~ (a , ~ a)", "(a , b) => a", "a => (a ; b)",
                        "((a => b) , a) => b", "(a <=> a)", "~ ~ a <=> a", "((a ; b) , ~ a) => b", "true"})
    for (const char* box : {"Id ", "Aw "}) CHECK_MESSAGE(theorem(std::string(box) + "(" + t + ")"), t);
}

TEST_CASE("constants") {
  CHECK(theorem("true"));
  CHECK_FALSE(theorem("false"));
  CHECK(theorem("~ false"));
  CHECK(theorem("Di true"));
  CHECK_FALSE(theorem("Id false ; a"));
}

TEST_CASE("Chisholm detachment") {
  CHECK(entails(chisholm(), parseFormula("Ob (~ q)")).isTheorem());
  CHECK(entails(chisholm(), parseFormula("Id (Ob q)")).isTheorem());
  CHECK(entails(chisholm(), parseFormula("Id (Di p)")).isTheorem());
  const Verdict v = entails(chisholm(), parseFormula("Id p"));
  REQUIRE_FALSE(v.isTheorem());
  checkCountermodel(Formula::implies(Formula::conjunction(chisholm()), parseFormula("Id p")), v);
}

TEST_CASE("consistency") {
  CHECK(consistent(chisholm()));
  CHECK_FALSE(consistent({parseFormula("p"), parseFormula("~ p")}));
  std::vector<Formula> un = unConventionFormulas();
  CHECK(consistent(un));
  un.push_back(parseFormula("d01"));
  un.push_back(parseFormula("d02"));
  CHECK_FALSE(consistent(un));
  CHECK(consistent({}));
}

TEST_CASE("independence") {
  CHECK(independent(chisholm()) == std::vector<bool>{true, true, true, true});
  CHECK(independent({parseFormula("a"), parseFormula("a")})[1] == false);
  CHECK(independent({parseFormula("a"), parseFormula("a => b"), parseFormula("b")}) ==
        std::vector<bool>{true, false, false});  // b alone gives a => b
  CHECK_THROWS_AS(independent({parseFormula("a")}), std::invalid_argument);
}

TEST_CASE("traces replay and mutated traces do not") {
  for (const char* text : {"(Id (a => b)) => ((Id a) => (Id b))", "(Ob a) => (~ (Ob (~ a)))",
                           "((a ; b) , (~ a)) => b", "(Id a) => (Di a)"}) {
    const Verdict v = prove(parseFormula(text));
    REQUIRE(v.isTheorem());
    std::string why;
    CHECK_MESSAGE(replay(v.trace(), &why), why);
    CHECK(v.trace().root.prefix.empty());
    CHECK(v.trace().root.formula == toNNF(Formula::negation(expandDefined(parseFormula(text)))));

    ProofTrace dropped = v.trace();
    dropped.steps.pop_back();
    CHECK_FALSE(replay(dropped));

    ProofTrace wrong = v.trace();
    wrong.steps.front().produced.push_back({{}, parseFormula("zz")});
    CHECK_FALSE(replay(wrong));
  }
  CHECK(renderTrace(prove(parseFormula("a ; ~ a")).trace()).find("close") != std::string::npos);
}

TEST_CASE("rule names") {
  CHECK(name(Rule::Alpha) == "alpha");
  CHECK(name(Rule::NuD) == "nuD");
  CHECK(renderPrefix({}) == "0");
  CHECK(renderPrefix({{Modality::Ideal, 1}, {Modality::Awful, 2}}) == "0.i1.a2");
}

TEST_CASE("random suite: traces, countermodels and termination bounds") {
  gen::Generator g(99);
  for (int i = 0; i < 400; ++i) {
    const Formula f = g.mixed();
    const Verdict v = prove(f);
    const Formula nnf = toNNF(Formula::negation(expandDefined(f)));
    std::set<Formula> dias;
    distinctDiamonds(nnf, dias);
    CHECK(v.stats.maxPrefixLength <= modalDepth(nnf));
    CHECK(v.stats.maxSuccessorsPerPrefix <= dias.size() + 1);
    if (v.isTheorem()) {
      std::string why;
      CHECK_MESSAGE(replay(v.trace(), &why), renderCanonical(f) << ": " << why);
      for (const auto& s : v.trace().steps) CHECK(s.source.prefix.size() <= modalDepth(nnf));
      CHECK_FALSE(oracle::bruteCountermodel(f, 2).has_value());
    } else {
      checkCountermodel(f, v);
      CHECK(check(v.countermodel(), v.countermodel().root(), Formula::negation(f)));
    }
  }
}

TEST_CASE("monotonicity") {
  gen::Generator g(123);
  gen::Shape small;
  small.maxConnectives = 4;
  gen::Generator extra(321, small);
  int theorems = 0;
  for (int i = 0; i < 150; ++i) {
    std::vector<Formula> gamma{g.next(), g.next()};
    const Formula goal = g.mixed();
    if (!entails(gamma, goal).isTheorem()) continue;
    ++theorems;
    std::vector<Formula> more = gamma;
    more.push_back(extra.next());
    more.push_back(extra.next());
    CHECK(entails(more, goal).isTheorem());
  }
  CHECK(theorems > 10);
}

TEST_CASE("node budget") {
  ProverOptions tight;
  tight.nodeBudget = 5;
  CHECK_THROWS_AS(prove(parseFormula("un => (Id (Ob g))"), tight), ResourceLimitError);
  CHECK(prove(parseFormula("un => (Id (Ob g))")).isTheorem());
}

TEST_CASE("concurrent proofs are independent") {
  gen::Generator g(77);
  std::vector<Formula> fs;
  for (int i = 0; i < 60; ++i) fs.push_back(g.mixed());
  std::vector<bool> sequential;
  for (const auto& f : fs) sequential.push_back(prove(f).isTheorem());
  std::vector<int> parallel(fs.size(), -1);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < fs.size(); i += 4) parallel[i] = prove(fs[i]).isTheorem();
    });
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < fs.size(); ++i) CHECK(parallel[i] == static_cast<int>(sequential[i]));
}

}  // TEST_SUITE
