#include "deon/parser.hpp"

#include <cctype>
#include <optional>

namespace deon {

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("parse error at offset " + std::to_string(position) + ": " + message),
      position_(position),
      message_(message) {}

namespace {

enum class Tok { LParen, RParen, LBracket, RBracket, Comma, Semi, Tilde, Arrow, Equiv, Ident, End };

struct Token {
  Tok type;
  std::size_t offset;
  std::string_view text;
};

std::string describe(const Token& t) {
  if (t.type == Tok::End) return "end of input";
  return "'" + std::string(t.text) + "'";
}

class Lexer {
public:
  explicit Lexer(std::string_view input) : input_(input) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (true) {
      while (i < input_.size() && std::isspace(static_cast<unsigned char>(input_[i]))) ++i;
      if (i == input_.size()) break;
      char c = input_[i];
      auto single = [&](Tok t) {
        out.push_back({t, i, input_.substr(i, 1)});
        ++i;
      };
      switch (c) {
        case '(': single(Tok::LParen); continue;
        case ')': single(Tok::RParen); continue;
        case '[': single(Tok::LBracket); continue;
        case ']': single(Tok::RBracket); continue;
        case ',': single(Tok::Comma); continue;
        case ';': single(Tok::Semi); continue;
        case '~': single(Tok::Tilde); continue;
        default: break;
      }
      if (input_.substr(i, 2) == "=>") {
        out.push_back({Tok::Arrow, i, input_.substr(i, 2)});
        i += 2;
        continue;
      }
      if (input_.substr(i, 3) == "<=>") {
        out.push_back({Tok::Equiv, i, input_.substr(i, 3)});
        i += 3;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < input_.size() &&
               (std::isalnum(static_cast<unsigned char>(input_[j])) || input_[j] == '_'))
          ++j;
        out.push_back({Tok::Ident, i, input_.substr(i, j - i)});
        i = j;
        continue;
      }
      throw ParseError(i, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, input_.empty() ? 0 : input_.size() - 1, ""});
    return out;
  }

private:
  std::string_view input_;
};

class Parser {
public:
  explicit Parser(std::string_view input) : tokens_(Lexer(input).run()) {}

  Formula formulaToEnd() {
    Formula f = equivalence(true);
    expect(Tok::End, "end of input");
    return f;
  }

  Problem problemToEnd() {
    Problem p;
    expect(Tok::LParen, "'(' opening the problem");
    expect(Tok::LBracket, "'[' opening the assumption list");
    if (peek().type != Tok::RBracket) {
      p.assumptions.push_back(equivalence(false));
      while (accept(Tok::Comma)) p.assumptions.push_back(equivalence(false));
    }
    expect(Tok::RBracket, "']' closing the assumption list");
    expect(Tok::Comma, "',' before the goal");
    p.goal = equivalence(true);
    expect(Tok::RParen, "')' closing the problem");
    expect(Tok::End, "end of input");
    return p;
  }

  std::vector<Formula> listToEnd() {
    std::vector<Formula> out;
    if (peek().type == Tok::End) return out;
    out.push_back(equivalence(false));
    while (accept(Tok::Comma)) out.push_back(equivalence(false));
    expect(Tok::End, "',' or end of input");
    return out;
  }

private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  bool accept(Tok t) {
    if (peek().type != t) return false;
    next();
    return true;
  }

  void expect(Tok t, const char* what) {
    if (peek().type != t)
      throw ParseError(peek().offset, std::string("expected ") + what + ", found " + describe(peek()));
    next();
  }

  Formula equivalence(bool commaIsConjunction) {
    Formula lhs = implication(commaIsConjunction);
    if (accept(Tok::Equiv)) return Formula::iff(lhs, equivalence(commaIsConjunction));
    return lhs;
  }

  Formula implication(bool commaIsConjunction) {
    Formula lhs = disjunction(commaIsConjunction);
    if (accept(Tok::Arrow)) return Formula::implies(lhs, implication(commaIsConjunction));
    return lhs;
  }

  Formula disjunction(bool commaIsConjunction) {
    Formula lhs = conjunction(commaIsConjunction);
    if (accept(Tok::Semi)) return Formula::disj(lhs, disjunction(commaIsConjunction));
    return lhs;
  }

  Formula conjunction(bool commaIsConjunction) {
    Formula lhs = unary();
    if (commaIsConjunction && accept(Tok::Comma)) return Formula::conj(lhs, conjunction(true));
    return lhs;
  }

  Formula unary() {
    const Token& t = next();
    switch (t.type) {
      case Tok::Tilde:
        return Formula::negation(unary());
      case Tok::LParen: {
        Formula inner = equivalence(true);
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        return identifier(t);
      default:
        throw ParseError(t.offset, "expected a formula, found " + describe(t));
    }
  }

  Formula identifier(const Token& t) {
    const std::string_view s = t.text;
    if (s == "true") return Formula::top();
    if (s == "false") return Formula::bottom();
    if (s == "un") return Formula::conjunction(unConventionFormulas());
    if (s == "Id") return Formula::id(unary());
    if (s == "Aw") return Formula::aw(unary());
    if (s == "Di") return Formula::dia(Modality::Ideal, unary());
    if (s == "Da") return Formula::dia(Modality::Awful, unary());
    if (s == "Ob") return Formula::ob(unary());
    if (s == "Pm") return Formula::pm(unary());
    if (s == "OJ") return Formula::oughtJP(unary());
    if (s == "NO" || s == "NP") {
      expect(Tok::LParen, "'(' after conditional operator");
      Formula a = equivalence(false);
      expect(Tok::Comma, "',' between conditional arguments");
      Formula b = equivalence(false);
      expect(Tok::RParen, "')' closing conditional");
      return s == "NO" ? Formula::condOb(a, b) : Formula::condPm(a, b);
    }
    if (!isAtomName(s)) {
      if (std::isupper(static_cast<unsigned char>(s.front())))
        throw ParseError(t.offset, "unknown operator or uppercase atom '" + std::string(s) +
                                       "' (atom names must start with a lowercase letter)");
      throw ParseError(t.offset, "invalid atom name '" + std::string(s) + "'");
    }
    return Formula::atom(std::string(s));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

const char* unaryKeyword(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Box:
      return f.modality() == Modality::Ideal ? "Id" : "Aw";
    case K::Dia:
      return f.modality() == Modality::Ideal ? "Di" : "Da";
    case K::Ob:
      return "Ob";
    case K::Pm:
      return "Pm";
    case K::OughtJP:
      return "OJ";
    default:
      return nullptr;
  }
}

void canonical(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      out += f.atomName();
      return;
    case K::Top:
      out += "true";
      return;
    case K::Bottom:
      out += "false";
      return;
    case K::Not:
      out += "(~ ";
      canonical(f.operand(), out);
      out += ')';
      return;
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Iff: {
      const char* op = f.kind() == K::And ? ","
                       : f.kind() == K::Or ? ";"
                       : f.kind() == K::Implies ? " => "
                                               : " <=> ";
      out += '(';
      canonical(f.left(), out);
      out += op;
      canonical(f.right(), out);
      out += ')';
      return;
    }
    case K::CondOb:
    case K::CondPm:
      out += f.kind() == K::CondOb ? "NO(" : "NP(";
      canonical(f.left(), out);
      out += ',';
      canonical(f.right(), out);
      out += ')';
      return;
    default:
      out += '(';
      out += unaryKeyword(f);
      out += ' ';
      canonical(f.operand(), out);
      out += ')';
      return;
  }
}

void mleancop(const Formula& f, bool outermost, std::string& out) {
  using K = Formula::Kind;
  auto open = [&] {
    if (!outermost) out += '(';
  };
  auto close = [&] {
    if (!outermost) out += ')';
  };
  switch (f.kind()) {
    case K::Atom:
      out += f.atomName();
      return;
    case K::Top:
      out += "$true";
      return;
    case K::Bottom:
      out += "$false";
      return;
    case K::Not:
      open();
      out += "~ ";
      mleancop(f.operand(), false, out);
      close();
      return;
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Iff: {
      const char* op = f.kind() == K::And ? ","
                       : f.kind() == K::Or ? ";"
                       : f.kind() == K::Implies ? " => "
                                               : " <=> ";
      open();
      mleancop(f.left(), false, out);
      out += op;
      mleancop(f.right(), false, out);
      close();
      return;
    }
    case K::Box:
    case K::Dia:
      open();
      out += f.kind() == K::Box ? "# " : "* ";
      out += f.modality() == Modality::Ideal ? "1^d: " : "2^d: ";
      mleancop(f.operand(), false, out);
      close();
      return;
    default:
      mleancop(expandDefined(f), outermost, out);
      return;
  }
}

}  // namespace

Formula parseFormula(std::string_view text) { return Parser(text).formulaToEnd(); }

Problem parseProblem(std::string_view text) { return Parser(text).problemToEnd(); }

std::vector<Formula> parseFormulaList(std::string_view text) { return Parser(text).listToEnd(); }

std::string renderCanonical(const Formula& f) {
  std::string out;
  canonical(f, out);
  return out;
}

std::string renderCanonical(const Problem& p) {
  std::string out = "([";
  for (std::size_t i = 0; i < p.assumptions.size(); ++i) {
    if (i) out += ',';
    canonical(p.assumptions[i], out);
  }
  out += "],";
  canonical(p.goal, out);
  out += ')';
  return out;
}

std::string renderMleanCoP(const Problem& p) {
  Formula g = p.assumptions.empty()
                  ? expandDefined(p.goal)
                  : Formula::implies(expandDefined(Formula::conjunction(p.assumptions)),
                                     expandDefined(p.goal));
  std::string out = "f(";
  mleancop(g, true, out);
  out += ").";
  return out;
}

const std::vector<std::string>& unConventionSource() {
  static const std::vector<std::string> source{
      "Id(Ob(d))",
      "Id(Ob(p))",
      "NO(d01,d1)",
      "NO(d02,d2)",
      "NO(((~ d01),(~ d02)),d3)",
      "NO(d,g)",
      "NO(d1,d13)",
      "NO((d1,(~ d11)),d12)",
      "NO((d1,(~ d12)),d11)",
      "NO((d1,(~ d14)),d15)",
      "NO((d1,(~ d15)),d14)",
      "NP((~ d),e1)",
      "NP((~ d),e2)",
      "d01 => (~ d02)",
      "d1 => (~ d2)",
      "d1 => (~ d3)",
      "d2 => (~ d3)",
      "d => ((d01 => (d1,((d11 <=> (~ d12)),(d13,(d14 <=> (~ d15)))))),"
      "((d02 => d2),(((~ d01),(~ d02)) => d3)))",
  };
  return source;
}

const std::vector<Formula>& unConventionFormulas() {
  static const std::vector<Formula> formulas = [] {
    std::vector<Formula> fs;
    for (const auto& line : unConventionSource()) fs.push_back(parseFormula(line));
    return fs;
  }();
  return formulas;
}

}  // namespace deon
