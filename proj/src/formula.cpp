#include "deon/formula.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace deon {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) noexcept {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

bool isDefinedKind(Formula::Kind k) noexcept {
  switch (k) {
    case Formula::Kind::Ob:
    case Formula::Kind::Pm:
    case Formula::Kind::OughtJP:
    case Formula::Kind::CondOb:
    case Formula::Kind::CondPm:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string_view name(Modality m) noexcept { return m == Modality::Ideal ? "ideal" : "awful"; }

bool isAtomName(std::string_view text) noexcept {
  if (text.empty() || text.front() < 'a' || text.front() > 'z') return false;
  if (text == "true" || text == "false" || text == "un") return false;  // reserved words
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

Formula Formula::make(Kind kind, Modality m, std::string name, std::array<Formula, 2> children,
                      std::size_t arity) {
  std::size_t h = mix(static_cast<std::size_t>(kind) * 31 + 7, index(m));
  h = mix(h, std::hash<std::string>{}(name));
  for (std::size_t i = 0; i < arity; ++i) h = mix(h, children[i].hash());
  return Formula(std::make_shared<const Node>(Node{kind, m, std::move(name), std::move(children), h}));
}

Formula::Formula() {
  static const Formula topFormula =
      make(Kind::Top, Modality::Ideal, "", {Formula(nullptr), Formula(nullptr)}, 0);
  node_ = topFormula.node_;
}

Formula Formula::atom(std::string name) {
  if (!isAtomName(name)) throw std::invalid_argument("invalid atom name '" + name + "'");
  return make(Kind::Atom, Modality::Ideal, std::move(name), {Formula(nullptr), Formula(nullptr)}, 0);
}

Formula Formula::top() { return Formula(); }

Formula Formula::bottom() {
  static const Formula bot =
      make(Kind::Bottom, Modality::Ideal, "", {Formula(nullptr), Formula(nullptr)}, 0);
  return bot;
}

Formula Formula::negation(Formula f) {
  return make(Kind::Not, Modality::Ideal, "", {std::move(f), Formula(nullptr)}, 1);
}
Formula Formula::conj(Formula l, Formula r) {
  return make(Kind::And, Modality::Ideal, "", {std::move(l), std::move(r)}, 2);
}
Formula Formula::disj(Formula l, Formula r) {
  return make(Kind::Or, Modality::Ideal, "", {std::move(l), std::move(r)}, 2);
}
Formula Formula::implies(Formula l, Formula r) {
  return make(Kind::Implies, Modality::Ideal, "", {std::move(l), std::move(r)}, 2);
}
Formula Formula::iff(Formula l, Formula r) {
  return make(Kind::Iff, Modality::Ideal, "", {std::move(l), std::move(r)}, 2);
}
Formula Formula::box(Modality m, Formula f) {
  return make(Kind::Box, m, "", {std::move(f), Formula(nullptr)}, 1);
}
Formula Formula::dia(Modality m, Formula f) {
  return make(Kind::Dia, m, "", {std::move(f), Formula(nullptr)}, 1);
}
Formula Formula::ob(Formula f) {
  return make(Kind::Ob, Modality::Ideal, "", {std::move(f), Formula(nullptr)}, 1);
}
Formula Formula::pm(Formula f) {
  return make(Kind::Pm, Modality::Ideal, "", {std::move(f), Formula(nullptr)}, 1);
}
Formula Formula::oughtJP(Formula f) {
  return make(Kind::OughtJP, Modality::Ideal, "", {std::move(f), Formula(nullptr)}, 1);
}
Formula Formula::condOb(Formula antecedent, Formula consequent) {
  return make(Kind::CondOb, Modality::Ideal, "", {std::move(antecedent), std::move(consequent)}, 2);
}
Formula Formula::condPm(Formula antecedent, Formula consequent) {
  return make(Kind::CondPm, Modality::Ideal, "", {std::move(antecedent), std::move(consequent)}, 2);
}

Formula Formula::conjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = conj(*it, acc);
  return acc;
}

Formula Formula::disjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) return bottom();
  Formula acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = disj(*it, acc);
  return acc;
}

std::size_t Formula::arity() const noexcept {
  switch (kind()) {
    case Kind::Atom:
    case Kind::Top:
    case Kind::Bottom:
      return 0;
    case Kind::Not:
    case Kind::Box:
    case Kind::Dia:
    case Kind::Ob:
    case Kind::Pm:
    case Kind::OughtJP:
      return 1;
    default:
      return 2;
  }
}

bool Formula::isPrimitive() const noexcept {
  if (isDefinedKind(kind())) return false;
  for (std::size_t i = 0; i < arity(); ++i)
    if (!node_->children[i].isPrimitive()) return false;
  return true;
}

bool Formula::isLiteral() const noexcept {
  return kind() == Kind::Atom || (kind() == Kind::Not && operand().kind() == Kind::Atom);
}

std::size_t Formula::size() const noexcept {
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity(); ++i) n += node_->children[i].size();
  return n;
}

bool operator==(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.modality() != b.modality() ||
      a.atomName() != b.atomName())
    return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (a.node_->children[i] != b.node_->children[i]) return false;
  return true;
}

bool operator<(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return false;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.modality() != b.modality()) return a.modality() < b.modality();
  if (a.atomName() != b.atomName()) return a.atomName() < b.atomName();
  for (std::size_t i = 0; i < a.arity(); ++i) {
    const Formula& x = a.node_->children[i];
    const Formula& y = b.node_->children[i];
    if (x < y) return true;
    if (y < x) return false;
  }
  return false;
}

Formula expandDefined(const Formula& f) {
  using K = Formula::Kind;
  constexpr auto I = Modality::Ideal;
  constexpr auto A = Modality::Awful;
  switch (f.kind()) {
    case K::Atom:
    case K::Top:
    case K::Bottom:
      return f;
    case K::Not:
      return Formula::negation(expandDefined(f.operand()));
    case K::And:
      return Formula::conj(expandDefined(f.left()), expandDefined(f.right()));
    case K::Or:
      return Formula::disj(expandDefined(f.left()), expandDefined(f.right()));
    case K::Implies:
      return Formula::implies(expandDefined(f.left()), expandDefined(f.right()));
    case K::Iff:
      return Formula::iff(expandDefined(f.left()), expandDefined(f.right()));
    case K::Box:
      return Formula::box(f.modality(), expandDefined(f.operand()));
    case K::Dia:
      return Formula::dia(f.modality(), expandDefined(f.operand()));
    case K::Ob: {
      Formula a = expandDefined(f.operand());
      return Formula::conj(Formula::box(I, a), Formula::box(A, Formula::negation(a)));
    }
    case K::Pm: {
      Formula a = expandDefined(f.operand());
      return Formula::conj(Formula::dia(I, a), Formula::dia(A, Formula::negation(a)));
    }
    case K::OughtJP: {
      Formula a = expandDefined(f.operand());
      return Formula::conj(Formula::box(I, a), Formula::negation(Formula::box(A, a)));
    }
    case K::CondOb:
    case K::CondPm: {
      auto deontic = f.kind() == K::CondOb ? &Formula::ob : &Formula::pm;
      Formula a = expandDefined(f.left());
      Formula b = expandDefined(f.right());
      Formula nb = expandDefined(deontic(b));
      return Formula::conj(Formula::implies(a, nb),
                           Formula::box(I, Formula::implies(expandDefined(deontic(a)), nb)));
    }
  }
  return f;
}

namespace {

Formula nnf(const Formula& f, bool negated) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      return negated ? Formula::negation(f) : f;
    case K::Top:
      return negated ? Formula::bottom() : f;
    case K::Bottom:
      return negated ? Formula::top() : f;
    case K::Not:
      return nnf(f.operand(), !negated);
    case K::And:
      return negated ? Formula::disj(nnf(f.left(), true), nnf(f.right(), true))
                     : Formula::conj(nnf(f.left(), false), nnf(f.right(), false));
    case K::Or:
      return negated ? Formula::conj(nnf(f.left(), true), nnf(f.right(), true))
                     : Formula::disj(nnf(f.left(), false), nnf(f.right(), false));
    case K::Implies:
      return negated ? Formula::conj(nnf(f.left(), false), nnf(f.right(), true))
                     : Formula::disj(nnf(f.left(), true), nnf(f.right(), false));
    case K::Iff: {
      Formula pa = nnf(f.left(), false), na = nnf(f.left(), true);
      Formula pb = nnf(f.right(), false), nb = nnf(f.right(), true);
      return negated ? Formula::disj(Formula::conj(pa, nb), Formula::conj(na, pb))
                     : Formula::disj(Formula::conj(pa, pb), Formula::conj(na, nb));
    }
    case K::Box:
      return negated ? Formula::dia(f.modality(), nnf(f.operand(), true))
                     : Formula::box(f.modality(), nnf(f.operand(), false));
    case K::Dia:
      return negated ? Formula::box(f.modality(), nnf(f.operand(), true))
                     : Formula::dia(f.modality(), nnf(f.operand(), false));
    default:
      throw std::invalid_argument("toNNF requires a primitive formula");
  }
}

void collectAtoms(const Formula& f, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (f.kind() == Formula::Kind::Atom) {
    if (seen.insert(f.atomName()).second) out.push_back(f.atomName());
    return;
  }
  if (f.arity() >= 1) collectAtoms(f.left(), out, seen);
  if (f.arity() == 2) collectAtoms(f.right(), out, seen);
}

}  // namespace

Formula toNNF(const Formula& f) { return nnf(f, false); }

std::size_t modalDepth(const Formula& f) {
  switch (f.arity()) {
    case 0:
      return 0;
    case 1: {
      std::size_t d = modalDepth(f.operand());
      if (f.kind() == Formula::Kind::Box || f.kind() == Formula::Kind::Dia) return d + 1;
      if (f.kind() != Formula::Kind::Not)
        throw std::invalid_argument("modalDepth requires a primitive formula");
      return d;
    }
    default:
      if (!f.isPrimitive()) throw std::invalid_argument("modalDepth requires a primitive formula");
      return std::max(modalDepth(f.left()), modalDepth(f.right()));
  }
}

std::vector<std::string> atoms(const Formula& f) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collectAtoms(f, out, seen);
  return out;
}

Formula substitute(const Formula& f, const std::map<std::string, Formula>& replacement) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      auto it = replacement.find(f.atomName());
      return it == replacement.end() ? f : it->second;
    }
    case K::Top:
    case K::Bottom:
      return f;
    case K::Not:
      return Formula::negation(substitute(f.operand(), replacement));
    case K::And:
      return Formula::conj(substitute(f.left(), replacement), substitute(f.right(), replacement));
    case K::Or:
      return Formula::disj(substitute(f.left(), replacement), substitute(f.right(), replacement));
    case K::Implies:
      return Formula::implies(substitute(f.left(), replacement),
                              substitute(f.right(), replacement));
    case K::Iff:
      return Formula::iff(substitute(f.left(), replacement), substitute(f.right(), replacement));
    case K::Box:
      return Formula::box(f.modality(), substitute(f.operand(), replacement));
    case K::Dia:
      return Formula::dia(f.modality(), substitute(f.operand(), replacement));
    case K::Ob:
      return Formula::ob(substitute(f.operand(), replacement));
    case K::Pm:
      return Formula::pm(substitute(f.operand(), replacement));
    case K::OughtJP:
      return Formula::oughtJP(substitute(f.operand(), replacement));
    case K::CondOb:
      return Formula::condOb(substitute(f.left(), replacement), substitute(f.right(), replacement));
    case K::CondPm:
      return Formula::condPm(substitute(f.left(), replacement), substitute(f.right(), replacement));
  }
  return f;
}

}  // namespace deon
