#ifndef DEON_FORMULA_HPP
#define DEON_FORMULA_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace deon {

// Ideal indexes O (the R_O relation), Awful indexes O' (the R_O' relation).
enum class Modality { Ideal, Awful };

inline constexpr std::array<Modality, 2> kModalities{Modality::Ideal, Modality::Awful};

constexpr std::size_t index(Modality m) noexcept { return m == Modality::Ideal ? 0 : 1; }
std::string_view name(Modality m) noexcept;

// Atoms are lowercase identifiers [a-z][a-z0-9_]*, except true, false, un.
bool isAtomName(std::string_view text) noexcept;

// Immutable formula tree with value semantics. Nodes are shared, so copies
// are cheap and a Formula may be used from several threads at once.
//
// Primitive kinds are Atom..Dia. The remaining kinds are the defined deontic
// operators; they only survive until expandDefined. Id(A) and Aw(A) are plain
// aliases of the boxes and are built as Box directly.
class Formula {
public:
  enum class Kind {
    Atom,
    Top,
    Bottom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Box,
    Dia,
    // defined forms
    Ob,       // Ought*(A) = O A & O' ~A
    Pm,       // Perm*(A)  = P A & P' ~A
    OughtJP,  // legacy Ought(A) = O A & ~O' A
    CondOb,   // (A -> Ob B) & O(Ob A -> Ob B)
    CondPm,   // (A -> Pm B) & O(Pm A -> Pm B)
  };

  Formula();  // Top

  static Formula atom(std::string name);
  static Formula top();
  static Formula bottom();
  static Formula negation(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula iff(Formula l, Formula r);
  static Formula box(Modality m, Formula f);
  static Formula dia(Modality m, Formula f);

  static Formula id(Formula f) { return box(Modality::Ideal, std::move(f)); }
  static Formula aw(Formula f) { return box(Modality::Awful, std::move(f)); }
  static Formula ob(Formula f);
  static Formula pm(Formula f);
  static Formula oughtJP(Formula f);
  static Formula condOb(Formula antecedent, Formula consequent);
  static Formula condPm(Formula antecedent, Formula consequent);

  // Right-nested conjunction/disjunction; empty input yields Top/Bottom.
  static Formula conjunction(const std::vector<Formula>& fs);
  static Formula disjunction(const std::vector<Formula>& fs);

  Kind kind() const noexcept;
  const std::string& atomName() const noexcept;
  Modality modality() const noexcept;
  std::size_t arity() const noexcept;
  const Formula& operand() const noexcept;
  const Formula& left() const noexcept;
  const Formula& right() const noexcept;

  bool isPrimitive() const noexcept;  // no defined form anywhere in the tree
  bool isLiteral() const noexcept;
  std::size_t size() const noexcept;  // number of nodes
  std::size_t hash() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b) noexcept;
  friend bool operator!=(const Formula& a, const Formula& b) noexcept { return !(a == b); }
  // Total structural order; only meaningful for containers.
  friend bool operator<(const Formula& a, const Formula& b) noexcept;

private:
  struct Node;

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, Modality m, std::string name, std::array<Formula, 2> children,
                      std::size_t arity);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Kind kind = Kind::Top;
  Modality modality = Modality::Ideal;
  std::string name;
  std::array<Formula, 2> children;
  std::size_t hash = 0;
};

inline Formula::Kind Formula::kind() const noexcept { return node_->kind; }
inline const std::string& Formula::atomName() const noexcept { return node_->name; }
inline Modality Formula::modality() const noexcept { return node_->modality; }
inline const Formula& Formula::operand() const noexcept { return node_->children[0]; }
inline const Formula& Formula::left() const noexcept { return node_->children[0]; }
inline const Formula& Formula::right() const noexcept { return node_->children[1]; }
inline std::size_t Formula::hash() const noexcept { return node_->hash; }

// Replaces every defined operator by its expansion into primitive constructors.
Formula expandDefined(const Formula& f);

// Negation normal form of a primitive formula: negation only on atoms, no ->
// or <->, Top/Bottom only as whole formulas or operands.
Formula toNNF(const Formula& f);

// Maximal Box/Dia nesting. Requires a primitive formula.
std::size_t modalDepth(const Formula& f);

// Atom names in first-occurrence order.
std::vector<std::string> atoms(const Formula& f);

// Simultaneous replacement of atoms by formulas.
Formula substitute(const Formula& f, const std::map<std::string, Formula>& replacement);

}  // namespace deon

template <>
struct std::hash<deon::Formula> {
  std::size_t operator()(const deon::Formula& f) const noexcept { return f.hash(); }
};

#endif  // DEON_FORMULA_HPP
