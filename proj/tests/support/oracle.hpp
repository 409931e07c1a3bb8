#ifndef DEON_TESTS_ORACLE_HPP
#define DEON_TESTS_ORACLE_HPP

// Test-side semantics, written against the formula accessors only. It shares
// no code with the library's checker, expander or search, so agreement
// between the two means something.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deon/formula.hpp"
#include "deon/semantics.hpp"

namespace oracle {

using deon::Formula;
using deon::Modality;
using K = Formula::Kind;

// Worlds 0..n-1, root 0. rel[m][w] and val[w] are bitmasks.
struct TinyModel {
  int n = 1;
  std::vector<std::uint32_t> rel[2];
  std::vector<std::uint32_t> val;
  std::vector<std::string> atoms;
};

inline int atomIndex(const TinyModel& m, const std::string& a) {
  for (std::size_t i = 0; i < m.atoms.size(); ++i)
    if (m.atoms[i] == a) return static_cast<int>(i);
  return -1;
}

bool eval(const TinyModel& m, int w, const Formula& f);

inline bool all(const TinyModel& m, int w, Modality mod, const Formula& f, bool negated = false) {
  const std::uint32_t succ = m.rel[deon::index(mod)][w];
  for (int v = 0; v < m.n; ++v)
    if ((succ >> v & 1U) && eval(m, v, f) == negated) return false;
  return true;
}

inline bool some(const TinyModel& m, int w, Modality mod, const Formula& f, bool negated = false) {
  const std::uint32_t succ = m.rel[deon::index(mod)][w];
  for (int v = 0; v < m.n; ++v)
    if ((succ >> v & 1U) && eval(m, v, f) != negated) return true;
  return false;
}

// Defined operators are evaluated by their semantic clauses, not by rewriting.
inline bool eval(const TinyModel& m, int w, const Formula& f) {
  const Modality I = Modality::Ideal, A = Modality::Awful;
  switch (f.kind()) {
    case K::Atom: {
      const int i = atomIndex(m, f.atomName());
      return i >= 0 && (m.val[w] >> i & 1U);
    }
    case K::Top: return true;
    case K::Bottom: return false;
    case K::Not: return !eval(m, w, f.operand());
    case K::And: return eval(m, w, f.left()) && eval(m, w, f.right());
    case K::Or: return eval(m, w, f.left()) || eval(m, w, f.right());
    case K::Implies: return !eval(m, w, f.left()) || eval(m, w, f.right());
    case K::Iff: return eval(m, w, f.left()) == eval(m, w, f.right());
    case K::Box: return all(m, w, f.modality(), f.operand());
    case K::Dia: return some(m, w, f.modality(), f.operand());
    case K::Ob: return all(m, w, I, f.operand()) && all(m, w, A, f.operand(), true);
    case K::Pm: return some(m, w, I, f.operand()) && some(m, w, A, f.operand(), true);
    case K::OughtJP: return all(m, w, I, f.operand()) && !all(m, w, A, f.operand());
    case K::CondOb:
    case K::CondPm: {
      const bool ob = f.kind() == K::CondOb;
      auto op = [&](const Formula& x) { return ob ? Formula::ob(x) : Formula::pm(x); };
      const bool detach = !eval(m, w, f.left()) || eval(m, w, op(f.right()));
      return detach && all(m, w, I, Formula::implies(op(f.left()), op(f.right())));
    }
  }
  return false;
}

// Copies a library model into the oracle's representation (root becomes 0).
inline TinyModel fromKripke(const deon::KripkeModel& km, const std::vector<std::string>& atoms) {
  TinyModel t;
  t.n = static_cast<int>(km.size());
  t.atoms = atoms;
  std::vector<int> order;  // oracle index -> library world
  order.push_back(static_cast<int>(km.root()));
  for (std::size_t w = 0; w < km.size(); ++w)
    if (w != km.root()) order.push_back(static_cast<int>(w));
  std::vector<int> where(km.size());
  for (int i = 0; i < t.n; ++i) where[order[i]] = i;
  for (auto& r : t.rel) r.assign(t.n, 0);
  t.val.assign(t.n, 0);
  for (int i = 0; i < t.n; ++i) {
    for (Modality mod : deon::kModalities)
      for (auto v : km.successors(mod, order[i])) t.rel[deon::index(mod)][i] |= 1U << where[v];
    for (std::size_t a = 0; a < atoms.size(); ++a)
      if (km.holds(order[i], atoms[a])) t.val[i] |= 1U << a;
  }
  return t;
}

inline bool serial(const TinyModel& m) {
  for (int w = 0; w < m.n; ++w)
    if (m.rel[0][w] == 0 || m.rel[1][w] == 0) return false;
  return true;
}

// Exhaustive: every serial model with up to maxWorlds worlds and every
// valuation over the formula's atoms. Root is world 0, which loses nothing
// since all world orderings are enumerated.
inline std::optional<TinyModel> bruteCountermodel(const Formula& f, int maxWorlds) {
  const std::vector<std::string> atoms = deon::atoms(f);
  const int k = static_cast<int>(atoms.size());
  for (int n = 1; n <= maxWorlds; ++n) {
    TinyModel m;
    m.n = n;
    m.atoms = atoms;
    const std::uint32_t rows = (1U << n) - 1;  // nonempty successor sets: 1..rows
    std::uint64_t relCount = 1;
    for (int i = 0; i < 2 * n; ++i) relCount *= rows;
    const std::uint64_t valCount = std::uint64_t{1} << (k * n);
    for (std::uint64_t r = 0; r < relCount; ++r) {
      std::uint64_t code = r;
      for (auto& rel : m.rel) {
        rel.assign(n, 0);
        for (int w = 0; w < n; ++w) {
          rel[w] = static_cast<std::uint32_t>(code % rows) + 1;
          code /= rows;
        }
      }
      for (std::uint64_t v = 0; v < valCount; ++v) {
        m.val.assign(n, 0);
        for (int w = 0; w < n; ++w)
          m.val[w] = static_cast<std::uint32_t>(v >> (w * k)) & ((1U << k) - 1);
        if (!eval(m, 0, f)) return m;
      }
    }
  }
  return std::nullopt;
}

// Propositional validity by truth table; requires a modal-free formula.
inline bool tautology(const Formula& f) {
  TinyModel m;
  m.atoms = deon::atoms(f);
  m.rel[0] = m.rel[1] = {1};
  const std::uint32_t rows = 1U << m.atoms.size();
  for (std::uint32_t v = 0; v < rows; ++v) {
    m.val = {v};
    if (!eval(m, 0, f)) return false;
  }
  return true;
}

}  // namespace oracle

#endif  // DEON_TESTS_ORACLE_HPP
