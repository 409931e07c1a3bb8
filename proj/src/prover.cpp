#include "deon/prover.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "deon/parser.hpp"

namespace deon {

std::string renderPrefix(const Prefix& p) {
  std::string out = "0";
  for (const auto& step : p) {
    out += step.modality == Modality::Ideal ? ".i" : ".a";
    out += std::to_string(step.index);
  }
  return out;
}

std::string_view name(Rule r) noexcept {
  switch (r) {
    case Rule::Alpha: return "alpha";
    case Rule::Beta: return "beta";
    case Rule::Pi: return "pi";
    case Rule::NuK: return "nuK";
    case Rule::NuD: return "nuD";
    case Rule::Close: return "close";
  }
  return "?";
}

namespace {

using NodeId = std::uint32_t;
using EntryId = std::uint32_t;
using PrefixId = std::uint32_t;

// Hash-consed NNF node.
enum class NKind : std::uint8_t { Top, Bottom, Lit, And, Or, Box, Dia };

struct NNode {
  NKind kind;
  bool positive = true;
  std::uint32_t atom = 0;
  Modality modality = Modality::Ideal;
  NodeId a = 0, b = 0;

  auto key() const { return std::tuple(kind, positive, atom, index(modality), a, b); }
};

struct Ref {
  PrefixId prefix;
  NodeId node;
};

struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;

struct ProofNode {
  Rule rule;
  Ref source;
  std::vector<Ref> produced;
  ProofPtr next;  // continuation; left branch for Beta
  ProofPtr alt;   // right branch for Beta
};

struct Closed {
  std::vector<EntryId> used;  // sorted; entries the closure depends on
  ProofPtr proof;
};

struct Fragment {
  PrefixId prefix;
  std::vector<std::uint32_t> trueAtoms;
  std::vector<std::pair<Modality, std::shared_ptr<const Fragment>>> children;
};

struct Outcome {
  std::optional<Closed> closed;
  std::shared_ptr<const Fragment> open;
};

// Formulas labelled with one prefix on the current branch.
struct Frame {
  PrefixId prefix;
  std::vector<EntryId> members;
  std::vector<bool> expanded;
  std::unordered_map<NodeId, EntryId> present;
};

struct Applied {
  Rule rule;
  EntryId source;
  std::vector<EntryId> products;
  bool forced;  // successor creation: kept whenever the successor closed
};

struct Inserted {
  EntryId id;
  bool added;
  std::optional<Closed> closed;
};

void eraseSorted(std::vector<EntryId>& v, EntryId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

void insertSorted(std::vector<EntryId>& v, EntryId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

bool containsSorted(const std::vector<EntryId>& v, EntryId x) {
  return std::binary_search(v.begin(), v.end(), x);
}

// Prefixed tableau for bimodal KD.
//
// Formulas at one prefix are saturated (close > alpha > beta) before any
// successor is built. Successors of a saturated prefix only receive formulas
// from it, never the reverse, so each successor is solved on its own and the
// first one that closes closes the branch. Closures carry the set of branch
// entries they used; a beta whose left closure did not use the left disjunct
// is not split (backjumping), and the proof is sliced to the used steps.
class Tableau {
public:
  explicit Tableau(const ProverOptions& options) : options_(options) {
    prefixes_.push_back({0, {Modality::Ideal, 0}, 0});
  }

  Verdict run(const Formula& input) {
    Formula primitive = expandDefined(input);
    Formula negated = toNNF(Formula::negation(primitive));
    NodeId rootNode = intern(negated);

    Frame root{0, {}, {}, {}};
    Inserted r = insert(root, rootNode);
    Outcome out = r.closed ? Outcome{r.closed, nullptr} : saturate(std::move(root));

    Verdict v{Theorem{}, stats_};
    if (out.closed) {
      ProofTrace trace;
      trace.root = LabeledFormula{Prefix{}, negated};
      flatten(out.closed->proof.get(), 0, trace.steps);
      v.result = Theorem{std::move(trace)};
    } else {
      // Self-loops give the smaller model when they keep the input false;
      // the sink completion always does.
      auto verified = [&](const KripkeModel& m) {
        return validateSerial(m).empty() && !check(m, m.root(), primitive);
      };
      KripkeModel model = buildModel(*out.open, true);
      if (!verified(model)) model = buildModel(*out.open, false);
      if (!verified(model))
        throw std::logic_error("internal error: extracted countermodel fails verification");
      v.result = NonTheorem{std::move(model)};
    }
    v.stats = stats_;
    return v;
  }

private:
  struct PrefixRec {
    PrefixId parent;
    PrefixStep step;
    std::size_t length;
  };

  struct Entry {
    PrefixId prefix;
    NodeId node;
  };

  // --- interning ---------------------------------------------------------

  NodeId add(const NNode& n) {
    auto [it, fresh] = intern_.try_emplace(n.key(), static_cast<NodeId>(nodes_.size()));
    if (fresh) nodes_.push_back(n);
    return it->second;
  }

  std::uint32_t atomId(const std::string& s) {
    auto [it, fresh] = atomIds_.try_emplace(s, static_cast<std::uint32_t>(atomNames_.size()));
    if (fresh) atomNames_.push_back(s);
    return it->second;
  }

  NodeId intern(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Top: return add({NKind::Top});
      case K::Bottom: return add({NKind::Bottom});
      case K::Atom: return add({NKind::Lit, true, atomId(f.atomName())});
      case K::Not: return add({NKind::Lit, false, atomId(f.operand().atomName())});
      case K::And: return add({NKind::And, true, 0, Modality::Ideal, intern(f.left()), intern(f.right())});
      case K::Or: return add({NKind::Or, true, 0, Modality::Ideal, intern(f.left()), intern(f.right())});
      case K::Box: return add({NKind::Box, true, 0, f.modality(), intern(f.operand())});
      case K::Dia: return add({NKind::Dia, true, 0, f.modality(), intern(f.operand())});
      default: throw std::logic_error("tableau input is not in negation normal form");
    }
  }

  std::optional<NodeId> complementOf(NodeId id) const {
    NNode c = nodes_[id];
    c.positive = !c.positive;
    auto it = intern_.find(c.key());
    if (it == intern_.end()) return std::nullopt;
    return it->second;
  }

  Formula formulaOf(NodeId id) {
    if (id < formulas_.size() && formulas_[id]) return *formulas_[id];
    const NNode& n = nodes_[id];
    Formula f;
    switch (n.kind) {
      case NKind::Top: f = Formula::top(); break;
      case NKind::Bottom: f = Formula::bottom(); break;
      case NKind::Lit: {
        Formula a = Formula::atom(atomNames_[n.atom]);
        f = n.positive ? a : Formula::negation(a);
        break;
      }
      case NKind::And: f = Formula::conj(formulaOf(n.a), formulaOf(n.b)); break;
      case NKind::Or: f = Formula::disj(formulaOf(n.a), formulaOf(n.b)); break;
      case NKind::Box: f = Formula::box(n.modality, formulaOf(n.a)); break;
      case NKind::Dia: f = Formula::dia(n.modality, formulaOf(n.a)); break;
    }
    if (formulas_.size() <= id) formulas_.resize(id + 1);
    formulas_[id] = f;
    return f;
  }

  // --- branch bookkeeping ------------------------------------------------

  PrefixId newPrefix(PrefixId parent, Modality m, unsigned idx) {
    std::size_t len = prefixes_[parent].length + 1;
    prefixes_.push_back({parent, {m, idx}, len});
    stats_.maxPrefixLength = std::max(stats_.maxPrefixLength, len);
    return static_cast<PrefixId>(prefixes_.size() - 1);
  }

  Prefix prefixOf(PrefixId id) const {
    Prefix p;
    while (id != 0) {
      p.push_back(prefixes_[id].step);
      id = prefixes_[id].parent;
    }
    std::reverse(p.begin(), p.end());
    return p;
  }

  Ref ref(EntryId e) const { return {entries_[e].prefix, entries_[e].node}; }

  ProofPtr closeNode(EntryId a, std::optional<EntryId> b) {
    auto n = std::make_shared<ProofNode>();
    n->rule = Rule::Close;
    n->source = ref(a);
    if (b) n->produced.push_back(ref(*b));
    return n;
  }

  Inserted insert(Frame& f, NodeId n) {
    if (auto it = f.present.find(n); it != f.present.end()) return {it->second, false, {}};
    if (++stats_.labeledFormulas > options_.nodeBudget)
      throw ResourceLimitError("node budget of " + std::to_string(options_.nodeBudget) +
                               " labeled formulas exhausted");
    const auto id = static_cast<EntryId>(entries_.size());
    entries_.push_back({f.prefix, n});
    f.members.push_back(id);
    f.expanded.push_back(false);
    f.present.emplace(n, id);

    const NNode& node = nodes_[n];
    if (node.kind == NKind::Bottom) return {id, true, Closed{{id}, closeNode(id, std::nullopt)}};
    if (node.kind == NKind::Lit) {
      if (auto c = complementOf(n)) {
        if (auto it = f.present.find(*c); it != f.present.end()) {
          std::vector<EntryId> used{it->second, id};
          std::sort(used.begin(), used.end());
          return {id, true, Closed{used, closeNode(id, it->second)}};
        }
      }
    }
    return {id, true, {}};
  }

  void unwind(const std::vector<Applied>& applied, Closed& c) {
    for (auto it = applied.rbegin(); it != applied.rend(); ++it) {
      const bool needed =
          it->forced || std::any_of(it->products.begin(), it->products.end(),
                                    [&](EntryId p) { return containsSorted(c.used, p); });
      if (!needed) continue;
      for (EntryId p : it->products) eraseSorted(c.used, p);
      insertSorted(c.used, it->source);
      auto n = std::make_shared<ProofNode>();
      n->rule = it->rule;
      n->source = ref(it->source);
      for (EntryId p : it->products) n->produced.push_back(ref(p));
      n->next = std::move(c.proof);
      c.proof = std::move(n);
    }
  }

  // --- search ------------------------------------------------------------

  Outcome saturate(Frame frame) {
    std::vector<Applied> applied;
    auto fail = [&](Closed c) {
      unwind(applied, c);
      return Outcome{std::move(c), nullptr};
    };

    // alpha: single pass, the member list grows as conjuncts are added
    for (std::size_t i = 0; i < frame.members.size(); ++i) {
      const EntryId e = frame.members[i];
      const NNode node = nodes_[entries_[e].node];
      if (frame.expanded[i] || node.kind != NKind::And) continue;
      frame.expanded[i] = true;
      Applied step{Rule::Alpha, e, {}, false};
      for (NodeId part : {node.a, node.b}) {
        Inserted r = insert(frame, part);
        if (r.added) step.products.push_back(r.id);
        if (r.closed) {
          applied.push_back(step);
          return fail(std::move(*r.closed));
        }
      }
      if (!step.products.empty()) applied.push_back(std::move(step));
    }

    // beta: leftmost unexpanded disjunction not already satisfied
    for (std::size_t i = 0; i < frame.members.size(); ++i) {
      const EntryId e = frame.members[i];
      const NNode node = nodes_[entries_[e].node];
      if (frame.expanded[i] || node.kind != NKind::Or) continue;
      frame.expanded[i] = true;
      if (frame.present.count(node.a) || frame.present.count(node.b)) continue;

      ++stats_.branchings;
      const auto mark = entries_.size();
      std::array<Closed, 2> sides;
      std::array<EntryId, 2> chosen{};
      for (int side = 0; side < 2; ++side) {
        Frame branch = frame;
        Inserted r = insert(branch, side == 0 ? node.a : node.b);
        chosen[side] = r.id;
        Outcome out = r.closed ? Outcome{std::move(r.closed), nullptr} : saturate(std::move(branch));
        entries_.resize(mark);
        if (!out.closed) return out;
        if (!containsSorted(out.closed->used, chosen[side])) return fail(std::move(*out.closed));
        sides[side] = std::move(*out.closed);
      }
      Closed merged;
      for (int side = 0; side < 2; ++side) {
        eraseSorted(sides[side].used, chosen[side]);
        for (EntryId u : sides[side].used) insertSorted(merged.used, u);
      }
      insertSorted(merged.used, e);
      auto split = std::make_shared<ProofNode>();
      split->rule = Rule::Beta;
      split->source = ref(e);
      split->produced = {Ref{frame.prefix, node.a}, Ref{frame.prefix, node.b}};
      split->next = std::move(sides[0].proof);
      split->alt = std::move(sides[1].proof);
      merged.proof = std::move(split);
      return fail(std::move(merged));
    }

    // modal rules: pi for each diamond, then nuD where a box has no successor
    std::array<std::vector<EntryId>, 2> boxes;
    std::vector<EntryId> dias;
    for (EntryId e : frame.members) {
      const NNode& node = nodes_[entries_[e].node];
      if (node.kind == NKind::Box) boxes[index(node.modality)].push_back(e);
      if (node.kind == NKind::Dia) dias.push_back(e);
    }

    auto fragment = std::make_shared<Fragment>();
    fragment->prefix = frame.prefix;
    std::array<unsigned, 2> created{0, 0};
    for (EntryId d : dias) {
      const NNode node = nodes_[entries_[d].node];
      const auto m = index(node.modality);
      Outcome out = successor(frame.prefix, Rule::Pi, d, node.a, node.modality, boxes[m], ++created[m]);
      if (out.closed) return fail(std::move(*out.closed));
      fragment->children.emplace_back(node.modality, out.open);
    }
    for (Modality mod : kModalities) {
      const auto m = index(mod);
      if (created[m] > 0 || boxes[m].empty()) continue;
      const EntryId first = boxes[m].front();
      Outcome out =
          successor(frame.prefix, Rule::NuD, first, nodes_[entries_[first].node].a, mod, boxes[m], ++created[m]);
      if (out.closed) return fail(std::move(*out.closed));
      fragment->children.emplace_back(mod, out.open);
    }
    stats_.maxSuccessorsPerPrefix =
        std::max<std::size_t>(stats_.maxSuccessorsPerPrefix, std::max(created[0], created[1]));

    for (EntryId e : frame.members) {
      const NNode& node = nodes_[entries_[e].node];
      if (node.kind == NKind::Lit && node.positive) fragment->trueAtoms.push_back(node.atom);
    }
    return Outcome{std::nullopt, std::move(fragment)};
  }

  // Creates prefix.(m,idx) holding `body` (via pi or nuD from `creator`) plus
  // the bodies of all m-boxes (nuK), and solves it.
  Outcome successor(PrefixId parent, Rule rule, EntryId creator, NodeId body, Modality m,
                    const std::vector<EntryId>& boxList, unsigned idx) {
    const PrefixId p = newPrefix(parent, m, idx);
    const auto mark = entries_.size();
    Frame child{p, {}, {}, {}};
    std::vector<Applied> creation;
    std::optional<Closed> closed;

    Inserted r = insert(child, body);
    creation.push_back({rule, creator, {r.id}, true});
    if (r.closed) closed = std::move(r.closed);
    for (EntryId b : boxList) {
      if (closed) break;
      if (rule == Rule::NuD && b == creator) continue;
      Inserted rb = insert(child, nodes_[entries_[b].node].a);
      if (!rb.added) continue;
      creation.push_back({Rule::NuK, b, {rb.id}, false});
      if (rb.closed) closed = std::move(rb.closed);
    }

    Outcome out = closed ? Outcome{std::move(closed), nullptr} : saturate(std::move(child));
    if (out.closed) unwind(creation, *out.closed);
    entries_.resize(mark);
    return out;
  }

  // --- results -----------------------------------------------------------

  LabeledFormula label(const Ref& r) { return {prefixOf(r.prefix), formulaOf(r.node)}; }

  void flatten(const ProofNode* n, std::size_t depth, std::vector<ProofStep>& out) {
    while (n) {
      ProofStep step{n->rule, label(n->source), {}, depth};
      for (const Ref& r : n->produced) step.produced.push_back(label(r));
      out.push_back(std::move(step));
      if (n->rule == Rule::Beta) {
        flatten(n->next.get(), depth + 1, out);
        flatten(n->alt.get(), depth + 1, out);
        return;
      }
      n = n->next.get();
    }
  }

  KripkeModel buildModel(const Fragment& root, bool selfLoops) {
    KripkeModel model;
    std::vector<std::pair<World, const Fragment*>> todo;
    auto addFragment = [&](const Fragment& f) {
      World w = model.addWorld(renderPrefix(prefixOf(f.prefix)));
      for (auto a : f.trueAtoms) model.setTrue(w, atomNames_[a]);
      todo.emplace_back(w, &f);
      return w;
    };
    model.setRoot(addFragment(root));
    for (std::size_t i = 0; i < todo.size(); ++i) {
      auto [w, f] = todo[i];
      for (const auto& [m, child] : f->children) model.addEdge(m, w, addFragment(*child));
    }
    // seriality completion
    std::optional<World> sink;
    for (World w = 0; w < model.size(); ++w) {
      for (Modality m : kModalities) {
        if (!model.successors(m, w).empty()) continue;
        if (selfLoops) {
          model.addEdge(m, w, w);
          continue;
        }
        if (!sink) {
          sink = model.addWorld("sink");
          for (Modality s : kModalities) model.addEdge(s, *sink, *sink);
        }
        model.addEdge(m, w, *sink);
      }
    }
    return model;
  }

  ProverOptions options_;
  ProverStats stats_;
  std::vector<NNode> nodes_;
  std::map<std::tuple<NKind, bool, std::uint32_t, std::size_t, NodeId, NodeId>, NodeId> intern_;
  std::vector<std::optional<Formula>> formulas_;
  std::vector<std::string> atomNames_;
  std::unordered_map<std::string, std::uint32_t> atomIds_;
  std::vector<PrefixRec> prefixes_;
  std::vector<Entry> entries_;
};

// --- trace replay ----------------------------------------------------------

using PrefixKey = std::vector<std::pair<int, unsigned>>;

PrefixKey keyOf(const Prefix& p) {
  PrefixKey k;
  for (const auto& s : p) k.emplace_back(static_cast<int>(index(s.modality)), s.index);
  return k;
}

struct ReplayBranch {
  std::set<std::pair<PrefixKey, Formula>> formulas;
  std::set<PrefixKey> prefixes;

  bool has(const LabeledFormula& lf) const {
    return formulas.count({keyOf(lf.prefix), lf.formula}) > 0;
  }
  void add(const LabeledFormula& lf) {
    formulas.insert({keyOf(lf.prefix), lf.formula});
    prefixes.insert(keyOf(lf.prefix));
  }
  bool hasChild(const Prefix& parent, Modality m) const {
    PrefixKey pk = keyOf(parent);
    for (const auto& k : prefixes)
      if (k.size() == pk.size() + 1 && std::equal(pk.begin(), pk.end(), k.begin()) &&
          k.back().first == static_cast<int>(index(m)))
        return true;
    return false;
  }
};

bool complementary(const Formula& a, const Formula& b) {
  return a.kind() == Formula::Kind::Not && a.operand().kind() == Formula::Kind::Atom &&
         a.operand() == b;
}

bool extends(const Prefix& child, const Prefix& parent, Modality m) {
  return child.size() == parent.size() + 1 && std::equal(parent.begin(), parent.end(), child.begin()) &&
         child.back().modality == m;
}

}  // namespace

bool replay(const ProofTrace& trace, std::string* why) {
  auto reject = [&](std::size_t i, const std::string& msg) {
    if (why) *why = "step " + std::to_string(i + 1) + ": " + msg;
    return false;
  };
  using K = Formula::Kind;
  std::vector<ReplayBranch> pending;
  ReplayBranch branch;
  branch.add(trace.root);
  bool open = true;

  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const ProofStep& s = trace.steps[i];
    if (!open) return reject(i, "step after every branch closed");
    const Formula& f = s.source.formula;
    const Prefix& sigma = s.source.prefix;
    if (!branch.has(s.source)) return reject(i, "source is not on the branch");
    switch (s.rule) {
      case Rule::Alpha: {
        if (f.kind() != K::And || s.produced.empty() || s.produced.size() > 2)
          return reject(i, "malformed alpha step");
        for (const auto& p : s.produced) {
          if (p.prefix != sigma || (p.formula != f.left() && p.formula != f.right()))
            return reject(i, "alpha product is not a conjunct");
          branch.add(p);
        }
        break;
      }
      case Rule::Beta: {
        if (f.kind() != K::Or || s.produced.size() != 2 || s.produced[0] != LabeledFormula{sigma, f.left()} ||
            s.produced[1] != LabeledFormula{sigma, f.right()})
          return reject(i, "malformed beta step");
        ReplayBranch right = branch;
        right.add(s.produced[1]);
        pending.push_back(std::move(right));
        branch.add(s.produced[0]);
        break;
      }
      case Rule::Pi:
      case Rule::NuK:
      case Rule::NuD: {
        const K expected = s.rule == Rule::Pi ? K::Dia : K::Box;
        if (f.kind() != expected || s.produced.size() != 1) return reject(i, "malformed modal step");
        const LabeledFormula& p = s.produced[0];
        if (p.formula != f.operand() || !extends(p.prefix, sigma, f.modality()))
          return reject(i, "modal product does not match its source");
        const bool exists = branch.prefixes.count(keyOf(p.prefix)) > 0;
        if (s.rule == Rule::Pi && exists) return reject(i, "pi must use a fresh prefix");
        if (s.rule == Rule::NuK && !exists) return reject(i, "nuK needs an existing successor");
        if (s.rule == Rule::NuD && branch.hasChild(sigma, f.modality()))
          return reject(i, "nuD applied although a successor exists");
        branch.add(p);
        break;
      }
      case Rule::Close: {
        bool ok = false;
        if (s.produced.empty()) {
          ok = f.kind() == K::Bottom;
        } else if (s.produced.size() == 1) {
          const LabeledFormula& other = s.produced[0];
          ok = other.prefix == sigma && branch.has(other) &&
               (complementary(f, other.formula) || complementary(other.formula, f));
        }
        if (!ok) return reject(i, "closure without a contradiction");
        if (pending.empty()) {
          open = false;
        } else {
          branch = std::move(pending.back());
          pending.pop_back();
        }
        break;
      }
    }
  }
  if (open) {
    if (why) *why = "trace ends with an open branch";
    return false;
  }
  return true;
}

std::string renderTrace(const ProofTrace& trace) {
  std::ostringstream out;
  auto show = [](const LabeledFormula& lf) {
    return renderPrefix(lf.prefix) + ": " + renderCanonical(lf.formula);
  };
  out << "   " << show(trace.root) << "\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const ProofStep& s = trace.steps[i];
    out << std::string(2 * s.depth, ' ') << (i + 1) << ". " << name(s.rule) << ' ' << show(s.source);
    if (s.rule == Rule::Close) {
      if (!s.produced.empty()) out << "  x  " << show(s.produced[0]);
    } else {
      const char* sep = s.rule == Rule::Beta ? "  |  " : ", ";
      out << "  =>  ";
      for (std::size_t k = 0; k < s.produced.size(); ++k) out << (k ? sep : "") << show(s.produced[k]);
    }
    out << '\n';
  }
  return out.str();
}

Verdict prove(const Formula& f, const ProverOptions& options) { return Tableau(options).run(f); }

Verdict entails(const std::vector<Formula>& assumptions, const Formula& goal,
                const ProverOptions& options) {
  return prove(Formula::implies(Formula::conjunction(assumptions), goal), options);
}

bool consistent(const std::vector<Formula>& assumptions, const ProverOptions& options) {
  return !prove(Formula::negation(Formula::conjunction(assumptions)), options).isTheorem();
}

std::vector<bool> independent(const std::vector<Formula>& assumptions, const ProverOptions& options) {
  if (assumptions.size() < 2) throw std::invalid_argument("independence needs at least two members");
  std::vector<bool> out;
  for (std::size_t i = 0; i < assumptions.size(); ++i) {
    std::vector<Formula> others;
    for (std::size_t j = 0; j < assumptions.size(); ++j)
      if (j != i) others.push_back(assumptions[j]);
    out.push_back(!entails(others, assumptions[i], options).isTheorem());
  }
  return out;
}

}  // namespace deon
