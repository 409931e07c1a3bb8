#include "deon/semantics.hpp"

#include "sat.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace deon {

World KripkeModel::addWorld(std::string name) {
  names_.push_back(std::move(name));
  for (auto& rel : successors_) rel.emplace_back();
  valuation_.emplace_back();
  return names_.size() - 1;
}

void KripkeModel::addEdge(Modality m, World from, World to) {
  if (from >= size() || to >= size()) throw std::out_of_range("edge between unknown worlds");
  auto& succ = successors_[index(m)][from];
  if (std::find(succ.begin(), succ.end(), to) == succ.end()) succ.push_back(to);
}

void KripkeModel::setTrue(World w, const std::string& atom) { valuation_.at(w).insert(atom); }

void KripkeModel::setRoot(World w) {
  if (w >= size()) throw std::out_of_range("root is not a world of the model");
  root_ = w;
}

World KripkeModel::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::out_of_range("unknown world '" + std::string(name) + "'");
  return static_cast<World>(it - names_.begin());
}

std::vector<SerialityViolation> validateSerial(const KripkeModel& m) {
  std::vector<SerialityViolation> out;
  for (World w = 0; w < m.size(); ++w)
    for (Modality mod : kModalities)
      if (m.successors(mod, w).empty()) out.push_back({w, mod});
  return out;
}

std::vector<bool> extension(const KripkeModel& m, const Formula& f) {
  using K = Formula::Kind;
  const std::size_t n = m.size();
  std::vector<bool> out(n);
  switch (f.kind()) {
    case K::Atom:
      for (World w = 0; w < n; ++w) out[w] = m.holds(w, f.atomName());
      return out;
    case K::Top:
      out.assign(n, true);
      return out;
    case K::Bottom:
      return out;
    case K::Not: {
      auto a = extension(m, f.operand());
      for (World w = 0; w < n; ++w) out[w] = !a[w];
      return out;
    }
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Iff: {
      auto a = extension(m, f.left());
      auto b = extension(m, f.right());
      for (World w = 0; w < n; ++w) {
        switch (f.kind()) {
          case K::And: out[w] = a[w] && b[w]; break;
          case K::Or: out[w] = a[w] || b[w]; break;
          case K::Implies: out[w] = !a[w] || b[w]; break;
          default: out[w] = a[w] == b[w]; break;
        }
      }
      return out;
    }
    case K::Box:
    case K::Dia: {
      auto a = extension(m, f.operand());
      const bool universal = f.kind() == K::Box;
      for (World w = 0; w < n; ++w) {
        const auto& succ = m.successors(f.modality(), w);
        out[w] = universal ? std::all_of(succ.begin(), succ.end(), [&](World v) { return a[v]; })
                           : std::any_of(succ.begin(), succ.end(), [&](World v) { return a[v]; });
      }
      return out;
    }
    default:
      return extension(m, expandDefined(f));
  }
}

bool check(const KripkeModel& m, World w, const Formula& f) {
  if (w >= m.size()) throw std::out_of_range("unknown world " + std::to_string(w));
  return extension(m, f)[w];
}

bool check(const KripkeModel& m, std::string_view world, const Formula& f) {
  return check(m, m.find(world), f);
}

namespace {

// "Some serial model on n worlds falsifies f at world 0" as a propositional
// problem: one variable per valuation bit, per edge and per (subformula,
// world), tied together by Tseitin equivalences.
class CountermodelSearch {
public:
  CountermodelSearch(const Formula& f, std::size_t worlds) : n_(worlds) {
    const Formula prim = expandDefined(f);
    atomNames_ = atoms(prim);
    for (std::size_t w = 0; w < n_; ++w)
      for (std::size_t a = 0; a < atomNames_.size(); ++a) val_.push_back(solver_.addVar());
    for (auto& r : rel_)
      for (std::size_t i = 0; i < n_ * n_; ++i) r.push_back(solver_.addVar());
    truth_ = solver_.addVar();
    solver_.addClause({sat::pos(truth_)});
    for (std::size_t m = 0; m < 2; ++m)
      for (World w = 0; w < n_; ++w) {
        std::vector<int> some;
        for (World v = 0; v < n_; ++v) some.push_back(sat::pos(edge(m, w, v)));
        solver_.addClause(some);
      }
    const std::vector<int> root = encode(prim);
    solver_.addClause({sat::negate(root[0])});
  }

  std::optional<KripkeModel> run() {
    if (!solver_.solve()) return std::nullopt;
    KripkeModel m;
    for (World w = 0; w < n_; ++w) m.addWorld("w" + std::to_string(w));
    for (World w = 0; w < n_; ++w) {
      for (std::size_t a = 0; a < atomNames_.size(); ++a)
        if (solver_.value(val_[w * atomNames_.size() + a])) m.setTrue(w, atomNames_[a]);
      for (std::size_t mi = 0; mi < 2; ++mi)
        for (World v = 0; v < n_; ++v)
          if (solver_.value(edge(mi, w, v))) m.addEdge(kModalities[mi], w, v);
    }
    m.setRoot(0);
    return m;
  }

private:
  int edge(std::size_t m, World w, World v) const { return rel_[m][w * n_ + v]; }

  // x <-> (a & b)
  int andOf(int a, int b) {
    const int x = sat::pos(solver_.addVar());
    solver_.addClause({sat::negate(x), a});
    solver_.addClause({sat::negate(x), b});
    solver_.addClause({x, sat::negate(a), sat::negate(b)});
    return x;
  }
  int orOf(int a, int b) { return sat::negate(andOf(sat::negate(a), sat::negate(b))); }

  // x <-> (l1 & ... & lk)
  int allOf(const std::vector<int>& lits) {
    const int x = sat::pos(solver_.addVar());
    std::vector<int> back{x};
    for (int l : lits) {
      solver_.addClause({sat::negate(x), l});
      back.push_back(sat::negate(l));
    }
    solver_.addClause(back);
    return x;
  }

  // Literal of f at each world.
  std::vector<int> encode(const Formula& f) {
    using K = Formula::Kind;
    std::vector<int> out(n_);
    switch (f.kind()) {
      case K::Atom: {
        const auto a = static_cast<std::size_t>(
            std::find(atomNames_.begin(), atomNames_.end(), f.atomName()) - atomNames_.begin());
        for (World w = 0; w < n_; ++w) out[w] = sat::pos(val_[w * atomNames_.size() + a]);
        return out;
      }
      case K::Top:
      case K::Bottom:
        std::fill(out.begin(), out.end(), f.kind() == K::Top ? sat::pos(truth_) : sat::neg(truth_));
        return out;
      case K::Not: {
        out = encode(f.operand());
        for (int& l : out) l = sat::negate(l);
        return out;
      }
      case K::And:
      case K::Or:
      case K::Implies:
      case K::Iff: {
        const std::vector<int> a = encode(f.left()), b = encode(f.right());
        for (World w = 0; w < n_; ++w) {
          switch (f.kind()) {
            case K::And: out[w] = andOf(a[w], b[w]); break;
            case K::Or: out[w] = orOf(a[w], b[w]); break;
            case K::Implies: out[w] = orOf(sat::negate(a[w]), b[w]); break;
            default:
              out[w] = orOf(andOf(a[w], b[w]), andOf(sat::negate(a[w]), sat::negate(b[w])));
              break;
          }
        }
        return out;
      }
      case K::Box:
      case K::Dia: {
        // Box: every successor satisfies; Dia is the dual over ~body.
        const bool box = f.kind() == K::Box;
        const std::vector<int> body = encode(f.operand());
        const std::size_t m = index(f.modality());
        for (World w = 0; w < n_; ++w) {
          std::vector<int> terms;
          for (World v = 0; v < n_; ++v)
            terms.push_back(orOf(sat::neg(edge(m, w, v)), box ? body[v] : sat::negate(body[v])));
          out[w] = box ? allOf(terms) : sat::negate(allOf(terms));
        }
        return out;
      }
      default:
        throw std::logic_error("defined operator survived expansion");
    }
  }

  std::size_t n_;
  std::vector<std::string> atomNames_;
  sat::Solver solver_;
  std::vector<int> val_;
  std::array<std::vector<int>, 2> rel_;
  int truth_ = 0;
};

}  // namespace

std::optional<KripkeModel> boundedCountermodel(const Formula& f, std::size_t maxWorlds) {
  if (maxWorlds == 0) throw std::invalid_argument("maxWorlds must be positive");
  for (std::size_t n = 1; n <= maxWorlds; ++n) {
    if (auto model = CountermodelSearch(f, n).run()) {
      if (!validateSerial(*model).empty() || check(*model, model->root(), f))
        throw std::logic_error("bounded search produced an invalid countermodel");
      return model;
    }
  }
  return std::nullopt;
}

std::string renderModel(const KripkeModel& m) {
  std::string out;
  for (World w = 0; w < m.size(); ++w) {
    out += w == m.root() ? "* " : "  ";
    out += m.name(w) + " {";
    bool first = true;
    for (const auto& a : m.trueAtoms(w)) {
      out += (first ? "" : ", ") + a;
      first = false;
    }
    out += "}";
    for (Modality mod : kModalities) {
      out += std::string("  ") + (mod == Modality::Ideal ? "ideal" : "awful") + " ->";
      for (World v : m.successors(mod, w)) out += " " + m.name(v);
    }
    out += "\n";
  }
  return out;
}

nlohmann::json toJson(const KripkeModel& m) {
  nlohmann::json j;
  j["worlds"] = nlohmann::json::array();
  j["root"] = m.name(m.root());
  for (World w = 0; w < m.size(); ++w) j["worlds"].push_back(m.name(w));
  for (Modality mod : kModalities) {
    auto& edges = j[std::string(name(mod))] = nlohmann::json::array();
    for (World w = 0; w < m.size(); ++w)
      for (World v : m.successors(mod, w)) edges.push_back({m.name(w), m.name(v)});
  }
  auto& val = j["valuation"] = nlohmann::json::object();
  for (World w = 0; w < m.size(); ++w) val[m.name(w)] = m.trueAtoms(w);
  return j;
}

KripkeModel modelFromJson(const nlohmann::json& j) {
  KripkeModel m;
  for (const auto& w : j.at("worlds")) m.addWorld(w.get<std::string>());
  for (Modality mod : kModalities)
    for (const auto& e : j.at(std::string(name(mod))))
      m.addEdge(mod, m.find(e.at(0).get<std::string>()), m.find(e.at(1).get<std::string>()));
  for (const auto& [world, atomList] : j.at("valuation").items())
    for (const auto& a : atomList) m.setTrue(m.find(world), a.get<std::string>());
  m.setRoot(m.find(j.at("root").get<std::string>()));
  return m;
}

}  // namespace deon
