#include "deon/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "deon/parser.hpp"

namespace deon {

namespace {

ScenarioLeaf evaluateLeaf(std::size_t i, const std::vector<Formula>& base,
                          const std::vector<std::string>& unknowns, const std::vector<Formula>& outcomes,
                          const ProverOptions& prover) {
  const std::size_t k = unknowns.size();
  ScenarioLeaf leaf;
  std::vector<Formula> assumptions = base;
  for (std::size_t j = 0; j < k; ++j) {
    const bool value = ((i >> (k - 1 - j)) & 1U) == 0;
    leaf.assignment.push_back(value);
    Formula a = Formula::atom(unknowns[j]);
    assumptions.push_back(value ? a : Formula::negation(a));
  }
  leaf.consistentWithKB = consistent(assumptions, prover);
  for (const auto& o : outcomes) leaf.derivable.push_back(entails(assumptions, o, prover).isTheorem());
  return leaf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

ScenarioGraph enumerate(const std::vector<Formula>& kb, const std::vector<Formula>& facts,
                        const std::vector<std::string>& unknowns, const std::vector<Formula>& outcomes,
                        const EnumerateOptions& options) {
  if (unknowns.size() > options.maxUnknowns)
    throw ScenarioCapError(std::to_string(unknowns.size()) + " unknowns exceed the cap of " +
                           std::to_string(options.maxUnknowns));
  std::set<std::string> seen;
  for (const auto& u : unknowns) {
    if (!isAtomName(u)) throw std::invalid_argument("unknown '" + u + "' is not an atom");
    if (!seen.insert(u).second) throw std::invalid_argument("unknown '" + u + "' listed twice");
  }

  ScenarioGraph g{unknowns, facts, outcomes, {}};
  std::vector<Formula> base = kb;
  base.insert(base.end(), facts.begin(), facts.end());
  const std::size_t count = std::size_t{1} << unknowns.size();
  g.leaves.resize(count);

  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, count);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i)
      g.leaves[i] = evaluateLeaf(i, base, unknowns, outcomes, options.prover);
    return g;
  }

  std::atomic<std::size_t> nextLeaf{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = nextLeaf++; i < count; i = nextLeaf++) {
        try {
          g.leaves[i] = evaluateLeaf(i, base, unknowns, outcomes, options.prover);
        } catch (...) {
          std::lock_guard lock(failureMutex);
          if (!failure) failure = std::current_exception();
          nextLeaf = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return g;
}

std::string renderDot(const ScenarioGraph& g) {
  std::ostringstream out;
  const std::size_t k = g.unknowns.size();
  out << "digraph scenarios {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  out << "  edge [fontname=\"Helvetica\"];\n";
  // Internal nodes in level order: node n has children 2n+1 (true) and 2n+2.
  const std::size_t internal = g.internalNodeCount();
  auto nodeId = [&](std::size_t n) {
    return n < internal ? "d" + std::to_string(n) : "leaf" + std::to_string(n - internal);
  };
  for (std::size_t n = 0; n < internal; ++n) {
    std::size_t level = 0;
    while ((std::size_t{2} << level) - 1 <= n) ++level;
    out << "  " << nodeId(n) << " [shape=ellipse, label=\"" << escape(g.unknowns[level]) << "\"];\n";
  }
  for (std::size_t i = 0; i < g.leaves.size(); ++i) {
    const ScenarioLeaf& leaf = g.leaves[i];
    std::string assignment;
    for (std::size_t j = 0; j < k; ++j)
      assignment += (j ? ", " : "") + (leaf.assignment[j] ? g.unknowns[j] : "~" + g.unknowns[j]);
    if (k == 0) assignment = "facts only";
    std::vector<std::string> lines{assignment};
    if (!leaf.consistentWithKB) {
      lines.push_back("inconsistent");
    } else {
      lines.push_back("consistent");
      bool any = false;
      for (std::size_t o = 0; o < g.outcomes.size(); ++o)
        if (leaf.derivable[o]) {
          lines.push_back(renderCanonical(g.outcomes[o]));
          any = true;
        }
      if (!any) lines.push_back("no outcome derivable");
    }
    std::string label;
    for (std::size_t l = 0; l < lines.size(); ++l) label += (l ? "\\n" : "") + escape(lines[l]);
    out << "  " << nodeId(internal + i) << " [shape=box, "
        << (leaf.consistentWithKB ? "" : "style=filled, fillcolor=lightgray, fontcolor=gray40, ")
        << "label=\"" << label << "\"];\n";
  }
  for (std::size_t n = 0; n < internal; ++n) {
    out << "  " << nodeId(n) << " -> " << nodeId(2 * n + 1) << " [label=\"true\"];\n";
    out << "  " << nodeId(n) << " -> " << nodeId(2 * n + 2) << " [label=\"false\", style=dashed];\n";
  }
  out << "}\n";
  return out.str();
}

nlohmann::json toJson(const ScenarioGraph& g) {
  nlohmann::json j;
  j["unknowns"] = g.unknowns;
  j["facts"] = nlohmann::json::array();
  for (const auto& f : g.facts) j["facts"].push_back(renderCanonical(f));
  j["outcomes"] = nlohmann::json::array();
  for (const auto& o : g.outcomes) j["outcomes"].push_back(renderCanonical(o));
  j["leaves"] = nlohmann::json::array();
  for (const auto& leaf : g.leaves) {
    nlohmann::json l;
    l["assignment"] = nlohmann::json::object();
    for (std::size_t u = 0; u < g.unknowns.size(); ++u) l["assignment"][g.unknowns[u]] = leaf.assignment[u];
    l["consistent"] = leaf.consistentWithKB;
    l["derivable"] = nlohmann::json::array();
    for (std::size_t o = 0; o < g.outcomes.size(); ++o)
      if (leaf.derivable[o]) l["derivable"].push_back(renderCanonical(g.outcomes[o]));
    j["leaves"].push_back(std::move(l));
  }
  return j;
}

}  // namespace deon
