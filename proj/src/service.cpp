#include "deon/service.hpp"

#include <algorithm>
#include <chrono>
#include <semaphore>
#include <sstream>
#include <thread>

#include "httplib.h"

#include "deon/ndsic.hpp"
#include "deon/scenario.hpp"
#include "deon/semantics.hpp"

namespace deon::service {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double millisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

json labeled(const LabeledFormula& lf) {
  return {{"prefix", renderPrefix(lf.prefix)}, {"formula", renderCanonical(lf.formula)}};
}

json statsJson(const ProverStats& s) {
  return {{"labeled_formulas", s.labeledFormulas},
          {"branchings", s.branchings},
          {"max_prefix_length", s.maxPrefixLength},
          {"max_successors_per_prefix", s.maxSuccessorsPerPrefix}};
}

Options withOverrides(const json& request, Options options) {
  if (request.contains("budget")) options.prover.nodeBudget = request.at("budget").get<std::size_t>();
  if (request.contains("max_worlds")) options.maxWorlds = request.at("max_worlds").get<std::size_t>();
  return options;
}

std::string stringField(const json& request, const char* key) {
  if (!request.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return request.at(key).get<std::string>();
}

// Accepts a JSON array of formula strings or one comma-separated string.
std::vector<Formula> formulaList(const json& request, const char* key) {
  if (!request.contains(key) || request.at(key).is_null()) return {};
  const json& v = request.at(key);
  if (v.is_string()) return parseFormulaList(v.get<std::string>());
  std::vector<Formula> out;
  for (const auto& item : v) out.push_back(parseFormula(item.get<std::string>()));
  return out;
}

std::vector<std::string> nameList(const json& request, const char* key) {
  std::vector<std::string> out;
  if (!request.contains(key) || request.at(key).is_null()) return out;
  const json& v = request.at(key);
  auto push = [&](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    if (s.empty()) throw std::invalid_argument(std::string("empty entry in '") + key + "'");
    out.push_back(std::move(s));
  };
  if (v.is_string()) {
    const std::string text = v.get<std::string>();
    if (text.find_first_not_of(" \t") == std::string::npos) return out;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      push(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else {
    for (const auto& item : v) push(item.get<std::string>());
  }
  return out;
}

// Knowledge base of a query or graph request: inline "kb" text, or a corpus.
struct Base {
  std::string label;
  std::vector<Formula> formulas;
  std::vector<Formula> defaultCores;
};

Base baseOf(const json& request) {
  if (request.contains("kb") && !request.at("kb").is_null()) {
    Base b{"custom", parseKnowledgeBase(request.at("kb").get<std::string>()), {}};
    b.defaultCores = idealCores(b.formulas);
    return b;
  }
  const std::string name = request.contains("corpus") ? request.at("corpus").get<std::string>() : "un";
  const Corpus& c = corpus(name);
  return {c.name, c.formulas, c.violationCores};
}

json formulasJson(const std::vector<Formula>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(renderCanonical(f));
  return out;
}

// Verdict fields common to prove and query responses.
void addVerdict(json& out, const std::vector<Formula>& assumptions, const Formula& goal,
                const Options& options) {
  const Verdict v = entails(assumptions, goal, options.prover);
  out["verdict"] = v.isTheorem() ? "theorem" : "non-theorem";
  if (v.isTheorem())
    out["trace"] = traceToJson(v.trace());
  else
    out["countermodel"] = toJson(v.countermodel());
  out["stats"] = statsJson(v.stats);
  if (options.maxWorlds > 0) {
    const Formula f = Formula::implies(Formula::conjunction(assumptions), goal);
    const auto model = boundedCountermodel(f, options.maxWorlds);
    out["oracle"] = {{"max_worlds", options.maxWorlds},
                     {"countermodel", model ? toJson(*model) : json(nullptr)},
                     {"agrees", !(v.isTheorem() && model)}};
  }
}

}  // namespace

Problem parseInput(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '(') {
    const auto second = text.find_first_not_of(" \t\r\n", first + 1);
    if (second != std::string_view::npos && text[second] == '[') return parseProblem(text);
  }
  return Problem{{}, parseFormula(text)};
}

json traceToJson(const ProofTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    json produced = json::array();
    for (const auto& p : s.produced) produced.push_back(labeled(p));
    steps.push_back({{"rule", std::string(name(s.rule))},
                     {"depth", s.depth},
                     {"source", labeled(s.source)},
                     {"produced", std::move(produced)}});
  }
  return {{"root", labeled(trace.root)}, {"steps", std::move(steps)}};
}

json prove(const json& request, const Options& defaults) {
  const auto start = Clock::now();
  const Options options = withOverrides(request, defaults);
  const Problem p = parseInput(stringField(request, "problem"));
  json out;
  out["problem"] = renderCanonical(p);
  addVerdict(out, p.assumptions, p.goal, options);
  out["elapsed_ms"] = millisSince(start);
  return out;
}

json query(const json& request, const Options& defaults) {
  const auto start = Clock::now();
  const Options options = withOverrides(request, defaults);
  const Base base = baseOf(request);
  QuerySpec q;
  q.kind = parseQueryKind(request.contains("kind") ? request.at("kind").get<std::string>() : "violation");
  q.facts = formulaList(request, "facts");
  if (q.kind == QueryKind::Violation) {
    q.violationCores = request.contains("cores") ? formulaList(request, "cores") : base.defaultCores;
    if (q.violationCores.empty()) throw std::invalid_argument("violation query without cores");
  } else {
    q.target = parseFormula(stringField(request, "target"));
  }
  std::vector<Formula> assumptions = base.formulas;
  assumptions.insert(assumptions.end(), q.facts.begin(), q.facts.end());

  json out;
  out["corpus"] = base.label;
  out["kind"] = std::string(name(q.kind));
  out["facts"] = formulasJson(q.facts);
  out["goal"] = renderCanonical(goalOf(q));
  addVerdict(out, assumptions, goalOf(q), options);
  out["elapsed_ms"] = millisSince(start);
  return out;
}

json graph(const json& request, const Options& defaults) {
  const auto start = Clock::now();
  const Options options = withOverrides(request, defaults);
  const Base base = baseOf(request);
  EnumerateOptions eo;
  eo.maxUnknowns = options.maxUnknowns;
  eo.threads = options.threads;
  eo.prover = options.prover;
  const ScenarioGraph g = enumerate(base.formulas, formulaList(request, "facts"), nameList(request, "unknowns"),
                                    formulaList(request, "outcomes"), eo);
  json out = toJson(g);
  out["corpus"] = base.label;
  out["dot"] = renderDot(g);
  out["elapsed_ms"] = millisSince(start);
  return out;
}

json corpora() {
  json out = json::array();
  for (const auto& n : corpusNames()) {
    const Corpus& c = corpus(n);
    out.push_back({{"name", c.name}, {"description", c.description}, {"size", c.formulas.size()}});
  }
  return out;
}

json corpusDetail(std::string_view name) {
  const Corpus& c = corpus(name);
  json conditionals = json::array();
  for (const auto& k : c.structure.conditionals)
    conditionals.push_back({{"antecedent", renderCanonical(k.antecedent)},
                            {"consequent", renderCanonical(k.consequent)},
                            {"flavor", k.flavor == Flavor::Obligation ? "obligation" : "permission"}});
  return {{"name", c.name},
          {"description", c.description},
          {"formulas", formulasJson(c.formulas)},
          {"ideals", formulasJson(c.structure.ideals)},
          {"conditionals", std::move(conditionals)},
          {"relations", formulasJson(c.structure.relations)},
          {"violation_cores", formulasJson(c.violationCores)},
          {"suggested_circumstances", formulasJson(c.suggestedCircumstances)}};
}

int statusFor(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ParseError&) {
    return 400;
  } catch (const UnknownCorpusError&) {
    return 422;
  } catch (const ResourceLimitError&) {
    return 503;
  } catch (const json::exception&) {
    return 400;
  } catch (const std::invalid_argument&) {
    return 400;
  } catch (const std::length_error&) {
    return 400;
  } catch (...) {
    return 500;
  }
}

json errorBody(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ParseError& x) {
    return {{"error", "parse"}, {"message", x.message()}, {"position", x.position()}};
  } catch (const UnknownCorpusError& x) {
    return {{"error", "unknown-corpus"}, {"message", x.what()}};
  } catch (const ResourceLimitError& x) {
    return {{"error", "resource-limit"}, {"message", x.what()}};
  } catch (const json::exception& x) {
    return {{"error", "bad-request"}, {"message", x.what()}};
  } catch (const std::exception& x) {
    return {{"error", statusFor(e) == 400 ? "bad-request" : "internal"}, {"message", x.what()}};
  } catch (...) {
    return {{"error", "internal"}, {"message", "unknown failure"}};
  }
}

std::string renderText(const json& r) {
  std::ostringstream out;
  const bool theorem = r.at("verdict") == "theorem";
  out << (theorem ? "Theorem" : "Non-theorem") << "\n";
  if (r.contains("goal")) out << "goal: " << r.at("goal").get<std::string>() << "\n";
  auto show = [](const json& lf) {
    return lf.at("prefix").get<std::string>() + ": " + lf.at("formula").get<std::string>();
  };
  if (theorem) {
    const json& t = r.at("trace");
    out << "   " << show(t.at("root")) << "\n";
    std::size_t i = 0;
    for (const auto& s : t.at("steps")) {
      const std::string rule = s.at("rule");
      out << std::string(2 * s.at("depth").get<std::size_t>(), ' ') << ++i << ". " << rule << ' '
          << show(s.at("source"));
      const json& produced = s.at("produced");
      if (rule == "close") {
        if (!produced.empty()) out << "  x  " << show(produced[0]);
      } else {
        out << "  =>  ";
        for (std::size_t k = 0; k < produced.size(); ++k)
          out << (k ? (rule == "beta" ? "  |  " : ", ") : "") << show(produced[k]);
      }
      out << "\n";
    }
  } else {
    out << "countermodel (root marked *):\n" << renderModel(modelFromJson(r.at("countermodel")));
  }
  if (r.contains("oracle")) {
    const json& o = r.at("oracle");
    out << "oracle (<= " << o.at("max_worlds").get<std::size_t>() << " worlds): "
        << (o.at("countermodel").is_null() ? "no countermodel" : "countermodel found")
        << (o.at("agrees").get<bool>() ? "" : "  DISAGREES WITH PROVER") << "\n";
  }
  const json& st = r.at("stats");
  out << "labeled formulas: " << st.at("labeled_formulas").get<std::size_t>()
      << ", branchings: " << st.at("branchings").get<std::size_t>() << ", elapsed: "
      << r.at("elapsed_ms").get<double>() << " ms\n";
  return out.str();
}

std::string serialize(const json& response) { return response.dump(2) + "\n"; }

struct Server::Impl {
  explicit Impl(Options o, std::size_t slots) : options(std::move(o)), permits(static_cast<std::ptrdiff_t>(slots)) {}

  Options options;
  std::counting_semaphore<4096> permits;
  httplib::Server http;

  template <typename Handler>
  void respond(httplib::Response& res, bool bounded, Handler&& handler) {
    try {
      json body;
      if (bounded) {
        permits.acquire();
        try {
          body = handler();
        } catch (...) {
          permits.release();
          throw;
        }
        permits.release();
      } else {
        body = handler();
      }
      res.status = 200;
      res.set_content(serialize(body), "application/json");
    } catch (...) {
      const auto e = std::current_exception();
      res.status = statusFor(e);
      res.set_content(serialize(errorBody(e)), "application/json");
    }
  }

  void routes() {
    http.Get("/corpora", [this](const httplib::Request&, httplib::Response& res) {
      respond(res, false, [] { return corpora(); });
    });
    http.Get(R"(/corpora/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      respond(res, false, [&] { return corpusDetail(req.matches[1].str()); });
    });
    http.Post("/prove", [this](const httplib::Request& req, httplib::Response& res) {
      respond(res, true, [&] { return prove(json::parse(req.body), options); });
    });
    http.Post("/query", [this](const httplib::Request& req, httplib::Response& res) {
      respond(res, true, [&] { return query(json::parse(req.body), options); });
    });
    http.Post("/graph", [this](const httplib::Request& req, httplib::Response& res) {
      respond(res, true, [&] { return graph(json::parse(req.body), options); });
    });
  }
};

namespace {
std::size_t defaultSlots(std::size_t requested) {
  if (requested) return std::min<std::size_t>(requested, 4096);
  return std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 4096);
}
}  // namespace

Server::Server(Options options, std::size_t maxConcurrentProofs)
    : impl_(std::make_unique<Impl>(std::move(options), defaultSlots(maxConcurrentProofs))) {
  impl_->routes();
}

Server::~Server() { stop(); }

bool Server::listen(const std::string& host, int port) { return impl_->http.listen(host, port); }

int Server::bindAnyPort(const std::string& host) { return impl_->http.bind_to_any_port(host); }

bool Server::run() { return impl_->http.listen_after_bind(); }

void Server::stop() { impl_->http.stop(); }

void Server::waitUntilReady() const { impl_->http.wait_until_ready(); }

}  // namespace deon::service
