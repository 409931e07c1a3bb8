// deon: command-line front end and local JSON service.
//
// Exit status: 0 Theorem (or success), 1 Non-theorem, 2 parse, usage or
// resource error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "deon/ndsic.hpp"
#include "deon/parser.hpp"
#include "deon/service.hpp"

namespace {

using nlohmann::json;
namespace svc = deon::service;

constexpr int kTheorem = 0;
constexpr int kNonTheorem = 1;
constexpr int kError = 2;

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeOutput(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path + "'");
}

// Prints the failure; parse errors get a caret under the offending offset.
int reportError(const std::string& input) {
  try {
    throw;
  } catch (const deon::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!input.empty() && input.find('\n') == std::string::npos && e.position() <= input.size())
      std::cerr << "  " << input << "\n  " << std::string(e.position(), ' ') << "^\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kError;
}

int verdictStatus(const json& r) { return r.at("verdict") == "theorem" ? kTheorem : kNonTheorem; }

svc::Server* activeServer = nullptr;

extern "C" void onSignal(int) {
  if (activeServer) activeServer->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deontic reasoning with ideal and awful worlds (bimodal KD)", "deon"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  svc::Options options;
  std::string format = "text";
  app.add_option("--budget", options.prover.nodeBudget, "Prover node budget")->capture_default_str();
  app.add_option("--max-worlds", options.maxWorlds, "Cross-check with a bounded model search up to N worlds");
  app.add_option("--threads", options.threads, "Scenario enumeration workers (0 = all cores)");
  app.add_option("--max-unknowns", options.maxUnknowns, "Cap on scenario unknowns")->capture_default_str();

  auto* proveCmd = app.add_subcommand("prove", "Prove \"([A1,...,An],G)\" or a bare formula");
  std::string problemText, problemFile;
  proveCmd->add_option("problem", problemText, "Problem text");
  proveCmd->add_option("-f,--file", problemFile, "Read the problem from a file");
  proveCmd->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));

  auto* queryCmd = app.add_subcommand("query", "Ask a violation/obligation/permission/ideal question");
  std::string corpusName = "un", kind = "violation", facts, target, cores, kbFile;
  queryCmd->add_option("--corpus", corpusName, "Built-in corpus")->capture_default_str();
  queryCmd->add_option("--kb", kbFile, "Knowledge-base file used instead of a corpus");
  queryCmd->add_option("--kind", kind, "violation | obligation | permission | ideal")->capture_default_str();
  queryCmd->add_option("--facts", facts, "Comma-separated facts, e.g. \"d01,(~ d3)\"");
  queryCmd->add_option("--target", target, "Target formula for non-violation queries");
  queryCmd->add_option("--cores", cores, "Violation cores (default: the corpus's)");
  queryCmd->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));

  auto* graphCmd = app.add_subcommand("graph", "Enumerate scenarios over unknowns as a decision tree");
  std::string graphFacts, unknowns, outcomes, outputPath = "-";
  std::string graphFormat = "dot";
  graphCmd->add_option("--corpus", corpusName, "Built-in corpus")->capture_default_str();
  graphCmd->add_option("--kb", kbFile, "Knowledge-base file used instead of a corpus");
  graphCmd->add_option("facts", graphFacts, "Comma-separated facts")->required();
  graphCmd->add_option("unknowns", unknowns, "Comma-separated unknown atoms")->required();
  graphCmd->add_option("outcomes", outcomes, "Comma-separated outcome formulas")->required();
  graphCmd->add_option("-o,--output", outputPath, "Output path, '-' for stdout")->capture_default_str();
  graphCmd->add_option("--format", graphFormat, "dot | json")->check(CLI::IsMember({"dot", "json"}));

  auto* corpusCmd = app.add_subcommand("corpus", "Inspect the built-in corpora");
  corpusCmd->require_subcommand(1, 1);
  auto* listCmd = corpusCmd->add_subcommand("list", "List corpora");
  auto* showCmd = corpusCmd->add_subcommand("show", "Print a corpus as a knowledge-base file");
  std::string showName;
  showCmd->add_option("name", showName, "Corpus name")->required();
  for (auto* c : {listCmd, showCmd})
    c->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));

  auto* exportCmd = app.add_subcommand("export", "Print a problem in MleanCoP syntax");
  exportCmd->add_option("problem", problemText, "Problem text")->required();

  auto* serveCmd = app.add_subcommand("serve", "Run the JSON service");
  int port = 8080;
  std::string host = "127.0.0.1";
  std::size_t concurrent = 0;
  serveCmd->add_option("--port", port, "TCP port")->capture_default_str();
  serveCmd->add_option("--host", host, "Bind address")->capture_default_str();
  serveCmd->add_option("--max-concurrent", concurrent, "Simultaneous proofs (0 = CPU count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  std::string input;
  try {
    if (*proveCmd) {
      if (problemText.empty() == problemFile.empty())
        throw std::invalid_argument("give exactly one of a problem argument or --file");
      input = problemFile.empty() ? problemText : readFile(problemFile);
      const json r = svc::prove({{"problem", input}}, options);
      std::cout << (format == "json" ? svc::serialize(r) : svc::renderText(r));
      return verdictStatus(r);
    }
    if (*queryCmd) {
      json request{{"kind", kind}, {"facts", facts}};
      if (kbFile.empty())
        request["corpus"] = corpusName;
      else
        request["kb"] = readFile(kbFile);
      if (!target.empty()) request["target"] = target;
      if (!cores.empty()) request["cores"] = cores;
      input = facts;
      const json r = svc::query(request, options);
      std::cout << (format == "json" ? svc::serialize(r) : svc::renderText(r));
      return verdictStatus(r);
    }
    if (*graphCmd) {
      json request{{"facts", graphFacts}, {"unknowns", unknowns}, {"outcomes", outcomes}};
      if (kbFile.empty())
        request["corpus"] = corpusName;
      else
        request["kb"] = readFile(kbFile);
      const json r = svc::graph(request, options);
      writeOutput(outputPath, graphFormat == "json" ? svc::serialize(r) : r.at("dot").get<std::string>());
      return kTheorem;
    }
    if (*corpusCmd) {
      if (*listCmd) {
        const json list = svc::corpora();
        if (format == "json") {
          std::cout << svc::serialize(list);
        } else {
          for (const auto& c : list)
            std::cout << c.at("name").get<std::string>() << "\t" << c.at("size").get<std::size_t>()
                      << " formulas\t" << c.at("description").get<std::string>() << "\n";
        }
      } else {
        std::cout << (format == "json" ? svc::serialize(svc::corpusDetail(showName))
                                       : deon::renderKnowledgeBase(deon::corpus(showName)));
      }
      return kTheorem;
    }
    if (*exportCmd) {
      input = problemText;
      std::cout << deon::renderMleanCoP(svc::parseInput(problemText)) << "\n";
      return kTheorem;
    }
    if (*serveCmd) {
      svc::Server server(options, concurrent);
      activeServer = &server;
      std::signal(SIGINT, onSignal);
      std::signal(SIGTERM, onSignal);
      std::cerr << "deon: serving on http://" << host << ":" << port << "\n";
      const bool ok = server.listen(host, port);
      activeServer = nullptr;
      if (!ok) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
      return kTheorem;
    }
  } catch (...) {
    return reportError(input);
  }
  return kError;
}
