#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "deon/service.hpp"
#include "support/dot_grammar.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run cli(const std::vector<std::string>& args) {
  std::string cmd = quote(DEON_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
  CHECK(cli({"prove", "(Id a) => (~ (Id (~ a)))"}).status == 0);
  CHECK(cli({"prove", "([],(p))"}).status == 1);
  CHECK(cli({"prove", "([,)"}).status == 2);
  CHECK(cli({"prove"}).status == 2);
  CHECK(cli({"frobnicate"}).status == 2);
  CHECK(cli({"query", "--corpus", "nope"}).status == 2);
  CHECK(cli({"--budget", "5", "prove", "un => (Id (Ob g))"}).status == 2);
}

TEST_CASE("listing rows through the command line") {
  for (const char* row : {"([un,d01,d3],((~ d);((~ p);(~ g))))", "([un,(~ d01),(~ d02),(~ d3)],((~ d);((~ p);(~ g))))",
                          "([un,d01,d1,(~ d11)],(Ob d12))", "([un,(~ d)],(Pm e2))", "([un],(Id (Ob g)))"}) {
    const Run r = cli({"prove", row});
    CHECK_MESSAGE(r.status == 0, row);
    CHECK(r.out.rfind("Theorem", 0) == 0);
  }
}

TEST_CASE("text and JSON output") {
  const Run text = cli({"prove", "([],(p))"});
  CHECK(text.out.find("* 0") != std::string::npos);

  const Run j = cli({"prove", "--format", "json", "([],(p))"});
  REQUIRE(j.status == 1);
  json parsed = json::parse(j.out);
  json direct = deon::service::prove({{"problem", "([],(p))"}}, {});
  parsed.erase("elapsed_ms");
  direct.erase("elapsed_ms");
  CHECK(parsed == direct);

  const Run oracle = cli({"--max-worlds", "2", "prove", "--format", "json", "(Id a) => (Di a)"});
  CHECK(json::parse(oracle.out).at("oracle").at("agrees") == true);

  const Run err = cli({"prove", "a , D1"});
  CHECK(err.status == 2);
}

TEST_CASE("query") {
  const Run r = cli({"query", "--kind", "obligation", "--facts", "d01,d1,(~ d11)", "--target", "d12"});
  CHECK(r.status == 0);
  const Run no = cli({"query", "--kind", "obligation", "--facts", "", "--target", "d12"});
  CHECK(no.status == 1);
  const Run c = cli({"query", "--corpus", "chisholm", "--facts", "~ p", "--kind", "obligation", "--target", "~ q",
                      "--format", "json"});
  CHECK(c.status == 0);
  CHECK(json::parse(c.out).at("goal") == "(Ob (~ q))");
}

TEST_CASE("graph to a file") {
  const fs::path out = fs::temp_directory_path() / "deon_cli_graph.dot";
  fs::remove(out);
  const Run r = cli({"graph", "d01", "d11,d12,d13", "(Ob d11),(Ob d12),(Ob d13)", "-o", out.string()});
  CHECK(r.status == 0);
  const dot::Result d = dot::check(slurp(out));
  REQUIRE_MESSAGE(d.ok, d.error);
  CHECK(d.graph.nodeOrder.size() == 15);
  fs::remove(out);

  const Run j = cli({"graph", "d01", "d11", "Ob d11", "--format", "json", "-o", "-"});
  CHECK(json::parse(j.out).at("leaves").size() == 2);
  CHECK(cli({"graph", "d01", "D1", "Ob d11"}).status == 2);
}

TEST_CASE("corpus and export") {
  const Run list = cli({"corpus", "list"});
  CHECK(list.status == 0);
  CHECK(list.out.find("chisholm") != std::string::npos);
  const Run show = cli({"corpus", "show", "stcp"});
  CHECK(show.out.find("NO((Ob buy),pay_exact)") != std::string::npos);
  CHECK(cli({"corpus", "show", "nope"}).status == 2);
  const Run ex = cli({"export", "([a],(Id a))"});
  CHECK(ex.status == 0);
  CHECK(ex.out == "f(a => (# 1^d: a)).\n");
}

}  // TEST_SUITE
