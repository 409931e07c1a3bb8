#ifndef DEON_SERVICE_HPP
#define DEON_SERVICE_HPP

#include <cstddef>
#include <exception>
#include <memory>
#include <string>
#include <string_view>

#include "json.hpp"

#include "deon/parser.hpp"
#include "deon/prover.hpp"

// Request handling shared by the command line and the HTTP service, so that
// both produce the same JSON for the same input.
namespace deon::service {

struct Options {
  ProverOptions prover;
  std::size_t maxWorlds = 0;  // > 0 adds a bounded-search cross-check
  std::size_t maxUnknowns = 12;
  std::size_t threads = 0;    // scenario enumeration workers
};

// "([A1,...],G)" or a bare formula, which is read as "([],F)".
Problem parseInput(std::string_view text);

// Request bodies are documented in docs/formats.md. Every response carries
// "elapsed_ms"; nothing else in it depends on timing.
nlohmann::json prove(const nlohmann::json& request, const Options& options);
nlohmann::json query(const nlohmann::json& request, const Options& options);
nlohmann::json graph(const nlohmann::json& request, const Options& options);
nlohmann::json corpora();
nlohmann::json corpusDetail(std::string_view name);

// Error classification: HTTP status (400, 422, 503, 500) and JSON body.
int statusFor(const std::exception_ptr& e);
nlohmann::json errorBody(const std::exception_ptr& e);

// Text rendering of a prove or query response, for the terminal.
std::string renderText(const nlohmann::json& response);

// The serialization used by both front ends.
std::string serialize(const nlohmann::json& response);

nlohmann::json traceToJson(const ProofTrace& trace);

class Server {
public:
  // maxConcurrentProofs == 0 means one per hardware thread.
  explicit Server(Options options, std::size_t maxConcurrentProofs = 0);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and serves until stop(); returns false if the port is unavailable.
  bool listen(const std::string& host, int port);
  // Binds to a free port and returns it, or -1. Call run() afterwards.
  int bindAnyPort(const std::string& host);
  bool run();
  void stop();
  void waitUntilReady() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace deon::service

#endif  // DEON_SERVICE_HPP
