#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>

#include "ontoling/engine.hpp"
#include "ontoling/lexicon.hpp"

namespace ontoling {

struct ServiceConfig {
  std::filesystem::path lexicon_path;
  std::filesystem::path data_dir = "data";
  std::string bind = "127.0.0.1";
  int port = 8080;
};

/// HTTP status for an error code: 404 for missing resources, 409 for state
/// conflicts, 422 for unusable input, 400 for malformed requests, 500 for
/// storage faults.
int http_status(Errc code) noexcept;

/// HTTP front end over the engine and store. Requests on one session are
/// serialized; distinct sessions run concurrently.
///
///   POST   /v1/sessions                          {player, seed?}
///   GET    /v1/sessions/{id}
///   GET    /v1/sessions/{id}/puzzle
///   PUT    /v1/sessions/{id}/placements/{slot}   {term}
///   DELETE /v1/sessions/{id}/placements/{slot}
///   POST   /v1/sessions/{id}/submit
///   POST   /v1/sessions/{id}/advance
///   GET    /v1/leaderboard?limit=N
///   GET    /v1/health
class Service {
 public:
  Service(Lexicon lex, std::filesystem::path data_dir);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Parses and validates the lexicon file; throws its first violation.
  static std::unique_ptr<Service> from_config(const ServiceConfig& config);

  const std::string& lexicon_id() const noexcept;

  /// Binds the listening socket; port 0 picks a free port. Returns the port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires a prior bind().
  void run();
  void stop();

  /// Overrides the wall clock used to stamp submissions.
  void set_clock(std::function<Timestamp()> clock);
  /// Overrides the source of default seeds for new sessions.
  void set_seed_source(std::function<std::uint64_t()> source);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Loads the lexicon, binds, prints the bound address to stdout, and serves.
/// Returns a process exit code.
int serve(const ServiceConfig& config);

}  // namespace ontoling
