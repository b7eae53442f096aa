#include "ontoling/service.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include <httplib.h>

#include "ontoling/json_io.hpp"
#include "ontoling/store.hpp"

namespace ontoling {

int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::NotFound:
    case Errc::UnknownSlot:
      return 404;
    case Errc::TermAlreadyPlaced:
    case Errc::NothingPlaced:
    case Errc::SessionNotInProgress:
    case Errc::SessionCompleted:
    case Errc::IncompletePlacement:
    case Errc::NotPassed:
    case Errc::AlreadyCompleted:
      return 409;
    case Errc::TermNotInBank:
    case Errc::EmptyTerm:
    case Errc::Unsatisfiable:
    case Errc::InsufficientDistractors:
    case Errc::DisjointnessFailure:
    case Errc::UnknownLevel:
      return 422;
    case Errc::StorageFailure:
    case Errc::CorruptRecord:
    case Errc::VersionUnsupported:
      return 500;
    default:
      return 400;
  }
}

namespace {

struct SessionEntry {
  std::mutex mutex;
  Session session;
};

std::string random_session_id() {
  static std::mutex mu;
  static std::mt19937_64 gen{std::random_device{}()};
  std::lock_guard guard(mu);
  char buf[40];
  std::snprintf(buf, sizeof buf, "s%016llx%016llx",
                static_cast<unsigned long long>(gen()),
                static_cast<unsigned long long>(gen()));
  return buf;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, Errc code, const std::string& message) {
  send_json(res, http_status(code),
            {{"error", {{"code", to_string(code)}, {"message", message}}}});
}

std::uint64_t parse_seed(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
  }
  throw Error(Errc::BadRequest, "seed must be an unsigned 64-bit integer");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw Error(Errc::BadRequest, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(Errc::BadRequest, std::string("malformed JSON body: ") + e.what());
  }
}

}  // namespace

struct Service::Impl {
  Lexicon lex;
  std::string lexicon_id;
  Store store;
  httplib::Server server;
  bool bound = false;

  std::mutex clock_mutex;
  std::function<Timestamp()> clock = [] {
    return std::chrono::time_point_cast<std::chrono::milliseconds>(
        std::chrono::system_clock::now());
  };
  std::function<std::uint64_t()> seed_source = [] {
    static std::mutex mu;
    static std::mt19937_64 gen{std::random_device{}()};
    std::lock_guard guard(mu);
    return gen();
  };

  std::mutex sessions_mutex;
  std::map<std::string, std::shared_ptr<SessionEntry>, std::less<>> sessions;

  Impl(Lexicon l, std::filesystem::path dir)
      : lex(std::move(l)), lexicon_id(lexicon_fingerprint(lex)), store(std::move(dir)) {
    routes();
  }

  Timestamp now() {
    std::lock_guard guard(clock_mutex);
    return clock();
  }

  std::shared_ptr<SessionEntry> entry_for(const std::string& id) {
    {
      std::lock_guard guard(sessions_mutex);
      if (auto it = sessions.find(id); it != sessions.end()) return it->second;
    }
    SessionRecord record = store.load_session(id);
    if (record.session.lexicon_id != lexicon_id)
      throw Error(Errc::BadRequest, "session " + id + " belongs to lexicon " +
                                        record.session.lexicon_id);
    auto entry = std::make_shared<SessionEntry>();
    entry->session = std::move(record.session);
    std::lock_guard guard(sessions_mutex);
    auto [it, inserted] = sessions.emplace(id, entry);
    return it->second;
  }

  void persist(const Session& s) { store.save_session({s, kSchemaVersion, now()}); }

  /// Runs `op` on the session under its lock. `op` returns the updated session
  /// (persisted before it replaces the cached copy) and fills the response.
  template <typename Op>
  void mutate(const std::string& id, Op op) {
    auto entry = entry_for(id);
    std::lock_guard guard(entry->mutex);
    Session updated = op(entry->session);
    persist(updated);
    entry->session = std::move(updated);
  }

  template <typename Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      } catch (const json::exception& e) {
        send_error(res, Errc::BadRequest, e.what());
      } catch (const std::exception& e) {
        send_error(res, Errc::StorageFailure, e.what());
      }
    };
  }

  void routes() {
    server.Get("/v1/health", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}, {"lexicon_id", lexicon_id}, {"levels", kLevelCount}});
    }));

    server.Post("/v1/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      if (!body.contains("player") || !body["player"].is_string())
        throw Error(Errc::InvalidPlayer, "player must be a string");
      const std::uint64_t seed =
          body.contains("seed") && !body["seed"].is_null() ? parse_seed(body["seed"]) : seed_source();
      Session s = new_session(body["player"].get<std::string>(), lex, lexicon_id, seed,
                              random_session_id());
      persist(s);
      auto entry = std::make_shared<SessionEntry>();
      entry->session = s;
      {
        std::lock_guard guard(sessions_mutex);
        sessions.emplace(s.session_id, entry);
      }
      send_json(res, 201,
                {{"session_id", s.session_id},
                 {"player", s.player},
                 {"seed", s.base_seed},
                 {"level", s.current_level},
                 {"status", to_token(s.status)},
                 {"view", to_json(player_view(s))}});
    }));

    server.Get("/v1/sessions/:id", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto entry = entry_for(req.path_params.at("id"));
      std::lock_guard guard(entry->mutex);
      send_json(res, 200, session_summary(entry->session));
    }));

    server.Get("/v1/sessions/:id/puzzle", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto entry = entry_for(req.path_params.at("id"));
      std::lock_guard guard(entry->mutex);
      send_json(res, 200, to_json(player_view(entry->session)));
    }));

    server.Put("/v1/sessions/:id/placements/:slot", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      if (!body.contains("term") || !body["term"].is_string())
        throw Error(Errc::BadRequest, "term must be a string");
      const std::string term = body["term"].get<std::string>();
      json view;
      mutate(req.path_params.at("id"), [&](const Session& s) {
        Session out = place(s, req.path_params.at("slot"), term);
        view = to_json(player_view(out));
        return out;
      });
      send_json(res, 200, view);
    }));

    server.Delete("/v1/sessions/:id/placements/:slot", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json view;
      mutate(req.path_params.at("id"), [&](const Session& s) {
        Session out = unplace(s, req.path_params.at("slot"));
        view = to_json(player_view(out));
        return out;
      });
      send_json(res, 200, view);
    }));

    server.Post("/v1/sessions/:id/submit", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json report_json;
      mutate(req.path_params.at("id"), [&](const Session& s) {
        const Timestamp at = now();
        auto [out, report] = submit(s, at);
        store.append_result({out.player, out.session_id, report.level, report.level_score,
                             report.stars, at});
        report_json = to_json(report);
        report_json["submitted_at"] = to_millis(at);
        report_json["status"] = to_token(out.status);
        return out;
      });
      send_json(res, 200, report_json);
    }));

    server.Post("/v1/sessions/:id/advance", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json view;
      mutate(req.path_params.at("id"), [&](const Session& s) {
        Session out = advance(s, lex);
        view = to_json(player_view(out));
        return out;
      });
      send_json(res, 200, view);
    }));

    server.Get("/v1/leaderboard", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::size_t limit = 10;
      if (req.has_param("limit")) {
        const auto raw = req.get_param_value("limit");
        auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), limit);
        if (ec != std::errc{} || ptr != raw.data() + raw.size())
          throw Error(Errc::BadRequest, "limit must be a non-negative integer");
      }
      const auto board = store.leaderboard(limit);
      json entries = json::array();
      for (const auto& e : board) entries.push_back(to_json(e));
      const auto top = winner(board);
      send_json(res, 200, {{"entries", std::move(entries)},
                           {"winner", top ? json(*top) : json(nullptr)}});
    }));
  }
};

Service::Service(Lexicon lex, std::filesystem::path data_dir)
    : impl_(std::make_unique<Impl>(std::move(lex), std::move(data_dir))) {}

Service::~Service() = default;

std::unique_ptr<Service> Service::from_config(const ServiceConfig& config) {
  std::ifstream in(config.lexicon_path, std::ios::binary);
  if (!in) throw Error(Errc::NotFound, "cannot read lexicon " + config.lexicon_path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return std::make_unique<Service>(parse_lexicon(text.str()), config.data_dir);
}

const std::string& Service::lexicon_id() const noexcept { return impl_->lexicon_id; }

int Service::bind(const std::string& host, int port) {
  int bound_port = port;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound_port = -1;
  }
  if (bound_port < 0)
    throw Error(Errc::StorageFailure, "cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound_port;
}

void Service::run() {
  if (!impl_->bound) throw Error(Errc::BadRequest, "bind() before run()");
  impl_->server.listen_after_bind();
}

void Service::stop() { impl_->server.stop(); }

void Service::set_clock(std::function<Timestamp()> clock) {
  std::lock_guard guard(impl_->clock_mutex);
  impl_->clock = std::move(clock);
}

void Service::set_seed_source(std::function<std::uint64_t()> source) {
  impl_->seed_source = std::move(source);
}

int serve(const ServiceConfig& config) {
  std::unique_ptr<Service> service;
  try {
    service = Service::from_config(config);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  int port = 0;
  try {
    port = service->bind(config.bind, config.port);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << "listening on http://" << config.bind << ":" << port << " (lexicon "
            << service->lexicon_id() << ")" << std::endl;
  service->run();
  return 0;
}

}  // namespace ontoling
