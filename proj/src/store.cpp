#include "ontoling/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "ontoling/json_io.hpp"

namespace ontoling {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void storage_failure(const std::string& what) {
  throw Error(Errc::StorageFailure, what);
}

bool safe_session_id(std::string_view id) {
  return !id.empty() && id.size() <= 128 &&
         std::all_of(id.begin(), id.end(), [](unsigned char c) {
           return std::isalnum(c) || c == '-' || c == '_';
         });
}

void write_all(int fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      storage_failure("write " + path.string() + ": " + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

json entry_to_json(const ResultLogEntry& e) {
  return {{"player", e.player},
          {"session_id", e.session_id},
          {"level", e.level},
          {"score", e.score},
          {"stars", e.stars},
          {"submitted_at", to_millis(e.submitted_at)}};
}

}  // namespace

std::vector<LeaderboardEntry> aggregate_leaderboard(std::span<const ResultLogEntry> log) {
  struct Acc {
    std::map<int, int> best;  // level -> best passing score
    Timestamp last{};
    bool seen = false;
  };
  std::map<std::string, Acc> per_player;
  for (const auto& e : log) {
    auto& acc = per_player[e.player];
    if (!acc.seen || e.submitted_at > acc.last) acc.last = e.submitted_at;
    acc.seen = true;
    if (e.stars < 1) continue;
    auto [it, inserted] = acc.best.try_emplace(e.level, e.score);
    if (!inserted) it->second = std::max(it->second, e.score);
  }
  std::vector<LeaderboardEntry> out;
  for (const auto& [player, acc] : per_player) {
    LeaderboardEntry entry{player, 0, static_cast<int>(acc.best.size()), acc.last};
    for (const auto& [level, score] : acc.best) entry.total_score += score;
    out.push_back(std::move(entry));
  }
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

Store::Store(fs::path data_dir) : dir_(std::move(data_dir)) {
  std::error_code ec;
  fs::create_directories(dir_ / "sessions", ec);
  if (ec) storage_failure("create " + (dir_ / "sessions").string() + ": " + ec.message());
}

fs::path Store::default_data_dir() {
  if (const char* env = std::getenv("ONTOLING_DATA_DIR"); env && *env) return env;
  return "data";
}

fs::path Store::session_path(std::string_view session_id) const {
  return dir_ / "sessions" / (std::string(session_id) + ".json");
}

std::mutex& Store::session_lock(const std::string& session_id) {
  std::lock_guard guard(locks_mutex_);
  auto& slot = session_locks_[session_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

void Store::save_session(const SessionRecord& record) {
  const auto& id = record.session.session_id;
  if (!safe_session_id(id)) storage_failure("invalid session id '" + id + "'");

  const std::string body = json{{"schema_version", record.schema_version},
                                {"saved_at", to_millis(record.saved_at)},
                                {"session", session_to_json(record.session)}}
                               .dump(2) +
                           "\n";

  std::lock_guard guard(session_lock(id));
  const fs::path final_path = session_path(id);
  thread_local std::mt19937_64 salt{std::random_device{}()};
  fs::path tmp = final_path;
  tmp += ".tmp-" + std::to_string(salt());

  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) storage_failure("open " + tmp.string() + ": " + std::strerror(errno));
  try {
    write_all(fd, body, tmp);
    if (::fsync(fd) != 0) storage_failure("fsync " + tmp.string() + ": " + std::strerror(errno));
  } catch (...) {
    ::close(fd);
    ::unlink(tmp.c_str());
    throw;
  }
  ::close(fd);

  try {
    if (before_rename_) before_rename_(tmp);
  } catch (const std::exception& e) {
    ::unlink(tmp.c_str());
    storage_failure(std::string("interrupted before rename: ") + e.what());
  }

  std::error_code ec;
  fs::rename(tmp, final_path, ec);
  if (ec) {
    ::unlink(tmp.c_str());
    storage_failure("rename " + tmp.string() + ": " + ec.message());
  }
}

SessionRecord Store::load_session(std::string_view session_id) const {
  if (!safe_session_id(session_id))
    throw Error(Errc::NotFound, "no session '" + std::string(session_id) + "'");
  const fs::path path = session_path(session_id);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::NotFound, "no session '" + std::string(session_id) + "'");
  std::ostringstream buf;
  buf << in.rdbuf();

  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptRecord, path.string() + ": " + e.what());
  }

  SessionRecord record;
  try {
    record.schema_version = doc.at("schema_version").get<int>();
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptRecord, path.string() + ": " + e.what());
  }
  if (record.schema_version != kSchemaVersion) {
    throw Error(Errc::VersionUnsupported,
                "VersionUnsupported(" + std::to_string(record.schema_version) + ", " +
                    std::to_string(kSchemaVersion) + ")");
  }
  try {
    record.saved_at = from_millis(doc.at("saved_at").get<std::int64_t>());
    record.session = session_from_json(doc.at("session"));
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptRecord, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(Errc::CorruptRecord, path.string() + ": " + e.what());
  }
  if (auto v = validate_session(record.session); !v.empty())
    throw Error(Errc::CorruptRecord, path.string() + ": " + describe(v.front()));
  return record;
}

void Store::append_result(const ResultLogEntry& entry) {
  const std::string line = entry_to_json(entry).dump() + "\n";
  const fs::path path = dir_ / "results.log";
  std::lock_guard guard(log_mutex_);
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) storage_failure("open " + path.string() + ": " + std::strerror(errno));
  try {
    write_all(fd, line, path);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

std::vector<ResultLogEntry> Store::read_results() const {
  std::vector<ResultLogEntry> out;
  std::lock_guard guard(log_mutex_);
  std::ifstream in(dir_ / "results.log");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      out.push_back({j.at("player").get<std::string>(), j.at("session_id").get<std::string>(),
                     j.at("level").get<int>(), j.at("score").get<int>(),
                     j.at("stars").get<int>(),
                     from_millis(j.at("submitted_at").get<std::int64_t>())});
    } catch (const json::exception&) {
      // A torn final line from an interrupted append is skipped.
    }
  }
  return out;
}

std::vector<LeaderboardEntry> Store::leaderboard(std::size_t limit) const {
  auto board = aggregate_leaderboard(read_results());
  if (board.size() > limit) board.resize(limit);
  return board;
}

}  // namespace ontoling
