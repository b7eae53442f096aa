#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ontoling/engine.hpp"

namespace ontoling {

inline constexpr int kSchemaVersion = 1;

struct SessionRecord {
  Session session;
  int schema_version = kSchemaVersion;
  Timestamp saved_at{};

  bool operator==(const SessionRecord&) const = default;
};

struct ResultLogEntry {
  std::string player;
  std::string session_id;
  int level = 0;
  int score = 0;
  int stars = 0;
  Timestamp submitted_at{};

  bool operator==(const ResultLogEntry&) const = default;
};

/// Per-player totals from the result log: for each level, the best score
/// among passing entries counts once. Sorted by ranks_before.
std::vector<LeaderboardEntry> aggregate_leaderboard(std::span<const ResultLogEntry> log);

/// Data directory layout:
///   sessions/<session_id>.json   one document per session
///   results.log                  one JSON record per line, append-only
class Store {
 public:
  explicit Store(std::filesystem::path data_dir);

  /// $ONTOLING_DATA_DIR, or ./data.
  static std::filesystem::path default_data_dir();

  const std::filesystem::path& data_dir() const noexcept { return dir_; }

  /// Write-temp-then-rename. Throws Error(StorageFailure).
  void save_session(const SessionRecord& record);
  /// Throws Error(NotFound | CorruptRecord | VersionUnsupported).
  SessionRecord load_session(std::string_view session_id) const;

  void append_result(const ResultLogEntry& entry);
  std::vector<ResultLogEntry> read_results() const;
  std::vector<LeaderboardEntry> leaderboard(std::size_t limit) const;

  /// Test seam for fault injection; runs after the temp file is durable and
  /// before it is renamed over the record.
  void set_before_rename_hook(std::function<void(const std::filesystem::path&)> hook) {
    before_rename_ = std::move(hook);
  }

 private:
  std::filesystem::path session_path(std::string_view session_id) const;
  std::mutex& session_lock(const std::string& session_id);

  std::filesystem::path dir_;
  mutable std::mutex log_mutex_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> session_locks_;
  std::function<void(const std::filesystem::path&)> before_rename_;
};

}  // namespace ontoling
