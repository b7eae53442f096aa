#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ontoling/levels.hpp"
#include "ontoling/lexicon.hpp"

namespace ontoling {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

inline constexpr int kLevelCount = 4;

enum class SessionStatus { InProgress, AwaitingAdvance, Completed };

std::string_view to_token(SessionStatus status) noexcept;
std::optional<SessionStatus> status_from_token(std::string_view token) noexcept;

struct LevelResult {
  int level = 0;
  int score = 0;
  int stars = 0;
  Timestamp submitted_at{};

  bool operator==(const LevelResult&) const = default;
};

/// One player's run through the levels. Mutating operations take a session
/// by const reference and return the updated copy; callers serialize access
/// per session.
struct Session {
  std::string session_id;
  std::string player;
  std::string lexicon_id;
  std::uint64_t base_seed = 0;
  int current_level = 1;
  SessionStatus status = SessionStatus::InProgress;
  Puzzle puzzle;
  std::map<std::string, std::string> placements;  // slot_id -> term
  std::vector<LevelResult> history;

  bool operator==(const Session&) const = default;
};

struct SlotVerdict {
  std::string slot_id;
  std::optional<std::string> placed;
  bool correct = false;
  /// One sentence per edge touching the slot, in edge order.
  std::vector<std::string> expressions;

  bool operator==(const SlotVerdict&) const = default;
};

struct NetworkScore {
  std::string network_id;
  int correct_count = 0;
  int slot_count = 0;
  int score_percent = 0;

  bool operator==(const NetworkScore&) const = default;
};

struct ScoreReport {
  int level = 0;
  std::vector<NetworkScore> per_network;
  std::vector<SlotVerdict> verdicts;
  int level_score = 0;
  int stars = 0;
  bool passed = false;

  bool operator==(const ScoreReport&) const = default;
};

struct LeaderboardEntry {
  std::string player;
  int total_score = 0;
  int levels_completed = 0;
  Timestamp last_submission{};

  bool operator==(const LeaderboardEntry&) const = default;
};

/// Redacted puzzle plus the player's placements. Slots carry no synset id
/// and no lemma list.
struct PlayerView {
  std::string session_id;
  std::string player;
  int level = 0;
  SessionStatus status = SessionStatus::InProgress;
  Puzzle puzzle;
  std::map<std::string, std::string> placements;
};

/// round(100 * correct / total), halves rounded up.
int percent_rounded(int correct, int total);
/// Rounded (half up) mean of non-negative integers.
int mean_rounded(std::span<const int> values);
/// 3 stars at >= 90, 2 at >= 70, 1 at >= 50, else 0.
int stars_for(int level_score) noexcept;

/// Scores a placement map against a puzzle with answers attached. Slots
/// without a placement count as incorrect.
ScoreReport grade(const Puzzle& puzzle,
                  const std::map<std::string, std::string>& placements);

/// Throws Error(InvalidPlayer) for a blank name, Error(Unsatisfiable) when
/// the lexicon cannot produce level 1. An empty session_id is replaced by
/// one derived from base_seed.
Session new_session(std::string_view player, const Lexicon& lex,
                    std::string lexicon_id, std::uint64_t base_seed,
                    std::string session_id = {});

PlayerView player_view(const Session& s);

Session place(const Session& s, std::string_view slot_id, std::string_view term);
Session unplace(const Session& s, std::string_view slot_id);
std::pair<Session, ScoreReport> submit(const Session& s, Timestamp submitted_at);
Session advance(const Session& s, const Lexicon& lex);

/// Session invariants: placements reference slots of the current puzzle and
/// terms of the owning bank, no term is placed twice within a network, and
/// history holds one entry per completed level in order.
std::vector<Violation> validate_session(const Session& s);

/// Higher total first, then earlier last submission, then smaller name.
bool ranks_before(const LeaderboardEntry& a, const LeaderboardEntry& b);
std::optional<std::string> winner(std::span<const LeaderboardEntry> entries);

}  // namespace ontoling
