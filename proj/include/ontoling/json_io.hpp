#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "ontoling/engine.hpp"
#include "ontoling/levels.hpp"

namespace ontoling {

using json = nlohmann::json;

enum class PuzzleDetail {
  Player,       // no synset ids, no lemmas
  WithAnswers,  // player fields plus an `answers` {slot_id: synset_id} section
  Internal,     // slots carry synset_id and answer_lemmas (persistence only)
};

json to_json(const Puzzle& p, PuzzleDetail detail);

struct PuzzleFile {
  Puzzle puzzle;
  std::optional<std::map<std::string, std::string>> answers;
};

/// Accepts any PuzzleDetail form. Throws json exceptions or Error(BadRequest).
PuzzleFile puzzle_from_json(const json& j);

json to_json(const PlayerView& view);
json to_json(const ScoreReport& report);
json to_json(const LeaderboardEntry& entry);
json to_json(const LevelResult& result);

/// Full session including server-side answer data.
json session_to_json(const Session& s);
Session session_from_json(const json& j);

/// Public summary: level, status, history. No puzzle.
json session_summary(const Session& s);

std::int64_t to_millis(Timestamp t) noexcept;
Timestamp from_millis(std::int64_t ms) noexcept;

}  // namespace ontoling
