#include "ontoling/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "ontoling/rng.hpp"

namespace ontoling {

std::string_view to_token(SessionStatus status) noexcept {
  switch (status) {
    case SessionStatus::InProgress: return "in_progress";
    case SessionStatus::AwaitingAdvance: return "awaiting_advance";
    case SessionStatus::Completed: return "completed";
  }
  return "?";
}

std::optional<SessionStatus> status_from_token(std::string_view token) noexcept {
  for (auto s : {SessionStatus::InProgress, SessionStatus::AwaitingAdvance,
                 SessionStatus::Completed})
    if (to_token(s) == token) return s;
  return std::nullopt;
}

int percent_rounded(int correct, int total) {
  if (total <= 0) return 0;
  return (200 * correct + total) / (2 * total);
}

int mean_rounded(std::span<const int> values) {
  if (values.empty()) return 0;
  long long sum = 0;
  for (int v : values) sum += v;
  const auto n = static_cast<long long>(values.size());
  return static_cast<int>((2 * sum + n) / (2 * n));
}

int stars_for(int level_score) noexcept {
  if (level_score >= 90) return 3;
  if (level_score >= 70) return 2;
  if (level_score >= 50) return 1;
  return 0;
}

namespace {

const LevelSpec& spec_for(int level) {
  static const std::vector<LevelSpec> specs = builtin_level_specs();
  if (level < 1 || level > static_cast<int>(specs.size()))
    throw Error(Errc::UnknownLevel, "no level " + std::to_string(level));
  return specs[static_cast<std::size_t>(level - 1)];
}

void require_in_progress(const Session& s) {
  if (s.status != SessionStatus::InProgress)
    throw Error(Errc::SessionNotInProgress,
                "session is " + std::string(to_token(s.status)));
}

const Network& owning_network(const Session& s, std::string_view slot_id) {
  const auto* net = s.puzzle.network_of_slot(slot_id);
  if (!net) throw Error(Errc::UnknownSlot, "unknown slot '" + std::string(slot_id) + "'");
  return *net;
}

}  // namespace

ScoreReport grade(const Puzzle& puzzle,
                  const std::map<std::string, std::string>& placements) {
  ScoreReport report;
  report.level = puzzle.level;
  std::vector<int> percents;

  for (const auto& net : puzzle.networks) {
    std::map<std::string_view, const Slot*> slot_by_id;
    for (const auto& slot : net.slots) slot_by_id.emplace(slot.slot_id, &slot);
    auto term_for = [&](const std::string& slot_id) -> std::string {
      auto it = placements.find(slot_id);
      return it == placements.end() ? std::string("___") : it->second;
    };

    NetworkScore score{net.network_id, 0, static_cast<int>(net.slots.size()), 0};
    for (const auto& slot : net.slots) {
      SlotVerdict v;
      v.slot_id = slot.slot_id;
      if (auto it = placements.find(slot.slot_id); it != placements.end()) {
        v.placed = it->second;
        v.correct = slot.accepts(it->second);
      }
      for (const auto& e : net.edges) {
        if (e.source != slot.slot_id && e.target != slot.slot_id) continue;
        const auto src = slot_by_id.find(e.source);
        const PartOfSpeech src_pos =
            src == slot_by_id.end() ? slot.pos : src->second->pos;
        v.expressions.push_back(
            render_expression(e.kind, term_for(e.source), term_for(e.target), src_pos));
      }
      if (v.correct) ++score.correct_count;
      report.verdicts.push_back(std::move(v));
    }
    score.score_percent = percent_rounded(score.correct_count, score.slot_count);
    percents.push_back(score.score_percent);
    report.per_network.push_back(std::move(score));
  }

  report.level_score = mean_rounded(percents);
  report.stars = stars_for(report.level_score);
  report.passed = report.stars >= 1;
  return report;
}

Session new_session(std::string_view player, const Lexicon& lex,
                    std::string lexicon_id, std::uint64_t base_seed,
                    std::string session_id) {
  const auto first = player.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    throw Error(Errc::InvalidPlayer, "player name must not be empty");
  const auto last = player.find_last_not_of(" \t\r\n");

  Session s;
  if (session_id.empty()) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "s-%016llx",
                  static_cast<unsigned long long>(splitmix64(base_seed)));
    session_id = buf;
  }
  s.session_id = std::move(session_id);
  s.player = std::string(player.substr(first, last - first + 1));
  s.lexicon_id = std::move(lexicon_id);
  s.base_seed = base_seed;
  s.current_level = 1;
  s.status = SessionStatus::InProgress;
  s.puzzle = generate_puzzle(lex, spec_for(1), derive_seed(base_seed, 1));
  return s;
}

PlayerView player_view(const Session& s) {
  if (s.status == SessionStatus::Completed)
    throw Error(Errc::SessionCompleted, "session is completed");
  PlayerView view{s.session_id, s.player, s.current_level, s.status, s.puzzle,
                  s.placements};
  for (auto& net : view.puzzle.networks) {
    for (auto& slot : net.slots) {
      slot.synset_id.clear();
      slot.answer_lemmas.clear();
    }
  }
  return view;
}

Session place(const Session& s, std::string_view slot_id, std::string_view term) {
  require_in_progress(s);
  const Network& net = owning_network(s, slot_id);

  std::string norm;
  try {
    norm = normalize_term(term);
  } catch (const Error&) {
    throw Error(Errc::TermNotInBank, "empty term");
  }
  const auto& bank = s.puzzle.banks.at(net.network_id);
  if (std::find(bank.begin(), bank.end(), norm) == bank.end())
    throw Error(Errc::TermNotInBank, "'" + norm + "' is not in the bank");

  for (const auto& other : net.slots) {
    if (other.slot_id == slot_id) continue;
    auto it = s.placements.find(other.slot_id);
    if (it != s.placements.end() && it->second == norm)
      throw Error(Errc::TermAlreadyPlaced,
                  "'" + norm + "' is already placed in " + other.slot_id);
  }

  Session out = s;
  out.placements[std::string(slot_id)] = std::move(norm);
  return out;
}

Session unplace(const Session& s, std::string_view slot_id) {
  require_in_progress(s);
  owning_network(s, slot_id);
  auto it = s.placements.find(std::string(slot_id));
  if (it == s.placements.end())
    throw Error(Errc::NothingPlaced, "nothing placed in " + std::string(slot_id));
  Session out = s;
  out.placements.erase(std::string(slot_id));
  return out;
}

std::pair<Session, ScoreReport> submit(const Session& s, Timestamp submitted_at) {
  require_in_progress(s);
  std::string empty;
  for (const auto& net : s.puzzle.networks)
    for (const auto& slot : net.slots)
      if (!s.placements.contains(slot.slot_id))
        empty += (empty.empty() ? "" : ", ") + slot.slot_id;
  if (!empty.empty())
    throw Error(Errc::IncompletePlacement, "empty slots: " + empty);

  ScoreReport report = grade(s.puzzle, s.placements);
  Session out = s;
  if (report.passed) {
    out.history.push_back(
        {s.current_level, report.level_score, report.stars, submitted_at});
    out.status = s.current_level < kLevelCount ? SessionStatus::AwaitingAdvance
                                               : SessionStatus::Completed;
  }
  return {std::move(out), std::move(report)};
}

Session advance(const Session& s, const Lexicon& lex) {
  if (s.status == SessionStatus::Completed)
    throw Error(Errc::AlreadyCompleted, "all levels are completed");
  if (s.status != SessionStatus::AwaitingAdvance)
    throw Error(Errc::NotPassed, "current level has not been passed");
  Session out = s;
  out.current_level = s.current_level + 1;
  out.puzzle = generate_puzzle(lex, spec_for(out.current_level),
                               derive_seed(s.base_seed, out.current_level));
  out.placements.clear();
  out.status = SessionStatus::InProgress;
  return out;
}

bool ranks_before(const LeaderboardEntry& a, const LeaderboardEntry& b) {
  if (a.total_score != b.total_score) return a.total_score > b.total_score;
  if (a.last_submission != b.last_submission)
    return a.last_submission < b.last_submission;
  return a.player < b.player;
}

std::optional<std::string> winner(std::span<const LeaderboardEntry> entries) {
  if (entries.empty()) return std::nullopt;
  return std::min_element(entries.begin(), entries.end(), ranks_before)->player;
}

std::vector<Violation> validate_session(const Session& s) {
  std::vector<Violation> out;
  auto add = [&](std::string subject, std::string detail) {
    out.push_back({Errc::CorruptRecord, std::move(subject), std::move(detail)});
  };
  if (s.player.empty()) add(s.session_id, "empty player");
  if (s.current_level < 1 || s.current_level > kLevelCount)
    add(s.session_id, "level out of range");
  if (s.puzzle.level != s.current_level) add(s.session_id, "puzzle level mismatch");

  for (const auto& [slot_id, term] : s.placements) {
    const auto* net = s.puzzle.network_of_slot(slot_id);
    if (!net) {
      add(slot_id, "placement for unknown slot");
      continue;
    }
    auto bank = s.puzzle.banks.find(net->network_id);
    if (bank == s.puzzle.banks.end() ||
        std::find(bank->second.begin(), bank->second.end(), term) == bank->second.end())
      add(slot_id, "placed term '" + term + "' is not in the bank");
  }
  for (const auto& net : s.puzzle.networks) {
    std::set<std::string> seen;
    for (const auto& slot : net.slots) {
      auto it = s.placements.find(slot.slot_id);
      if (it != s.placements.end() && !seen.insert(it->second).second)
        add(net.network_id, "term '" + it->second + "' placed twice");
    }
  }

  const int completed = s.status == SessionStatus::InProgress ? s.current_level - 1
                                                              : s.current_level;
  if (static_cast<int>(s.history.size()) != completed)
    add(s.session_id, "history does not match completed levels");
  for (std::size_t i = 0; i < s.history.size(); ++i)
    if (s.history[i].level != static_cast<int>(i) + 1)
      add(s.session_id, "history out of level order");
  return out;
}

}  // namespace ontoling
