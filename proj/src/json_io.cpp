#include "ontoling/json_io.hpp"

#include <set>

namespace ontoling {

std::int64_t to_millis(Timestamp t) noexcept { return t.time_since_epoch().count(); }

Timestamp from_millis(std::int64_t ms) noexcept {
  return Timestamp(std::chrono::milliseconds(ms));
}

namespace {

PartOfSpeech parse_pos(const json& j) {
  auto pos = pos_from_token(j.get<std::string>());
  if (!pos) throw Error(Errc::BadRequest, "unknown pos '" + j.get<std::string>() + "'");
  return *pos;
}

RelationKind parse_kind(const json& j) {
  auto kind = kind_from_token(j.get<std::string>());
  if (!kind) throw Error(Errc::BadRequest, "unknown kind '" + j.get<std::string>() + "'");
  return *kind;
}

}  // namespace

json to_json(const Puzzle& p, PuzzleDetail detail) {
  json networks = json::array();
  json answers = json::object();
  for (const auto& net : p.networks) {
    json slots = json::array();
    for (const auto& slot : net.slots) {
      json js = {{"slot_id", slot.slot_id},
                 {"pos", to_token(slot.pos)},
                 {"gloss", slot.gloss},
                 {"examples", slot.examples}};
      if (detail == PuzzleDetail::Internal) {
        js["synset_id"] = slot.synset_id;
        js["answer_lemmas"] = slot.answer_lemmas;
      }
      slots.push_back(std::move(js));
      answers[slot.slot_id] = slot.synset_id;
    }
    json edges = json::array();
    for (const auto& e : net.edges)
      edges.push_back({{"kind", to_token(e.kind)}, {"source", e.source}, {"target", e.target}});
    networks.push_back(
        {{"network_id", net.network_id}, {"slots", std::move(slots)}, {"edges", std::move(edges)}});
  }
  json out = {{"puzzle_id", p.puzzle_id},
              {"level", p.level},
              {"seed", p.seed},
              {"networks", std::move(networks)},
              {"banks", p.banks}};
  if (detail == PuzzleDetail::WithAnswers) out["answers"] = std::move(answers);
  return out;
}

PuzzleFile puzzle_from_json(const json& j) {
  PuzzleFile file;
  Puzzle& p = file.puzzle;
  p.puzzle_id = j.at("puzzle_id").get<std::string>();
  p.level = j.at("level").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& jn : j.at("networks")) {
    Network net;
    net.network_id = jn.at("network_id").get<std::string>();
    for (const auto& js : jn.at("slots")) {
      Slot slot;
      slot.slot_id = js.at("slot_id").get<std::string>();
      slot.pos = parse_pos(js.at("pos"));
      slot.gloss = js.at("gloss").get<std::string>();
      slot.examples = js.value("examples", std::vector<std::string>{});
      slot.synset_id = js.value("synset_id", std::string{});
      slot.answer_lemmas = js.value("answer_lemmas", std::vector<std::string>{});
      net.slots.push_back(std::move(slot));
    }
    for (const auto& je : jn.at("edges"))
      net.edges.push_back({parse_kind(je.at("kind")), je.at("source").get<std::string>(),
                           je.at("target").get<std::string>()});
    p.networks.push_back(std::move(net));
  }
  p.banks = j.at("banks").get<std::map<std::string, TermBank>>();
  if (j.contains("answers"))
    file.answers = j.at("answers").get<std::map<std::string, std::string>>();
  return file;
}

json to_json(const PlayerView& view) {
  json available = json::object();
  for (const auto& net : view.puzzle.networks) {
    std::set<std::string> placed;
    for (const auto& slot : net.slots)
      if (auto it = view.placements.find(slot.slot_id); it != view.placements.end())
        placed.insert(it->second);
    json terms = json::array();
    for (const auto& term : view.puzzle.banks.at(net.network_id))
      if (!placed.contains(term)) terms.push_back(term);
    available[net.network_id] = std::move(terms);
  }
  return {{"session_id", view.session_id},
          {"player", view.player},
          {"level", view.level},
          {"status", to_token(view.status)},
          {"puzzle", to_json(view.puzzle, PuzzleDetail::Player)},
          {"placements", view.placements},
          {"available", std::move(available)}};
}

json to_json(const ScoreReport& report) {
  json per_network = json::array();
  for (const auto& n : report.per_network)
    per_network.push_back({{"network_id", n.network_id},
                           {"correct_count", n.correct_count},
                           {"slot_count", n.slot_count},
                           {"score_percent", n.score_percent}});
  json verdicts = json::array();
  for (const auto& v : report.verdicts)
    verdicts.push_back({{"slot_id", v.slot_id},
                        {"placed", v.placed ? json(*v.placed) : json(nullptr)},
                        {"correct", v.correct},
                        {"expressions", v.expressions}});
  return {{"level", report.level},
          {"per_network", std::move(per_network)},
          {"verdicts", std::move(verdicts)},
          {"level_score", report.level_score},
          {"stars", report.stars},
          {"passed", report.passed}};
}

json to_json(const LeaderboardEntry& e) {
  return {{"player", e.player},
          {"total_score", e.total_score},
          {"levels_completed", e.levels_completed},
          {"last_submission", to_millis(e.last_submission)}};
}

json to_json(const LevelResult& r) {
  return {{"level", r.level},
          {"score", r.score},
          {"stars", r.stars},
          {"submitted_at", to_millis(r.submitted_at)}};
}

json session_to_json(const Session& s) {
  json history = json::array();
  for (const auto& r : s.history) history.push_back(to_json(r));
  return {{"session_id", s.session_id},
          {"player", s.player},
          {"lexicon_id", s.lexicon_id},
          {"base_seed", s.base_seed},
          {"current_level", s.current_level},
          {"status", to_token(s.status)},
          {"puzzle", to_json(s.puzzle, PuzzleDetail::Internal)},
          {"placements", s.placements},
          {"history", std::move(history)}};
}

Session session_from_json(const json& j) {
  Session s;
  s.session_id = j.at("session_id").get<std::string>();
  s.player = j.at("player").get<std::string>();
  s.lexicon_id = j.at("lexicon_id").get<std::string>();
  s.base_seed = j.at("base_seed").get<std::uint64_t>();
  s.current_level = j.at("current_level").get<int>();
  auto status = status_from_token(j.at("status").get<std::string>());
  if (!status) throw Error(Errc::BadRequest, "unknown session status");
  s.status = *status;
  s.puzzle = puzzle_from_json(j.at("puzzle")).puzzle;
  s.placements = j.at("placements").get<std::map<std::string, std::string>>();
  for (const auto& r : j.at("history"))
    s.history.push_back({r.at("level").get<int>(), r.at("score").get<int>(),
                         r.at("stars").get<int>(),
                         from_millis(r.at("submitted_at").get<std::int64_t>())});
  return s;
}

json session_summary(const Session& s) {
  json history = json::array();
  int total = 0;
  for (const auto& r : s.history) {
    history.push_back(to_json(r));
    total += r.score;
  }
  return {{"session_id", s.session_id},
          {"player", s.player},
          {"lexicon_id", s.lexicon_id},
          {"seed", s.base_seed},
          {"level", s.current_level},
          {"status", to_token(s.status)},
          {"total_score", total},
          {"history", std::move(history)}};
}

}  // namespace ontoling
