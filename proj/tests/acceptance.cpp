// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "ontoling/cli.hpp"
#include "ontoling/engine.hpp"
#include "ontoling/json_io.hpp"
#include "ontoling/levels.hpp"
#include "ontoling/store.hpp"
#include "support/live.hpp"
#include "support/oracles.hpp"

using namespace ontoling;
using testsupport::at_ms;
using testsupport::fixture;
using testsupport::perfect_placements;
using testsupport::place_all;

namespace {

/// Collects failures for one criterion; only the first few are printed.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++failed_;
  }
  int failed() const { return failed_; }
  int checks() const { return checks_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  int checks_ = 0;
  int failed_ = 0;
  std::vector<std::string> failures_;
};

std::set<PartOfSpeech> pos_set(const Network& n) {
  std::set<PartOfSpeech> out;
  for (const auto& s : n.slots) out.insert(s.pos);
  return out;
}

std::set<RelationKind> kind_set(const Network& n) {
  std::set<RelationKind> out;
  for (const auto& e : n.edges) out.insert(e.kind);
  return out;
}

std::string where(int level, std::uint64_t seed) {
  return "level " + std::to_string(level) + " seed " + std::to_string(seed);
}

std::string level_conformance(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  for (int level = 1; level <= kLevelCount; ++level) {
    const auto& spec = testsupport::builtin_spec(level);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Puzzle p = generate_puzzle(fixture(), spec, seed);
      const auto at = where(level, seed);
      c.expect(validate_puzzle(p, fixture(), spec).empty(), at + ": validate_puzzle");
      for (const auto& net : p.networks) {
        c.expect(oracle::connected(net), at + ": disconnected network");
        const auto pos = pos_set(net);
        const auto kinds = kind_set(net);
        if (level == 1) {
          c.expect(pos.size() == 1, at + ": level 1 network mixes POS");
          c.expect(kinds == std::set{RelationKind::WordFor}, at + ": level 1 edge not word_for");
        } else if (level == 2) {
          c.expect(pos.size() == 2, at + ": level 2 network POS count");
          c.expect(kinds.size() == 2, at + ": level 2 network relation kind count");
        } else {
          c.expect(pos.size() == 4, at + ": network lacks a POS");
        }
      }
      const std::size_t want = level == 1 ? 4 : level == 2 ? 2 : 1;
      c.expect(p.networks.size() == want, at + ": network count");
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 10.0, "runtime " + std::to_string(secs) + " s");
  const auto sizes = std::to_string(fixture().synsets().size()) + " synsets";
  c.expect(fixture().synsets().size() >= 60, "fixture has only " + sizes);
  std::ostringstream note;
  note << "400 puzzles, " << sizes << ", " << secs << " s";
  return note.str();
}

std::string determinism(Check& c) {
  testsupport::TempDir dir;
  const std::string lex = testsupport::fixture_path().string();
  int files = 0;
  for (int level = 1; level <= kLevelCount; ++level) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::string bytes[2];
      for (int round = 0; round < 2; ++round) {
        const auto file = dir.path() / ("p" + std::to_string(round) + ".json");
        std::ostringstream out, err;
        const int code = cli::run({"gen", "--lexicon", lex, "--level", std::to_string(level),
                                   "--seed", std::to_string(seed), "--with-answers", "--out",
                                   file.string()},
                                  out, err);
        c.expect(code == 0, where(level, seed) + ": gen exit " + std::to_string(code));
        bytes[round] = testsupport::read_text(file);
      }
      c.expect(!bytes[0].empty() && bytes[0] == bytes[1], where(level, seed) + ": bytes differ");
      ++files;
    }
  }

  auto play = [](std::uint64_t base_seed) {
    Rng rng(base_seed);
    Session s = new_session("ben", fixture(), "fx", base_seed, "replay");
    std::vector<ScoreReport> reports;
    while (true) {
      const auto first = testsupport::placements_with_errors(s.puzzle, rng, 1);
      auto [after, report] = submit(place_all(s, first), at_ms(1));
      reports.push_back(report);
      if (!report.passed) {
        std::tie(after, report) = submit(place_all(after, perfect_placements(s.puzzle)), at_ms(2));
        reports.push_back(report);
      }
      if (after.status == SessionStatus::Completed) break;
      s = advance(after, fixture());
    }
    return reports;
  };
  int replays = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = play(seed);
    c.expect(a == play(seed), "replay diverged for base seed " + std::to_string(seed));
    ++replays;
  }
  return std::to_string(files) + " file pairs, " + std::to_string(replays) + " replays";
}

std::string scoring_oracle(Check& c) {
  std::size_t maps = 0;
  for (int networks = 1; networks <= 2; ++networks) {
    for (int distractors = 0; distractors <= 2; ++distractors) {
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        LevelSpec spec;
        spec.level = 1;
        spec.network_count = networks;
        spec.pos_kinds_per_network = 1;
        spec.relation_kinds_per_network = {1, 2};
        spec.allowed_kinds = all_relation_kinds();
        spec.nodes_per_network = {2, 3};
        spec.distractors_per_network = distractors;
        const Puzzle p = generate_puzzle(fixture(), spec, seed * 977 + 13);
        Session base = new_session("ana", fixture(), "fx", 1);
        base.puzzle = p;
        base.placements.clear();

        std::vector<std::vector<std::map<std::string, std::string>>> per_net;
        for (const auto& net : p.networks) {
          c.expect(net.slots.size() <= 3 && p.banks.at(net.network_id).size() <= 5,
                   "puzzle exceeds the enumeration bounds");
          per_net.push_back(oracle::all_complete_placements(net, p.banks.at(net.network_id)));
        }
        std::vector<std::size_t> idx(per_net.size(), 0);
        while (true) {
          std::map<std::string, std::string> placements;
          for (std::size_t n = 0; n < per_net.size(); ++n)
            placements.insert(per_net[n][idx[n]].begin(), per_net[n][idx[n]].end());
          const auto report = submit(place_all(base, placements), at_ms(1)).second;
          const auto tallies = oracle::tally(p, fixture(), placements);
          for (std::size_t n = 0; n < tallies.size(); ++n)
            c.expect(report.per_network[n].correct_count == tallies[n].correct,
                     "correct_count mismatch");
          c.expect(report.level_score == oracle::level_score(tallies), "level_score mismatch");
          ++maps;
          std::size_t k = 0;
          while (k < idx.size() && ++idx[k] == per_net[k].size()) idx[k++] = 0;
          if (k == idx.size()) break;
        }
      }
    }
  }
  c.expect(maps > 1000, "too few placement maps enumerated");
  return std::to_string(maps) + " placement maps";
}

std::string expression_templates(Check& c) {
  using K = RelationKind;
  using P = PartOfSpeech;
  const struct {
    K kind;
    const char* source;
    const char* target;
    P pos;
    const char* want;
  } pairs[] = {
      {K::KindOf, "wheat", "grain", P::Noun, "wheat is a kind of grain"},
      {K::KindOf, "trot", "walk", P::Verb, "trot is one way to walk"},
      {K::InstanceOf, "Einstein", "physicist", P::Noun, "Einstein is an instance of physicist"},
      {K::MemberOf, "robin", "thrushes", P::Noun, "robin is a member of thrushes"},
      {K::PartOf, "wheel", "wheeled vehicle", P::Noun, "wheel is a part of wheeled vehicle"},
      {K::SubstanceOf, "caffeine", "coffee", P::Noun, "caffeine is a substance of coffee"},
      {K::Derivation, "unhappy", "happy", P::Adjective, "unhappy derives from happy"},
      {K::WordFor, "wheat", "wheat germ", P::Noun, "wheat is a word for wheat germ"},
  };
  for (const auto& p : pairs) {
    const std::string got = render_expression(p.kind, p.source, p.target, p.pos);
    c.expect(got == p.want, "got \"" + got + "\" want \"" + p.want + "\"");
  }
  return std::to_string(std::size(pairs)) + " pairs";
}

Errc parse_error(std::string_view text) {
  try {
    parse_lexicon(text);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::BadRequest;
}

std::string graph_validation(Check& c) {
  c.expect(parse_error("synset a noun \"g\" a\nsynset b noun \"g\" b\nsynset c noun \"g\" c\n"
                       "rel kind_of a b\nrel instance_of b c\nrel kind_of c a\n") ==
               Errc::TaxonomyCycle,
           "cycle not rejected with TaxonomyCycle");
  c.expect(parse_error("synset wheat noun \"g\" wheat\nrel kind_of wheat oats\n") ==
               Errc::DanglingEndpoint,
           "dangling endpoint not rejected with DanglingEndpoint");
  c.expect(parse_error("synset a adj \"g\" blue\nsynset b noun \"g\" colour\n"
                       "rel kind_of a b\n") == Errc::PosViolation,
           "POS-incompatible relation not rejected with PosViolation");

  Rng rng(20240);
  int cyclic = 0;
  for (int round = 0; round < 200; ++round) {
    const int n = rng.between(1, 8);
    std::set<std::pair<int, int>> edge_set;
    std::vector<Relation> relations;
    const int m = rng.between(0, n * 2);
    for (int k = 0; k < m; ++k) {
      const int a = rng.between(0, n - 1), b = rng.between(0, n - 1);
      if (a == b || !edge_set.insert({a, b}).second) continue;
      const auto kind = rng.below(2) ? RelationKind::KindOf : RelationKind::InstanceOf;
      relations.push_back({kind, "s" + std::to_string(a), "s" + std::to_string(b)});
    }
    std::vector<Synset> synsets;
    for (int i = 0; i < n; ++i) {
      const std::string id = "s" + std::to_string(i);
      synsets.push_back({id, PartOfSpeech::Noun, "g", {id}, {}});
    }
    std::sort(relations.begin(), relations.end());
    bool reported = false;
    for (const auto& v : validate_lexicon(Lexicon(synsets, relations)))
      reported |= v.rule == Errc::TaxonomyCycle;
    const bool truth = oracle::has_cycle_by_paths(
        n, std::vector<std::pair<int, int>>(edge_set.begin(), edge_set.end()));
    c.expect(reported == truth, "cycle verdict differs in round " + std::to_string(round));
    cyclic += truth;
  }
  return "3 rejections, 200 graphs (" + std::to_string(cyclic) + " cyclic)";
}

std::string round_trip(Check& c) {
  Rng rng(2024);
  for (int i = 0; i < 50; ++i) {
    const Lexicon lex = testsupport::random_lexicon(rng, rng.between(1, 25));
    c.expect(validate_lexicon(lex).empty(), "generator produced an invalid lexicon");
    const std::string text = serialize_lexicon(lex);
    const Lexicon back = parse_lexicon(text);
    c.expect(back == lex, "parse(serialize(x)) != x for lexicon " + std::to_string(i));

    // Declaration order must not matter.
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    for (int k = 0; k < 3; ++k) {
      rng.shuffle(std::span(lines));
      std::string shuffled;
      for (const auto& line : lines) shuffled += line + "\n";
      c.expect(serialize_lexicon(parse_lexicon(shuffled)) == text,
               "order-dependent serialization for lexicon " + std::to_string(i));
    }
  }
  return "50 lexicons, 3 shuffles each";
}

std::string full_playthrough(Check& c) {
  Session s = new_session("ana", fixture(), testsupport::fixture_id(), 2024, "ana-1");
  std::vector<ResultLogEntry> log;
  int total = 0;
  for (int level = 1; level <= kLevelCount; ++level) {
    c.expect(s.current_level == level, "wrong level reached");
    auto [after, report] = submit(place_all(s, perfect_placements(s.puzzle)), at_ms(100 + level));
    c.expect(report.stars == 3, "level " + std::to_string(level) + " earned " +
                                    std::to_string(report.stars) + " stars");
    total += report.level_score;
    log.push_back({"ana", s.session_id, level, report.level_score, report.stars,
                   after.history.back().submitted_at});
    s = after;
    if (level < kLevelCount) s = advance(s, fixture());
  }
  c.expect(total == 400, "total score " + std::to_string(total));
  c.expect(s.status == SessionStatus::Completed, "session not completed");

  // The opponent finishes earlier with 295 points.
  log.push_back({"ben", "ben-1", 1, 100, 3, at_ms(1)});
  log.push_back({"ben", "ben-1", 2, 100, 3, at_ms(2)});
  log.push_back({"ben", "ben-1", 3, 95, 3, at_ms(3)});
  const auto board = aggregate_leaderboard(log);
  c.expect(board.size() == 2 && board[1].total_score == 295, "opponent total is not 295");
  c.expect(winner(board) == "ana", "winner is not the perfect player");

  // The CLI grade path agrees on every level.
  testsupport::TempDir dir;
  const std::string lex = testsupport::fixture_path().string();
  int cli_total = 0;
  for (int level = 1; level <= kLevelCount; ++level) {
    const auto puzzle = dir.path() / "puzzle.json";
    const auto answers = dir.path() / "answers.json";
    std::ostringstream out, err, graded;
    cli::run({"gen", "--lexicon", lex, "--level", std::to_string(level), "--seed",
              std::to_string(derive_seed(2024, level)), "--with-answers", "--out",
              puzzle.string()},
             out, err);
    auto file = puzzle_from_json(json::parse(testsupport::read_text(puzzle)));
    c.expect(file.answers.has_value(), "gen --with-answers wrote no answers");
    if (!file.answers) continue;
    attach_answers(file.puzzle, fixture(), *file.answers);
    testsupport::write_text(answers, json(perfect_placements(file.puzzle)).dump());
    const int code = cli::run({"grade", "--lexicon", lex, "--puzzle", puzzle.string(),
                               "--answers", answers.string(), "--format", "json"},
                              graded, err);
    c.expect(code == 0, "grade exit " + std::to_string(code));
    if (code != 0) continue;
    const json report = json::parse(graded.str());
    c.expect(report["stars"] == 3, "CLI grade below 3 stars");
    cli_total += report["level_score"].get<int>();
  }
  c.expect(cli_total == 400, "CLI grade total " + std::to_string(cli_total));
  return "engine 400, CLI 400, winner over 295";
}

std::string service_equivalence(Check& c) {
  testsupport::TempDir dir;
  testsupport::LiveService live(dir.path());
  std::int64_t clock_ms = 0;
  live.service().set_clock([&] { return at_ms(clock_ms += 10); });

  int submissions = 0;
  const char* players[] = {"ana", "ben", "cy", "dee", "eve", "fay"};
  for (int i = 0; i < 6; ++i) {
    const auto seed = static_cast<std::uint64_t>(1000 + 37 * i);
    const auto result = testsupport::http_playthrough(live, players[i], seed, i % 3);
    c.expect(result.equivalent, std::string(players[i]) + ": " + result.mismatch);
    c.expect(result.engine.status == SessionStatus::Completed,
             std::string(players[i]) + " did not complete");
    submissions += result.submissions;
  }

  const auto served = live.get("/v1/leaderboard?limit=100");
  const auto expected = aggregate_leaderboard(Store(dir.path()).read_results());
  json entries = json::array();
  for (const auto& e : expected) entries.push_back(to_json(e));
  c.expect(served.body["entries"] == entries, "leaderboard differs from the result log");
  c.expect(served.body["winner"] == (winner(expected) ? json(*winner(expected)) : json()),
           "winner differs");

  const auto leaks = live.leaks();
  for (const auto& leak : leaks) c.expect(false, "leak: " + leak.substr(0, 160));
  return std::to_string(submissions) + " submissions, " +
         std::to_string(live.responses_checked()) + " responses scanned, " +
         std::to_string(leaks.size()) + " leaks";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<std::string(Check&)>>> criteria = {
      {"level-structure conformance", level_conformance},
      {"determinism", determinism},
      {"scoring oracle", scoring_oracle},
      {"expression templates", expression_templates},
      {"graph validation", graph_validation},
      {"round trip", round_trip},
      {"full playthrough", full_playthrough},
      {"service equivalence", service_equivalence},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    std::string note;
    try {
      note = run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = c.failed() == 0;
    failed += !ok;
    std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << c.checks() << " checks";
    if (!note.empty()) std::cout << "; " << note;
    std::cout << ")\n";
    for (const auto& f : c.failures()) std::cout << "     " << f << "\n";
    std::cout.flush();
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << "\n";
  return failed == 0 ? 0 : 1;
}
