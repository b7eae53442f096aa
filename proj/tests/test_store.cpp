#include <doctest.h>

#include <thread>

#include "ontoling/json_io.hpp"
#include "ontoling/store.hpp"
#include "support/oracles.hpp"
#include "support/support.hpp"

using namespace ontoling;
using testsupport::at_ms;
using testsupport::fixture;
using testsupport::TempDir;

namespace {

Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::BadRequest;
}

/// A valid session reached by a random walk of engine operations.
Session random_session(Rng& rng) {
  Session s = new_session("p" + std::to_string(rng.below(1000)), fixture(), "fx", rng.next(),
                          "s" + std::to_string(rng.next()));
  const int levels = rng.between(0, 4);
  for (int l = 0; l < levels && s.status != SessionStatus::Completed; ++l) {
    s = testsupport::place_all(s, testsupport::perfect_placements(s.puzzle));
    s = submit(s, at_ms(static_cast<std::int64_t>(rng.below(1'000'000'000)))).first;
    if (s.status != SessionStatus::AwaitingAdvance || rng.below(4) == 0) break;
    s = advance(s, fixture());
  }
  if (s.status == SessionStatus::InProgress) {
    const Puzzle puzzle = s.puzzle;
    for (const auto& net : puzzle.networks) {
      const auto bank = puzzle.banks.at(net.network_id);
      for (const auto& slot : net.slots) {
        if (rng.below(2)) continue;
        try {
          s = place(s, slot.slot_id, bank[rng.below(bank.size())]);
        } catch (const Error&) {
        }
      }
    }
  }
  return s;
}

}  // namespace

TEST_CASE("save then load returns the same session") {
  TempDir dir;
  Store store(dir.path());
  const Session s = new_session("ana", fixture(), "fx", 7, "sess-1");
  store.save_session({s, kSchemaVersion, at_ms(42)});
  const SessionRecord back = store.load_session("sess-1");
  CHECK(back.session == s);
  CHECK(back.saved_at == at_ms(42));
  CHECK(back.schema_version == kSchemaVersion);
  CHECK(testsupport::fs::exists(dir.path() / "sessions" / "sess-1.json"));
}

TEST_CASE("save round trip holds for generated sessions") {
  TempDir dir;
  Store store(dir.path());
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    const Session s = random_session(rng);
    REQUIRE(validate_session(s).empty());
    store.save_session({s, kSchemaVersion, at_ms(i)});
    CHECK(store.load_session(s.session_id).session == s);
  }
}

TEST_CASE("last write wins") {
  TempDir dir;
  Store store(dir.path());
  Session s = new_session("ana", fixture(), "fx", 7, "s1");
  store.save_session({s, kSchemaVersion, at_ms(1)});
  s = place(s, s.puzzle.networks[0].slots[0].slot_id, s.puzzle.banks.at("n1")[0]);
  store.save_session({s, kSchemaVersion, at_ms(2)});
  CHECK(store.load_session("s1").session == s);
}

TEST_CASE("an interrupted write leaves the previous version readable") {
  TempDir dir;
  Store store(dir.path());
  const Session v1 = new_session("ana", fixture(), "fx", 7, "s1");
  store.save_session({v1, kSchemaVersion, at_ms(1)});

  Session v2 = place(v1, v1.puzzle.networks[0].slots[0].slot_id, v1.puzzle.banks.at("n1")[0]);
  bool temp_was_complete = false;
  store.set_before_rename_hook([&](const testsupport::fs::path& tmp) {
    temp_was_complete = json::parse(testsupport::read_text(tmp))["session"]["placements"].size() == 1;
    throw std::runtime_error("simulated crash");
  });
  CHECK(error_code([&] { store.save_session({v2, kSchemaVersion, at_ms(2)}); }) ==
        Errc::StorageFailure);
  CHECK(temp_was_complete);
  CHECK(store.load_session("s1").session == v1);

  // No temp files are left behind.
  int files = 0;
  for (const auto& e : testsupport::fs::directory_iterator(dir.path() / "sessions")) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);

  store.set_before_rename_hook(nullptr);
  store.save_session({v2, kSchemaVersion, at_ms(3)});
  CHECK(store.load_session("s1").session == v2);
}

TEST_CASE("load errors") {
  TempDir dir;
  Store store(dir.path());
  CHECK(error_code([&] { store.load_session("missing"); }) == Errc::NotFound);
  CHECK(error_code([&] { store.load_session("../etc/passwd"); }) == Errc::NotFound);

  const Session s = new_session("ana", fixture(), "fx", 7, "s1");
  store.save_session({s, kSchemaVersion, at_ms(1)});
  const auto path = dir.path() / "sessions" / "s1.json";
  const std::string good = testsupport::read_text(path);

  testsupport::write_text(path, good.substr(0, good.size() / 2));
  CHECK(error_code([&] { store.load_session("s1"); }) == Errc::CorruptRecord);

  json doc = json::parse(good);
  doc["schema_version"] = 999;
  testsupport::write_text(path, doc.dump());
  try {
    store.load_session("s1");
    FAIL("expected VersionUnsupported");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::VersionUnsupported);
    CHECK(std::string(e.what()) == "VersionUnsupported(999, 1)");
  }

  doc = json::parse(good);
  doc["session"]["placements"]["n1-s1"] = "not a bank term";
  testsupport::write_text(path, doc.dump());
  CHECK(error_code([&] { store.load_session("s1"); }) == Errc::CorruptRecord);

  doc = json::parse(good);
  doc["session"].erase("player");
  testsupport::write_text(path, doc.dump());
  CHECK(error_code([&] { store.load_session("s1"); }) == Errc::CorruptRecord);
}

TEST_CASE("unsafe session ids are refused on save") {
  TempDir dir;
  Store store(dir.path());
  const Session s = new_session("ana", fixture(), "fx", 7, "../escape");
  CHECK(error_code([&] { store.save_session({s, kSchemaVersion, at_ms(1)}); }) ==
        Errc::StorageFailure);
}

TEST_CASE("leaderboard examples") {
  TempDir dir;
  Store store(dir.path());
  store.append_result({"ana", "s1", 1, 100, 3, at_ms(1)});
  store.append_result({"ana", "s1", 2, 90, 3, at_ms(2)});
  store.append_result({"ben", "s2", 1, 95, 3, at_ms(3)});
  auto board = store.leaderboard(10);
  REQUIRE(board.size() == 2);
  CHECK(board[0] == LeaderboardEntry{"ana", 190, 2, at_ms(2)});
  CHECK(board[1] == LeaderboardEntry{"ben", 95, 1, at_ms(3)});
  CHECK(store.leaderboard(1).size() == 1);
  CHECK(store.leaderboard(0).empty());
}

TEST_CASE("a resubmitted level counts its best passing score once") {
  const std::vector<ResultLogEntry> log = {{"ana", "s1", 1, 50, 1, at_ms(1)},
                                           {"ana", "s1", 1, 100, 3, at_ms(2)},
                                           {"ana", "s1", 1, 20, 0, at_ms(3)}};
  const auto board = aggregate_leaderboard(log);
  REQUIRE(board.size() == 1);
  CHECK(board[0].total_score == 100);
  CHECK(board[0].levels_completed == 1);
  CHECK(board[0].last_submission == at_ms(3));
  CHECK(board == oracle::leaderboard(log));
}

TEST_CASE("leaderboard equals brute-force aggregation of random logs") {
  Rng rng(5150);
  for (int round = 0; round < 200; ++round) {
    std::vector<ResultLogEntry> log;
    const int n = rng.between(0, 100);
    for (int i = 0; i < n; ++i) {
      const int score = rng.between(0, 100);
      log.push_back({std::string(1, static_cast<char>('a' + rng.below(5))),
                     "s" + std::to_string(rng.below(4)), rng.between(1, 4), score,
                     stars_for(score), at_ms(static_cast<std::int64_t>(rng.below(50)))});
    }
    const auto board = aggregate_leaderboard(log);
    CHECK(board == oracle::leaderboard(log));
    for (const auto& e : board) CHECK(e.total_score <= 100 * e.levels_completed);
  }
}

TEST_CASE("result log survives restarts and skips a torn last line") {
  TempDir dir;
  {
    Store store(dir.path());
    store.append_result({"ana", "s1", 1, 100, 3, at_ms(1)});
  }
  {
    std::ofstream out(dir.path() / "results.log", std::ios::app);
    out << "{\"player\":\"ben\",\"sess";
  }
  Store store(dir.path());
  const auto entries = store.read_results();
  REQUIRE(entries.size() == 1);
  CHECK(entries[0] == ResultLogEntry{"ana", "s1", 1, 100, 3, at_ms(1)});
}

TEST_CASE("concurrent appends and saves do not interleave") {
  TempDir dir;
  Store store(dir.path());
  constexpr int kThreads = 8;
  constexpr int kEach = 50;
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      Session s = new_session("p" + std::to_string(t), fixture(), "fx",
                              static_cast<std::uint64_t>(t), "s" + std::to_string(t));
      for (int i = 0; i < kEach; ++i) {
        store.append_result({"p" + std::to_string(t), s.session_id, 1, i, stars_for(i), at_ms(i)});
        store.save_session({s, kSchemaVersion, at_ms(i)});
        store.save_session({s, kSchemaVersion, at_ms(i)});
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(store.read_results().size() == kThreads * kEach);
  for (int t = 0; t < kThreads; ++t)
    CHECK(store.load_session("s" + std::to_string(t)).session.player == "p" + std::to_string(t));
}

TEST_CASE("default data directory honours the environment") {
  ::setenv("ONTOLING_DATA_DIR", "/tmp/somewhere", 1);
  CHECK(Store::default_data_dir() == "/tmp/somewhere");
  ::unsetenv("ONTOLING_DATA_DIR");
  CHECK(Store::default_data_dir() == "data");
}
