#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ontoling/engine.hpp"
#include "ontoling/json_io.hpp"
#include "ontoling/levels.hpp"
#include "ontoling/lexicon.hpp"
#include "ontoling/store.hpp"

namespace py = pybind11;
using namespace ontoling;

// Structured values cross the boundary as JSON text; the Python package
// decodes them into dicts.
namespace {

const LevelSpec& spec_for(int level) {
  static const auto specs = builtin_level_specs();
  if (level < 1 || level > static_cast<int>(specs.size()))
    throw Error(Errc::UnknownLevel, "UnknownLevel(" + std::to_string(level) + ")");
  return specs[static_cast<std::size_t>(level - 1)];
}

RelationKind kind_arg(const std::string& token) {
  if (auto k = kind_from_token(token)) return *k;
  throw Error(Errc::BadRequest, "unknown relation kind '" + token + "'");
}

PartOfSpeech pos_arg(const std::string& token) {
  if (auto p = pos_from_token(token)) return *p;
  throw Error(Errc::BadRequest, "unknown part of speech '" + token + "'");
}

/// Mutable handle over the value-semantic engine.
class Game {
 public:
  Game(const Lexicon& lex, const std::string& player, std::uint64_t seed)
      : lex_(lex), session_(new_session(player, lex, lexicon_fingerprint(lex), seed)) {}

  std::string view() const { return to_json(player_view(session_)).dump(); }
  std::string summary() const { return session_summary(session_).dump(); }
  std::string state() const { return session_to_json(session_).dump(); }

  void place(const std::string& slot, const std::string& term) {
    session_ = ontoling::place(session_, slot, term);
  }
  void unplace(const std::string& slot) { session_ = ontoling::unplace(session_, slot); }
  std::string submit(std::int64_t at_ms) {
    auto [next, report] = ontoling::submit(session_, from_millis(at_ms));
    session_ = std::move(next);
    return to_json(report).dump();
  }
  void advance() { session_ = ontoling::advance(session_, lex_); }

  /// The accepted bank term for every slot of the current puzzle.
  std::map<std::string, std::string> solution() const {
    std::map<std::string, std::string> out;
    for (const auto& net : session_.puzzle.networks)
      for (const auto& slot : net.slots)
        for (const auto& term : session_.puzzle.banks.at(net.network_id))
          if (slot.accepts(term)) out[slot.slot_id] = term;
    return out;
  }

 private:
  Lexicon lex_;
  Session session_;
};

}  // namespace

PYBIND11_MODULE(_ontoling, m) {
  m.doc() = "Lexicon, puzzle generation and game engine";

  static py::exception<Error> error(m, "OntolingError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      PyErr_SetObject(exc.ptr(),
                      py::make_tuple(std::string(to_string(e.code())), e.what()).ptr());
    }
  });

  m.attr("LEVEL_COUNT") = kLevelCount;

  py::class_<Lexicon>(m, "Lexicon")
      .def_property_readonly("synset_count", [](const Lexicon& l) { return l.synsets().size(); })
      .def_property_readonly("relation_count",
                             [](const Lexicon& l) { return l.relations().size(); })
      .def("serialize", &serialize_lexicon)
      .def("fingerprint", &lexicon_fingerprint)
      .def("lemmas", [](const Lexicon& l, const std::string& id) { return l.at(id).lemmas; })
      .def("__eq__", [](const Lexicon& a, const Lexicon& b) { return a == b; });

  m.def("parse_lexicon", [](const std::string& text) { return parse_lexicon(text); });
  m.def("check_lexicon", [](const std::string& text) {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& v : validate_lexicon(parse_lexicon_unchecked(text)))
      out.emplace_back(std::string(to_string(v.rule)), v.subject, v.detail);
    return out;
  });
  m.def("normalize_term", [](const std::string& raw) { return normalize_term(raw); });
  m.def("render_expression",
        [](const std::string& kind, const std::string& source, const std::string& target,
           const std::string& pos) {
          return render_expression(kind_arg(kind), source, target, pos_arg(pos));
        });
  m.def("derive_seed", &derive_seed);

  m.def("generate_puzzle_json",
        [](const Lexicon& lex, int level, std::uint64_t seed, bool with_answers) {
          const Puzzle p = generate_puzzle(lex, spec_for(level), seed);
          return to_json(p, with_answers ? PuzzleDetail::WithAnswers : PuzzleDetail::Player)
              .dump(2);
        });
  m.def("grade_json", [](const Lexicon& lex, const std::string& puzzle_json,
                         const std::map<std::string, std::string>& placements) {
    PuzzleFile file = puzzle_from_json(json::parse(puzzle_json));
    if (!file.answers) throw Error(Errc::BadRequest, "puzzle file has no answers section");
    attach_answers(file.puzzle, lex, *file.answers);
    return to_json(grade(file.puzzle, placements)).dump();
  });

  m.def("leaderboard", [](const std::vector<std::tuple<std::string, int, int, std::int64_t>>& log) {
    std::vector<ResultLogEntry> entries;
    for (const auto& [player, level, score, at_ms] : log)
      entries.push_back({player, "", level, score, stars_for(score), from_millis(at_ms)});
    const auto board = aggregate_leaderboard(entries);
    json out = json::array();
    for (const auto& e : board) out.push_back(to_json(e));
    return py::make_tuple(out.dump(), winner(board));
  });

  py::class_<Game>(m, "Game")
      .def(py::init<const Lexicon&, const std::string&, std::uint64_t>(), py::arg("lexicon"),
           py::arg("player"), py::arg("seed"))
      .def("view_json", &Game::view)
      .def("summary_json", &Game::summary)
      .def("state_json", &Game::state)
      .def("place", &Game::place)
      .def("unplace", &Game::unplace)
      .def("submit_json", &Game::submit, py::arg("at_ms") = 0)
      .def("advance", &Game::advance)
      .def("solution", &Game::solution);
}
