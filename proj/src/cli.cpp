#include "ontoling/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ontoling/engine.hpp"
#include "ontoling/json_io.hpp"
#include "ontoling/levels.hpp"
#include "ontoling/lexicon.hpp"
#include "ontoling/service.hpp"

namespace ontoling::cli {

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Options {
  std::string format = "text";

  std::string lexicon;

  int level = 1;
  std::uint64_t seed = 0;
  std::string out_path;
  bool with_answers = false;

  std::string puzzle_path;
  std::string answers_path;

  std::string data_dir;
  std::string bind = "127.0.0.1";
  int port = 8080;
};

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  auto text = read_file(o.lexicon);
  if (!text) {
    err << "error: cannot read " << o.lexicon << "\n";
    return kUsage;
  }
  Lexicon lex;
  try {
    lex = parse_lexicon_unchecked(*text);
  } catch (const Error& e) {
    if (o.format == "json")
      out << json{{"ok", false},
                  {"violations", json::array({{{"rule", to_string(e.code())},
                                               {"subject", o.lexicon},
                                               {"detail", e.what()}}})}}
                 .dump(2)
          << "\n";
    else
      out << to_string(e.code()) << ": " << e.what() << "\n";
    return kDomainFailure;
  }
  const auto violations = validate_lexicon(lex);
  if (o.format == "json") {
    json list = json::array();
    for (const auto& v : violations)
      list.push_back({{"rule", to_string(v.rule)}, {"subject", v.subject}, {"detail", v.detail}});
    out << json{{"ok", violations.empty()},
                {"synsets", lex.synsets().size()},
                {"relations", lex.relations().size()},
                {"violations", std::move(list)}}
               .dump(2)
        << "\n";
  } else if (violations.empty()) {
    out << "OK: " << lex.synsets().size() << " synsets, " << lex.relations().size()
        << " relations\n";
  } else {
    for (const auto& v : violations) out << describe(v) << "\n";
  }
  return violations.empty() ? kOk : kDomainFailure;
}

std::optional<Lexicon> load_lexicon(const std::string& path, std::ostream& err, int& code) {
  auto text = read_file(path);
  if (!text) {
    err << "error: cannot read " << path << "\n";
    code = kUsage;
    return std::nullopt;
  }
  try {
    return parse_lexicon(*text);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    code = kDomainFailure;
    return std::nullopt;
  }
}

int cmd_gen(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto lex = load_lexicon(o.lexicon, err, code);
  if (!lex) return code;
  const auto specs = builtin_level_specs();
  Puzzle puzzle;
  try {
    puzzle = generate_puzzle(*lex, specs[static_cast<std::size_t>(o.level - 1)], o.seed);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kDomainFailure;
  }
  const std::string doc =
      to_json(puzzle, o.with_answers ? PuzzleDetail::WithAnswers : PuzzleDetail::Player).dump(2) +
      "\n";
  if (o.out_path.empty() || o.out_path == "-") {
    out << doc;
    return kOk;
  }
  std::ofstream file(o.out_path, std::ios::binary | std::ios::trunc);
  if (!file || !(file << doc) || !file.flush()) {
    err << "error: cannot write " << o.out_path << "\n";
    return kUsage;
  }
  out << "wrote " << o.out_path << ": level " << puzzle.level << ", "
      << puzzle.networks.size() << " networks\n";
  return kOk;
}

void print_report_text(const Puzzle& puzzle, const ScoreReport& report, std::ostream& out) {
  std::size_t vi = 0;
  for (std::size_t ni = 0; ni < puzzle.networks.size(); ++ni) {
    const auto& net = puzzle.networks[ni];
    const auto& score = report.per_network[ni];
    out << "network " << net.network_id << ": " << score.correct_count << "/" << score.slot_count
        << " correct (" << score.score_percent << "%)\n";
    for (std::size_t k = 0; k < net.slots.size(); ++k, ++vi) {
      const auto& v = report.verdicts[vi];
      out << "  " << (v.correct ? "[x] " : "[ ] ") << v.slot_id << " = "
          << (v.placed ? *v.placed : std::string("(empty)")) << "\n";
      for (const auto& sentence : v.expressions) out << "        " << sentence << "\n";
    }
  }
  out << "level " << report.level << " score: " << report.level_score << "\n";
  out << "stars: " << report.stars << " " << std::string(static_cast<std::size_t>(report.stars), '*')
      << "\n";
  out << (report.passed ? "passed" : "not passed") << "\n";
}

int cmd_grade(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto lex = load_lexicon(o.lexicon, err, code);
  if (!lex) return code;

  auto puzzle_text = read_file(o.puzzle_path);
  if (!puzzle_text) {
    err << "error: cannot read " << o.puzzle_path << "\n";
    return kUsage;
  }
  PuzzleFile file;
  try {
    file = puzzle_from_json(json::parse(*puzzle_text));
  } catch (const std::exception& e) {
    err << "error: malformed puzzle file: " << e.what() << "\n";
    return kUsage;
  }
  if (!file.answers) {
    err << "error: puzzle file has no answers section (generate with --with-answers)\n";
    return kUsage;
  }
  try {
    attach_answers(file.puzzle, *lex, *file.answers);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kDomainFailure;
  }

  auto answers_text = read_file(o.answers_path);
  if (!answers_text) {
    err << "error: cannot read " << o.answers_path << "\n";
    return kUsage;
  }
  std::map<std::string, std::string> placements;
  try {
    json doc = json::parse(*answers_text);
    if (doc.is_object() && doc.contains("placements")) doc = doc["placements"];
    if (!doc.is_object()) throw std::runtime_error("expected an object of slot_id -> term");
    for (const auto& [slot_id, term] : doc.items()) {
      if (!file.puzzle.network_of_slot(slot_id))
        throw std::runtime_error("unknown slot '" + slot_id + "'");
      placements[slot_id] = normalize_term(term.get<std::string>());
    }
  } catch (const std::exception& e) {
    err << "error: malformed answers file: " << e.what() << "\n";
    return kDomainFailure;
  }

  const ScoreReport report = grade(file.puzzle, placements);
  if (o.format == "json")
    out << to_json(report).dump(2) << "\n";
  else
    print_report_text(file.puzzle, report, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"ontoling: lexicon validation, puzzle generation, grading and the game service",
               "ontoling"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate-lexicon", "Check a lexicon file for violations");
  validate->add_option("lexicon", o.lexicon, "Lexicon file")->required();
  add_format(validate);

  auto* gen = app.add_subcommand("gen", "Generate a puzzle file for one level");
  gen->add_option("--lexicon", o.lexicon, "Lexicon file")->required();
  gen->add_option("--level", o.level, "Level 1..4")->required()->check(CLI::Range(1, kLevelCount));
  gen->add_option("--seed", o.seed, "Generator seed")->required();
  gen->add_option("--out", o.out_path, "Output path (default stdout)");
  gen->add_flag("--with-answers", o.with_answers, "Include the slot -> synset answers section");

  auto* grade_cmd = app.add_subcommand("grade", "Grade an answers file against a puzzle file");
  grade_cmd->add_option("--lexicon", o.lexicon, "Lexicon the puzzle was generated from")->required();
  grade_cmd->add_option("--puzzle", o.puzzle_path, "Puzzle file with answers")->required();
  grade_cmd->add_option("--answers", o.answers_path, "JSON object of slot_id -> term")->required();
  add_format(grade_cmd);

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP game service");
  serve_cmd->add_option("--lexicon", o.lexicon, "Lexicon file")->required();
  serve_cmd->add_option("--data-dir", o.data_dir, "Data directory")->envname("ONTOLING_DATA_DIR");
  serve_cmd->add_option("--bind", o.bind, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", o.port, "Port (0 picks a free one)")
      ->envname("ONTOLING_PORT")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  if (validate->parsed()) return cmd_validate(o, out, err);
  if (gen->parsed()) return cmd_gen(o, out, err);
  if (grade_cmd->parsed()) return cmd_grade(o, out, err);

  ServiceConfig config;
  config.lexicon_path = o.lexicon;
  config.data_dir = o.data_dir.empty() ? std::filesystem::path("data") : std::filesystem::path(o.data_dir);
  config.bind = o.bind;
  config.port = o.port;
  return serve(config);
}

}  // namespace ontoling::cli
