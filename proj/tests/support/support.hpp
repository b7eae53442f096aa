#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ontoling/engine.hpp"
#include "ontoling/levels.hpp"
#include "ontoling/lexicon.hpp"
#include "ontoling/rng.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline const fs::path& fixture_path() {
  static const fs::path path = ONTOLING_FIXTURE_LEXICON;
  return path;
}

inline const ontoling::Lexicon& fixture() {
  static const ontoling::Lexicon lex = ontoling::parse_lexicon(read_text(fixture_path()));
  return lex;
}

inline const std::string& fixture_id() {
  static const std::string id = ontoling::lexicon_fingerprint(fixture());
  return id;
}

inline const ontoling::LevelSpec& builtin_spec(int level) {
  static const auto specs = ontoling::builtin_level_specs();
  return specs.at(static_cast<std::size_t>(level - 1));
}

/// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 gen{std::random_device{}()};
    path_ = fs::temp_directory_path() / ("ontoling-test-" + std::to_string(gen()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

/// The bank term that answers each slot (its designated lemma).
inline std::map<std::string, std::string> perfect_placements(const ontoling::Puzzle& p) {
  std::map<std::string, std::string> out;
  for (const auto& net : p.networks) {
    const auto& bank = p.banks.at(net.network_id);
    for (const auto& slot : net.slots)
      for (const auto& term : bank)
        if (slot.accepts(term)) out[slot.slot_id] = term;
  }
  return out;
}

/// Clears the board, then places every entry of `placements`.
inline ontoling::Session place_all(ontoling::Session s,
                                   const std::map<std::string, std::string>& placements) {
  s.placements.clear();
  for (const auto& [slot, term] : placements) s = ontoling::place(s, slot, term);
  return s;
}

inline ontoling::Timestamp at_ms(std::int64_t ms) {
  return ontoling::Timestamp{std::chrono::milliseconds{ms}};
}

/// Random valid lexicon. KindOf/InstanceOf edges only run from a higher to a
/// lower synset index, so the taxonomy is acyclic by construction. Glosses and
/// examples exercise the quoting rules.
inline ontoling::Lexicon random_lexicon(ontoling::Rng& rng, int synset_count) {
  using namespace ontoling;
  static const char* const kGlossBits[] = {"a thing", "with \"quotes\"", "back\\slash",
                                           "tab\there", "line\nbreak", "plain words"};
  std::vector<Synset> synsets;
  int lemma_counter = 0;
  for (int i = 0; i < synset_count; ++i) {
    Synset s;
    s.id = "x" + std::to_string(i) + "." + std::to_string(rng.below(100));
    s.pos = kAllPartsOfSpeech[rng.below(4)];
    s.gloss = std::string(kGlossBits[rng.below(6)]) + " " + std::to_string(i);
    const int lemma_count = rng.between(1, 3);
    for (int k = 0; k < lemma_count; ++k) {
      std::string lemma = "w" + std::to_string(lemma_counter++);
      if (rng.below(3) == 0) lemma += " part";
      s.lemmas.push_back(lemma);
    }
    const int example_count = rng.between(0, 2);
    for (int k = 0; k < example_count; ++k)
      s.examples.push_back(std::string("use ") + kGlossBits[rng.below(6)]);
    synsets.push_back(std::move(s));
  }

  std::set<Relation> relations;
  const int attempts = synset_count * 3;
  for (int a = 0; a < attempts && synset_count > 1; ++a) {
    auto i = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(synset_count)));
    auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(synset_count)));
    if (i == j) continue;
    const RelationKind kind = kAllRelationKinds[rng.below(7)];
    if (is_taxonomic(kind) && i < j) std::swap(i, j);
    if (!pos_compatible(kind, synsets[i].pos, synsets[j].pos)) continue;
    relations.insert({kind, synsets[i].id, synsets[j].id});
  }
  std::vector<Synset> shuffled = synsets;
  rng.shuffle(std::span(shuffled));
  return Lexicon(std::move(shuffled), {relations.begin(), relations.end()});
}

}  // namespace testsupport
