#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontoling/lexicon.hpp"
#include "ontoling/rng.hpp"

namespace ontoling {

/// Inclusive integer range.
struct Range {
  int min = 0;
  int max = 0;

  bool contains(int v) const noexcept { return v >= min && v <= max; }
  bool operator==(const Range&) const = default;
};

/// Declarative constraints for one level's puzzle.
struct LevelSpec {
  int level = 1;
  int network_count = 1;
  /// Exact number of distinct parts of speech in each network.
  int pos_kinds_per_network = 1;
  Range relation_kinds_per_network{1, 1};
  KindSet allowed_kinds;
  Range nodes_per_network{2, 2};
  int distractors_per_network = 0;
  /// One network per part of speech, assigned in Noun, Verb, Adjective,
  /// Adverb order. Requires network_count <= 4 and pos_kinds_per_network == 1.
  bool one_pos_per_network = false;

  bool operator==(const LevelSpec&) const = default;
};

std::vector<Violation> check_level_spec(const LevelSpec& spec);

/// The four levels of the game, in order.
std::vector<LevelSpec> builtin_level_specs();

/// Restart budget for sample_network and for the disjointness retry in
/// generate_puzzle.
inline constexpr int kRetryBudget = 1000;

struct Slot {
  std::string slot_id;
  std::string synset_id;  // server-side only
  PartOfSpeech pos = PartOfSpeech::Noun;
  std::string gloss;
  std::vector<std::string> examples;
  /// Normalized lemmas of the synset; the first one is the designated answer.
  std::vector<std::string> answer_lemmas;  // server-side only

  bool accepts(std::string_view normalized_term) const;
  bool operator==(const Slot&) const = default;
};

struct Edge {
  RelationKind kind = RelationKind::KindOf;
  std::string source;  // slot id
  std::string target;  // slot id

  bool operator==(const Edge&) const = default;
};

struct Network {
  std::string network_id;
  std::vector<Slot> slots;
  std::vector<Edge> edges;

  const Slot* find_slot(std::string_view slot_id) const;
  bool operator==(const Network&) const = default;
};

using TermBank = std::vector<std::string>;

struct Puzzle {
  std::string puzzle_id;
  int level = 1;
  std::uint64_t seed = 0;
  std::vector<Network> networks;
  std::map<std::string, TermBank> banks;  // keyed by network_id

  const Network* find_network(std::string_view network_id) const;
  /// Network that owns the slot, or nullptr.
  const Network* network_of_slot(std::string_view slot_id) const;
  bool operator==(const Puzzle&) const = default;
};

/// Grows one connected network from a random seed synset. Restarts up to
/// kRetryBudget times before throwing Error(Unsatisfiable).
Network sample_network(const Lexicon& lex, const LevelSpec& spec,
                       std::optional<PartOfSpeech> pos_constraint, Rng& rng,
                       std::string_view network_id = "n1");

/// Draws `count` distinct lemmas whose synset POS occurs in the network,
/// excluding every lemma of every slot synset. Throws
/// Error(InsufficientDistractors).
std::vector<std::string> pick_distractors(const Lexicon& lex,
                                          const Network& network, int count,
                                          Rng& rng);

Puzzle generate_puzzle(const Lexicon& lex, const LevelSpec& spec,
                       std::uint64_t seed);

std::vector<Violation> validate_puzzle(const Puzzle& puzzle, const Lexicon& lex,
                                       const LevelSpec& spec);

/// Rebuilds server-side slot data (pos, gloss, lemmas) from the lexicon for a
/// puzzle whose slots only carry synset ids, e.g. one read from a puzzle file
/// with an answers section. Throws Error(UnknownSynset).
void attach_answers(Puzzle& puzzle, const Lexicon& lex,
                    const std::map<std::string, std::string>& slot_to_synset);

}  // namespace ontoling
