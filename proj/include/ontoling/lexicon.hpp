#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ontoling/error.hpp"

namespace ontoling {

enum class PartOfSpeech : std::uint8_t { Noun, Verb, Adjective, Adverb };

inline constexpr std::array<PartOfSpeech, 4> kAllPartsOfSpeech = {
    PartOfSpeech::Noun, PartOfSpeech::Verb, PartOfSpeech::Adjective,
    PartOfSpeech::Adverb};

/// Typed association between two synsets. The source is always the more
/// specific or contained element: hyponym, instance, member, part, substance,
/// derived word, or the word contained in a phrase.
enum class RelationKind : std::uint8_t {
  KindOf,
  InstanceOf,
  MemberOf,
  PartOf,
  SubstanceOf,
  Derivation,
  WordFor,
};

inline constexpr std::array<RelationKind, 7> kAllRelationKinds = {
    RelationKind::KindOf,      RelationKind::InstanceOf, RelationKind::MemberOf,
    RelationKind::PartOf,      RelationKind::SubstanceOf,
    RelationKind::Derivation,  RelationKind::WordFor};

using KindSet = std::set<RelationKind>;

KindSet all_relation_kinds();

/// File and wire tokens: noun/verb/adj/adv and kind_of/instance_of/...
std::string_view to_token(PartOfSpeech pos) noexcept;
std::string_view to_token(RelationKind kind) noexcept;
std::optional<PartOfSpeech> pos_from_token(std::string_view token) noexcept;
std::optional<RelationKind> kind_from_token(std::string_view token) noexcept;

/// KindOf needs matching Noun or Verb endpoints; the meronym and instance
/// kinds need Noun on both sides; Derivation and WordFor accept anything.
bool pos_compatible(RelationKind kind, PartOfSpeech source,
                    PartOfSpeech target) noexcept;

bool is_taxonomic(RelationKind kind) noexcept;

struct Synset {
  std::string id;
  PartOfSpeech pos = PartOfSpeech::Noun;
  std::string gloss;
  std::vector<std::string> lemmas;
  std::vector<std::string> examples;

  bool operator==(const Synset&) const = default;
};

struct Relation {
  RelationKind kind = RelationKind::KindOf;
  std::string source;
  std::string target;

  // Member order gives the canonical (kind, source, target) ordering.
  auto operator<=>(const Relation&) const = default;
};

struct Violation {
  Errc rule;
  std::string subject;
  std::string detail;
};

std::string describe(const Violation& v);

/// Immutable synset graph. Construction canonicalizes order (synsets by id,
/// relations by kind/source/target) but does not validate; use
/// validate_lexicon or parse_lexicon for that.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::vector<Synset> synsets, std::vector<Relation> relations);

  std::span<const Synset> synsets() const noexcept { return synsets_; }
  std::span<const Relation> relations() const noexcept { return relations_; }
  bool empty() const noexcept { return synsets_.empty(); }

  const Synset* find(std::string_view id) const;
  /// Throws Error(UnknownSynset).
  const Synset& at(std::string_view id) const;

  /// Indices into relations() touching `id` in either direction, ascending.
  std::span<const std::size_t> incident(std::string_view id) const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.synsets_ == b.synsets_ && a.relations_ == b.relations_;
  }

 private:
  std::vector<Synset> synsets_;
  std::vector<Relation> relations_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> incident_;
};

/// Lowercase, trim, and fold runs of whitespace/underscores to one space.
/// Throws Error(EmptyTerm) when nothing is left.
std::string normalize_term(std::string_view raw);

/// Parses and validates; throws the first violation as an Error.
Lexicon parse_lexicon(std::string_view text);

/// Syntax-only parse. Lemmas are normalized; graph rules are not checked.
Lexicon parse_lexicon_unchecked(std::string_view text);

std::string serialize_lexicon(const Lexicon& lex);

std::vector<Violation> validate_lexicon(const Lexicon& lex);

struct Neighbor {
  const Relation* relation;
  const Synset* synset;  // the opposite endpoint
};

std::vector<Neighbor> neighbors(const Lexicon& lex, std::string_view id,
                                const KindSet& kinds);

std::string render_expression(RelationKind kind, std::string_view source_term,
                              std::string_view target_term,
                              PartOfSpeech source_pos);

/// Stable short identifier derived from the canonical serialization.
std::string lexicon_fingerprint(const Lexicon& lex);

}  // namespace ontoling
