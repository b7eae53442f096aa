#include "ontoling/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace ontoling {

KindSet all_relation_kinds() {
  return KindSet(kAllRelationKinds.begin(), kAllRelationKinds.end());
}

std::string_view to_token(PartOfSpeech pos) noexcept {
  switch (pos) {
    case PartOfSpeech::Noun: return "noun";
    case PartOfSpeech::Verb: return "verb";
    case PartOfSpeech::Adjective: return "adj";
    case PartOfSpeech::Adverb: return "adv";
  }
  return "?";
}

std::string_view to_token(RelationKind kind) noexcept {
  switch (kind) {
    case RelationKind::KindOf: return "kind_of";
    case RelationKind::InstanceOf: return "instance_of";
    case RelationKind::MemberOf: return "member_of";
    case RelationKind::PartOf: return "part_of";
    case RelationKind::SubstanceOf: return "substance_of";
    case RelationKind::Derivation: return "derivation";
    case RelationKind::WordFor: return "word_for";
  }
  return "?";
}

std::optional<PartOfSpeech> pos_from_token(std::string_view token) noexcept {
  for (auto pos : kAllPartsOfSpeech)
    if (to_token(pos) == token) return pos;
  return std::nullopt;
}

std::optional<RelationKind> kind_from_token(std::string_view token) noexcept {
  for (auto kind : kAllRelationKinds)
    if (to_token(kind) == token) return kind;
  return std::nullopt;
}

bool pos_compatible(RelationKind kind, PartOfSpeech source,
                    PartOfSpeech target) noexcept {
  switch (kind) {
    case RelationKind::KindOf:
      return source == target &&
             (source == PartOfSpeech::Noun || source == PartOfSpeech::Verb);
    case RelationKind::InstanceOf:
    case RelationKind::MemberOf:
    case RelationKind::PartOf:
    case RelationKind::SubstanceOf:
      return source == PartOfSpeech::Noun && target == PartOfSpeech::Noun;
    case RelationKind::Derivation:
    case RelationKind::WordFor:
      return true;
  }
  return false;
}

bool is_taxonomic(RelationKind kind) noexcept {
  return kind == RelationKind::KindOf || kind == RelationKind::InstanceOf;
}

std::string describe(const Violation& v) {
  std::string out(to_string(v.rule));
  out += ": ";
  out += v.subject;
  if (!v.detail.empty()) {
    out += " (";
    out += v.detail;
    out += ")";
  }
  return out;
}

Lexicon::Lexicon(std::vector<Synset> synsets, std::vector<Relation> relations)
    : synsets_(std::move(synsets)), relations_(std::move(relations)) {
  std::stable_sort(synsets_.begin(), synsets_.end(),
                   [](const Synset& a, const Synset& b) { return a.id < b.id; });
  std::stable_sort(relations_.begin(), relations_.end());
  for (std::size_t i = 0; i < synsets_.size(); ++i)
    index_.try_emplace(synsets_[i].id, i);
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    const auto& r = relations_[i];
    incident_[r.source].push_back(i);
    if (r.target != r.source) incident_[r.target].push_back(i);
  }
}

const Synset* Lexicon::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &synsets_[it->second];
}

const Synset& Lexicon::at(std::string_view id) const {
  if (const auto* s = find(id)) return *s;
  throw Error(Errc::UnknownSynset, "unknown synset '" + std::string(id) + "'");
}

std::span<const std::size_t> Lexicon::incident(std::string_view id) const {
  auto it = incident_.find(id);
  if (it == incident_.end()) return {};
  return it->second;
}

namespace {

std::string relation_label(const Relation& r) {
  return std::string(to_token(r.kind)) + " " + r.source + " " + r.target;
}

bool valid_id(std::string_view id) {
  if (id.empty() || id.front() == '"' || id.front() == '#') return false;
  return std::none_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

void check_synset(const Synset& s, std::vector<Violation>& out) {
  auto bad = [&](std::string detail) {
    out.push_back({Errc::InvalidSynset, s.id, std::move(detail)});
  };
  if (!valid_id(s.id)) bad("id must be a non-empty token without whitespace");
  if (s.gloss.empty()) bad("empty gloss");
  if (s.lemmas.empty()) bad("no lemmas");
  std::set<std::string> seen;
  for (const auto& lemma : s.lemmas) {
    std::string norm;
    try {
      norm = normalize_term(lemma);
    } catch (const Error&) {
      bad("empty lemma");
      continue;
    }
    if (norm != lemma) bad("lemma '" + lemma + "' is not normalized");
    if (lemma.find_first_of("|\"") != std::string::npos)
      bad("lemma '" + lemma + "' contains a reserved character");
    if (!seen.insert(norm).second) bad("duplicate lemma '" + norm + "'");
  }
}

// Depth-first search over taxonomic edges; every back edge closes a cycle.
void find_taxonomy_cycles(const Lexicon& lex, std::vector<Violation>& out) {
  const auto synsets = lex.synsets();
  std::unordered_map<std::string_view, std::size_t> pos_of;
  for (std::size_t i = 0; i < synsets.size(); ++i)
    pos_of.try_emplace(synsets[i].id, i);

  std::vector<std::vector<std::size_t>> succ(synsets.size());
  for (const auto& r : lex.relations()) {
    if (!is_taxonomic(r.kind) || r.source == r.target) continue;
    auto s = pos_of.find(r.source);
    auto t = pos_of.find(r.target);
    if (s == pos_of.end() || t == pos_of.end()) continue;
    succ[s->second].push_back(t->second);
  }
  for (auto& v : succ) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  enum class Mark : std::uint8_t { White, Grey, Black };
  std::vector<Mark> mark(synsets.size(), Mark::White);
  std::vector<std::size_t> path;

  struct Frame {
    std::size_t node;
    std::size_t next;
  };
  for (std::size_t root = 0; root < synsets.size(); ++root) {
    if (mark[root] != Mark::White) continue;
    std::vector<Frame> stack{{root, 0}};
    mark[root] = Mark::Grey;
    path.assign(1, root);
    while (!stack.empty()) {
      auto& top = stack.back();
      if (top.next < succ[top.node].size()) {
        std::size_t child = succ[top.node][top.next++];
        if (mark[child] == Mark::White) {
          mark[child] = Mark::Grey;
          stack.push_back({child, 0});
          path.push_back(child);
        } else if (mark[child] == Mark::Grey) {
          auto from = std::find(path.begin(), path.end(), child);
          std::string cycle;
          for (auto it = from; it != path.end(); ++it)
            cycle += synsets[*it].id + " -> ";
          cycle += synsets[child].id;
          out.push_back({Errc::TaxonomyCycle, cycle, {}});
        }
      } else {
        mark[top.node] = Mark::Black;
        stack.pop_back();
        path.pop_back();
      }
    }
  }
}

}  // namespace

std::vector<Violation> validate_lexicon(const Lexicon& lex) {
  std::vector<Violation> out;
  if (lex.empty()) out.push_back({Errc::EmptyLexicon, "lexicon", "no synsets"});

  const auto synsets = lex.synsets();
  for (std::size_t i = 1; i < synsets.size(); ++i)
    if (synsets[i].id == synsets[i - 1].id)
      out.push_back({Errc::DuplicateId, synsets[i].id, {}});

  for (const auto& s : synsets) check_synset(s, out);

  const auto relations = lex.relations();
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const auto& r = relations[i];
    if (r.source == r.target)
      out.push_back({Errc::SelfLoop, relation_label(r), {}});
    if (i > 0 && relations[i - 1] == r)
      out.push_back({Errc::DuplicateRelation, relation_label(r), {}});
  }

  for (const auto& r : relations) {
    const auto* s = lex.find(r.source);
    const auto* t = lex.find(r.target);
    if (!s || !t) {
      out.push_back({Errc::DanglingEndpoint, relation_label(r),
                     "missing '" + (s ? r.target : r.source) + "'"});
      continue;
    }
    if (!pos_compatible(r.kind, s->pos, t->pos)) {
      out.push_back({Errc::PosViolation, relation_label(r),
                     std::string(to_token(s->pos)) + " -> " +
                         std::string(to_token(t->pos))});
    }
  }

  find_taxonomy_cycles(lex, out);
  return out;
}

std::vector<Neighbor> neighbors(const Lexicon& lex, std::string_view id,
                                const KindSet& kinds) {
  lex.at(id);
  std::vector<Neighbor> out;
  const auto relations = lex.relations();
  for (std::size_t i : lex.incident(id)) {
    const auto& r = relations[i];
    if (!kinds.contains(r.kind)) continue;
    const auto* other = lex.find(r.source == id ? r.target : r.source);
    if (other) out.push_back({&r, other});
  }
  return out;
}

std::string render_expression(RelationKind kind, std::string_view source_term,
                              std::string_view target_term,
                              PartOfSpeech source_pos) {
  std::string_view link;
  switch (kind) {
    case RelationKind::KindOf:
      if (source_pos == PartOfSpeech::Noun)
        link = " is a kind of ";
      else if (source_pos == PartOfSpeech::Verb)
        link = " is one way to ";
      else
        throw Error(Errc::InvalidCombination,
                    "kind_of needs a noun or verb source, got " +
                        std::string(to_token(source_pos)));
      break;
    case RelationKind::InstanceOf: link = " is an instance of "; break;
    case RelationKind::MemberOf: link = " is a member of "; break;
    case RelationKind::PartOf: link = " is a part of "; break;
    case RelationKind::SubstanceOf: link = " is a substance of "; break;
    case RelationKind::Derivation: link = " derives from "; break;
    case RelationKind::WordFor: link = " is a word for "; break;
  }
  std::string out;
  out.reserve(source_term.size() + link.size() + target_term.size());
  out += source_term;
  out += link;
  out += target_term;
  return out;
}

}  // namespace ontoling
