#include "ontoling/levels.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>
#include <set>

namespace ontoling {

std::vector<Violation> check_level_spec(const LevelSpec& spec) {
  std::vector<Violation> out;
  auto bad = [&](std::string detail) {
    out.push_back({Errc::InvalidLevelSpec, "level " + std::to_string(spec.level),
                   std::move(detail)});
  };
  if (spec.level < 1) bad("level must be >= 1");
  if (spec.network_count < 1) bad("network_count must be >= 1");
  if (spec.nodes_per_network.min < 2) bad("nodes_per_network.min must be >= 2");
  if (spec.nodes_per_network.max < spec.nodes_per_network.min)
    bad("nodes_per_network is an empty range");
  if (spec.pos_kinds_per_network < 1 || spec.pos_kinds_per_network > 4)
    bad("pos_kinds_per_network must be in 1..4");
  if (spec.allowed_kinds.empty()) bad("allowed_kinds is empty");
  if (spec.relation_kinds_per_network.min < 1 ||
      spec.relation_kinds_per_network.max < spec.relation_kinds_per_network.min)
    bad("relation_kinds_per_network is not a valid range");
  if (spec.distractors_per_network < 0) bad("distractors_per_network must be >= 0");
  if (spec.one_pos_per_network &&
      (spec.network_count > 4 || spec.pos_kinds_per_network != 1))
    bad("one_pos_per_network needs <= 4 single-POS networks");
  return out;
}

std::vector<LevelSpec> builtin_level_specs() {
  const KindSet all = all_relation_kinds();
  LevelSpec l1{.level = 1,
               .network_count = 4,
               .pos_kinds_per_network = 1,
               .relation_kinds_per_network = {1, 1},
               .allowed_kinds = {RelationKind::WordFor},
               .nodes_per_network = {3, 5},
               .distractors_per_network = 2,
               .one_pos_per_network = true};
  LevelSpec l2{.level = 2,
               .network_count = 2,
               .pos_kinds_per_network = 2,
               .relation_kinds_per_network = {2, 2},
               .allowed_kinds = all,
               .nodes_per_network = {4, 6},
               .distractors_per_network = 3};
  LevelSpec l3{.level = 3,
               .network_count = 1,
               .pos_kinds_per_network = 4,
               .relation_kinds_per_network = {2, 7},
               .allowed_kinds = all,
               .nodes_per_network = {6, 9},
               .distractors_per_network = 4};
  LevelSpec l4{.level = 4,
               .network_count = 1,
               .pos_kinds_per_network = 4,
               .relation_kinds_per_network = {3, 7},
               .allowed_kinds = all,
               .nodes_per_network = {10, 14},
               .distractors_per_network = 6};
  return {l1, l2, l3, l4};
}

bool Slot::accepts(std::string_view normalized_term) const {
  return std::find(answer_lemmas.begin(), answer_lemmas.end(), normalized_term) !=
         answer_lemmas.end();
}

const Slot* Network::find_slot(std::string_view slot_id) const {
  for (const auto& s : slots)
    if (s.slot_id == slot_id) return &s;
  return nullptr;
}

const Network* Puzzle::find_network(std::string_view network_id) const {
  for (const auto& n : networks)
    if (n.network_id == network_id) return &n;
  return nullptr;
}

const Network* Puzzle::network_of_slot(std::string_view slot_id) const {
  for (const auto& n : networks)
    if (n.find_slot(slot_id)) return &n;
  return nullptr;
}

namespace {

Slot make_slot(const Synset& s, std::string slot_id) {
  return Slot{std::move(slot_id), s.id, s.pos, s.gloss, s.examples, s.lemmas};
}

/// Every slot's designated answer must match that slot alone, and no two
/// slots may share a designated answer; otherwise the bank is ambiguous.
bool bankable(const std::vector<const Synset*>& nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& answer = nodes[i]->lemmas.front();
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j) continue;
      const auto& other = nodes[j]->lemmas;
      if (std::find(other.begin(), other.end(), answer) != other.end()) return false;
    }
  }
  return true;
}

bool admits(const Synset& s, std::optional<PartOfSpeech> pos) {
  return !pos || s.pos == *pos;
}

}  // namespace

Network sample_network(const Lexicon& lex, const LevelSpec& spec,
                       std::optional<PartOfSpeech> pos_constraint, Rng& rng,
                       std::string_view network_id) {
  auto unsatisfiable = [&](const std::string& why) {
    return Error(Errc::Unsatisfiable,
                 "level " + std::to_string(spec.level) + ": " + why);
  };
  const auto relations = lex.relations();

  auto usable = [&](const Relation& r) {
    if (!spec.allowed_kinds.contains(r.kind) || r.source == r.target) return false;
    const auto* s = lex.find(r.source);
    const auto* t = lex.find(r.target);
    return s && t && admits(*s, pos_constraint) && admits(*t, pos_constraint);
  };

  std::vector<const Synset*> seeds;
  for (const auto& s : lex.synsets()) {
    if (!admits(s, pos_constraint)) continue;
    for (std::size_t i : lex.incident(s.id)) {
      if (usable(relations[i])) {
        seeds.push_back(&s);
        break;
      }
    }
  }
  if (seeds.empty())
    throw unsatisfiable("no synset has an edge of an allowed kind");

  const int wanted_pos =
      pos_constraint ? 1 : spec.pos_kinds_per_network;

  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    const int target = rng.between(spec.nodes_per_network.min, spec.nodes_per_network.max);
    std::vector<const Synset*> nodes{seeds[rng.below(seeds.size())]};
    std::set<std::string_view> members{nodes.front()->id};

    while (static_cast<int>(nodes.size()) < target) {
      std::vector<const Synset*> frontier;
      for (const auto* n : nodes) {
        for (std::size_t i : lex.incident(n->id)) {
          const auto& r = relations[i];
          if (!usable(r)) continue;
          const auto& other = r.source == n->id ? r.target : r.source;
          if (!members.contains(other)) frontier.push_back(lex.find(other));
        }
      }
      if (frontier.empty()) break;
      const auto* pick = frontier[rng.below(frontier.size())];
      nodes.push_back(pick);
      members.insert(pick->id);
    }
    if (static_cast<int>(nodes.size()) < target) continue;

    std::set<PartOfSpeech> pos_seen;
    for (const auto* n : nodes) pos_seen.insert(n->pos);
    if (static_cast<int>(pos_seen.size()) != wanted_pos) continue;

    std::map<std::string_view, std::string> slot_of;
    Network net;
    net.network_id = std::string(network_id);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::string slot_id = net.network_id + "-s" + std::to_string(i + 1);
      slot_of.emplace(nodes[i]->id, slot_id);
      net.slots.push_back(make_slot(*nodes[i], std::move(slot_id)));
    }
    KindSet kinds_seen;
    for (const auto& r : relations) {
      if (!usable(r)) continue;
      auto s = slot_of.find(r.source);
      auto t = slot_of.find(r.target);
      if (s == slot_of.end() || t == slot_of.end()) continue;
      net.edges.push_back({r.kind, s->second, t->second});
      kinds_seen.insert(r.kind);
    }
    if (!spec.relation_kinds_per_network.contains(static_cast<int>(kinds_seen.size())))
      continue;
    if (!bankable(nodes)) continue;
    return net;
  }
  throw unsatisfiable("no network satisfying the constraints after " +
                      std::to_string(kRetryBudget) + " restarts");
}

std::vector<std::string> pick_distractors(const Lexicon& lex,
                                          const Network& network, int count,
                                          Rng& rng) {
  if (count <= 0) return {};
  std::set<PartOfSpeech> pos;
  std::set<std::string> excluded;
  for (const auto& slot : network.slots) {
    pos.insert(slot.pos);
    excluded.insert(slot.answer_lemmas.begin(), slot.answer_lemmas.end());
    if (const auto* s = lex.find(slot.synset_id))
      excluded.insert(s->lemmas.begin(), s->lemmas.end());
  }
  std::set<std::string> pool_set;
  for (const auto& s : lex.synsets()) {
    if (!pos.contains(s.pos)) continue;
    for (const auto& lemma : s.lemmas)
      if (!excluded.contains(lemma)) pool_set.insert(lemma);
  }
  std::vector<std::string> pool(pool_set.begin(), pool_set.end());
  const auto needed = static_cast<std::size_t>(count);
  if (pool.size() < needed) {
    throw Error(Errc::InsufficientDistractors,
                "InsufficientDistractors(" + std::to_string(needed) + ", " +
                    std::to_string(pool.size()) + ")");
  }
  for (std::size_t i = 0; i < needed; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(needed);
  return pool;
}

Puzzle generate_puzzle(const Lexicon& lex, const LevelSpec& spec,
                       std::uint64_t seed) {
  if (auto v = check_level_spec(spec); !v.empty())
    throw Error(Errc::InvalidLevelSpec, describe(v.front()));

  Rng rng(seed);
  Puzzle p;
  char id[40];
  std::snprintf(id, sizeof id, "L%d-%016llx", spec.level,
                static_cast<unsigned long long>(seed));
  p.puzzle_id = id;
  p.level = spec.level;
  p.seed = seed;

  std::set<std::string> used;
  for (int i = 0; i < spec.network_count; ++i) {
    std::optional<PartOfSpeech> pos;
    if (spec.one_pos_per_network) pos = kAllPartsOfSpeech[static_cast<std::size_t>(i)];
    const std::string network_id = "n" + std::to_string(i + 1);

    bool placed = false;
    for (int attempt = 0; attempt < kRetryBudget && !placed; ++attempt) {
      Network net = sample_network(lex, spec, pos, rng, network_id);
      bool disjoint = std::none_of(net.slots.begin(), net.slots.end(),
                                   [&](const Slot& s) { return used.contains(s.synset_id); });
      if (!disjoint) continue;
      for (const auto& s : net.slots) used.insert(s.synset_id);
      p.networks.push_back(std::move(net));
      placed = true;
    }
    if (!placed) {
      throw Error(Errc::DisjointnessFailure,
                  "level " + std::to_string(spec.level) + ": network " + network_id +
                      " kept overlapping earlier networks");
    }
  }

  for (const auto& net : p.networks) {
    TermBank bank;
    for (const auto& slot : net.slots) bank.push_back(slot.answer_lemmas.front());
    auto extra = pick_distractors(lex, net, spec.distractors_per_network, rng);
    bank.insert(bank.end(), extra.begin(), extra.end());
    rng.shuffle(std::span<std::string>(bank));
    p.banks.emplace(net.network_id, std::move(bank));
  }
  return p;
}

namespace {

bool connected(const Network& net) {
  if (net.slots.empty()) return false;
  std::map<std::string_view, std::vector<std::string_view>> adj;
  for (const auto& e : net.edges) {
    adj[e.source].push_back(e.target);
    adj[e.target].push_back(e.source);
  }
  std::set<std::string_view> seen{net.slots.front().slot_id};
  std::queue<std::string_view> todo;
  todo.push(net.slots.front().slot_id);
  while (!todo.empty()) {
    auto cur = todo.front();
    todo.pop();
    for (auto next : adj[cur])
      if (seen.insert(next).second) todo.push(next);
  }
  return std::all_of(net.slots.begin(), net.slots.end(),
                     [&](const Slot& s) { return seen.contains(s.slot_id); });
}

}  // namespace

std::vector<Violation> validate_puzzle(const Puzzle& puzzle, const Lexicon& lex,
                                       const LevelSpec& spec) {
  std::vector<Violation> out;
  auto add = [&](Errc rule, std::string subject, std::string detail = {}) {
    out.push_back({rule, std::move(subject), std::move(detail)});
  };

  if (puzzle.level != spec.level)
    add(Errc::UnknownLevel, puzzle.puzzle_id,
        "puzzle level " + std::to_string(puzzle.level) + " vs spec level " +
            std::to_string(spec.level));
  if (static_cast<int>(puzzle.networks.size()) != spec.network_count)
    add(Errc::NetworkCount, puzzle.puzzle_id,
        std::to_string(puzzle.networks.size()) + " networks, expected " +
            std::to_string(spec.network_count));

  std::set<std::string> slot_ids;
  std::set<std::string> synsets_used;
  std::set<PartOfSpeech> network_pos;

  for (std::size_t ni = 0; ni < puzzle.networks.size(); ++ni) {
    const auto& net = puzzle.networks[ni];
    const auto& nid = net.network_id;

    if (!spec.nodes_per_network.contains(static_cast<int>(net.slots.size())))
      add(Errc::NodeCountConstraint, nid, std::to_string(net.slots.size()) + " slots");

    std::set<PartOfSpeech> pos;
    std::map<std::string_view, const Slot*> by_id;
    for (const auto& slot : net.slots) {
      pos.insert(slot.pos);
      by_id.emplace(slot.slot_id, &slot);
      if (!slot_ids.insert(slot.slot_id).second)
        add(Errc::SlotMismatch, slot.slot_id, "duplicate slot id");
      if (!synsets_used.insert(slot.synset_id).second)
        add(Errc::NetworksOverlap, slot.slot_id, "synset used twice");
      const auto* s = lex.find(slot.synset_id);
      if (!s) {
        add(Errc::SlotMismatch, slot.slot_id, "unknown synset");
        continue;
      }
      if (s->pos != slot.pos || s->gloss != slot.gloss || s->examples != slot.examples ||
          s->lemmas != slot.answer_lemmas)
        add(Errc::SlotMismatch, slot.slot_id, "slot data differs from its synset");
    }

    if (static_cast<int>(pos.size()) != spec.pos_kinds_per_network)
      add(Errc::PosConstraint, nid,
          std::to_string(pos.size()) + " parts of speech, expected " +
              std::to_string(spec.pos_kinds_per_network));
    if (spec.one_pos_per_network && ni < kAllPartsOfSpeech.size()) {
      if (pos.size() != 1 || *pos.begin() != kAllPartsOfSpeech[ni])
        add(Errc::PosConstraint, nid,
            "expected only " + std::string(to_token(kAllPartsOfSpeech[ni])));
      network_pos.insert(pos.begin(), pos.end());
    }

    KindSet kinds;
    for (const auto& e : net.edges) {
      kinds.insert(e.kind);
      std::string label = std::string(to_token(e.kind)) + " " + e.source + " " + e.target;
      if (!spec.allowed_kinds.contains(e.kind))
        add(Errc::RelationKindConstraint, label, "kind not allowed at this level");
      auto s = by_id.find(e.source);
      auto t = by_id.find(e.target);
      if (s == by_id.end() || t == by_id.end()) {
        add(Errc::EdgeNotInLexicon, label, "endpoint is not a slot of this network");
        continue;
      }
      Relation r{e.kind, s->second->synset_id, t->second->synset_id};
      if (!std::binary_search(lex.relations().begin(), lex.relations().end(), r))
        add(Errc::EdgeNotInLexicon, label);
    }
    if (!spec.relation_kinds_per_network.contains(static_cast<int>(kinds.size())))
      add(Errc::RelationKindConstraint, nid,
          std::to_string(kinds.size()) + " relation kinds");
    if (!connected(net)) add(Errc::Disconnected, nid);

    auto bank_it = puzzle.banks.find(nid);
    if (bank_it == puzzle.banks.end()) {
      add(Errc::BankSize, nid, "no term bank");
      continue;
    }
    const auto& bank = bank_it->second;
    const std::size_t expected =
        net.slots.size() + static_cast<std::size_t>(std::max(0, spec.distractors_per_network));
    if (bank.size() != expected)
      add(Errc::BankSize, nid,
          std::to_string(bank.size()) + " terms, expected " + std::to_string(expected));
    std::set<std::string_view> distinct;
    for (const auto& term : bank) {
      if (!distinct.insert(term).second) add(Errc::DuplicateTerm, nid, term);
      int owners = 0;
      for (const auto& slot : net.slots) owners += slot.accepts(term) ? 1 : 0;
      if (owners > 1) add(Errc::AmbiguousAnswer, nid, "'" + term + "' fits several slots");
    }
    for (const auto& slot : net.slots) {
      auto hits = std::count_if(bank.begin(), bank.end(),
                                [&](const std::string& t) { return slot.accepts(t); });
      if (hits == 0) add(Errc::MissingAnswer, slot.slot_id);
      if (hits > 1) add(Errc::AmbiguousAnswer, slot.slot_id, "several bank terms fit");
    }
  }

  if (spec.one_pos_per_network &&
      network_pos.size() != puzzle.networks.size())
    add(Errc::PosConstraint, puzzle.puzzle_id, "networks must use distinct parts of speech");
  return out;
}

void attach_answers(Puzzle& puzzle, const Lexicon& lex,
                    const std::map<std::string, std::string>& slot_to_synset) {
  for (auto& net : puzzle.networks) {
    for (auto& slot : net.slots) {
      auto it = slot_to_synset.find(slot.slot_id);
      if (it == slot_to_synset.end())
        throw Error(Errc::UnknownSlot, "no answer recorded for slot " + slot.slot_id);
      const auto& s = lex.at(it->second);
      slot.synset_id = s.id;
      slot.answer_lemmas = s.lemmas;
    }
  }
}

}  // namespace ontoling
