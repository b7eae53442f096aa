#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

#include "ontoling/lexicon.hpp"

namespace ontoling {

std::string normalize_term(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c) || c == '_') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += static_cast<char>(std::tolower(c));
  }
  if (out.empty()) throw Error(Errc::EmptyTerm, "term is empty after normalization");
  return out;
}

namespace {

struct Token {
  std::string text;
  bool quoted = false;
};

[[noreturn]] void syntax_error(std::size_t line, const std::string& reason) {
  throw Error(Errc::SyntaxError,
              "line " + std::to_string(line) + ": " + reason);
}

std::vector<Token> tokenize(std::string_view line, std::size_t lineno) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (i < line.size()) {
    if (is_space(line[i])) {
      ++i;
      continue;
    }
    Token tok;
    if (line[i] == '"') {
      tok.quoted = true;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char c = line[i++];
        if (c == '"') {
          closed = true;
          break;
        }
        if (c == '\\') {
          if (i >= line.size()) syntax_error(lineno, "dangling escape");
          char e = line[i++];
          switch (e) {
            case '"': tok.text += '"'; break;
            case '\\': tok.text += '\\'; break;
            case 'n': tok.text += '\n'; break;
            case 't': tok.text += '\t'; break;
            default: syntax_error(lineno, std::string("unknown escape \\") + e);
          }
          continue;
        }
        tok.text += c;
      }
      if (!closed) syntax_error(lineno, "unterminated quoted string");
      if (i < line.size() && !is_space(line[i]))
        syntax_error(lineno, "missing whitespace after quoted string");
    } else {
      while (i < line.size() && !is_space(line[i])) tok.text += line[i++];
    }
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

Synset parse_synset(const std::vector<Token>& tok, std::size_t lineno) {
  if (tok.size() < 5) syntax_error(lineno, "synset needs: id pos \"gloss\" lemmas");
  if (tok[1].quoted || tok[2].quoted || tok[4].quoted)
    syntax_error(lineno, "synset id, pos and lemmas must be bare tokens");
  if (!tok[3].quoted) syntax_error(lineno, "gloss must be double-quoted");

  Synset s;
  s.id = tok[1].text;
  auto pos = pos_from_token(tok[2].text);
  if (!pos) syntax_error(lineno, "unknown part of speech '" + tok[2].text + "'");
  s.pos = *pos;
  s.gloss = tok[3].text;
  if (s.gloss.empty()) syntax_error(lineno, "empty gloss");

  std::string_view lemmas = tok[4].text;
  std::set<std::string> seen;
  while (true) {
    auto bar = lemmas.find('|');
    auto piece = lemmas.substr(0, bar);
    std::string norm;
    try {
      norm = normalize_term(piece);
    } catch (const Error&) {
      syntax_error(lineno, "empty lemma");
    }
    if (!seen.insert(norm).second)
      syntax_error(lineno, "duplicate lemma '" + norm + "'");
    s.lemmas.push_back(std::move(norm));
    if (bar == std::string_view::npos) break;
    lemmas.remove_prefix(bar + 1);
  }

  for (std::size_t i = 5; i < tok.size(); ++i) {
    if (!tok[i].quoted) syntax_error(lineno, "examples must be double-quoted");
    s.examples.push_back(tok[i].text);
  }
  return s;
}

Relation parse_relation(const std::vector<Token>& tok, std::size_t lineno) {
  if (tok.size() != 4) syntax_error(lineno, "rel needs: kind source target");
  for (std::size_t i = 1; i < 4; ++i)
    if (tok[i].quoted) syntax_error(lineno, "rel fields must be bare tokens");
  auto kind = kind_from_token(tok[1].text);
  if (!kind) syntax_error(lineno, "unknown relation kind '" + tok[1].text + "'");
  return {*kind, tok[2].text, tok[3].text};
}

void append_quoted(std::string& out, std::string_view text) {
  out += '"';
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

}  // namespace

Lexicon parse_lexicon_unchecked(std::string_view text) {
  std::vector<Synset> synsets;
  std::vector<Relation> relations;
  std::size_t lineno = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;

    auto tok = tokenize(line, lineno);
    if (tok.front().quoted) syntax_error(lineno, "expected 'synset' or 'rel'");
    if (tok.front().text == "synset")
      synsets.push_back(parse_synset(tok, lineno));
    else if (tok.front().text == "rel")
      relations.push_back(parse_relation(tok, lineno));
    else
      syntax_error(lineno, "unknown declaration '" + tok.front().text + "'");
  }
  return Lexicon(std::move(synsets), std::move(relations));
}

Lexicon parse_lexicon(std::string_view text) {
  Lexicon lex = parse_lexicon_unchecked(text);
  auto violations = validate_lexicon(lex);
  if (!violations.empty())
    throw Error(violations.front().rule, describe(violations.front()));
  return lex;
}

std::string serialize_lexicon(const Lexicon& lex) {
  std::string out;
  for (const auto& s : lex.synsets()) {
    out += "synset ";
    out += s.id;
    out += ' ';
    out += to_token(s.pos);
    out += ' ';
    append_quoted(out, s.gloss);
    out += ' ';
    for (std::size_t i = 0; i < s.lemmas.size(); ++i) {
      if (i) out += '|';
      std::string lemma = s.lemmas[i];
      std::replace(lemma.begin(), lemma.end(), ' ', '_');
      out += lemma;
    }
    for (const auto& ex : s.examples) {
      out += ' ';
      append_quoted(out, ex);
    }
    out += '\n';
  }
  for (const auto& r : lex.relations()) {
    out += "rel ";
    out += to_token(r.kind);
    out += ' ';
    out += r.source;
    out += ' ';
    out += r.target;
    out += '\n';
  }
  return out;
}

std::string lexicon_fingerprint(const Lexicon& lex) {
  // FNV-1a, 64-bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_lexicon(lex)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("lex-") + buf;
}

}  // namespace ontoling
