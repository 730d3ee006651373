#include "calor/lexicon.hpp"

#include <sstream>

#include "calor/errors.hpp"

namespace calor::embedded {
extern const char k_lexicon[];
extern const char k_retag_rules[];
}  // namespace calor::embedded

namespace calor::text {

static std::optional<Pos> pos_from(const std::string& s) {
  if (s == "NOUN") return Pos::Noun;
  if (s == "VERB") return Pos::Verb;
  if (s == "ADJ") return Pos::Adj;
  if (s == "ADP") return Pos::Adp;
  if (s == "DET") return Pos::Det;
  if (s == "CONJ") return Pos::Conj;
  if (s == "NUM") return Pos::Num;
  return std::nullopt;
}

static std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == '\t') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

Lexicon Lexicon::parse(const std::string& lexicon_tsv, const std::string& retag_tsv) {
  Lexicon lex;
  std::istringstream in(lexicon_tsv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split_tabs(line);
    if (f.size() < 3) throw Error(ErrorCode::Io, "bad lexicon line: " + line);
    auto pos = pos_from(f[1]);
    if (!pos) throw Error(ErrorCode::Io, "bad lexicon pos: " + line);
    LexEntry e;
    e.pos = *pos;
    e.lemma = f[2];
    if (f.size() >= 4 && !f[3].empty()) {
      if (f[3] == "present") e.tense = Tense::Present;
      else if (f[3] == "past") e.tense = Tense::Past;
      else if (f[3] == "other") e.tense = Tense::Other;
      else throw Error(ErrorCode::Io, "bad lexicon tense: " + line);
    }
    lex.entries_[f[0]] = e;
  }

  std::istringstream rin(retag_tsv);
  while (std::getline(rin, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split_tabs(line);
    if (f.size() < 4) throw Error(ErrorCode::Io, "bad retag line: " + line);
    RetagRule r;
    r.word = f[0];
    r.prev = f[1] == "*" ? "" : f[1];
    r.next = f[2] == "*" ? "" : f[2];
    if (f[3] == "definition") {
      r.mark_definition = true;
    } else {
      auto pos = pos_from(f[3]);
      if (!pos) throw Error(ErrorCode::Io, "bad retag action: " + line);
      r.new_pos = pos;
    }
    lex.rules_.push_back(r);
  }
  return lex;
}

std::optional<LexEntry> Lexicon::lookup(const std::string& w) const {
  auto it = entries_.find(w);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon lex =
      Lexicon::parse(embedded::k_lexicon, embedded::k_retag_rules);
  return lex;
}

}  // namespace calor::text
