#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "calor/text.hpp"

namespace calor::text {

struct LexEntry {
  Pos pos;
  std::string lemma;
  Tense tense = Tense::None;
};

// One context-sensitive retag rule.  Empty prev/next match anything;
// otherwise they match the neighbouring token's lemma.
struct RetagRule {
  std::string word;
  std::string prev;
  std::string next;
  std::optional<Pos> new_pos;
  bool mark_definition = false;
};

class Lexicon {
 public:
  // Bundled lexicon + retag table (baked in at build time).
  static const Lexicon& builtin();

  // Parse from TSV text: word<TAB>pos<TAB>lemma[<TAB>tense]
  static Lexicon parse(const std::string& lexicon_tsv, const std::string& retag_tsv);

  std::optional<LexEntry> lookup(const std::string& lowercased) const;
  const std::vector<RetagRule>& retag_rules() const { return rules_; }
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, LexEntry> entries_;
  std::vector<RetagRule> rules_;
};

}  // namespace calor::text
