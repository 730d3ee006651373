#pragma once
// Internal helpers shared by the frame parser stages.
#include <set>
#include <string>
#include <vector>

#include "calor/frame.hpp"

namespace calor::frame::detail {

using text::Pos;
using text::Tense;
using text::Token;

// A maximal ADJ/NOUN token run (plus a trailing instance index).
struct Run {
  int sentence = 0;
  int begin = 0, end = 0;  // token range [begin, end)
  std::string name;        // lowercased surface join
};

// An occurrence of a known entity in the text.
struct Mention {
  int sentence = 0;
  int begin = 0, end = 0;
  EntityId entity = -1;
};

struct Vocab {
  std::vector<std::vector<std::string>> connection;   // lemma/surface patterns
  std::vector<std::vector<std::string>> inheritance;
  std::set<std::string> fluid_words, solid_words, insulator_words;
  std::set<std::string> find_verbs;
};

const Vocab& vocab();

std::string lower(const std::string& s);
std::string join_words(const std::vector<Token>& toks, int begin, int end);

// All entity-shaped runs of a sentence (no "of" compounding).
std::vector<Run> scan_runs(const std::vector<Token>& toks, int sentence);

// Every occurrence of a frame entity, longest-match, document order.
std::vector<Mention> find_mentions(const Frame& f, const MarkedText& mt);

// Nearest mention list ending before token `pos`: a comma/and-chain of
// mentions separated only by DET/CONJ/comma tokens.
std::vector<Mention> subjects_before(const std::vector<Mention>& mentions,
                                     const std::vector<Token>& toks,
                                     int sentence, int pos);

// Contiguous mention list starting at or after token `pos`.
std::vector<Mention> objects_after(const std::vector<Mention>& mentions,
                                   const std::vector<Token>& toks,
                                   int sentence, int pos);

// Try to match a vocabulary pattern at token i; returns one-past-the-end
// token index, or -1.  Handles the copular "be" guard and reduced-relative
// participles ("a head connected to a handle").
int match_pattern_at(const std::vector<Token>& toks, int i,
                     const std::vector<std::string>& pat);

// Index of the clause's main verb: first present-tense, non-definition verb.
int main_verb(const std::vector<Token>& toks);

bool attribute_has_word(const std::string& attribute, const std::set<std::string>& words);

}  // namespace calor::frame::detail
