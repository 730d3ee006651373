#pragma once
#include <optional>
#include <string>
#include <vector>

#include "calor/affine.hpp"

namespace calor::text {

enum class Pos { Noun, Verb, Adj, Adp, Det, Conj, Punct, Num, Symbol, Equation };
enum class Tense { Present, Past, Other, None };

const char* to_string(Pos p);

// Kind of a $...$ math span, decided purely by its characters: a relational
// operator makes it an equation, a bare numeric literal a number, anything
// else a symbol.
enum class SpanKind { Symbol, Number, Equation };

struct MathSpan {
  SpanKind kind;
  std::string inner;  // text between the delimiters
  // parsed payloads (present when the text parses)
  std::optional<Rational> number;
  std::optional<EquationSpan> equation;
};

struct Token {
  std::string word;   // surface text, math spans keep their $ delimiters
  std::string lemma;  // lowercased lemma; equals lowercased word if unknown
  Pos pos = Pos::Noun;
  Tense tense = Tense::None;
  int sentence = 0;  // sentence index
  int position = 0;  // token index within the sentence
  int span = -1;     // index into MarkedText::spans for math tokens
  bool definition_verb = false;  // marked by prepare_syntax ("let", "denote")
};

struct MarkedText {
  std::vector<std::string> sentences;  // normalized sentence texts
  std::vector<MathSpan> spans;         // all math spans in document order
  std::vector<std::vector<Token>> tokens;  // filled by tag_tokens
};

// Split the raw statement into sentences at '.' and ';' outside math spans,
// normalize whitespace, and classify the $...$ spans.
// Throws UnbalancedDelimiter / EmptyInput.
MarkedText normalize_markup(const std::string& raw);

class Lexicon;  // see lexicon.hpp

// Tokenize and tag every sentence with the lexicon plus suffix fallback.
// Unknown words default to Noun.
void tag_tokens(MarkedText& mt, const Lexicon& lex);

// Apply the context retag table and mark definition verbs.
void prepare_syntax(MarkedText& mt, const Lexicon& lex);

// Reassemble a sentence from its tokens using the spacing rules; used by the
// round-trip test and the report's normalized echo.
std::string detokenize(const std::vector<Token>& tokens);

}  // namespace calor::text
