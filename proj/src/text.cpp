#include "calor/text.hpp"

#include <cctype>
#include <sstream>

#include "calor/errors.hpp"
#include "calor/lexicon.hpp"

namespace calor::text {

const char* to_string(Pos p) {
  switch (p) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adp: return "ADP";
    case Pos::Det: return "DET";
    case Pos::Conj: return "CONJ";
    case Pos::Punct: return "PUNCT";
    case Pos::Num: return "NUM";
    case Pos::Symbol: return "SYMBOL";
    case Pos::Equation: return "EQUATION";
  }
  return "?";
}

static std::string collapse_ws(const std::string& s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (std::isspace((unsigned char)c)) {
      pending = !out.empty();
    } else {
      if (pending) out += ' ';
      pending = false;
      out += c;
    }
  }
  return out;
}

static SpanKind classify_span(const std::string& inner) {
  for (char c : inner)
    if (c == '<' || c == '=' || c == '>') return SpanKind::Equation;
  if (parse_decimal(collapse_ws(inner))) return SpanKind::Number;
  return SpanKind::Symbol;
}

MarkedText normalize_markup(const std::string& raw) {
  bool any_content = false;
  for (char c : raw)
    if (!std::isspace((unsigned char)c)) { any_content = true; break; }
  if (!any_content) throw Error(ErrorCode::EmptyInput, "statement has no content");

  MarkedText mt;
  std::string current;
  bool in_math = false;
  std::string math;

  auto flush_sentence = [&]() {
    std::string s = collapse_ws(current);
    current.clear();
    if (!s.empty()) mt.sentences.push_back(s);
  };

  for (size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c == '$') {
      if (!in_math) {
        in_math = true;
        math.clear();
      } else {
        in_math = false;
        MathSpan span;
        span.inner = collapse_ws(math);
        span.kind = classify_span(span.inner);
        if (span.kind == SpanKind::Number) span.number = parse_decimal(span.inner);
        if (span.kind == SpanKind::Equation) span.equation = parse_equation_text(span.inner);
        current += '$';
        current += span.inner;
        current += '$';
        mt.spans.push_back(std::move(span));
      }
      continue;
    }
    if (in_math) {
      math += c;
      continue;
    }
    if (c == '.' || c == ';') {
      // '.' inside a number like "0.5" never appears outside math in the
      // controlled language; sentence end always follows a word.
      flush_sentence();
      continue;
    }
    current += c;
  }
  if (in_math)
    throw Error(ErrorCode::UnbalancedDelimiter, "unterminated $ span",
                (int)mt.sentences.size());
  flush_sentence();
  if (mt.sentences.empty()) throw Error(ErrorCode::EmptyInput, "statement has no sentences");
  return mt;
}

// ---- tagging -------------------------------------------------------------

static bool is_word_char(char c) {
  return std::isalnum((unsigned char)c) || c == '-' || c == '\'' || c == '_' || c == '^';
}

static std::string lower(const std::string& s) {
  std::string r = s;
  for (char& c : r) c = (char)std::tolower((unsigned char)c);
  return r;
}

static bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit((unsigned char)c)) return false;
  return true;
}

void tag_tokens(MarkedText& mt, const Lexicon& lex) {
  mt.tokens.assign(mt.sentences.size(), {});
  int span_cursor = 0;
  // spans are stored in document order; count spans per sentence by scanning
  for (size_t si = 0; si < mt.sentences.size(); ++si) {
    const std::string& s = mt.sentences[si];
    std::vector<Token>& out = mt.tokens[si];
    size_t i = 0;
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace((unsigned char)c)) { ++i; continue; }
      Token t;
      t.sentence = (int)si;
      t.position = (int)out.size();
      if (c == '$') {
        size_t j = s.find('$', i + 1);  // guaranteed by normalize_markup
        t.word = s.substr(i, j - i + 1);
        t.span = span_cursor++;
        const MathSpan& sp = mt.spans[t.span];
        t.pos = sp.kind == SpanKind::Equation ? Pos::Equation
              : sp.kind == SpanKind::Number   ? Pos::Num
                                              : Pos::Symbol;
        t.lemma = lower(sp.inner);
        i = j + 1;
      } else if (is_word_char(c)) {
        size_t j = i;
        while (j < s.size() && is_word_char(s[j])) ++j;
        t.word = s.substr(i, j - i);
        std::string lw = lower(t.word);
        t.lemma = lw;
        bool any_alnum = false;
        for (char w : lw)
          if (std::isalnum((unsigned char)w)) { any_alnum = true; break; }
        if (!any_alnum) {
          t.pos = Pos::Punct;  // a lone "-" between spaces
        } else if (all_digits(lw)) {
          t.pos = Pos::Num;
        } else if (auto e = lex.lookup(lw)) {
          t.pos = e->pos;
          t.lemma = e->lemma;
          t.tense = e->tense;
        } else if (lw.size() > 4 && lw.ends_with("ing")) {
          t.pos = Pos::Verb;
          t.tense = Tense::Other;
        } else if (lw.size() > 3 && lw.ends_with("ed")) {
          t.pos = Pos::Verb;
          t.tense = Tense::Past;
        } else {
          t.pos = Pos::Noun;  // unknown words default to Noun
        }
        i = j;
      } else {
        t.word = std::string(1, c);
        t.lemma = t.word;
        t.pos = Pos::Punct;
        ++i;
      }
      out.push_back(std::move(t));
    }
  }
}

void prepare_syntax(MarkedText& mt, const Lexicon& lex) {
  for (auto& sentence : mt.tokens) {
    for (size_t i = 0; i < sentence.size(); ++i) {
      Token& t = sentence[i];
      for (const RetagRule& r : lex.retag_rules()) {
        if (r.word != lower(t.word) && r.word != t.lemma) continue;
        if (!r.prev.empty()) {
          if (i == 0 || (sentence[i - 1].lemma != r.prev)) continue;
        }
        if (!r.next.empty()) {
          if (i + 1 >= sentence.size() || sentence[i + 1].lemma != r.next) continue;
        }
        if (r.new_pos) {
          t.pos = *r.new_pos;
          if (t.pos != Pos::Verb) t.tense = Tense::None;
        }
        if (r.mark_definition) t.definition_verb = true;
      }
    }
  }
}

std::string detokenize(const std::vector<Token>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    bool no_space = out.empty();
    if (t.pos == Pos::Punct && t.word != "(" && t.word != "-") no_space = true;
    if (!out.empty() && out.back() == '(') no_space = true;
    if (!no_space) out += ' ';
    out += t.word;
  }
  return out;
}

}  // namespace calor::text
