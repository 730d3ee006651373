#include "calor/affine.hpp"

#include <cctype>
#include <sstream>

#include "calor/errors.hpp"

namespace calor {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnbalancedDelimiter: return "UnbalancedDelimiter";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MalformedDatabase: return "MalformedDatabase";
    case ErrorCode::ConflictingState: return "ConflictingState";
    case ErrorCode::CyclicInheritance: return "CyclicInheritance";
    case ErrorCode::NoComponents: return "NoComponents";
    case ErrorCode::MissingDomain: return "MissingDomain";
    case ErrorCode::OverlappingDomains: return "OverlappingDomains";
    case ErrorCode::IncompleteRobin: return "IncompleteRobin";
    case ErrorCode::UnknownFace: return "UnknownFace";
    case ErrorCode::MissingConductivity: return "MissingConductivity";
    case ErrorCode::DuplicateBinding: return "DuplicateBinding";
    case ErrorCode::NonNumericRHS: return "NonNumericRHS";
    case ErrorCode::UncoveredBoundary: return "UncoveredBoundary";
    case ErrorCode::MissingBinding: return "MissingBinding";
    case ErrorCode::Unclassifiable: return "Unclassifiable";
    case ErrorCode::NonPositiveDimension: return "NonPositiveDimension";
    case ErrorCode::NoSharedFace: return "NoSharedFace";
    case ErrorCode::DanglingComponent: return "DanglingComponent";
    case ErrorCode::DegenerateFin: return "DegenerateFin";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::LocationOutsideDomain: return "LocationOutsideDomain";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::Io: return "Io";
    case ErrorCode::BadArguments: return "BadArguments";
  }
  return "Unknown";
}

std::optional<Rational> parse_decimal(const std::string& s) {
  if (s.empty()) return std::nullopt;
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') { neg = s[i] == '-'; ++i; }
  boost::multiprecision::cpp_int num = 0, den = 1;
  bool any_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit((unsigned char)c)) {
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
      any_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && any_digit) {
      ++i;
      bool eneg = false;
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) { eneg = s[i] == '-'; ++i; }
      if (i >= s.size()) return std::nullopt;
      long ev = 0;
      for (; i < s.size(); ++i) {
        if (!std::isdigit((unsigned char)s[i])) return std::nullopt;
        ev = ev * 10 + (s[i] - '0');
        if (ev > 1000) return std::nullopt;
      }
      for (long k = 0; k < ev; ++k) {
        if (eneg) den *= 10; else num *= 10;
      }
      break;
    } else {
      return std::nullopt;
    }
  }
  if (!any_digit) return std::nullopt;
  Rational r(num, den);
  return neg ? -r : r;
}

std::string to_string_exact(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Affine Affine::number(const Rational& c) {
  Affine a;
  a.constant = c;
  return a;
}

Affine Affine::symbol(const std::string& s) {
  Affine a;
  a.terms[s] = 1;
  return a;
}

static void add_term(Affine& a, const std::string& s, const Rational& c) {
  auto it = a.terms.find(s);
  if (it == a.terms.end()) {
    if (c != 0) a.terms[s] = c;
    return;
  }
  it->second += c;
  if (it->second == 0) a.terms.erase(it);
}

Affine Affine::operator+(const Affine& o) const {
  Affine r = *this;
  r.constant += o.constant;
  for (const auto& [s, c] : o.terms) add_term(r, s, c);
  return r;
}

Affine Affine::operator-(const Affine& o) const {
  Affine r = *this;
  r.constant -= o.constant;
  for (const auto& [s, c] : o.terms) add_term(r, s, -c);
  return r;
}

Affine Affine::operator-() const { return Affine{}.operator-(*this); }

Affine Affine::scaled(const Rational& c) const {
  Affine r;
  r.constant = constant * c;
  if (c != 0)
    for (const auto& [s, k] : terms) r.terms[s] = k * c;
  return r;
}

bool Affine::is_single_symbol() const {
  return constant == 0 && terms.size() == 1 && terms.begin()->second == 1;
}

std::optional<Rational> Affine::evaluate(const std::map<std::string, Rational>& bindings) const {
  Rational v = constant;
  for (const auto& [s, c] : terms) {
    auto it = bindings.find(s);
    if (it == bindings.end()) return std::nullopt;
    v += c * it->second;
  }
  return v;
}

std::string Affine::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : terms) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Rational a = abs(c);
    if (a != 1) os << a << "*";
    os << s;
  }
  if (first) {
    os << constant;
  } else if (constant != 0) {
    os << (constant < 0 ? " - " : " + ") << abs(constant);
  }
  return os.str();
}

// ---- tiny recursive-descent parser for span contents ---------------------

namespace {

struct Lexer {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool is_ident_start(char c) { return std::isalpha((unsigned char)c); }
  bool is_ident_char(char c) {
    return std::isalnum((unsigned char)c) || c == '_' || c == '^' || c == '\'';
  }

  std::optional<std::string> ident() {
    skip_ws();
    if (i >= s.size() || !is_ident_start(s[i])) return std::nullopt;
    size_t j = i;
    while (j < s.size() && is_ident_char(s[j])) ++j;
    std::string r = s.substr(i, j - i);
    i = j;
    return r;
  }

  std::optional<Rational> number() {
    skip_ws();
    size_t j = i;
    if (j < s.size() && !std::isdigit((unsigned char)s[j]) && s[j] != '.') return std::nullopt;
    while (j < s.size() && (std::isdigit((unsigned char)s[j]) || s[j] == '.')) ++j;
    // exponent only when followed by digits; bare 'e' stays an identifier
    if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
      size_t k = j + 1;
      if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
      if (k < s.size() && std::isdigit((unsigned char)s[k])) {
        while (k < s.size() && std::isdigit((unsigned char)s[k])) ++k;
        j = k;
      }
    }
    if (j == i) return std::nullopt;
    auto r = parse_decimal(s.substr(i, j - i));
    if (r) i = j;
    return r;
  }
};

struct Parser {
  Lexer lx;
  bool ok = true;

  std::optional<Affine> factor() {
    char c = lx.peek();
    if (c == '-') {
      ++lx.i;
      auto f = factor();
      if (!f) return std::nullopt;
      return -*f;
    }
    if (c == '+') {
      ++lx.i;
      return factor();
    }
    if (c == '(') {
      ++lx.i;
      auto e = expr();
      if (!e || lx.peek() != ')') return std::nullopt;
      ++lx.i;
      return e;
    }
    if (auto n = lx.number()) {
      // implicit multiplication: "2L", "2 L" only via '*' or adjacency
      if (lx.i < lx.s.size() && lx.is_ident_start(lx.s[lx.i])) {
        auto id = lx.ident();
        if (!id) return std::nullopt;
        return Affine::symbol(*id).scaled(*n);
      }
      return Affine::number(*n);
    }
    if (auto id = lx.ident()) return Affine::symbol(*id);
    return std::nullopt;
  }

  std::optional<Affine> term() {
    auto f = factor();
    if (!f) return std::nullopt;
    while (lx.peek() == '*') {
      ++lx.i;
      auto g = factor();
      if (!g) return std::nullopt;
      if (f->is_constant())
        f = g->scaled(f->constant);
      else if (g->is_constant())
        f = f->scaled(g->constant);
      else
        return std::nullopt;  // nonlinear
    }
    return f;
  }

  std::optional<Affine> expr() {
    auto t = term();
    if (!t) return std::nullopt;
    while (true) {
      char c = lx.peek();
      if (c == '+') {
        ++lx.i;
        auto u = term();
        if (!u) return std::nullopt;
        t = *t + *u;
      } else if (c == '-') {
        ++lx.i;
        auto u = term();
        if (!u) return std::nullopt;
        t = *t - *u;
      } else {
        break;
      }
    }
    return t;
  }

  std::optional<RelChain> chain() {
    RelChain ch;
    auto e = expr();
    if (!e) return std::nullopt;
    ch.exprs.push_back(*e);
    while (true) {
      char c = lx.peek();
      Rel r;
      if (c == '<') {
        r = Rel::Less;
        ++lx.i;
        if (lx.peek() == '=') ++lx.i;  // treat <= as <, closed ends are not used
      } else if (c == '=') {
        r = Rel::Equal;
        ++lx.i;
      } else if (c == '>') {
        // normalize a > b as b < a only for simple pairs; chains use <
        ++lx.i;
        auto f = expr();
        if (!f) return std::nullopt;
        ch.rels.push_back(Rel::Less);
        ch.exprs.insert(ch.exprs.end() - 1, *f);
        std::swap(ch.exprs[ch.exprs.size() - 2], ch.exprs[ch.exprs.size() - 1]);
        continue;
      } else {
        break;
      }
      auto f = expr();
      if (!f) return std::nullopt;
      ch.rels.push_back(r);
      ch.exprs.push_back(*f);
    }
    if (ch.exprs.size() < 2) return std::nullopt;
    return ch;
  }
};

}  // namespace

std::optional<Affine> parse_affine_text(const std::string& text) {
  Parser p{Lexer{text}};
  auto e = p.expr();
  if (!e || !p.lx.eof()) return std::nullopt;
  return e;
}

std::optional<EquationSpan> parse_equation_text(const std::string& text) {
  EquationSpan span;
  size_t start = 0;
  // split on top-level commas
  int depth = 0;
  std::vector<std::string> parts;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    } else if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')') {
      --depth;
    }
  }
  for (const auto& part : parts) {
    Parser p{Lexer{part}};
    auto ch = p.chain();
    if (!ch || !p.lx.eof()) return std::nullopt;
    span.chains.push_back(*ch);
  }
  if (span.chains.empty()) return std::nullopt;
  return span;
}

}  // namespace calor
