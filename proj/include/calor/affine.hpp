#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "calor/rational.hpp"

namespace calor {

// Affine expression over named symbols: sum of coeff*symbol plus a constant.
// This is the only symbolic form the controlled language needs (domain
// endpoints, face locations, parameter bindings).
struct Affine {
  std::map<std::string, Rational> terms;  // symbol -> coefficient, no zeros
  Rational constant = 0;

  static Affine number(const Rational& c);
  static Affine symbol(const std::string& s);

  Affine operator+(const Affine& o) const;
  Affine operator-(const Affine& o) const;
  Affine operator-() const;
  Affine scaled(const Rational& c) const;

  bool operator==(const Affine& o) const { return terms == o.terms && constant == o.constant; }
  bool is_constant() const { return terms.empty(); }
  bool is_single_symbol() const;  // exactly "x" with coefficient 1

  // Evaluate with the given bindings.  Nullopt if a symbol is unbound.
  std::optional<Rational> evaluate(const std::map<std::string, Rational>& bindings) const;

  std::string str() const;  // canonical printable form
};

enum class Rel { Less, Equal };

// One relational chain, e.g. "0 < x < L_f" or "T_in = 23".
struct RelChain {
  std::vector<Affine> exprs;  // n >= 2
  std::vector<Rel> rels;      // n-1 relations between consecutive exprs
};

// Parsed content of a $...$ equation span: comma-separated relational chains.
struct EquationSpan {
  std::vector<RelChain> chains;
};

// Parse the text inside an equation span.  Returns nullopt when the text is
// not affine-relational (such spans are carried through as opaque symbols).
std::optional<EquationSpan> parse_equation_text(const std::string& text);

// Parse an affine expression with +, -, number*symbol and implicit "2L".
std::optional<Affine> parse_affine_text(const std::string& text);

}  // namespace calor
