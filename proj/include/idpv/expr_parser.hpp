#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "idpv/idring.hpp"

namespace idpv {

/// Syntax tree of a polynomial expression. Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' integer)?
///   atom   := integer | 't' | 'T' | '(' expr ')'
/// Whitespace is ignored. Columns are 1-based.
struct Expr {
  enum class Op { Number, VarT, VarBigT, Add, Sub, Mul, Div, Neg, Pow };
  Op op = Op::Number;
  std::string number;
  unsigned exponent = 0;
  std::vector<Expr> args;
  int column = 1;
};

/// Throws ParseError("column c: ...").
Expr parse_expression(std::string_view text);

/// Polynomial in t over f; T is rejected and division only by nonzero constants.
Poly expr_to_poly(const Expr& e, const Field& f);
/// Polynomial in T with coefficients in the base ring; division only by units.
std::vector<BaseElem> expr_to_base_poly(const Expr& e, const IdRing& base);
/// Like expr_to_base_poly, but T must not occur.
BaseElem expr_to_base(const Expr& e, const IdRing& base);

Poly parse_poly(std::string_view text, const Field& f);
BaseElem parse_base(std::string_view text, const IdRing& base);

/// Canonical text that parses back to the same value.
std::string base_to_text(const BaseElem& x);
std::string base_poly_to_text(const std::vector<BaseElem>& coeffs);

}  // namespace idpv
