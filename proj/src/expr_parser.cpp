#include "idpv/expr_parser.hpp"

#include <cctype>

namespace idpv {

namespace {

constexpr unsigned kMaxExponent = 4096;

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::ParseError, "column " + std::to_string(i_ + 1) + ": " + msg);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool accept(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  int col() const { return static_cast<int>(i_) + 1; }

  static Expr node(Expr::Op op, int column, std::vector<Expr> args) {
    Expr e;
    e.op = op;
    e.column = column;
    e.args = std::move(args);
    return e;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      skip();
      const int c = col();
      if (accept('+')) {
        lhs = node(Expr::Op::Add, c, {std::move(lhs), term()});
      } else if (accept('-')) {
        lhs = node(Expr::Op::Sub, c, {std::move(lhs), term()});
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      skip();
      const int c = col();
      if (accept('*')) {
        lhs = node(Expr::Op::Mul, c, {std::move(lhs), unary()});
      } else if (accept('/')) {
        lhs = node(Expr::Op::Div, c, {std::move(lhs), unary()});
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    skip();
    const int c = col();
    if (accept('-')) return node(Expr::Op::Neg, c, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    skip();
    const int c = col();
    if (!accept('^')) return base;
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected a nonnegative integer exponent");
    const std::string digits(s_.substr(start, i_ - start));
    if (digits.size() > 6 || std::stoul(digits) > kMaxExponent) {
      i_ = start;
      fail("exponent too large");
    }
    Expr e = node(Expr::Op::Pow, c, {std::move(base)});
    e.exponent = static_cast<unsigned>(std::stoul(digits));
    return e;
  }

  Expr atom() {
    skip();
    const int c = col();
    if (i_ >= s_.size()) fail("unexpected end of expression");
    const char ch = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      const std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      Expr e = node(Expr::Op::Number, c, {});
      e.number = std::string(s_.substr(start, i_ - start));
      return e;
    }
    if (ch == 't' || ch == 'T') {
      ++i_;
      if (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
        i_ = static_cast<std::size_t>(c - 1);
        fail("unknown identifier");
      }
      return node(ch == 't' ? Expr::Op::VarT : Expr::Op::VarBigT, c, {});
    }
    if (ch == '(') {
      ++i_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) fail("unknown identifier");
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

[[noreturn]] void eval_fail(const Expr& e, const std::string& msg) {
  throw Error(Errc::ParseError, "column " + std::to_string(e.column) + ": " + msg);
}

Poly eval_poly(const Expr& e, const Field& f) {
  switch (e.op) {
    case Expr::Op::Number:
      return Poly(Scalar::parse(e.number, f));
    case Expr::Op::VarT:
      return Poly::monomial(Scalar::in_field(Scalar(1), f), 1);
    case Expr::Op::VarBigT:
      eval_fail(e, "T is not allowed here");
    case Expr::Op::Add:
      return eval_poly(e.args[0], f) + eval_poly(e.args[1], f);
    case Expr::Op::Sub:
      return eval_poly(e.args[0], f) - eval_poly(e.args[1], f);
    case Expr::Op::Mul:
      return eval_poly(e.args[0], f) * eval_poly(e.args[1], f);
    case Expr::Op::Neg:
      return -eval_poly(e.args[0], f);
    case Expr::Op::Pow:
      return eval_poly(e.args[0], f).pow(e.exponent);
    case Expr::Op::Div: {
      const Poly d = eval_poly(e.args[1], f);
      if (!d.is_constant() || d.is_zero()) eval_fail(e, "division by a nonconstant or zero polynomial");
      return eval_poly(e.args[0], f) * d.coeff(0).inverse();
    }
  }
  eval_fail(e, "bad expression");
}

using TPoly = std::vector<BaseElem>;

TPoly trim(TPoly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

TPoly add(const TPoly& a, const TPoly& b, bool negate_b) {
  TPoly r(std::max(a.size(), b.size()), BaseElem(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += negate_b ? -b[i] : b[i];
  return trim(std::move(r));
}

TPoly mul(const TPoly& a, const TPoly& b) {
  if (a.empty() || b.empty()) return {};
  TPoly r(a.size() + b.size() - 1, BaseElem(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return trim(std::move(r));
}

TPoly eval_base(const Expr& e, const IdRing& base) {
  switch (e.op) {
    case Expr::Op::Number:
      return trim({base.constant(Scalar::parse(e.number, base.field()))});
    case Expr::Op::VarT:
      return {base.t()};
    case Expr::Op::VarBigT:
      return {BaseElem(0), base.constant(Scalar(1))};
    case Expr::Op::Add:
      return add(eval_base(e.args[0], base), eval_base(e.args[1], base), false);
    case Expr::Op::Sub:
      return add(eval_base(e.args[0], base), eval_base(e.args[1], base), true);
    case Expr::Op::Mul:
      return mul(eval_base(e.args[0], base), eval_base(e.args[1], base));
    case Expr::Op::Neg:
      return add({}, eval_base(e.args[0], base), true);
    case Expr::Op::Pow: {
      const TPoly b = eval_base(e.args[0], base);
      TPoly r{base.constant(Scalar(1))};
      for (unsigned i = 0; i < e.exponent; ++i) r = mul(r, b);
      return r;
    }
    case Expr::Op::Div: {
      const TPoly d = eval_base(e.args[1], base);
      if (d.size() != 1) eval_fail(e, d.empty() ? "division by zero" : "division by an expression in T");
      if (!d[0].is_unit()) eval_fail(e, "division by " + d[0].to_string() + ", which is not a unit of the base ring");
      return mul(eval_base(e.args[0], base), {d[0].inverse()});
    }
  }
  eval_fail(e, "bad expression");
}

}  // namespace

Expr parse_expression(std::string_view text) { return Parser(text).parse(); }

Poly expr_to_poly(const Expr& e, const Field& f) { return eval_poly(e, f); }

std::vector<BaseElem> expr_to_base_poly(const Expr& e, const IdRing& base) { return eval_base(e, base); }

BaseElem expr_to_base(const Expr& e, const IdRing& base) {
  const TPoly p = eval_base(e, base);
  if (p.size() > 1) throw Error(Errc::ParseError, "column " + std::to_string(e.column) + ": T is not allowed here");
  return p.empty() ? base.constant(Scalar(0)) : p[0];
}

Poly parse_poly(std::string_view text, const Field& f) { return expr_to_poly(parse_expression(text), f); }

BaseElem parse_base(std::string_view text, const IdRing& base) { return expr_to_base(parse_expression(text), base); }

std::string base_to_text(const BaseElem& x) {
  if (const auto c = x.constant_value()) return Poly(*c).to_string("t");
  if (x.kind() != BaseElem::Kind::Local) return x.to_string();
  const LocElem& l = x.as<LocElem>();
  if (l.is_polynomial()) return l.numerator().to_string("t");
  std::string den;
  int factors = 0;
  for (std::size_t i = 0; i < l.exponents().size(); ++i) {
    const int k = l.exponents()[i];
    if (k == 0) continue;
    if (!den.empty()) den += "*";
    den += "(" + (*l.inverted())[i].to_string("t") + ")";
    if (k > 1) den += "^" + std::to_string(k);
    ++factors;
  }
  return "(" + l.numerator().to_string("t") + ")/" + (factors > 1 ? "(" + den + ")" : den);
}

std::string base_poly_to_text(const std::vector<BaseElem>& coeffs) {
  std::string out;
  for (std::size_t n = coeffs.size(); n-- > 0;) {
    if (coeffs[n].is_zero()) continue;
    const std::string c = base_to_text(coeffs[n]);
    const std::string wrapped = c.find(' ') != std::string::npos ? "(" + c + ")" : c;
    std::string piece;
    if (n == 0) {
      piece = wrapped;
    } else {
      piece = (c == "1" ? "" : wrapped + "*") + "T";
      if (n > 1) piece += "^" + std::to_string(n);
    }
    out += out.empty() ? piece : " + " + piece;
  }
  return out.empty() ? "0" : out;
}

}  // namespace idpv
