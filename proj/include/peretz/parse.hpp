#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "peretz/error.hpp"
#include "peretz/poly.hpp"

namespace peretz {

namespace detail {

// expr   := ['+'|'-'] term (('+'|'-') term)*
// term   := factor ('*' factor)*
// factor := int ['/' posint] | var ['^' exponent] | '(' expr ')' ['^' uint]
// exponent := ['-'] int | '(' ['-'] int ['/' posint] ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Poly parse() {
    skip_ws();
    if (at_end()) fail(ErrorCode::Syntax, "empty expression");
    Poly p = expr();
    skip_ws();
    if (!at_end()) unexpected();
    return p;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(ErrorCode code, const std::string& what) const { throw ParseError(code, pos_, what); }

  [[noreturn]] void unexpected() const {
    if (at_end()) fail(ErrorCode::Syntax, "unexpected end of input");
    char c = text_[pos_];
    if (std::isalnum(static_cast<unsigned char>(c)) || std::string_view("+-*/^()_ ").find(c) != std::string_view::npos)
      fail(ErrorCode::Syntax, std::string("unexpected '") + c + "'");
    fail(ErrorCode::UnknownCharacter, std::string("unknown character '") + c + "'");
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      skip_ws();
      if (at_end()) fail(ErrorCode::Syntax, std::string("expected '") + c + "' before end of input");
      unexpected();
    }
  }

  mpz_class integer() {
    skip_ws();
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) {
      if (at_end()) fail(ErrorCode::Syntax, "expected integer before end of input");
      unexpected();
    }
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  mpz_class signed_integer() {
    bool negative = accept('-');
    mpz_class v = integer();
    return negative ? mpz_class(-v) : v;
  }

  Exponent exponent() {
    skip_ws();
    if (accept('(')) {
      mpz_class num = signed_integer();
      mpz_class den = 1;
      if (accept('/')) {
        std::size_t at = pos_;
        den = integer();
        if (den == 0) throw ParseError(ErrorCode::ZeroDenominator, at, "exponent denominator zero");
      }
      expect(')');
      return make_rational(num, den);
    }
    return Exponent(signed_integer());
  }

  Poly expr() {
    skip_ws();
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    Poly p = term();
    if (negative) p = -p;
    for (;;) {
      if (accept('+')) {
        p += term();
      } else if (accept('-')) {
        p -= term();
      } else {
        return p;
      }
    }
  }

  Poly term() {
    Poly p = factor();
    while (accept('*')) p *= factor();
    return p;
  }

  Poly factor() {
    skip_ws();
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num = integer();
      mpz_class den = 1;
      if (accept('/')) {
        std::size_t at = pos_;
        den = integer();
        if (den == 0) throw ParseError(ErrorCode::ZeroDenominator, at, "denominator zero");
      }
      return Poly(make_rational(num, den));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      Var v(std::string(text_.substr(start, pos_ - start)));
      if (accept('^')) return Poly::variable(v, exponent());
      return Poly::variable(v);
    }
    if (c == '(') {
      ++pos_;
      Poly inner = expr();
      expect(')');
      if (accept('^')) {
        std::size_t at = pos_;
        Exponent e = exponent();
        if (!is_integer(e) || e < 0)
          throw ParseError(ErrorCode::Syntax, at, "a parenthesized expression takes only a nonnegative integer power");
        return pow(inner, e.get_num().get_ui());
      }
      return inner;
    }
    if (at_end()) fail(ErrorCode::Syntax, "unexpected end of input");
    unexpected();
  }
};

}  // namespace detail

/// Parses polynomial text into canonical form. Throws ParseError with the byte offset.
inline Poly parse(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace peretz
