#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isopair/rational.hpp"

namespace isopair {

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// Syntax or semantic error in textual input, with a 1-based line/column.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& what)
      : std::runtime_error("line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) +
                           ": " + what),
        pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

struct Token {
  enum class Kind { kInteger, kIdent, kSymbol, kEnd };
  Kind kind;
  std::string text;  // symbols: "+", ">=", "{" ...
  SourcePos pos;
};

/// Splits text into integers, identifiers and punctuation ("//" comments skipped).
std::vector<Token> tokenize(std::string_view text);

/// Cursor over a token stream shared by the expression and pair-spec parsers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_symbol(std::string_view s) const;
  bool at_ident(std::string_view s) const;
  bool accept_symbol(std::string_view s);
  Token expect_symbol(std::string_view s);
  Token expect_ident();
  Token expect_keyword(std::string_view kw);
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }
  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

template <typename T>
using VariableResolver = std::function<T(std::string_view, SourcePos)>;

namespace detail {

template <typename T>
class ExpressionParser {
 public:
  ExpressionParser(TokenStream& ts, VariableResolver<T> resolve) : ts_(ts), resolve_(std::move(resolve)) {}

  // expr := term (("+" | "-") term)*
  T expr() {
    T acc = term();
    while (true) {
      if (ts_.accept_symbol("+")) {
        acc += term();
      } else if (ts_.accept_symbol("-")) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

 private:
  // term := unary (("*" | "/") unary)*
  T term() {
    T acc = unary();
    while (true) {
      if (ts_.accept_symbol("*")) {
        acc *= unary();
      } else if (ts_.at_symbol("/")) {
        const SourcePos pos = ts_.next().pos;
        T d = unary();
        try {
          acc /= d;
        } catch (const std::domain_error& e) {
          throw ParseError(pos, e.what());
        }
      } else {
        return acc;
      }
    }
  }

  // unary := ("-" | "+") unary | power
  T unary() {
    if (ts_.accept_symbol("-")) return T(Rational(0)) - unary();
    if (ts_.accept_symbol("+")) return unary();
    return power();
  }

  // power := primary ("^" INTEGER)?
  T power() {
    T base = primary();
    if (!ts_.accept_symbol("^")) return base;
    const Token e = ts_.next();
    if (e.kind != Token::Kind::kInteger) throw ParseError(e.pos, "expected integer exponent");
    const long k = std::stol(e.text);
    T acc(Rational(1));
    for (long i = 0; i < k; ++i) acc *= base;
    return acc;
  }

  // primary := INTEGER | IDENT | "(" expr ")"
  T primary() {
    const Token& t = ts_.peek();
    if (t.kind == Token::Kind::kInteger) {
      return T(Rational(Integer(ts_.next().text)));
    }
    if (t.kind == Token::Kind::kIdent) {
      const Token id = ts_.next();
      return resolve_(id.text, id.pos);
    }
    if (ts_.at_symbol("(")) {
      const SourcePos open = ts_.next().pos;
      T inner = expr();
      if (!ts_.accept_symbol(")")) throw ParseError(open, "unbalanced parenthesis");
      return inner;
    }
    if (t.kind == Token::Kind::kEnd) throw ParseError(t.pos, "unexpected end of input");
    throw ParseError(t.pos, "unexpected token '" + t.text + "'");
  }

  TokenStream& ts_;
  VariableResolver<T> resolve_;
};

}  // namespace detail

/// Parses an arithmetic expression over a field-like T from the current stream position.
template <typename T>
T parse_expression(TokenStream& ts, VariableResolver<T> resolve) {
  return detail::ExpressionParser<T>(ts, std::move(resolve)).expr();
}

/// Parses a complete expression; trailing tokens are an error.
template <typename T>
T parse_expression(std::string_view text, VariableResolver<T> resolve) {
  TokenStream ts(tokenize(text));
  T value = parse_expression<T>(ts, std::move(resolve));
  if (!ts.at_end()) ts.fail("unexpected token '" + ts.peek().text + "'");
  return value;
}

}  // namespace isopair
