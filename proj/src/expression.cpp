#include "isopair/expression.hpp"

#include <cctype>

namespace isopair {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const SourcePos start = pos;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Token::Kind::kInteger, std::string(text.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Token::Kind::kIdent, std::string(text.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    if ((c == '>' || c == '<') && i + 1 < text.size() && text[i + 1] == '=') {
      out.push_back({Token::Kind::kSymbol, std::string(text.substr(i, 2)), start});
      advance(2);
      continue;
    }
    static constexpr std::string_view kSymbols = "+-*/^()[]{},;:|=";
    if (kSymbols.find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::kSymbol, std::string(1, c), start});
      advance(1);
      continue;
    }
    throw ParseError(start, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Token::Kind::kEnd, "<end>", pos});
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  const std::size_t k = std::min(i_ + ahead, toks_.size() - 1);
  return toks_[k];
}

Token TokenStream::next() {
  Token t = peek();
  if (i_ < toks_.size() - 1) ++i_;
  return t;
}

bool TokenStream::at_symbol(std::string_view s) const {
  const Token& t = peek();
  return t.kind == Token::Kind::kSymbol && t.text == s;
}

bool TokenStream::at_ident(std::string_view s) const {
  const Token& t = peek();
  return t.kind == Token::Kind::kIdent && t.text == s;
}

bool TokenStream::accept_symbol(std::string_view s) {
  if (!at_symbol(s)) return false;
  next();
  return true;
}

Token TokenStream::expect_symbol(std::string_view s) {
  if (!at_symbol(s)) fail("expected '" + std::string(s) + "', found '" + peek().text + "'");
  return next();
}

Token TokenStream::expect_ident() {
  if (peek().kind != Token::Kind::kIdent) fail("expected identifier, found '" + peek().text + "'");
  return next();
}

Token TokenStream::expect_keyword(std::string_view kw) {
  if (!at_ident(kw)) fail("expected '" + std::string(kw) + "', found '" + peek().text + "'");
  return next();
}

void TokenStream::fail(const std::string& what) const { throw ParseError(peek().pos, what); }

}  // namespace isopair
