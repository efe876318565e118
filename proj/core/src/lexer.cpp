#include "phl/lexer.hpp"

#include <cctype>

namespace phl {

namespace {

bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

const char* const kSymbols[] = {":=", "->", "=>", "|-", "/\\", "(", ")", "[", "]", "{", "}", ",", ";", ":", "=", "|"};

}  // namespace

std::vector<Token> tokenize(std::string_view text, int first_line) {
  std::vector<Token> out;
  int line = first_line;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '#' || text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    SourceSpan span{line, col};
    if (text.substr(i, 3) == "\xE2\x8A\xA2") {  // ⊢
      out.push_back({Token::Kind::Symbol, "|-", span});
      advance(3);
      continue;
    }
    if (text.substr(i, 3) == "\xE2\x88\xA7") {  // ∧
      out.push_back({Token::Kind::Symbol, "/\\", span});
      advance(3);
      continue;
    }
    if (c == '"') {
      std::string s;
      advance(1);
      while (true) {
        if (i >= text.size()) throw ParseError(span, "unterminated string");
        char d = text[i];
        if (d == '"') break;
        if (d == '\\' && i + 1 < text.size()) {
          s += text[i + 1];
          advance(2);
          continue;
        }
        s += d;
        advance(1);
      }
      advance(1);
      out.push_back({Token::Kind::String, std::move(s), span});
      continue;
    }
    if (c == '*') {
      out.push_back({Token::Kind::Ident, "*", span});
      advance(1);
      continue;
    }
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < text.size()) {
        unsigned char d = static_cast<unsigned char>(text[j]);
        if (ident_char(d)) {
          ++j;
        } else if (d == '-' && j + 1 < text.size() && std::isalpha(static_cast<unsigned char>(text[j + 1]))) {
          ++j;
        } else {
          break;
        }
      }
      out.push_back({Token::Kind::Ident, std::string(text.substr(i, j - i)), span});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* sym : kSymbols) {
      std::string_view s(sym);
      if (text.substr(i, s.size()) == s) {
        out.push_back({Token::Kind::Symbol, std::string(s), span});
        advance(s.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::size_t n = 1;
      if (c >= 0xC0) {
        while (i + n < text.size() && (static_cast<unsigned char>(text[i + n]) & 0xC0) == 0x80) ++n;
      }
      throw ParseError(span, "unexpected character '" + std::string(text.substr(i, n)) + "'");
    }
  }
  out.push_back({Token::Kind::End, "", SourceSpan{line, col}});
  return out;
}

TokenStream::TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != Token::Kind::End) tokens_.push_back({Token::Kind::End, "", {}});
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t k = pos_ + ahead;
  return k < tokens_.size() ? tokens_[k] : tokens_.back();
}

Token TokenStream::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::accept(std::string_view symbol) {
  if (!peek().is(symbol)) return false;
  next();
  return true;
}

bool TokenStream::accept_word(std::string_view word) {
  if (!peek().is_word(word)) return false;
  next();
  return true;
}

void TokenStream::expect(std::string_view symbol) {
  if (!accept(symbol)) fail("expected '" + std::string(symbol) + "'");
}

void TokenStream::expect_word(std::string_view word) {
  if (!accept_word(word)) fail("expected '" + std::string(word) + "'");
}

std::string TokenStream::expect_name(std::string_view what) {
  if (!peek().is_name()) fail("expected " + std::string(what));
  return next().text;
}

void TokenStream::expect_end() {
  if (!at_end()) fail("unexpected trailing input");
}

void TokenStream::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenStream::fail_at(const Token& t, const std::string& message) const {
  std::string found = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(t.span, message + ", found " + found);
}

std::string quote_name(const std::string& name) {
  bool plain = !name.empty();
  if (name == "*") return name;
  for (std::size_t i = 0; i < name.size() && plain; ++i) {
    unsigned char c = static_cast<unsigned char>(name[i]);
    if (ident_char(c)) continue;
    if (c == '-' && i > 0 && i + 1 < name.size() && std::isalpha(static_cast<unsigned char>(name[i + 1]))) continue;
    plain = false;
  }
  if (plain) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace phl
