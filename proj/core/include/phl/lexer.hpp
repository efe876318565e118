#pragma once

// Tokenizer shared by every text format (theories, models, homs, derivations,
// morphisms, sketches).

#include <string>
#include <string_view>
#include <vector>

#include "phl/error.hpp"

namespace phl {

struct Token {
  enum class Kind { Ident, String, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  SourceSpan span;

  bool is(std::string_view s) const { return kind == Kind::Symbol && text == s; }
  bool is_word(std::string_view s) const { return kind == Kind::Ident && text == s; }
  /// Identifier or quoted string.
  bool is_name() const { return kind == Kind::Ident || kind == Kind::String; }
};

/// Symbols: ( ) [ ] { } , ; : := = -> => |- /\ and the aliases ⊢ (for |-) and
/// ∧ (for /\). Identifiers are runs of letters, digits, _ and ', may contain an
/// inner '-' followed by a letter (product-cone), and '*' alone is an identifier.
/// Comments run from '#' or '//' to end of line.
std::vector<Token> tokenize(std::string_view text, int first_line = 1);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens);
  explicit TokenStream(std::string_view text, int first_line = 1) : TokenStream(tokenize(text, first_line)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool accept(std::string_view symbol);
  bool accept_word(std::string_view word);
  void expect(std::string_view symbol);
  void expect_word(std::string_view word);
  /// Identifier or quoted string.
  std::string expect_name(std::string_view what);
  void expect_end();

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& t, const std::string& message) const;

  std::size_t position() const { return pos_; }
  void reset(std::size_t pos) { pos_ = pos; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Quote a name when it would not lex back as a single identifier.
std::string quote_name(const std::string& name);

}  // namespace phl
