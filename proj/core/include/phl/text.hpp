#pragma once

// Parser and printer for the theory DSL.
//
//   theory NAME
//   sorts: s1 s2;
//   fun f : s1 s2 -> s;
//   rel R : s1 s2;
//   axiom NAME [x:s, y:s] PHI |- PSI;
//
// Formulas use `true`, `/\`, `=`, `def(t)` and parentheses. A bare identifier
// is a context variable if bound, else a constant (or nullary relation).

#include <string>
#include <string_view>

#include "phl/lexer.hpp"
#include "phl/syntax.hpp"

namespace phl {

/// Parses and checks well-formedness (throws ParseError / WellFormednessError).
Theory parse_theory(std::string_view text);
/// Parses without the well-formedness pass.
Theory parse_theory_unchecked(std::string_view text);
std::string print_theory(const Theory& t);

/// "[x:s, y:s] PHI |- PSI", checked against the signature.
Sequent parse_sequent(const Signature& sig, std::string_view text);
/// "[x:s] PHI"
std::pair<Context, Formula> parse_formula_in_context(const Signature& sig, std::string_view text);
Formula parse_formula(const Signature& sig, const Context& ctx, std::string_view text);
Term parse_term(const Signature& sig, const Context& ctx, std::string_view text);
Context parse_context(const Signature& sig, std::string_view text);

// Stream-level pieces reused by the other text formats.
Context parse_context(TokenStream& ts, const Signature& sig);
Term parse_term(TokenStream& ts, const Signature& sig, const Context& ctx);
Formula parse_formula(TokenStream& ts, const Signature& sig, const Context& ctx);
Sequent parse_sequent(TokenStream& ts, const Signature& sig);
/// Parses one declaration (`sorts:`, `fun`, `rel`, `axiom`) if the stream is at
/// one; returns false otherwise.
bool parse_declaration(TokenStream& ts, Theory& theory);

std::string print(const Term& t);
std::string print(const Formula& f);
std::string print(const Context& c);
std::string print(const Sequent& s);
std::string print(const Substitution& s);

}  // namespace phl
