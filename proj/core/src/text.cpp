#include "phl/text.hpp"

namespace phl {

namespace {

bool is_keyword(const Token& t) {
  return t.is_word("theory") || t.is_word("sorts") || t.is_word("fun") || t.is_word("rel") || t.is_word("axiom") ||
         t.is_word("relative") || t.is_word("op") || t.is_word("judgment");
}

std::vector<Term> parse_args(TokenStream& ts, const Signature& sig, const Context& ctx) {
  std::vector<Term> args;
  ts.expect("(");
  if (ts.accept(")")) return args;
  do {
    args.push_back(parse_term(ts, sig, ctx));
  } while (ts.accept(","));
  ts.expect(")");
  return args;
}

Formula parse_atom(TokenStream& ts, const Signature& sig, const Context& ctx) {
  const Token& t = ts.peek();
  SourceSpan span = t.span;
  if (ts.accept("(")) {
    Formula inner = parse_formula(ts, sig, ctx);
    ts.expect(")");
    return inner;
  }
  if (t.is_word("true") && !ctx.contains("true")) {
    ts.next();
    return Formula::truth();
  }
  if (t.is_word("def") && ts.peek(1).is("(") && !sig.find_function("def") && !sig.find_relation("def")) {
    ts.next();
    ts.expect("(");
    Term inner = parse_term(ts, sig, ctx);
    ts.expect(")");
    return Formula::defined(std::move(inner), span);
  }
  if (t.is_name() && !ctx.contains(t.text) && sig.find_relation(t.text) && !ts.peek(1).is("=")) {
    std::string name = ts.next().text;
    std::vector<Term> args;
    if (ts.peek().is("(")) args = parse_args(ts, sig, ctx);
    return Formula::rel(std::move(name), std::move(args), span);
  }
  Term lhs = parse_term(ts, sig, ctx);
  if (!ts.peek().is("=")) {
    // An unknown applied symbol in formula position reads as a relation so the
    // well-formedness pass can name it.
    if (!lhs.is_var() && !sig.find_function(lhs.name()))
      return Formula::rel(lhs.name(), lhs.args(), span);
    ts.fail("expected '='");
  }
  ts.next();
  Term rhs = parse_term(ts, sig, ctx);
  return Formula::eq(std::move(lhs), std::move(rhs), span);
}

std::string join_sorts(const std::vector<std::string>& sorts) {
  std::string out;
  for (const auto& s : sorts) {
    if (!out.empty()) out += " ";
    out += quote_name(s);
  }
  return out;
}

}  // namespace

Context parse_context(TokenStream& ts, const Signature& sig) {
  Context ctx;
  ts.expect("[");
  if (ts.accept("]")) return ctx;
  do {
    Token name = ts.peek();
    std::string var = ts.expect_name("variable name");
    std::string sort;
    if (ts.accept(":")) {
      sort = ts.expect_name("sort name");
    } else if (sig.sorts().size() == 1) {
      sort = sig.sorts().front();
    } else {
      ts.fail_at(name, "variable '" + var + "' needs a sort (signature has " + std::to_string(sig.sorts().size()) +
                           " sorts)");
    }
    ctx.add(var, sort);
  } while (ts.accept(","));
  ts.expect("]");
  return ctx;
}

Term parse_term(TokenStream& ts, const Signature& sig, const Context& ctx) {
  const Token& t = ts.peek();
  if (!t.is_name()) ts.fail("expected a term");
  SourceSpan span = t.span;
  std::string name = ts.next().text;
  if (ts.peek().is("(")) return Term::app(std::move(name), parse_args(ts, sig, ctx), span);
  if (ctx.contains(name)) return Term::var(std::move(name), span);
  if (const FunctionSymbol* f = sig.find_function(name); f && f->arg_sorts.empty())
    return Term::app(std::move(name), {}, span);
  return Term::var(std::move(name), span);
}

Formula parse_formula(TokenStream& ts, const Signature& sig, const Context& ctx) {
  SourceSpan span = ts.peek().span;
  std::vector<Formula> parts;
  parts.push_back(parse_atom(ts, sig, ctx));
  while (ts.accept("/\\")) parts.push_back(parse_atom(ts, sig, ctx));
  if (parts.size() == 1) return std::move(parts.front());
  return Formula::conj(std::move(parts), span);
}

Sequent parse_sequent(TokenStream& ts, const Signature& sig) {
  Sequent s;
  s.context = parse_context(ts, sig);
  s.premise = parse_formula(ts, sig, s.context);
  ts.expect("|-");
  s.conclusion = parse_formula(ts, sig, s.context);
  return s;
}

bool parse_declaration(TokenStream& ts, Theory& theory) {
  Signature& sig = theory.signature;
  if (ts.accept_word("sorts")) {
    ts.accept(":");
    while (ts.peek().is_name() && !is_keyword(ts.peek())) {
      SourceSpan span = ts.peek().span;
      sig.add_sort(ts.next().text, span);
    }
    ts.accept(";");
    return true;
  }
  if (ts.peek().is_word("fun")) {
    SourceSpan span = ts.next().span;
    FunctionSymbol f;
    f.span = span;
    f.name = ts.expect_name("function name");
    ts.expect(":");
    while (!ts.peek().is("->")) f.arg_sorts.push_back(ts.expect_name("sort name or '->'"));
    ts.expect("->");
    f.result_sort = ts.expect_name("result sort");
    ts.expect(";");
    sig.add_function(std::move(f));
    return true;
  }
  if (ts.peek().is_word("rel")) {
    SourceSpan span = ts.next().span;
    RelationSymbol r;
    r.span = span;
    r.name = ts.expect_name("relation name");
    ts.expect(":");
    while (!ts.peek().is(";")) r.arg_sorts.push_back(ts.expect_name("sort name or ';'"));
    ts.expect(";");
    sig.add_relation(std::move(r));
    return true;
  }
  if (ts.peek().is_word("axiom")) {
    Axiom a;
    a.span = ts.next().span;
    if (ts.peek().is_name())
      a.name = ts.next().text;
    else
      a.name = "ax" + std::to_string(theory.axioms.size());
    a.sequent = parse_sequent(ts, sig);
    ts.expect(";");
    theory.axioms.push_back(std::move(a));
    return true;
  }
  return false;
}

Theory parse_theory_unchecked(std::string_view text) {
  TokenStream ts(text);
  Theory t;
  if (ts.accept_word("theory")) t.name = ts.expect_name("theory name");
  while (!ts.at_end()) {
    if (!parse_declaration(ts, t)) ts.fail("expected 'sorts', 'fun', 'rel' or 'axiom'");
  }
  return t;
}

Theory parse_theory(std::string_view text) {
  Theory t = parse_theory_unchecked(text);
  require_well_formed(well_formed(t));
  return t;
}

Sequent parse_sequent(const Signature& sig, std::string_view text) {
  TokenStream ts(text);
  Sequent s = parse_sequent(ts, sig);
  ts.accept(";");
  ts.expect_end();
  require_well_formed(well_formed(sig, s));
  return s;
}

std::pair<Context, Formula> parse_formula_in_context(const Signature& sig, std::string_view text) {
  TokenStream ts(text);
  Context ctx = parse_context(ts, sig);
  Formula f = ts.at_end() ? Formula::truth() : parse_formula(ts, sig, ctx);
  ts.expect_end();
  require_well_formed(well_formed(sig, ctx, f));
  return {std::move(ctx), std::move(f)};
}

Formula parse_formula(const Signature& sig, const Context& ctx, std::string_view text) {
  TokenStream ts(text);
  Formula f = parse_formula(ts, sig, ctx);
  ts.expect_end();
  require_well_formed(well_formed(sig, ctx, f));
  return f;
}

Term parse_term(const Signature& sig, const Context& ctx, std::string_view text) {
  TokenStream ts(text);
  Term t = parse_term(ts, sig, ctx);
  ts.expect_end();
  require_well_formed(well_formed(sig, ctx, t));
  return t;
}

Context parse_context(const Signature& sig, std::string_view text) {
  TokenStream ts(text);
  Context c = parse_context(ts, sig);
  ts.expect_end();
  require_well_formed(well_formed(sig, c));
  return c;
}

// ---------------------------------------------------------------------------

std::string print(const Term& t) {
  if (t.is_var()) return quote_name(t.name());
  std::string out = quote_name(t.name()) + "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ",";
    out += print(t.args()[i]);
  }
  return out + ")";
}

std::string print(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Truth:
      return "true";
    case Formula::Kind::Eq:
      if (f.lhs() == f.rhs()) return "def(" + print(f.lhs()) + ")";
      return print(f.lhs()) + " = " + print(f.rhs());
    case Formula::Kind::Rel: {
      std::string out = quote_name(f.relation());
      if (f.terms().empty()) return out;
      out += "(";
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) out += ",";
        out += print(f.terms()[i]);
      }
      return out + ")";
    }
    case Formula::Kind::Conj: {
      std::string out;
      for (std::size_t i = 0; i < f.parts().size(); ++i) {
        if (i) out += " /\\ ";
        const Formula& p = f.parts()[i];
        out += p.kind() == Formula::Kind::Conj ? "(" + print(p) + ")" : print(p);
      }
      return out;
    }
  }
  return "";
}

std::string print(const Context& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += quote_name(c[i].name) + ":" + quote_name(c[i].sort);
  }
  return out + "]";
}

std::string print(const Sequent& s) {
  return print(s.context) + " " + print(s.premise) + " |- " + print(s.conclusion);
}

std::string print(const Substitution& s) {
  std::string out;
  for (const auto& [name, term] : s) {
    if (!out.empty()) out += ", ";
    out += quote_name(name) + " := " + print(term);
  }
  return out;
}

std::string print_theory(const Theory& t) {
  std::string out;
  if (!t.name.empty()) out += "theory " + quote_name(t.name) + "\n";
  const Signature& sig = t.signature;
  if (!sig.sorts().empty()) out += "sorts: " + join_sorts(sig.sorts()) + ";\n";
  for (const auto& f : sig.functions()) {
    out += "fun " + quote_name(f.name) + " : ";
    if (!f.arg_sorts.empty()) out += join_sorts(f.arg_sorts) + " ";
    out += "-> " + quote_name(f.result_sort) + ";\n";
  }
  for (const auto& r : sig.relations()) {
    out += "rel " + quote_name(r.name) + " :";
    if (!r.arg_sorts.empty()) out += " " + join_sorts(r.arg_sorts);
    out += ";\n";
  }
  for (const auto& a : t.axioms) out += "axiom " + quote_name(a.name) + " " + print(a.sequent) + ";\n";
  return out;
}

}  // namespace phl
