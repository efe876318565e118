#include "phl/translation.hpp"

#include <set>

#include "phl/lexer.hpp"
#include "phl/model_text.hpp"
#include "phl/text.hpp"

namespace phl {

const std::string& TheoryMorphism::sort(const std::string& s) const {
  auto it = sort_map.find(s);
  if (it == sort_map.end()) throw SortError("morphism " + name + " does not map sort '" + s + "'");
  return it->second;
}

namespace {

Context generic_context(const std::vector<std::string>& sorts, const std::string& prefix = "x") {
  Context ctx;
  for (std::size_t i = 0; i < sorts.size(); ++i) ctx.add(prefix + std::to_string(i), sorts[i]);
  return ctx;
}

std::vector<Term> context_terms(const Context& ctx) {
  std::vector<Term> out;
  for (const auto& v : ctx.vars()) out.push_back(Term::var(v.name));
  return out;
}

void diag(std::vector<Diagnostic>& out, const std::string& msg) { out.push_back({{}, msg}); }

bool mentions(const std::set<std::string>& vars, const std::string& v) { return vars.count(v) > 0; }

}  // namespace

std::vector<Diagnostic> well_formed(const TheoryMorphism& rho) {
  std::vector<Diagnostic> out;
  const Signature& src = rho.source.signature;
  const Signature& tgt = rho.target.signature;
  auto mapped = [&](const std::string& s) -> std::optional<std::string> {
    auto it = rho.sort_map.find(s);
    if (it == rho.sort_map.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& s : src.sorts()) {
    auto m = mapped(s);
    if (!m)
      diag(out, "sort '" + s + "' is not mapped");
    else if (!tgt.sort_index(*m))
      diag(out, "sort '" + s + "' is mapped to undeclared sort '" + *m + "'");
  }
  auto check_context = [&](const std::string& what, const Context& ctx, const std::vector<std::string>& arg_sorts) {
    if (ctx.size() != arg_sorts.size()) {
      diag(out, what + ": context has " + std::to_string(ctx.size()) + " variables, expected " +
                    std::to_string(arg_sorts.size()));
      return false;
    }
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      auto m = mapped(arg_sorts[i]);
      if (m && ctx[i].sort != *m) {
        diag(out, what + ": variable '" + ctx[i].name + "' has sort " + ctx[i].sort + ", expected " + *m);
        return false;
      }
    }
    auto d = well_formed(tgt, ctx);
    for (auto& x : d) diag(out, what + ": " + x.message);
    return d.empty();
  };
  for (const auto& f : src.functions()) {
    auto it = rho.fun_map.find(f.name);
    if (it == rho.fun_map.end()) {
      diag(out, "function '" + f.name + "' is not mapped");
      continue;
    }
    const TermImage& img = it->second;
    if (!check_context("image of " + f.name, img.context, f.arg_sorts)) continue;
    auto d = well_formed(tgt, img.context, img.term);
    for (auto& x : d) diag(out, "image of " + f.name + ": " + x.message);
    if (!d.empty()) continue;
    auto s = sort_of(tgt, img.context, img.term);
    auto m = mapped(f.result_sort);
    if (s && m && *s != *m) diag(out, "image of " + f.name + " has sort " + *s + ", expected " + *m);
  }
  for (const auto& r : src.relations()) {
    auto it = rho.rel_map.find(r.name);
    if (it == rho.rel_map.end()) {
      diag(out, "relation '" + r.name + "' is not mapped");
      continue;
    }
    const FormulaImage& img = it->second;
    if (!check_context("image of " + r.name, img.context, r.arg_sorts)) continue;
    for (auto& x : well_formed(tgt, img.context, img.formula)) diag(out, "image of " + r.name + ": " + x.message);
  }
  return out;
}

TheoryMorphism identity_morphism(const Theory& t) {
  TheoryMorphism rho;
  rho.name = "id";
  rho.source = t;
  rho.target = t;
  for (const auto& s : t.signature.sorts()) rho.sort_map[s] = s;
  for (const auto& f : t.signature.functions()) {
    Context ctx = generic_context(f.arg_sorts);
    rho.fun_map[f.name] = {ctx, Term::app(f.name, context_terms(ctx))};
  }
  for (const auto& r : t.signature.relations()) {
    Context ctx = generic_context(r.arg_sorts);
    rho.rel_map[r.name] = {ctx, Formula::rel(r.name, context_terms(ctx))};
  }
  return rho;
}

Context translate(const TheoryMorphism& rho, const Context& ctx) {
  Context out;
  for (const auto& v : ctx.vars()) out.add(v.name, rho.sort(v.sort));
  return out;
}

namespace {

// Replaces the image's context variables by the translated arguments. An argument
// whose variable the image never mentions would lose its definedness requirement,
// so it is recorded as a side condition (variables are always defined).
Substitution bind_arguments(const Context& ctx, const std::set<std::string>& used, const std::vector<Term>& args,
                            std::vector<Formula>& side) {
  Substitution s;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    s[ctx[i].name] = args[i];
    if (!args[i].is_var() && !mentions(used, ctx[i].name)) side.push_back(Formula::defined(args[i]));
  }
  return s;
}

}  // namespace

Term translate(const TheoryMorphism& rho, const Term& t, std::vector<Formula>& side) {
  if (t.is_var()) return t;
  auto it = rho.fun_map.find(t.name());
  if (it == rho.fun_map.end()) throw SortError("morphism " + rho.name + " does not map function '" + t.name() + "'");
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(translate(rho, a, side));
  if (args.size() != it->second.context.size()) throw SortError("wrong number of arguments for " + t.name());
  std::set<std::string> used;
  collect_vars(it->second.term, used);
  Substitution s = bind_arguments(it->second.context, used, args, side);
  return phl::apply(s, it->second.term);
}

Formula translate(const TheoryMorphism& rho, const Formula& f) {
  std::vector<Formula> side;
  switch (f.kind()) {
    case Formula::Kind::Truth:
      return f;
    case Formula::Kind::Conj: {
      std::vector<Formula> parts;
      for (const auto& p : f.parts()) parts.push_back(translate(rho, p));
      return Formula::conj(std::move(parts));
    }
    case Formula::Kind::Eq: {
      Term l = translate(rho, f.lhs(), side);
      Term r = translate(rho, f.rhs(), side);
      std::vector<Formula> parts{Formula::eq(std::move(l), std::move(r))};
      parts.insert(parts.end(), side.begin(), side.end());
      return Formula::conj(std::move(parts));
    }
    case Formula::Kind::Rel: {
      auto it = rho.rel_map.find(f.relation());
      if (it == rho.rel_map.end())
        throw SortError("morphism " + rho.name + " does not map relation '" + f.relation() + "'");
      std::vector<Term> args;
      for (const auto& a : f.terms()) args.push_back(translate(rho, a, side));
      if (args.size() != it->second.context.size()) throw SortError("wrong number of arguments for " + f.relation());
      std::vector<Formula> extra;
      Substitution s = bind_arguments(it->second.context, free_vars(it->second.formula), args, extra);
      std::vector<Formula> parts{phl::apply(s, it->second.formula)};
      parts.insert(parts.end(), side.begin(), side.end());
      parts.insert(parts.end(), extra.begin(), extra.end());
      return Formula::conj(std::move(parts));
    }
  }
  return f;
}

Sequent translate(const TheoryMorphism& rho, const Sequent& s) {
  return {translate(rho, s.context), translate(rho, s.premise), translate(rho, s.conclusion)};
}

TheoryMorphism compose(const TheoryMorphism& sigma, const TheoryMorphism& rho) {
  TheoryMorphism out;
  out.name = sigma.name + "." + rho.name;
  out.source = rho.source;
  out.target = sigma.target;
  for (const auto& [s, t] : rho.sort_map) out.sort_map[s] = sigma.sort(t);
  for (const auto& [f, img] : rho.fun_map) {
    std::vector<Formula> side;
    out.fun_map[f] = {translate(sigma, img.context), translate(sigma, img.term, side)};
  }
  for (const auto& [r, img] : rho.rel_map) out.rel_map[r] = {translate(sigma, img.context), translate(sigma, img.formula)};
  return out;
}

MorphismCheck check_theory_morphism(const TheoryMorphism& rho, const ProveOptions& options) {
  require_well_formed(well_formed(rho));
  MorphismCheck out;
  bool unknown = false, refuted = false;
  for (const auto& ax : rho.source.axioms) {
    Obligation ob;
    ob.axiom = ax.name;
    ob.translated = translate(rho, ax.sequent);
    ob.verdict = prove(rho.target, ob.translated, options).verdict;
    unknown |= ob.verdict == Verdict::Unknown;
    refuted |= ob.verdict == Verdict::Refuted;
    out.obligations.push_back(std::move(ob));
  }
  out.status = refuted ? "rejected" : unknown ? "provisional" : "accepted";
  return out;
}

Structure U_rho(const TheoryMorphism& rho, const Structure& target_model) {
  const Signature& src = rho.source.signature;
  const Signature& tgt = target_model.signature();
  Structure m(share_signature(rho.source), target_model.name);
  for (std::size_t s = 0; s < src.sorts().size(); ++s) {
    std::size_t t = tgt.sort_id(rho.sort(src.sorts()[s]));
    std::vector<std::string> names;
    for (int e = 0; e < target_model.size(t); ++e) names.push_back(target_model.element_name(t, e));
    m.add_elements(s, std::move(names));
  }
  for (std::size_t f = 0; f < src.functions().size(); ++f) {
    const TermImage& img = rho.fun_map.at(src.functions()[f].name);
    CTerm ct = compile(tgt, img.context, img.term);
    std::vector<std::size_t> sorts;
    for (const auto& v : img.context.vars()) sorts.push_back(tgt.sort_id(v.sort));
    for_each_tuple(target_model, sorts, [&](const Tuple& tuple) {
      int v = eval(target_model, ct, tuple.data());
      if (v >= 0) m.set_fun(f, tuple, v);
      return true;
    });
  }
  for (std::size_t r = 0; r < src.relations().size(); ++r) {
    const FormulaImage& img = rho.rel_map.at(src.relations()[r].name);
    for (const auto& tuple : interp_formula(target_model, img.context, img.formula)) m.set_rel(r, tuple);
  }
  return m;
}

Presentation F_rho(const TheoryMorphism& rho, const Presentation& p, const ChaseOptions& options) {
  return saturate(rho.target, translate(rho, p.context), translate(rho, p.constraint), options);
}

// ---------------------------------------------------------------------------

const Operator* RelativeTheory::find_op(std::string_view n) const {
  for (const auto& op : ops)
    if (op.name == n) return &op;
  return nullptr;
}

namespace {

bool mentions_symbol(const Term& t, const std::set<std::string>& symbols) {
  if (t.is_var()) return false;
  if (symbols.count(t.name())) return true;
  for (const auto& a : t.args())
    if (mentions_symbol(a, symbols)) return true;
  return false;
}

bool mentions_symbol(const Formula& f, const std::set<std::string>& symbols) {
  for (const auto& t : f.terms())
    if (mentions_symbol(t, symbols)) return true;
  for (const auto& p : f.parts())
    if (mentions_symbol(p, symbols)) return true;
  return false;
}

Term op_term(const Operator& op) { return Term::app(op.name, context_terms(op.context)); }

Signature extended_signature(const RelativeTheory& rt) {
  Signature sig = rt.base.signature;
  for (const auto& op : rt.ops) sig.add_function({op.name, op.context.sorts(), op.type, {}});
  return sig;
}

}  // namespace

std::vector<Diagnostic> well_formed(const RelativeTheory& rt) {
  std::vector<Diagnostic> out = well_formed(rt.base);
  const Signature& base = rt.base.signature;
  std::set<std::string> names;
  for (const auto& op : rt.ops) {
    if (base.find_function(op.name) || base.find_relation(op.name))
      diag(out, "operator '" + op.name + "' clashes with a base symbol");
    if (!names.insert(op.name).second) diag(out, "duplicate operator '" + op.name + "'");
    if (!base.sort_index(op.type)) diag(out, "operator '" + op.name + "' has undeclared type '" + op.type + "'");
    for (auto& d : well_formed(base, op.context)) diag(out, "operator " + op.name + ": " + d.message);
    for (auto& d : well_formed(base, op.context, op.arity))
      diag(out, "arity of " + op.name + " is not over the base signature: " + d.message);
  }
  Signature sig = extended_signature(rt);
  for (const auto& j : rt.judgments) {
    for (auto& d : well_formed(sig, j.sequent)) diag(out, "judgment " + j.name + ": " + d.message);
    if (mentions_symbol(j.sequent.premise, names))
      diag(out, "judgment " + j.name + " mentions an operator in its premise");
  }
  return out;
}

Theory pht_of(const RelativeTheory& rt) {
  Theory t;
  t.name = rt.name;
  t.signature = extended_signature(rt);
  t.axioms = rt.base.axioms;
  for (const auto& op : rt.ops) {
    Formula defined = Formula::defined(op_term(op));
    t.axioms.push_back({op.name + "_def", {op.context, op.arity, defined}, {}});
    t.axioms.push_back({op.name + "_dom", {op.context, defined, op.arity}, {}});
  }
  for (const auto& j : rt.judgments) t.axioms.push_back(j);
  return t;
}

TheoryMorphism inclusion_morphism(const RelativeTheory& rt) {
  TheoryMorphism rho = identity_morphism(rt.base);
  rho.name = "incl";
  rho.target = pht_of(rt);
  return rho;
}

Structure reduct(const RelativeTheory& rt, const Structure& algebra) {
  return U_rho(inclusion_morphism(rt), algebra);
}

bool is_algebra(const Structure& m, const RelativeTheory& rt) { return is_model(m, pht_of(rt)); }

EquivalenceReport morphism_equivalent(const RelativeTheory& source, const TheoryMorphism& rho,
                                      const TheoryMorphism& sigma, const ProveOptions& options) {
  EquivalenceReport out;
  bool unknown = false, refuted = false;
  for (const auto& op : source.ops) {
    std::vector<Formula> side;
    Context ctx = translate(rho, op.context);
    Term a = translate(rho, op_term(op), side);
    Term b = translate(sigma, op_term(op), side);
    Sequent s{ctx, translate(rho, op.arity), Formula::eq(a, b)};
    OperatorComparison c{op.name, prove(rho.target, s, options).verdict};
    unknown |= c.verdict == Verdict::Unknown;
    refuted |= c.verdict == Verdict::Refuted;
    out.ops.push_back(c);
  }
  out.status = refuted ? "not equivalent" : unknown ? "unknown" : "equivalent";
  return out;
}

// ---------------------------------------------------------------------------

TheoryMorphism parse_morphism(std::string_view text, const Theory& source, const Theory& target) {
  TokenStream ts(text);
  TheoryMorphism rho;
  rho.source = source;
  rho.target = target;
  ts.expect_word("morphism");
  rho.name = ts.expect_name("morphism name");
  if (ts.accept(":")) {
    Token s = ts.next();
    if (!source.name.empty() && s.text != source.name)
      ts.fail_at(s, "morphism source '" + s.text + "' does not match theory '" + source.name + "'");
    ts.expect("->");
    Token t = ts.next();
    if (!target.name.empty() && t.text != target.name)
      ts.fail_at(t, "morphism target '" + t.text + "' does not match theory '" + target.name + "'");
  }
  const Signature& tsig = target.signature;
  while (!ts.at_end()) {
    if (ts.accept_word("sort")) {
      std::string s = ts.expect_name("sort");
      ts.expect("=>");
      rho.sort_map[s] = ts.expect_name("sort");
    } else if (ts.accept_word("fun")) {
      std::string f = ts.expect_name("function");
      ts.expect("=>");
      Context ctx = parse_context(ts, tsig);
      rho.fun_map[f] = {ctx, parse_term(ts, tsig, ctx)};
    } else if (ts.accept_word("rel")) {
      std::string r = ts.expect_name("relation");
      ts.expect("=>");
      Context ctx = parse_context(ts, tsig);
      rho.rel_map[r] = {ctx, parse_formula(ts, tsig, ctx)};
    } else {
      ts.fail("expected 'sort', 'fun' or 'rel'");
    }
    ts.expect(";");
  }
  // Symbols left unmapped go to the target symbol of the same name.
  const Signature& ssig = source.signature;
  for (const auto& s : ssig.sorts())
    if (!rho.sort_map.count(s) && tsig.sort_index(s)) rho.sort_map[s] = s;
  auto mapped_sorts = [&](const std::vector<std::string>& sorts) {
    std::vector<std::string> out;
    for (const auto& s : sorts) {
      auto it = rho.sort_map.find(s);
      out.push_back(it == rho.sort_map.end() ? s : it->second);
    }
    return out;
  };
  for (const auto& f : ssig.functions()) {
    if (rho.fun_map.count(f.name) || !tsig.find_function(f.name)) continue;
    Context ctx = generic_context(mapped_sorts(f.arg_sorts));
    rho.fun_map[f.name] = {ctx, Term::app(f.name, context_terms(ctx))};
  }
  for (const auto& r : ssig.relations()) {
    if (rho.rel_map.count(r.name) || !tsig.find_relation(r.name)) continue;
    Context ctx = generic_context(mapped_sorts(r.arg_sorts));
    rho.rel_map[r.name] = {ctx, Formula::rel(r.name, context_terms(ctx))};
  }
  require_well_formed(well_formed(rho));
  return rho;
}

std::string print_morphism(const TheoryMorphism& rho) {
  std::string out = "morphism " + quote_name(rho.name) + " : " + quote_name(rho.source.name) + " -> " +
                    quote_name(rho.target.name) + "\n";
  for (const auto& [s, t] : rho.sort_map) out += "sort " + quote_name(s) + " => " + quote_name(t) + ";\n";
  for (const auto& [f, img] : rho.fun_map)
    out += "fun " + quote_name(f) + " => " + print(img.context) + " " + print(img.term) + ";\n";
  for (const auto& [r, img] : rho.rel_map)
    out += "rel " + quote_name(r) + " => " + print(img.context) + " " + print(img.formula) + ";\n";
  return out;
}

bool is_relative_theory_text(std::string_view text) {
  auto tokens = tokenize(text);
  for (std::size_t i = 0; i + 2 < tokens.size(); ++i)
    if (tokens[i].is_word("relative") && tokens[i + 2].is_word("over")) return true;
  return false;
}

RelativeTheory parse_relative_theory(std::string_view text, const Theory* base) {
  TokenStream ts(text);
  RelativeTheory rt;
  bool inline_base = false;
  if (ts.accept_word("theory")) {
    inline_base = true;
    rt.base.name = ts.expect_name("theory name");
    while (!ts.at_end() && !ts.peek().is_word("relative")) {
      if (!parse_declaration(ts, rt.base)) ts.fail("expected 'sorts', 'fun', 'rel', 'axiom' or 'relative'");
    }
    require_well_formed(well_formed(rt.base));
  } else if (base) {
    rt.base = *base;
  }
  ts.expect_word("relative");
  rt.name = ts.expect_name("relative theory name");
  ts.expect_word("over");
  Token bname = ts.next();
  if (!inline_base && !base) ts.fail_at(bname, "base theory '" + bname.text + "' is not available");
  if (bname.text != rt.base.name)
    ts.fail_at(bname, "base theory '" + bname.text + "' does not match '" + rt.base.name + "'");

  Signature sig = rt.base.signature;
  std::size_t judgment_count = 0;
  while (!ts.at_end()) {
    if (ts.accept_word("op")) {
      Operator op;
      op.name = ts.expect_name("operator name");
      op.context = parse_context(ts, rt.base.signature);
      op.arity = ts.peek().is(":") ? Formula::truth() : parse_formula(ts, rt.base.signature, op.context);
      ts.expect(":");
      op.type = ts.expect_name("sort");
      ts.expect(";");
      sig.add_function({op.name, op.context.sorts(), op.type, {}});
      rt.ops.push_back(std::move(op));
    } else if (ts.peek().is_word("judgment")) {
      Axiom j;
      j.span = ts.next().span;
      ++judgment_count;
      if (ts.peek().is("[")) {
        j.name = "E" + std::to_string(judgment_count);
      } else {
        j.name = ts.expect_name("judgment name");
      }
      j.sequent = parse_sequent(ts, sig);
      ts.expect(";");
      rt.judgments.push_back(std::move(j));
    } else {
      ts.fail("expected 'op' or 'judgment'");
    }
  }
  require_well_formed(well_formed(rt));
  return rt;
}

std::string print_relative_theory(const RelativeTheory& rt) {
  std::string out = print_theory(rt.base);
  out += "relative " + quote_name(rt.name) + " over " + quote_name(rt.base.name) + "\n";
  for (const auto& op : rt.ops) {
    out += "op " + quote_name(op.name) + " " + print(op.context);
    if (!op.arity.is_truth()) out += " " + print(op.arity);
    out += " : " + quote_name(op.type) + ";\n";
  }
  for (const auto& j : rt.judgments) out += "judgment " + quote_name(j.name) + " " + print(j.sequent) + ";\n";
  return out;
}

}  // namespace phl
