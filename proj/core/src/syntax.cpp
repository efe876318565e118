#include "phl/syntax.hpp"

#include <algorithm>
#include <functional>

namespace phl {

std::string to_string(const SourceSpan& span) {
  if (!span.known()) return "?";
  return std::to_string(span.line) + ":" + std::to_string(span.column);
}

std::string to_string(const Diagnostic& d) {
  if (!d.span.known()) return d.message;
  return to_string(d.span) + ": " + d.message;
}

ParseError::ParseError(SourceSpan span, const std::string& message)
    : Error(span.known() ? to_string(span) + ": " + message : message), span_(span) {}

namespace {
std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "\n";
    out += to_string(d);
  }
  return out;
}
}  // namespace

WellFormednessError::WellFormednessError(std::vector<Diagnostic> diagnostics)
    : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

// ---------------------------------------------------------------------------

std::size_t Signature::add_sort(std::string name, SourceSpan span) {
  sort_ix_.try_emplace(name, sorts_.size());
  sorts_.push_back(std::move(name));
  sort_spans_.push_back(span);
  return sorts_.size() - 1;
}

std::size_t Signature::add_function(FunctionSymbol f) {
  fun_ix_.try_emplace(f.name, functions_.size());
  functions_.push_back(std::move(f));
  return functions_.size() - 1;
}

std::size_t Signature::add_relation(RelationSymbol r) {
  rel_ix_.try_emplace(r.name, relations_.size());
  relations_.push_back(std::move(r));
  return relations_.size() - 1;
}

namespace {
std::optional<std::size_t> lookup(const std::unordered_map<std::string, std::size_t>& m,
                                  std::string_view name) {
  auto it = m.find(std::string(name));
  if (it == m.end()) return std::nullopt;
  return it->second;
}
}  // namespace

std::optional<std::size_t> Signature::sort_index(std::string_view name) const { return lookup(sort_ix_, name); }
std::optional<std::size_t> Signature::function_index(std::string_view name) const { return lookup(fun_ix_, name); }
std::optional<std::size_t> Signature::relation_index(std::string_view name) const { return lookup(rel_ix_, name); }

const FunctionSymbol* Signature::find_function(std::string_view name) const {
  auto i = function_index(name);
  return i ? &functions_[*i] : nullptr;
}

const RelationSymbol* Signature::find_relation(std::string_view name) const {
  auto i = relation_index(name);
  return i ? &relations_[*i] : nullptr;
}

std::size_t Signature::sort_id(std::string_view name) const {
  if (auto i = sort_index(name)) return *i;
  throw SortError("unknown sort '" + std::string(name) + "'");
}

std::size_t Signature::function_id(std::string_view name) const {
  if (auto i = function_index(name)) return *i;
  throw SortError("unknown function symbol '" + std::string(name) + "'");
}

std::size_t Signature::relation_id(std::string_view name) const {
  if (auto i = relation_index(name)) return *i;
  throw SortError("unknown relation symbol '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

Term Term::var(std::string name, SourceSpan span) {
  Term t;
  t.is_var_ = true;
  t.name_ = std::move(name);
  t.span_ = span;
  return t;
}

Term Term::app(std::string symbol, std::vector<Term> args, SourceSpan span) {
  Term t;
  t.is_var_ = false;
  t.name_ = std::move(symbol);
  t.args_ = std::move(args);
  t.span_ = span;
  return t;
}

std::size_t Term::depth() const {
  if (is_var_) return 0;
  std::size_t d = 0;
  for (const auto& a : args_) d = std::max(d, a.depth());
  return d + 1;
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& a : args_) n += a.size();
  return n;
}

int compare(const Term& a, const Term& b) {
  if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
  if (int c = a.name().compare(b.name())) return c < 0 ? -1 : 1;
  const auto& xs = a.args();
  const auto& ys = b.args();
  if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (int c = compare(xs[i], ys[i])) return c;
  return 0;
}

bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

Formula Formula::truth() { return Formula{}; }

Formula Formula::rel(std::string relation, std::vector<Term> args, SourceSpan span) {
  Formula f;
  f.kind_ = Kind::Rel;
  f.name_ = std::move(relation);
  f.terms_ = std::move(args);
  f.span_ = span;
  return f;
}

Formula Formula::eq(Term lhs, Term rhs, SourceSpan span) {
  Formula f;
  f.kind_ = Kind::Eq;
  f.terms_ = {std::move(lhs), std::move(rhs)};
  f.span_ = span;
  return f;
}

Formula Formula::defined(Term t, SourceSpan span) {
  Term copy = t;
  return eq(std::move(t), std::move(copy), span);
}

Formula Formula::conj(std::vector<Formula> parts, SourceSpan span) {
  if (parts.empty()) return truth();
  if (parts.size() == 1) return std::move(parts.front());
  Formula f;
  f.kind_ = Kind::Conj;
  f.parts_ = std::move(parts);
  f.span_ = span;
  return f;
}

int compare(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.relation().compare(b.relation())) return c < 0 ? -1 : 1;
  const auto& xs = a.terms();
  const auto& ys = b.terms();
  if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (int c = compare(xs[i], ys[i])) return c;
  const auto& ps = a.parts();
  const auto& qs = b.parts();
  if (ps.size() != qs.size()) return ps.size() < qs.size() ? -1 : 1;
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (int c = compare(ps[i], qs[i])) return c;
  return 0;
}

bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

// ---------------------------------------------------------------------------

std::optional<std::size_t> Context::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

const std::string* Context::sort_of(std::string_view name) const {
  auto i = index_of(name);
  return i ? &vars_[*i].sort : nullptr;
}

std::vector<std::string> Context::names() const {
  std::vector<std::string> out;
  for (const auto& v : vars_) out.push_back(v.name);
  return out;
}

std::vector<std::string> Context::sorts() const {
  std::vector<std::string> out;
  for (const auto& v : vars_) out.push_back(v.sort);
  return out;
}

Context merge(const Context& a, const Context& b) {
  Context out = a;
  for (const auto& v : b.vars()) {
    if (const std::string* s = out.sort_of(v.name)) {
      if (*s != v.sort)
        throw SortError("variable '" + v.name + "' used with sorts " + *s + " and " + v.sort);
      continue;
    }
    out.add(v.name, v.sort);
  }
  return out;
}

const Axiom* Theory::find_axiom(std::string_view name) const {
  for (const auto& a : axioms)
    if (a.name == name) return &a;
  return nullptr;
}

// ---------------------------------------------------------------------------

std::optional<std::string> sort_of(const Signature& sig, const Context& ctx, const Term& t) {
  if (t.is_var()) {
    if (const std::string* s = ctx.sort_of(t.name())) return *s;
    return std::nullopt;
  }
  const FunctionSymbol* f = sig.find_function(t.name());
  if (!f || f->arg_sorts.size() != t.args().size()) return std::nullopt;
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    auto s = sort_of(sig, ctx, t.args()[i]);
    if (!s || *s != f->arg_sorts[i]) return std::nullopt;
  }
  return f->result_sort;
}

namespace {

// Returns the sort when the term checks, appending diagnostics otherwise.
std::optional<std::string> check_term(const Signature& sig, const Context& ctx, const Term& t,
                                      std::vector<Diagnostic>& out) {
  if (t.is_var()) {
    if (const std::string* s = ctx.sort_of(t.name())) return *s;
    if (sig.find_function(t.name()) || sig.find_relation(t.name()))
      out.push_back({t.span(), "symbol '" + t.name() + "' used as a variable"});
    else
      out.push_back({t.span(), "unknown symbol '" + t.name() + "' (not a variable of the context)"});
    return std::nullopt;
  }
  const FunctionSymbol* f = sig.find_function(t.name());
  std::vector<std::optional<std::string>> arg_sorts;
  for (const auto& a : t.args()) arg_sorts.push_back(check_term(sig, ctx, a, out));
  if (!f) {
    out.push_back({t.span(), "unknown function symbol '" + t.name() + "'"});
    return std::nullopt;
  }
  if (f->arg_sorts.size() != t.args().size()) {
    out.push_back({t.span(), "function '" + t.name() + "' expects " + std::to_string(f->arg_sorts.size()) +
                                 " argument(s), got " + std::to_string(t.args().size())});
    return std::nullopt;
  }
  bool ok = true;
  for (std::size_t i = 0; i < arg_sorts.size(); ++i) {
    if (!arg_sorts[i]) {
      ok = false;
    } else if (*arg_sorts[i] != f->arg_sorts[i]) {
      out.push_back({t.args()[i].span(), "argument " + std::to_string(i + 1) + " of '" + t.name() +
                                             "' has sort " + *arg_sorts[i] + ", expected " + f->arg_sorts[i]});
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return f->result_sort;
}

void check_formula(const Signature& sig, const Context& ctx, const Formula& f, std::vector<Diagnostic>& out) {
  switch (f.kind()) {
    case Formula::Kind::Truth:
      return;
    case Formula::Kind::Conj:
      for (const auto& p : f.parts()) check_formula(sig, ctx, p, out);
      return;
    case Formula::Kind::Eq: {
      auto l = check_term(sig, ctx, f.lhs(), out);
      auto r = check_term(sig, ctx, f.rhs(), out);
      if (l && r && *l != *r)
        out.push_back({f.span(), "equation between sorts " + *l + " and " + *r});
      return;
    }
    case Formula::Kind::Rel: {
      const RelationSymbol* r = sig.find_relation(f.relation());
      std::vector<std::optional<std::string>> arg_sorts;
      for (const auto& a : f.terms()) arg_sorts.push_back(check_term(sig, ctx, a, out));
      if (!r) {
        out.push_back({f.span(), "unknown relation symbol '" + f.relation() + "'"});
        return;
      }
      if (r->arg_sorts.size() != f.terms().size()) {
        out.push_back({f.span(), "relation '" + f.relation() + "' expects " + std::to_string(r->arg_sorts.size()) +
                                     " argument(s), got " + std::to_string(f.terms().size())});
        return;
      }
      for (std::size_t i = 0; i < arg_sorts.size(); ++i)
        if (arg_sorts[i] && *arg_sorts[i] != r->arg_sorts[i])
          out.push_back({f.terms()[i].span(), "argument " + std::to_string(i + 1) + " of '" + f.relation() +
                                                  "' has sort " + *arg_sorts[i] + ", expected " + r->arg_sorts[i]});
      return;
    }
  }
}

}  // namespace

std::vector<Diagnostic> well_formed(const Signature& sig) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen_sorts;
  for (std::size_t i = 0; i < sig.sorts().size(); ++i)
    if (!seen_sorts.insert(sig.sorts()[i]).second)
      out.push_back({sig.sort_spans()[i], "duplicate sort '" + sig.sorts()[i] + "'"});
  std::set<std::string> symbols;
  auto check_sort = [&](const std::string& s, const SourceSpan& span, const std::string& owner) {
    if (!sig.sort_index(s)) out.push_back({span, "undeclared sort '" + s + "' in arity of '" + owner + "'"});
  };
  for (const auto& f : sig.functions()) {
    if (!symbols.insert(f.name).second) out.push_back({f.span, "duplicate symbol '" + f.name + "'"});
    for (const auto& s : f.arg_sorts) check_sort(s, f.span, f.name);
    check_sort(f.result_sort, f.span, f.name);
  }
  for (const auto& r : sig.relations()) {
    if (!symbols.insert(r.name).second) out.push_back({r.span, "duplicate symbol '" + r.name + "'"});
    for (const auto& s : r.arg_sorts) check_sort(s, r.span, r.name);
  }
  return out;
}

std::vector<Diagnostic> well_formed(const Signature& sig, const Context& ctx) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen;
  for (const auto& v : ctx.vars()) {
    if (!seen.insert(v.name).second) out.push_back({{}, "duplicate context variable '" + v.name + "'"});
    if (!sig.sort_index(v.sort)) out.push_back({{}, "variable '" + v.name + "' has undeclared sort '" + v.sort + "'"});
  }
  return out;
}

std::vector<Diagnostic> well_formed(const Signature& sig, const Context& ctx, const Term& t) {
  auto out = well_formed(sig, ctx);
  check_term(sig, ctx, t, out);
  return out;
}

std::vector<Diagnostic> well_formed(const Signature& sig, const Context& ctx, const Formula& f) {
  auto out = well_formed(sig, ctx);
  check_formula(sig, ctx, f, out);
  return out;
}

std::vector<Diagnostic> well_formed(const Signature& sig, const Sequent& s) {
  auto out = well_formed(sig, s.context);
  check_formula(sig, s.context, s.premise, out);
  check_formula(sig, s.context, s.conclusion, out);
  return out;
}

std::vector<Diagnostic> well_formed(const Theory& t) {
  auto out = well_formed(t.signature);
  std::set<std::string> names;
  for (const auto& a : t.axioms) {
    if (!a.name.empty() && !names.insert(a.name).second)
      out.push_back({a.span, "duplicate axiom name '" + a.name + "'"});
    for (auto d : well_formed(t.signature, a.sequent)) {
      if (!d.span.known()) d.span = a.span;
      d.message = "axiom " + a.name + ": " + d.message;
      out.push_back(std::move(d));
    }
  }
  return out;
}

void require_well_formed(std::vector<Diagnostic> diagnostics) {
  if (!diagnostics.empty()) throw WellFormednessError(std::move(diagnostics));
}

// ---------------------------------------------------------------------------

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

void collect_vars(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms()) collect_vars(t, out);
  for (const auto& p : f.parts()) collect_vars(p, out);
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

Term apply(const Substitution& s, const Term& t) {
  if (t.is_var()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(phl::apply(s, a));
  return Term::app(t.name(), std::move(args), t.span());
}

Formula apply(const Substitution& s, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Truth:
      return f;
    case Formula::Kind::Eq:
      return Formula::eq(phl::apply(s, f.lhs()), phl::apply(s, f.rhs()), f.span());
    case Formula::Kind::Rel: {
      std::vector<Term> args;
      for (const auto& a : f.terms()) args.push_back(phl::apply(s, a));
      return Formula::rel(f.relation(), std::move(args), f.span());
    }
    case Formula::Kind::Conj: {
      std::vector<Formula> parts;
      for (const auto& p : f.parts()) parts.push_back(phl::apply(s, p));
      return Formula::conj(std::move(parts), f.span());
    }
  }
  return f;
}

namespace {
void check_assignment(const Signature& sig, const Context& source, const Substitution& assignment,
                      const Context& target) {
  for (const auto& [name, term] : assignment)
    if (!source.contains(name)) throw SortError("substitution assigns '" + name + "' outside the source context");
  for (const auto& v : source.vars()) {
    auto it = assignment.find(v.name);
    if (it == assignment.end()) throw SortError("substitution has no entry for '" + v.name + "'");
    auto s = sort_of(sig, target, it->second);
    if (!s) throw SortError("replacement for '" + v.name + "' is ill-formed in the target context");
    if (*s != v.sort)
      throw SortError("replacement for '" + v.name + "' has sort " + *s + ", expected " + v.sort);
  }
}
}  // namespace

Term substitute(const Signature& sig, const Term& t, const Context& source, const Substitution& assignment,
                const Context& target) {
  check_assignment(sig, source, assignment, target);
  require_well_formed(well_formed(sig, source, t));
  return phl::apply(assignment, t);
}

Formula substitute(const Signature& sig, const Formula& f, const Context& source, const Substitution& assignment,
                   const Context& target) {
  check_assignment(sig, source, assignment, target);
  require_well_formed(well_formed(sig, source, f));
  return phl::apply(assignment, f);
}

Substitution compose(const Substitution& second, const Substitution& first) {
  Substitution out;
  for (const auto& [name, term] : first) out.emplace(name, phl::apply(second, term));
  for (const auto& [name, term] : second) out.emplace(name, term);  // keeps first's entry on clash
  return out;
}

// ---------------------------------------------------------------------------

namespace {
void flatten(const Formula& f, std::vector<Formula>& out) {
  switch (f.kind()) {
    case Formula::Kind::Truth:
      return;
    case Formula::Kind::Conj:
      for (const auto& p : f.parts()) flatten(p, out);
      return;
    default:
      out.push_back(f);
  }
}
}  // namespace

std::vector<Formula> atoms(const Formula& f) {
  std::vector<Formula> out;
  flatten(f, out);
  return out;
}

Formula normalize(const Formula& f) { return Formula::conj(atoms(f)); }

bool same_modulo_nesting(const Formula& a, const Formula& b) { return atoms(a) == atoms(b); }

Sequent alpha_normalize(const Sequent& s) {
  Substitution ren;
  Context ctx;
  for (std::size_t i = 0; i < s.context.size(); ++i) {
    std::string fresh = "v" + std::to_string(i);
    ren.emplace(s.context[i].name, Term::var(fresh));
    ctx.add(fresh, s.context[i].sort);
  }
  return Sequent{ctx, phl::apply(ren, s.premise), phl::apply(ren, s.conclusion)};
}

Substitution freshen(const Context& ctx, const std::set<std::string>& avoid, Context& renamed) {
  Substitution ren;
  std::set<std::string> used = avoid;
  for (const auto& v : ctx.vars()) used.insert(v.name);
  renamed = Context{};
  for (const auto& v : ctx.vars()) {
    if (!avoid.count(v.name)) {
      renamed.add(v.name, v.sort);
      continue;
    }
    std::string base = v.name;
    std::string fresh;
    for (int k = 1;; ++k) {
      fresh = base + "_" + std::to_string(k);
      if (!used.count(fresh)) break;
    }
    used.insert(fresh);
    ren.emplace(v.name, Term::var(fresh));
    renamed.add(fresh, v.sort);
  }
  return ren;
}

}  // namespace phl
