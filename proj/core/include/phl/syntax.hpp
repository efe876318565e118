#pragma once

// Abstract syntax of finitary partial Horn logic: many-sorted signatures,
// raw terms, Horn formulas, contexts, sequents and theories.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phl/error.hpp"

namespace phl {

struct FunctionSymbol {
  std::string name;
  std::vector<std::string> arg_sorts;
  std::string result_sort;
  SourceSpan span;

  bool operator==(const FunctionSymbol& o) const {
    return name == o.name && arg_sorts == o.arg_sorts && result_sort == o.result_sort;
  }
};

struct RelationSymbol {
  std::string name;
  std::vector<std::string> arg_sorts;
  SourceSpan span;

  bool operator==(const RelationSymbol& o) const {
    return name == o.name && arg_sorts == o.arg_sorts;
  }
};

/// Declarations are recorded as given; duplicates and undeclared sorts are
/// reported by well_formed() rather than rejected on insertion. Lookups
/// resolve to the first declaration of a name.
class Signature {
 public:
  std::size_t add_sort(std::string name, SourceSpan span = {});
  std::size_t add_function(FunctionSymbol f);
  std::size_t add_relation(RelationSymbol r);

  const std::vector<std::string>& sorts() const { return sorts_; }
  const std::vector<SourceSpan>& sort_spans() const { return sort_spans_; }
  const std::vector<FunctionSymbol>& functions() const { return functions_; }
  const std::vector<RelationSymbol>& relations() const { return relations_; }

  std::optional<std::size_t> sort_index(std::string_view name) const;
  std::optional<std::size_t> function_index(std::string_view name) const;
  std::optional<std::size_t> relation_index(std::string_view name) const;

  const FunctionSymbol* find_function(std::string_view name) const;
  const RelationSymbol* find_relation(std::string_view name) const;

  /// Sort index, throwing SortError when undeclared.
  std::size_t sort_id(std::string_view name) const;
  std::size_t function_id(std::string_view name) const;
  std::size_t relation_id(std::string_view name) const;

  bool operator==(const Signature& o) const {
    return sorts_ == o.sorts_ && functions_ == o.functions_ && relations_ == o.relations_;
  }

 private:
  std::vector<std::string> sorts_;
  std::vector<SourceSpan> sort_spans_;
  std::vector<FunctionSymbol> functions_;
  std::vector<RelationSymbol> relations_;
  std::unordered_map<std::string, std::size_t> sort_ix_, fun_ix_, rel_ix_;
};

class Term {
 public:
  Term() = default;
  static Term var(std::string name, SourceSpan span = {});
  static Term app(std::string symbol, std::vector<Term> args, SourceSpan span = {});

  bool is_var() const { return is_var_; }
  const std::string& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }
  const SourceSpan& span() const { return span_; }

  std::size_t depth() const;
  std::size_t size() const;

  // Source spans do not participate in comparison.
  friend bool operator==(const Term& a, const Term& b);
  friend bool operator<(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  bool is_var_ = true;
  std::string name_;
  std::vector<Term> args_;
  SourceSpan span_;
};

int compare(const Term& a, const Term& b);

class Formula {
 public:
  enum class Kind { Truth, Rel, Eq, Conj };

  Formula() = default;  // truth
  static Formula truth();
  static Formula rel(std::string relation, std::vector<Term> args, SourceSpan span = {});
  static Formula eq(Term lhs, Term rhs, SourceSpan span = {});
  /// t↓, i.e. t = t.
  static Formula defined(Term t, SourceSpan span = {});
  /// Empty list gives truth, a singleton gives its element.
  static Formula conj(std::vector<Formula> parts, SourceSpan span = {});

  Kind kind() const { return kind_; }
  bool is_truth() const { return kind_ == Kind::Truth; }
  bool is_atom() const { return kind_ == Kind::Rel || kind_ == Kind::Eq; }
  const std::string& relation() const { return name_; }
  /// Arguments for Rel, {lhs, rhs} for Eq.
  const std::vector<Term>& terms() const { return terms_; }
  const Term& lhs() const { return terms_.at(0); }
  const Term& rhs() const { return terms_.at(1); }
  const std::vector<Formula>& parts() const { return parts_; }
  const SourceSpan& span() const { return span_; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  Kind kind_ = Kind::Truth;
  std::string name_;
  std::vector<Term> terms_;
  std::vector<Formula> parts_;
  SourceSpan span_;
};

int compare(const Formula& a, const Formula& b);

struct Variable {
  std::string name;
  std::string sort;
  bool operator==(const Variable&) const = default;
};

class Context {
 public:
  Context() = default;
  Context(std::initializer_list<Variable> vars) : vars_(vars) {}
  explicit Context(std::vector<Variable> vars) : vars_(std::move(vars)) {}

  void add(std::string name, std::string sort) { vars_.push_back({std::move(name), std::move(sort)}); }
  const std::vector<Variable>& vars() const { return vars_; }
  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }
  const Variable& operator[](std::size_t i) const { return vars_[i]; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  const std::string* sort_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  std::vector<std::string> names() const;
  std::vector<std::string> sorts() const;

  bool operator==(const Context&) const = default;

 private:
  std::vector<Variable> vars_;
};

/// Context concatenation. Throws SortError on a clash of names with different sorts;
/// a repeated name with the same sort is kept once.
Context merge(const Context& a, const Context& b);

struct Sequent {
  Context context;
  Formula premise;
  Formula conclusion;

  bool operator==(const Sequent& o) const {
    return context == o.context && premise == o.premise && conclusion == o.conclusion;
  }
};

struct Axiom {
  std::string name;
  Sequent sequent;
  SourceSpan span;

  bool operator==(const Axiom& o) const { return name == o.name && sequent == o.sequent; }
};

struct Theory {
  std::string name;
  Signature signature;
  std::vector<Axiom> axioms;

  const Axiom* find_axiom(std::string_view name) const;
  bool operator==(const Theory& o) const {
    return name == o.name && signature == o.signature && axioms == o.axioms;
  }
};

// ---------------------------------------------------------------------------
// Sort checking and well-formedness

/// Sort of `t` in `ctx`, or nullopt when the term is ill-formed.
std::optional<std::string> sort_of(const Signature& sig, const Context& ctx, const Term& t);

std::vector<Diagnostic> well_formed(const Signature& sig);
std::vector<Diagnostic> well_formed(const Signature& sig, const Context& ctx);
std::vector<Diagnostic> well_formed(const Signature& sig, const Context& ctx, const Term& t);
std::vector<Diagnostic> well_formed(const Signature& sig, const Context& ctx, const Formula& f);
std::vector<Diagnostic> well_formed(const Signature& sig, const Sequent& s);
std::vector<Diagnostic> well_formed(const Theory& t);

/// Throws WellFormednessError when the diagnostics list is non-empty.
void require_well_formed(std::vector<Diagnostic> diagnostics);

// ---------------------------------------------------------------------------
// Variables and substitution

using Substitution = std::map<std::string, Term>;

void collect_vars(const Term& t, std::set<std::string>& out);
void collect_vars(const Formula& f, std::set<std::string>& out);
std::set<std::string> free_vars(const Formula& f);

/// Simultaneous replacement of variables; variables outside the map are left alone.
Term apply(const Substitution& s, const Term& t);
Formula apply(const Substitution& s, const Formula& f);

/// Checked simultaneous substitution φ(τ⃗/x⃗): `assignment` must cover exactly the
/// variables of `source`, and each replacement must sort-check in `target` with
/// the sort of the variable it replaces.
Term substitute(const Signature& sig, const Term& t, const Context& source,
                const Substitution& assignment, const Context& target);
Formula substitute(const Signature& sig, const Formula& f, const Context& source,
                   const Substitution& assignment, const Context& target);

/// Composition: apply(compose(s2, s1), x) == apply(s2, apply(s1, x)).
Substitution compose(const Substitution& second, const Substitution& first);

// ---------------------------------------------------------------------------
// Normal forms

/// Atoms of a formula in order, with nested conjunctions flattened and truth dropped.
std::vector<Formula> atoms(const Formula& f);

/// Associativity/unit normal form: flattened conjunction of atoms (ordered),
/// truth for no atoms, the atom itself for one.
Formula normalize(const Formula& f);

/// Equality up to nesting of conjunctions and truth units; order still matters.
bool same_modulo_nesting(const Formula& a, const Formula& b);

/// Renames context variables to v0, v1, ... in order.
Sequent alpha_normalize(const Sequent& s);

/// Rename every variable of the context that also appears in `avoid`
/// to a fresh name; returns the renaming applied.
Substitution freshen(const Context& ctx, const std::set<std::string>& avoid, Context& renamed);

}  // namespace phl
