#pragma once

// Shared fixtures for the test binaries: data loading, seeded generators and
// naive reference semantics written independently of the library's evaluator.

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "phl/model_text.hpp"
#include "phl/structure.hpp"
#include "phl/syntax.hpp"
#include "phl/text.hpp"
#include "phl/translation.hpp"

namespace phltest {

inline std::string data_path(const std::string& rel) { return std::string(PHL_DATA_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data(const std::string& rel) { return slurp(data_path(rel)); }

inline phl::Theory theory(const std::string& file) { return phl::parse_theory(data("theories/" + file)); }

inline phl::RelativeTheory relative(const std::string& file) {
  return phl::parse_relative_theory(data("theories/" + file));
}

inline phl::Structure model(const phl::Theory& t, const std::string& file) {
  return phl::parse_model(t, data("models/" + file));
}

// ---------------------------------------------------------------------------
// Generators

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen); }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))]; }
};

/// A random term of the given sort, or nullopt when none can be built.
inline std::optional<phl::Term> random_term(Rng& r, const phl::Signature& sig, const phl::Context& ctx,
                                            const std::string& sort, int depth) {
  std::vector<phl::Term> leaves;
  for (const auto& v : ctx.vars())
    if (v.sort == sort) leaves.push_back(phl::Term::var(v.name));
  std::vector<const phl::FunctionSymbol*> ops;
  for (const auto& f : sig.functions()) {
    if (f.result_sort != sort) continue;
    if (f.arg_sorts.empty()) leaves.push_back(phl::Term::app(f.name, {}));
    else ops.push_back(&f);
  }
  bool use_op = depth > 0 && !ops.empty() && (leaves.empty() || r.chance(0.45));
  if (use_op) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const auto* f = ops[static_cast<std::size_t>(r.below(static_cast<int>(ops.size())))];
      std::vector<phl::Term> args;
      bool ok = true;
      for (const auto& s : f->arg_sorts) {
        auto a = random_term(r, sig, ctx, s, depth - 1);
        if (!a) { ok = false; break; }
        args.push_back(*a);
      }
      if (ok) return phl::Term::app(f->name, std::move(args));
    }
  }
  if (leaves.empty()) return std::nullopt;
  return r.pick(leaves);
}

inline std::optional<phl::Formula> random_atom(Rng& r, const phl::Signature& sig, const phl::Context& ctx,
                                               int depth) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    bool rel = !sig.relations().empty() && r.chance(0.5);
    if (rel) {
      const auto& R = sig.relations()[static_cast<std::size_t>(r.below(static_cast<int>(sig.relations().size())))];
      std::vector<phl::Term> args;
      bool ok = true;
      for (const auto& s : R.arg_sorts) {
        auto a = random_term(r, sig, ctx, s, depth);
        if (!a) { ok = false; break; }
        args.push_back(*a);
      }
      if (ok) return phl::Formula::rel(R.name, std::move(args));
    } else {
      const auto& s = sig.sorts()[static_cast<std::size_t>(r.below(static_cast<int>(sig.sorts().size())))];
      auto a = random_term(r, sig, ctx, s, depth);
      auto b = random_term(r, sig, ctx, s, depth);
      if (a && b) return r.chance(0.2) ? phl::Formula::defined(*a) : phl::Formula::eq(*a, *b);
    }
  }
  return std::nullopt;
}

inline phl::Formula random_formula(Rng& r, const phl::Signature& sig, const phl::Context& ctx, int max_atoms,
                                   int depth) {
  int n = r.below(max_atoms + 1);
  std::vector<phl::Formula> parts;
  for (int i = 0; i < n; ++i)
    if (auto a = random_atom(r, sig, ctx, depth)) parts.push_back(*a);
  return phl::Formula::conj(std::move(parts));
}

inline phl::Context random_context(Rng& r, const phl::Signature& sig, int max_vars, int min_vars = 0) {
  phl::Context ctx;
  int n = min_vars + r.below(max_vars - min_vars + 1);
  static const char* names[] = {"x", "y", "z", "w", "u", "v"};
  for (int i = 0; i < n; ++i) ctx.add(names[i], r.pick(sig.sorts()));
  return ctx;
}

inline phl::Sequent random_sequent(Rng& r, const phl::Signature& sig, int max_vars = 3, int max_atoms = 2,
                                   int depth = 1) {
  phl::Sequent s;
  s.context = random_context(r, sig, max_vars);
  s.premise = random_formula(r, sig, s.context, max_atoms, depth);
  s.conclusion = random_formula(r, sig, s.context, max_atoms, depth);
  if (s.conclusion.is_truth())
    if (auto a = random_atom(r, sig, s.context, depth)) s.conclusion = *a;
  return s;
}

/// Random partial structure (not necessarily a model).
inline phl::Structure random_structure(Rng& r, std::shared_ptr<const phl::Signature> sig, const std::vector<int>& sizes,
                                       double defined = 0.7, double related = 0.4) {
  phl::Structure m(sig, "R");
  for (std::size_t s = 0; s < sizes.size(); ++s) m.add_elements(s, sizes[s]);
  for (std::size_t f = 0; f < sig->functions().size(); ++f) {
    int target = m.size(m.fun_result_sort(f));
    auto& tab = m.fun_table(f);
    for (auto& cell : tab) cell = (target > 0 && r.chance(defined)) ? r.below(target) : -1;
  }
  for (std::size_t k = 0; k < sig->relations().size(); ++k)
    for (auto& cell : m.rel_table(k)) cell = r.chance(related) ? 1 : 0;
  return m;
}

// ---------------------------------------------------------------------------
// Naive reference semantics, by recursion on the syntax.

inline std::optional<int> naive_eval(const phl::Structure& m, const phl::Context& ctx, const phl::Term& t,
                                     const phl::Tuple& a) {
  if (t.is_var()) return a[*ctx.index_of(t.name())];
  auto f = m.signature().function_id(t.name());
  phl::Tuple args;
  for (const auto& s : t.args()) {
    auto v = naive_eval(m, ctx, s, a);
    if (!v) return std::nullopt;
    args.push_back(*v);
  }
  int out = m.fun(f, args);
  if (out < 0) return std::nullopt;
  return out;
}

inline bool naive_sat(const phl::Structure& m, const phl::Context& ctx, const phl::Formula& f, const phl::Tuple& a) {
  switch (f.kind()) {
    case phl::Formula::Kind::Truth:
      return true;
    case phl::Formula::Kind::Conj:
      return std::all_of(f.parts().begin(), f.parts().end(), [&](const phl::Formula& p) { return naive_sat(m, ctx, p, a); });
    case phl::Formula::Kind::Eq: {
      auto l = naive_eval(m, ctx, f.lhs(), a);
      auto r = naive_eval(m, ctx, f.rhs(), a);
      return l && r && *l == *r;
    }
    case phl::Formula::Kind::Rel: {
      phl::Tuple args;
      for (const auto& s : f.terms()) {
        auto v = naive_eval(m, ctx, s, a);
        if (!v) return false;
        args.push_back(*v);
      }
      return m.rel(m.signature().relation_id(f.relation()), args);
    }
  }
  return false;
}

inline void naive_tuples(const phl::Structure& m, const phl::Context& ctx,
                         const std::function<void(const phl::Tuple&)>& visit) {
  phl::Tuple a(ctx.size(), 0);
  std::vector<int> bound;
  for (const auto& v : ctx.vars()) bound.push_back(m.size(m.signature().sort_id(v.sort)));
  for (int b : bound)
    if (b == 0) return;
  while (true) {
    visit(a);
    std::size_t i = a.size();
    while (i > 0) {
      --i;
      if (++a[i] < bound[i]) break;
      a[i] = 0;
      if (i == 0) return;
    }
    if (a.empty()) return;
  }
}

inline std::vector<phl::Tuple> naive_interp(const phl::Structure& m, const phl::Context& ctx, const phl::Formula& f) {
  std::vector<phl::Tuple> out;
  naive_tuples(m, ctx, [&](const phl::Tuple& a) {
    if (naive_sat(m, ctx, f, a)) out.push_back(a);
  });
  return out;
}

inline bool naive_holds(const phl::Structure& m, const phl::Sequent& s) {
  bool ok = true;
  naive_tuples(m, s.context, [&](const phl::Tuple& a) {
    if (ok && naive_sat(m, s.context, s.premise, a) && !naive_sat(m, s.context, s.conclusion, a)) ok = false;
  });
  return ok;
}

inline bool naive_is_hom(const phl::Structure& m, const phl::Structure& n, const phl::Homomorphism& h) {
  const auto& sig = m.signature();
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const auto& tab = m.fun_table(f);
    for (std::size_t i = 0; i < tab.size(); ++i) {
      if (tab[i] < 0) continue;
      auto args = m.decode_fun_args(f, i);
      const auto& sorts = m.fun_arg_sorts(f);
      for (std::size_t k = 0; k < args.size(); ++k) args[k] = h(sorts[k], args[k]);
      if (n.fun(f, args) != h(m.fun_result_sort(f), tab[i])) return false;
    }
  }
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const auto& tab = m.rel_table(r);
    for (std::size_t i = 0; i < tab.size(); ++i) {
      if (!tab[i]) continue;
      auto args = m.decode_rel_args(r, i);
      const auto& sorts = m.rel_arg_sorts(r);
      for (std::size_t k = 0; k < args.size(); ++k) args[k] = h(sorts[k], args[k]);
      if (!n.rel(r, args)) return false;
    }
  }
  return true;
}

/// Every total sorted map m → n that is a homomorphism, by exhaustive enumeration.
inline std::vector<phl::Homomorphism> brute_homs(const phl::Structure& m, const phl::Structure& n) {
  std::vector<std::pair<std::size_t, int>> slots;
  for (std::size_t s = 0; s < m.num_sorts(); ++s)
    for (int e = 0; e < m.size(s); ++e) slots.push_back({s, e});
  phl::Homomorphism h;
  h.maps.resize(m.num_sorts());
  for (std::size_t s = 0; s < m.num_sorts(); ++s) {
    if (m.size(s) > 0 && n.size(s) == 0) return {};
    h.maps[s].assign(static_cast<std::size_t>(m.size(s)), 0);
  }
  std::vector<phl::Homomorphism> out;
  while (true) {
    if (naive_is_hom(m, n, h)) out.push_back(h);
    std::size_t i = slots.size();
    bool done = true;
    while (i > 0) {
      --i;
      auto [s, e] = slots[i];
      auto& cell = h.maps[s][static_cast<std::size_t>(e)];
      if (++cell < n.size(s)) { done = false; break; }
      cell = 0;
    }
    if (done) break;
  }
  return out;
}

}  // namespace phltest
