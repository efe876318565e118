#include "phl/freemodel.hpp"

#include <cctype>
#include <set>

#include "phl/model_finder.hpp"

namespace phl {

Presentation representing_model(const Theory& theory, const Context& ctx, const Formula& phi, int depth,
                                ChaseOptions options) {
  if (depth < 0) throw BudgetError("depth budget must be non-negative");
  options.depth = depth;
  return saturate(theory, ctx, phi, options);
}

namespace {

// The hom ⌜x⃗.φ⌝ → M determined by where the generators go.
std::optional<Homomorphism> hom_from_tuple(const Presentation& p, const Structure& m, const Tuple& t) {
  Homomorphism h;
  h.maps.resize(p.model.num_sorts());
  for (std::size_t s = 0; s < p.model.num_sorts(); ++s) {
    for (int c = 0; c < p.model.size(s); ++c) {
      auto v = interp_term(m, p.context, p.representative(s, c), t);
      if (!v) return std::nullopt;
      h.maps[s].push_back(*v);
    }
  }
  return h;
}

}  // namespace

YonedaReport yoneda_check(const Presentation& p, const Structure& m) {
  if (!p.status.saturated) throw Error("presentation is truncated; the correspondence is not certified");
  YonedaReport r;
  std::vector<Tuple> tuples = interp_formula(m, p.context, p.constraint);
  std::vector<Homomorphism> homs = enumerate_homs(p.model, m);
  r.tuples = tuples.size();
  r.homs = homs.size();
  std::set<Homomorphism> image;
  for (const auto& t : tuples) {
    auto h = hom_from_tuple(p, m, t);
    if (!h) {
      r.message = "a representative is undefined at a satisfying tuple";
      return r;
    }
    if (!check_hom(p.model, m, *h)) {
      r.message = "the map induced by a satisfying tuple is not a homomorphism";
      return r;
    }
    image.insert(*h);
  }
  if (image.size() != tuples.size()) {
    r.message = "two tuples induce the same homomorphism";
    return r;
  }
  if (image != std::set<Homomorphism>(homs.begin(), homs.end())) {
    r.message = "some homomorphism is not induced by a tuple";
    return r;
  }
  r.bijective = true;
  return r;
}

Homomorphism repn_morphism(const Theory& theory, const Presentation& p, const Presentation& q,
                           const std::vector<Term>& taus) {
  if (!p.status.saturated || !q.status.saturated) throw Error("both presentations must be saturated");
  if (taus.size() != p.context.size()) throw Error("expected one term per variable of the source context");
  Substitution s;
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    auto sort = sort_of(theory.signature, q.context, taus[i]);
    if (!sort) throw SortError("term " + std::to_string(i) + " is not well-formed over the target context");
    if (*sort != p.context[i].sort) throw SortError("term " + std::to_string(i) + " has sort " + *sort);
    s[p.context[i].name] = taus[i];
  }
  parts.push_back(phl::apply(s, p.constraint));
  for (const auto& t : taus) parts.push_back(Formula::defined(t));
  if (!q.generic_satisfies(Formula::conj(std::move(parts))))
    throw Error("the target does not prove the source formula at the given terms");
  Tuple t;
  for (const auto& tau : taus) t.push_back(*q.element_of(tau));
  auto h = hom_from_tuple(p, q.model, t);
  if (!h || !check_hom(p.model, q.model, *h)) throw Error("induced map is not a homomorphism");
  return *h;
}

Coequalizer repn_coequalizer(const Theory& theory, const Presentation& p, const Presentation& q,
                             const std::vector<Term>& taus, const std::vector<Term>& sigmas, int depth) {
  repn_morphism(theory, p, q, taus);
  repn_morphism(theory, p, q, sigmas);
  std::vector<Formula> parts{q.constraint};
  for (std::size_t i = 0; i < taus.size(); ++i) parts.push_back(Formula::eq(taus[i], sigmas[i]));
  Coequalizer out{representing_model(theory, q.context, Formula::conj(std::move(parts)), depth), {}};
  if (!out.presentation.status.saturated) throw BudgetError("coequalizer did not saturate within the depth budget");
  auto h = hom_from_tuple(q, out.presentation.model, out.presentation.generic);
  if (!h) throw Error("quotient map is undefined on some class");
  out.quotient = *h;
  return out;
}

namespace {

bool plain_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

FreeAlgebra free_algebra(const RelativeTheory& rt, const Structure& m, int depth, ChaseOptions options) {
  Theory t = pht_of(rt);
  const Signature& sig = rt.base.signature;

  // One generator per element, named after it when that is unambiguous.
  std::set<std::string> seen;
  bool reuse = true;
  for (std::size_t s = 0; s < m.num_sorts(); ++s)
    for (int e = 0; e < m.size(s); ++e)
      if (!plain_identifier(m.element_name(s, e)) || !seen.insert(m.element_name(s, e)).second) reuse = false;
  Context ctx;
  std::vector<std::vector<std::string>> var(m.num_sorts());
  for (std::size_t s = 0; s < m.num_sorts(); ++s)
    for (int e = 0; e < m.size(s); ++e) {
      std::string name = reuse ? m.element_name(s, e) : "g" + std::to_string(s) + "_" + std::to_string(e);
      var[s].push_back(name);
      ctx.add(name, sig.sorts()[s]);
    }
  auto gen = [&](std::size_t s, int e) { return Term::var(var[s][static_cast<std::size_t>(e)]); };

  std::vector<Formula> diagram;
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const auto& table = m.fun_table(f);
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i] < 0) continue;
      Tuple args = m.decode_fun_args(f, i);
      std::vector<Term> ts;
      for (std::size_t k = 0; k < args.size(); ++k) ts.push_back(gen(m.fun_arg_sorts(f)[k], args[k]));
      diagram.push_back(Formula::eq(Term::app(sig.functions()[f].name, ts), gen(m.fun_result_sort(f), table[i])));
    }
  }
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const auto& table = m.rel_table(r);
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!table[i]) continue;
      Tuple args = m.decode_rel_args(r, i);
      std::vector<Term> ts;
      for (std::size_t k = 0; k < args.size(); ++k) ts.push_back(gen(m.rel_arg_sorts(r)[k], args[k]));
      diagram.push_back(Formula::rel(sig.relations()[r].name, ts));
    }
  }

  FreeAlgebra out;
  out.presentation = representing_model(t, ctx, Formula::conj(std::move(diagram)), depth, options);
  out.unit.maps.resize(m.num_sorts());
  std::size_t k = 0;
  for (std::size_t s = 0; s < m.num_sorts(); ++s)
    for (int e = 0; e < m.size(s); ++e) out.unit.maps[s].push_back(out.presentation.generic[k++]);
  out.reduct = reduct(rt, out.presentation.model);
  return out;
}

UniversalCheck check_free_universal_property(const RelativeTheory& rt, const Structure& m, const FreeAlgebra& free,
                                             int max_size) {
  if (!free.presentation.status.saturated) throw Error("free algebra is truncated; the universal property is not certified");
  UniversalCheck out;
  for (const auto& b : all_models(pht_of(rt), max_size)) {
    ++out.algebras;
    std::size_t left = count_homs(free.presentation.model, b);
    std::size_t right = count_homs(m, reduct(rt, b));
    if (left != right && out.mismatches++ == 0) {
      out.first_mismatch = "algebra of sizes";
      for (int n : b.sizes()) out.first_mismatch += " " + std::to_string(n);
    }
  }
  return out;
}

}  // namespace phl
