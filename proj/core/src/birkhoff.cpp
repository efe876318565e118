#include "phl/birkhoff.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>

#include "phl/freemodel.hpp"
#include "phl/model_text.hpp"
#include "phl/morphology.hpp"

namespace phl {

std::optional<std::size_t> ModelUniverse::find(const Structure& m) const {
  std::vector<std::size_t> fp = fingerprint(m);
  for (std::size_t i = 0; i < models.size(); ++i)
    if (fingerprint(models[i]) == fp && find_isomorphism(m, models[i])) return i;
  return std::nullopt;
}

bool ModelUniverse::add(Structure m) {
  if (find(m)) return false;
  models.push_back(std::move(m));
  return true;
}

ModelUniverse make_universe(const Theory& theory, std::vector<Structure> models, int size_cap) {
  ModelUniverse u;
  u.theory = theory;
  u.size_cap = size_cap;
  for (auto& m : models) u.add(std::move(m));
  return u;
}

namespace {

bool fits(const std::vector<int>& sizes, int cap) {
  return std::all_of(sizes.begin(), sizes.end(), [&](int n) { return n <= cap; });
}

std::string product_name(const std::vector<const Structure*>& factors) {
  if (factors.empty()) return "1";
  std::string out;
  for (const Structure* f : factors) out += (out.empty() ? "" : "*") + f->name;
  return factors.size() > 1 ? "(" + out + ")" : out;
}

// Nondecreasing index sequences of length k over n members.
void for_each_multiset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k, 0);
  if (k == 0) {
    f(idx);
    return;
  }
  if (n == 0) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[i - 1];
  }
}

}  // namespace

ModelUniverse close_P(const ModelUniverse& u, int arity_cap) {
  ModelUniverse out = u;
  auto sig = share_signature(u.theory);
  std::set<std::string> skipped(out.skipped.begin(), out.skipped.end());
  for (bool changed = true; changed;) {
    changed = false;
    std::size_t n = out.models.size();
    for (int k = 0; k <= arity_cap; ++k) {
      for_each_multiset(n, static_cast<std::size_t>(k), [&](const std::vector<std::size_t>& idx) {
        std::vector<const Structure*> factors;
        std::vector<int> sizes(u.theory.signature.sorts().size(), 1);
        for (std::size_t i : idx) {
          factors.push_back(&out.models[i]);
          for (std::size_t s = 0; s < sizes.size(); ++s) sizes[s] *= out.models[i].size(s);
        }
        if (!fits(sizes, u.size_cap)) {
          skipped.insert(product_name(factors));
          return;
        }
        Structure p = product(sig, factors);
        p.name = product_name(factors);
        if (out.add(std::move(p))) changed = true;
      });
    }
  }
  out.skipped.assign(skipped.begin(), skipped.end());
  return out;
}

ModelUniverse close_Scl(const ModelUniverse& u, int max_size) {
  ModelUniverse out = u;
  for (std::size_t i = 0; i < out.models.size(); ++i) {
    const Structure m = out.models[i];
    std::vector<std::pair<std::size_t, int>> elements;
    for (std::size_t s = 0; s < m.num_sorts(); ++s)
      for (int e = 0; e < m.size(s); ++e) elements.push_back({s, e});
    // A closed submodel with at most max_size elements per sort is generated by its own elements.
    std::size_t most = elements.size();
    if (max_size >= 0) most = std::min(most, static_cast<std::size_t>(max_size) * m.num_sorts());
    else if (elements.size() > 24) throw BudgetError("too many elements to enumerate subsets of " + m.name);
    std::set<std::vector<std::vector<int>>> seen;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> go = [&](std::size_t from) {
      std::vector<std::vector<int>> gens(m.num_sorts());
      for (std::size_t k : chosen) gens[elements[k].first].push_back(elements[k].second);
      Submodel sub = closed_submodel_generated(m, gens);
      if (seen.insert(sub.inclusion.maps).second && (max_size < 0 || fits(sub.model.sizes(), max_size))) {
        std::string label;
        for (std::size_t s = 0; s < m.num_sorts(); ++s)
          for (int x : sub.inclusion.maps[s]) label += (label.empty() ? "" : ",") + m.element_name(s, x);
        sub.model.name = m.name + "{" + label + "}";
        out.add(std::move(sub.model));
      }
      if (chosen.size() == most) return;
      for (std::size_t k = from; k < elements.size(); ++k) {
        chosen.push_back(k);
        go(k + 1);
        chosen.pop_back();
      }
    };
    go(0);
  }
  return out;
}

namespace {

// A retraction r : m → n (split by a section of U^ρ r when ρ is given).
bool has_retraction(const Structure& m, const Structure& n, const TheoryMorphism* rho) {
  if (!rho) {
    bool found = false;
    HomSearchOptions inj;
    inj.injective = true;
    for_each_hom(n, m, [&](const Homomorphism& s) {
      HomSearchOptions opt;
      opt.fixed.resize(m.num_sorts());
      for (std::size_t t = 0; t < m.num_sorts(); ++t) {
        opt.fixed[t].assign(static_cast<std::size_t>(m.size(t)), -1);
        for (int y = 0; y < n.size(t); ++y) opt.fixed[t][static_cast<std::size_t>(s(t, y))] = y;
      }
      found = find_hom(m, n, opt).has_value();
      return !found;
    }, inj);
    return found;
  }
  Structure um = U_rho(*rho, m), un = U_rho(*rho, n);
  const Signature& src = rho->source.signature;
  const Signature& tgt = m.signature();
  bool found = false;
  HomSearchOptions inj;
  inj.injective = true;
  for_each_hom(un, um, [&](const Homomorphism& s) {
    HomSearchOptions opt;
    opt.fixed.resize(m.num_sorts());
    for (std::size_t t = 0; t < m.num_sorts(); ++t) opt.fixed[t].assign(static_cast<std::size_t>(m.size(t)), -1);
    for (std::size_t a = 0; a < src.sorts().size(); ++a) {
      std::size_t t = tgt.sort_id(rho->sort(src.sorts()[a]));
      for (int y = 0; y < un.size(a); ++y) {
        int& slot = opt.fixed[t][static_cast<std::size_t>(s(a, y))];
        if (slot >= 0 && slot != y) return true;
        slot = y;
      }
    }
    found = find_hom(m, n, opt).has_value();
    return !found;
  }, inj);
  return found;
}

}  // namespace

ModelUniverse close_R(const ModelUniverse& u, const std::vector<Structure>& pool, const TheoryMorphism* rho) {
  ModelUniverse out = u;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& n : pool) {
      if (out.find(n)) continue;
      for (std::size_t i = 0; i < out.models.size(); ++i) {
        if (has_retraction(out.models[i], n, rho)) {
          out.models.push_back(n);
          changed = true;
          break;
        }
      }
    }
  }
  return out;
}

bool contains_all(const ModelUniverse& a, const ModelUniverse& b) {
  return std::all_of(b.models.begin(), b.models.end(), [&](const Structure& m) { return a.find(m).has_value(); });
}

bool same_members(const ModelUniverse& a, const ModelUniverse& b) { return contains_all(a, b) && contains_all(b, a); }

namespace {

ModelUniverse restrict_to_pool(const ModelUniverse& u, const std::vector<Structure>& pool) {
  ModelUniverse out = u;
  out.models.clear();
  for (const auto& m : u.models)
    for (const auto& p : pool)
      if (fingerprint(p) == fingerprint(m) && find_isomorphism(m, p)) {
        out.models.push_back(p);
        break;
      }
  return out;
}

// n is a closed submodel of a product of members iff the canonical map into the product
// over all homs n → member is a closed mono: jointly injective, and reflecting every
// relation and every undefined function entry.
bool in_SP(const Structure& n, const std::vector<Structure>& members) {
  std::vector<std::pair<const Structure*, Homomorphism>> homs;
  for (const auto& m : members)
    for (auto& h : enumerate_homs(n, m)) homs.emplace_back(&m, std::move(h));
  auto image = [](const Homomorphism& h, const std::vector<std::size_t>& sorts, const Tuple& t) {
    Tuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = h(sorts[i], t[i]);
    return out;
  };
  for (std::size_t s = 0; s < n.num_sorts(); ++s)
    for (int a = 0; a < n.size(s); ++a)
      for (int b = a + 1; b < n.size(s); ++b)
        if (std::none_of(homs.begin(), homs.end(), [&](const auto& p) { return p.second(s, a) != p.second(s, b); }))
          return false;
  const Signature& sig = n.signature();
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const auto& table = n.rel_table(r);
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i]) continue;
      Tuple t = n.decode_rel_args(r, i);
      if (std::all_of(homs.begin(), homs.end(), [&](const auto& p) {
            return p.first->rel(r, image(p.second, n.rel_arg_sorts(r), t));
          }))
        return false;
    }
  }
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const auto& table = n.fun_table(f);
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i] >= 0) continue;
      Tuple t = n.decode_fun_args(f, i);
      if (std::all_of(homs.begin(), homs.end(), [&](const auto& p) {
            return p.first->fun(f, image(p.second, n.fun_arg_sorts(f), t)) >= 0;
          }))
        return false;
    }
  }
  return true;
}

ModelUniverse hsp_once(const ModelUniverse& u, const std::vector<Structure>& pool, int arity_cap,
                       const TheoryMorphism* rho) {
  int largest = 0;
  for (const auto& m : pool)
    for (int n : m.sizes()) largest = std::max(largest, n);
  ModelUniverse s = close_Scl(close_P(u, arity_cap), largest);
  // Products too large to build still contribute their small closed submodels.
  for (const auto& n : pool)
    if (!s.find(n) && in_SP(n, u.models)) s.add(n);
  return restrict_to_pool(close_R(s, pool, rho), pool);
}

}  // namespace

HspResult hsp_closure(const ModelUniverse& u, const std::vector<Structure>& pool, int arity_cap,
                      const TheoryMorphism* rho) {
  HspResult r;
  r.closure = hsp_once(u, pool, arity_cap, rho);
  for (const auto& m : r.closure.models)
    if (!u.find(m)) r.added.push_back(m.name);
  r.stable = same_members(hsp_once(r.closure, pool, arity_cap, rho), r.closure);
  return r;
}

bool DefinabilityReport::ok() const {
  return fixed_point && std::all_of(judgments.begin(), judgments.end(),
                                    [](const JudgmentReport& j) { return j.disagreements == 0; });
}

DefinabilityReport closure_check(const Theory& t, const std::vector<Structure>& cls,
                                 const std::vector<Structure>& pool, int arity_cap) {
  DefinabilityReport r;
  r.pool = pool.size();
  int cap = 0;
  for (const auto& m : pool)
    for (int n : m.sizes()) cap = std::max(cap, n);
  ModelUniverse e = make_universe(t, cls, cap + 1);
  r.defined = e.size();
  HspResult h = hsp_closure(e, pool, arity_cap);
  r.witnesses = h.added;
  r.fixed_point = h.added.empty() && h.stable;
  return r;
}

DefinabilityReport definability_check(const Theory& t, const std::vector<Axiom>& judgments,
                                      const std::vector<Structure>& pool, int arity_cap, int depth) {
  Theory extended = t;
  for (const auto& j : judgments) extended.axioms.push_back(j);
  std::vector<Structure> cls;
  for (const auto& m : pool)
    if (is_model(m, extended)) cls.push_back(m);
  DefinabilityReport r = closure_check(t, cls, pool, arity_cap);

  for (const auto& j : judgments) {
    JudgmentReport jr;
    jr.judgment = j.name;
    const Sequent& s = j.sequent;
    Presentation p = representing_model(t, s.context, s.premise, depth);
    Presentation q = representing_model(t, s.context, Formula::conj({s.premise, s.conclusion}), depth);
    if (!p.status.saturated || !q.status.saturated) {
      jr.skipped = pool.size();
      r.judgments.push_back(jr);
      continue;
    }
    std::vector<Term> vars;
    for (const auto& v : s.context.vars()) vars.push_back(Term::var(v.name));
    Homomorphism e = repn_morphism(t, p, q, vars);
    for (const auto& m : pool) {
      ++jr.checked;
      if (holds(m, s).ok != orthogonal(m, p.model, q.model, e) && jr.disagreements++ == 0) jr.witness = m.name;
    }
    r.judgments.push_back(jr);
  }
  return r;
}

// ---------------------------------------------------------------------------

void FiniteCategory::validate() const {
  const std::size_t n = objects.size();
  if (identities.size() != n) throw Error("every object needs an identity");
  for (std::size_t o = 0; o < n; ++o) {
    const auto& id = morphisms.at(identities[o]);
    if (id.source != o || id.target != o) throw Error("identity of " + objects[o] + " has the wrong type");
  }
  auto comp = [&](std::size_t g, std::size_t f) {
    auto it = composition.find({g, f});
    if (it == composition.end())
      throw Error("composite " + morphisms[g].name + " . " + morphisms[f].name + " is missing");
    return it->second;
  };
  for (std::size_t f = 0; f < morphisms.size(); ++f) {
    if (comp(f, identities[morphisms[f].source]) != f || comp(identities[morphisms[f].target], f) != f)
      throw Error("identity law fails at " + morphisms[f].name);
    for (std::size_t g = 0; g < morphisms.size(); ++g) {
      if (morphisms[f].target != morphisms[g].source) continue;
      std::size_t gf = comp(g, f);
      if (morphisms[gf].source != morphisms[f].source || morphisms[gf].target != morphisms[g].target)
        throw Error("composite " + morphisms[g].name + " . " + morphisms[f].name + " has the wrong type");
      for (std::size_t h = 0; h < morphisms.size(); ++h)
        if (morphisms[g].target == morphisms[h].source && comp(comp(h, g), f) != comp(h, gf))
          throw Error("composition is not associative");
    }
  }
}

FinitePoset posetification(const FiniteCategory& c) {
  c.validate();
  const std::size_t n = c.objects.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  for (const auto& m : c.morphisms) reach[m.source][m.target] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  FinitePoset p;
  std::vector<std::size_t> comp(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] != n) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = i; j < n; ++j)
      if (reach[i][j] && reach[j][i]) {
        comp[j] = p.elements.size();
        members.push_back(j);
      }
    p.elements.push_back(std::move(members));
  }
  const std::size_t k = p.elements.size();
  p.leq.assign(k, std::vector<bool>(k, false));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) p.leq[a][b] = reach[p.elements[a][0]][p.elements[b][0]];
  return p;
}

AccReport acc_report(const FinitePoset& p) {
  const std::size_t n = p.elements.size();
  std::vector<std::size_t> len(n, 0), next(n, n);
  std::function<std::size_t(std::size_t)> longest = [&](std::size_t i) -> std::size_t {
    if (len[i]) return len[i];
    std::size_t best = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && p.leq[i][j] && !p.leq[j][i] && longest(j) + 1 > best) {
        best = len[j] + 1;
        next[i] = j;
      }
    return len[i] = best;
  };
  AccReport r;
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i)
    if (longest(i) > r.longest_chain) {
      r.longest_chain = len[i];
      start = i;
    }
  for (std::size_t i = start; i < n; i = next[i]) r.chain.push_back(i);
  return r;
}

FiniteCategory component_diagram(const ModelUniverse& u) {
  FiniteCategory c;
  const std::size_t n = u.models.size();
  std::vector<std::vector<std::size_t>> arrow(n, std::vector<std::size_t>(n, SIZE_MAX));
  for (std::size_t i = 0; i < n; ++i) c.objects.push_back(u.models[i].name);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i == j || find_hom(u.models[i], u.models[j])) {
        arrow[i][j] = c.morphisms.size();
        c.morphisms.push_back({c.objects[i] + "->" + c.objects[j], i, j});
      }
  for (std::size_t i = 0; i < n; ++i) c.identities.push_back(arrow[i][i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (arrow[i][j] != SIZE_MAX && arrow[j][k] != SIZE_MAX)
          c.composition[{arrow[j][k], arrow[i][j]}] = arrow[i][k];
  return c;
}

}  // namespace phl
