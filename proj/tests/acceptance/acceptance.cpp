// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include "support.hpp"

#include "phl/birkhoff.hpp"
#include "phl/derivation.hpp"
#include "phl/freemodel.hpp"
#include "phl/model_finder.hpp"
#include "phl/morphology.hpp"
#include "phl/prover.hpp"

using namespace phl;
using phltest::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

void collect_nodes(Derivation& d, std::vector<Derivation*>& out) {
  out.push_back(&d);
  for (auto& c : d.children) collect_nodes(c, out);
}

/// A sequent whose conclusion is an atom the chase of the premise derives, when one exists.
std::optional<Sequent> chased_sequent(Rng& r, const Theory& t, int depth) {
  Context ctx = phltest::random_context(r, t.signature, 3, 1);
  Formula phi = phltest::random_formula(r, t.signature, ctx, 2, 1);
  Presentation p = saturate(t, ctx, phi, ChaseOptions{depth, 400, 2'000'000, std::nullopt});
  std::vector<Formula> derived;
  for (int attempt = 0; attempt < 30; ++attempt) {
    auto a = phltest::random_atom(r, t.signature, ctx, 1);
    if (a && p.generic_satisfies(*a)) derived.push_back(*a);
  }
  if (derived.empty()) return std::nullopt;
  return Sequent{ctx, phi, r.pick(derived)};
}

// ---------------------------------------------------------------------------

Outcome golden_derivations() {
  auto t0 = Clock::now();
  Theory terms = phltest::theory("terms.phl");
  const std::vector<std::string> golden = {"symmetry_vars", "symmetry_terms", "transitivity_vars",
                                           "transitivity_terms", "cut_rule", "subst_term",
                                           "subst_formula", "weakening", "permutation"};
  const std::vector<std::string> perturbed = {"bad_transitivity_swapped", "bad_symmetry_relabel",
                                              "bad_cut_rule_swapped", "bad_weakening_relabel"};
  Outcome o;
  std::size_t valid = 0, rejected = 0, swaps = 0;
  for (const auto& name : golden) {
    auto f = parse_derivation(terms, phltest::data("derivations/" + name + ".deriv"));
    Theory th = f.theory_with_hypotheses(terms);
    if (check_derivation(th, f.derivation).ok) ++valid;
    else o.pass = false, o.detail += " " + name + " invalid;";
    std::vector<Derivation*> nodes;
    collect_nodes(f.derivation, nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i]->rule.rule != Rule::Cut || same_sequent(nodes[i]->children[0].root, nodes[i]->children[1].root)) continue;
      Derivation copy = f.derivation;
      std::vector<Derivation*> cn;
      collect_nodes(copy, cn);
      std::swap(cn[i]->children[0], cn[i]->children[1]);
      ++swaps;
      if (check_derivation(th, copy).ok) o.pass = false, o.detail += " swapped Cut in " + name + " accepted;";
    }
  }
  for (const auto& name : perturbed) {
    auto f = parse_derivation(terms, phltest::data("derivations/" + name + ".deriv"));
    if (!check_derivation(f.theory_with_hypotheses(terms), f.derivation).ok) ++rejected;
    else o.pass = false, o.detail += " " + name + " accepted;";
  }
  double s = seconds_since(t0);
  if (s >= 1.0) o.pass = false;
  o.detail = std::to_string(valid) + "/" + std::to_string(golden.size()) + " golden valid, " +
             std::to_string(rejected) + "/" + std::to_string(perturbed.size()) + " perturbed files and " +
             std::to_string(swaps) + " Cut swaps rejected, " + fmt_seconds(s) + o.detail;
  return o;
}

Outcome soundness_sweep() {
  auto t0 = Clock::now();
  Outcome o;
  Rng r(1001);
  std::ostringstream out;
  for (const char* file : {"pos.phl", "mon.phl", "cat.phl"}) {
    Theory t = phltest::theory(file);
    auto models = all_models(t, 3);
    ProveOptions opts;
    opts.depth = 4;
    opts.model_size = 2;
    std::size_t sampled = 0, proved = 0, refuted = 0, violations = 0;
    for (int i = 0; i < 60; ++i) {
      std::optional<Sequent> s;
      if (i % 2 == 0) s = chased_sequent(r, t, 3);
      if (!s) s = phltest::random_sequent(r, t.signature, 3, 2, 1);
      ++sampled;
      auto res = prove(t, *s, opts);
      if (res.verdict == Verdict::Refuted) ++refuted;
      if (res.verdict != Verdict::Proved) continue;
      ++proved;
      for (const auto& m : models)
        if (!holds(m, *s).ok || !phltest::naive_holds(m, *s)) ++violations;
    }
    if (sampled < 50 || proved == 0 || violations) o.pass = false;
    out << " " << t.name << ": " << sampled << " sequents, " << proved << " proved, " << refuted << " refuted, "
        << models.size() << " models, " << violations << " violations;";
  }
  double s = seconds_since(t0);
  if (s >= 120) o.pass = false;
  o.detail = out.str() + " " + fmt_seconds(s);
  return o;
}

Outcome completeness_bridge() {
  Outcome o;
  Rng r(2002);
  std::size_t compared = 0, agree = 0, proved = 0;
  for (const char* file : {"pos.phl", "mon.phl", "cat.phl", "terms.phl"}) {
    Theory t = phltest::theory(file);
    for (int i = 0; i < 60; ++i) {
      std::optional<Sequent> s;
      if (i % 2 == 0) s = chased_sequent(r, t, 4);
      if (!s) s = phltest::random_sequent(r, t.signature, 3, 2, 1);
      Presentation p = representing_model(t, s->context, s->premise, 4);
      if (!p.status.saturated) continue;
      ProveOptions opts;
      opts.depth = 4;
      opts.model_size = 2;
      auto res = prove(t, *s, opts);
      bool generic = p.generic_satisfies(s->conclusion);
      ++compared;
      if ((res.verdict == Verdict::Proved) == generic && res.verdict != Verdict::Unknown) ++agree;
      proved += res.verdict == Verdict::Proved;
    }
  }
  o.pass = compared > 0 && agree == compared && proved > 0;
  o.detail = std::to_string(agree) + "/" + std::to_string(compared) +
             " saturated sequents agree with the generic-tuple check (" + std::to_string(proved) + " proved)";
  return o;
}

Outcome representability() {
  Outcome o;
  Rng r(3003);
  std::ostringstream out;
  std::size_t total = 0;
  for (const char* file : {"pos.phl", "mon.phl"}) {
    Theory t = phltest::theory(file);
    auto models = all_models(t, 4);
    std::size_t pairs = 0, formulas = 0, bad = 0;
    for (int i = 0; i < 80 && formulas < 12; ++i) {
      Context ctx = phltest::random_context(r, t.signature, 2);
      Formula phi = phltest::random_formula(r, t.signature, ctx, 2, 1);
      auto p = representing_model(t, ctx, phi, 4);
      if (!p.status.saturated) continue;
      ++formulas;
      for (const auto& m : models) {
        auto y = yoneda_check(p, m);
        std::size_t tuples = phltest::naive_interp(m, ctx, phi).size();
        ++pairs;
        if (!y.bijective || y.tuples != tuples || y.homs != tuples || count_homs(p.model, m) != tuples) ++bad;
      }
    }
    total += pairs;
    if (pairs < 20 || bad) o.pass = false;
    out << " " << t.name << ": " << formulas << " formulas x " << models.size() << " models = " << pairs
        << " pairs, " << bad << " mismatches;";
  }
  o.detail = std::to_string(total) + " pairs;" + out.str();
  return o;
}

Outcome factorization() {
  Outcome o;
  Rng r(4004);
  std::size_t homs = 0, bad = 0, squares = 0, bad_squares = 0;
  for (const char* file : {"pos.phl", "mon.phl", "cat.phl"}) {
    Theory t = phltest::theory(file);
    bool cat = std::string(file) == "cat.phl";
    auto models = all_models(t, cat ? 2 : 4);
    struct Item {
      const Structure* src;
      const Structure* tgt;
      Homomorphism h;
      Factorization f;
    };
    std::vector<Item> sample;
    for (int i = 0; i < 2000 && sample.size() < 40; ++i) {
      const Structure& m = r.pick(models);
      const Structure& n = r.pick(models);
      auto hs = enumerate_homs(m, n);
      if (hs.empty()) continue;
      auto h = r.pick(hs);
      auto f = factorize(m, n, h);
      ++homs;
      if (compose(f.closed_mono, f.dense) != h || !is_dense(m, f.mid, f.dense) ||
          !is_closed_mono(f.mid, n, f.closed_mono) || !is_model(f.mid, t))
        ++bad;
      sample.push_back({&m, &n, h, std::move(f)});
    }
    // Every commuting square dense e : A → B over closed mono m : C → D. Since m is
    // injective, the bottom map u is fixed by the right map v.
    for (const auto& a : sample) {
      for (const auto& c : sample) {
        const Structure& A = *a.src;
        const Structure& B = a.f.mid;
        const Structure& C = c.f.mid;
        const Structure& D = *c.tgt;
        for (const auto& v : enumerate_homs(B, D)) {
          Homomorphism ve = compose(v, a.f.dense);
          Homomorphism u;
          u.maps.resize(A.num_sorts());
          bool ok = true;
          for (std::size_t s = 0; s < A.num_sorts() && ok; ++s) {
            for (int e = 0; e < A.size(s) && ok; ++e) {
              int target = ve(s, e), pre = -1;
              for (int k = 0; k < C.size(s); ++k)
                if (c.f.closed_mono(s, k) == target) pre = k;
              ok = pre >= 0;
              u.maps[s].push_back(pre);
            }
          }
          if (!ok || !check_hom(A, C, u)) continue;
          ++squares;
          if (count_diagonal_fillers(A, B, C, D, a.f.dense, c.f.closed_mono, u, v) != 1) ++bad_squares;
        }
      }
    }
  }
  o.pass = homs >= 100 && bad == 0 && squares > 0 && bad_squares == 0;
  o.detail = std::to_string(homs) + " homs factorized, " + std::to_string(bad) + " failures; " +
             std::to_string(squares) + " commuting squares, " + std::to_string(bad_squares) +
             " without exactly one filler";
  return o;
}

Outcome orthogonality_validity() {
  Outcome o;
  Rng r(5005);
  std::size_t pairs = 0, agree = 0, sequents = 0, valid = 0;
  for (const char* file : {"pos.phl", "preorder.phl", "mon.phl"}) {
    Theory t = phltest::theory(file);
    auto models = all_models(t, 4);
    for (int i = 0; i < 40; ++i) {
      Sequent s = phltest::random_sequent(r, t.signature, 3, 2, 1);
      auto p = representing_model(t, s.context, s.premise, 4);
      auto q = representing_model(t, s.context, Formula::conj({s.premise, s.conclusion}), 4);
      if (!p.status.saturated || !q.status.saturated) continue;
      std::vector<Term> vars;
      for (const auto& v : s.context.vars()) vars.push_back(Term::var(v.name));
      Homomorphism e;
      try {
        e = repn_morphism(t, p, q, vars);
      } catch (const Error&) {
        o.pass = false;
        continue;
      }
      ++sequents;
      for (const auto& m : models) {
        bool h = holds(m, s).ok;
        ++pairs;
        valid += h;
        if (h == orthogonal(m, p.model, q.model, e)) ++agree;
      }
    }
  }
  o.pass = o.pass && pairs > 0 && agree == pairs && valid > 0 && valid < pairs;
  o.detail = std::to_string(agree) + "/" + std::to_string(pairs) + " (model, sequent) pairs agree over " +
             std::to_string(sequents) + " saturated sequents (" + std::to_string(valid) + " valid)";
  return o;
}

ModelUniverse in_pool(const ModelUniverse& u, const std::vector<Structure>& pool) {
  ModelUniverse out = u;
  out.models.clear();
  for (const auto& m : u.models)
    for (const auto& p : pool)
      if (isomorphic(m, p)) {
        out.models.push_back(p);
        break;
      }
  return out;
}

Outcome closure_laws() {
  Outcome o;
  Rng r(6006);
  std::size_t constructions = 0, violations = 0;
  for (const char* file : {"pos.phl", "mon.phl", "cat.phl"}) {
    Theory t = phltest::theory(file);
    auto models = all_models(t, 2);
    auto sig = share_signature(t);
    for (int i = 0; i < 40; ++i) {
      std::vector<const Structure*> fs;
      int k = r.below(4);
      for (int j = 0; j < k; ++j) fs.push_back(&r.pick(models));
      ++constructions;
      if (!is_model(product(sig, fs), t)) ++violations;

      std::vector<Structure> stages{r.pick(models)};
      std::vector<Homomorphism> steps;
      int len = 1 + r.below(3);
      for (int j = 0; j < len; ++j) {
        const Structure& next = r.pick(models);
        auto hs = enumerate_homs(stages.back(), next);
        if (hs.empty()) break;
        steps.push_back(r.pick(hs));
        stages.push_back(next);
      }
      auto col = chain_colimit(Diagram::chain(stages, steps));
      ++constructions;
      if (!is_model(col.object, t)) ++violations;
      for (std::size_t j = 0; j < stages.size(); ++j)
        if (!check_hom(stages[j], col.object, col.coprojections[j])) ++violations;
    }
  }

  std::size_t universes = 0, law_failures = 0;
  for (const char* file : {"pos.phl", "mon.phl"}) {
    Theory t = phltest::theory(file);
    auto pool = all_models(t, 4);
    auto seeds = all_models(t, 2);
    for (int i = 0; i < 6; ++i) {
      std::vector<Structure> picked;
      int k = 1 + r.below(3);
      for (int j = 0; j < k; ++j) picked.push_back(r.pick(seeds));
      ModelUniverse e = make_universe(t, picked, 4);
      ++universes;
      auto p = close_P(e);
      auto s = close_Scl(e);
      auto rr = close_R(e, pool);
      bool ok = same_members(close_P(p), p) && same_members(close_Scl(s), s) && same_members(close_R(rr, pool), rr);
      ok = ok && contains_all(in_pool(close_R(close_P(e), pool), pool), in_pool(close_P(rr), pool));
      ok = ok && contains_all(in_pool(close_Scl(close_P(e)), pool), in_pool(close_P(s), pool));
      ok = ok && contains_all(in_pool(close_R(close_Scl(e), pool), pool), in_pool(close_Scl(rr), pool));
      if (!ok) ++law_failures;
    }
  }
  o.pass = violations == 0 && universes >= 10 && law_failures == 0;
  o.detail = std::to_string(constructions) + " products/colimits, " + std::to_string(violations) + " violations; " +
             std::to_string(universes) + " universes, " + std::to_string(law_failures) + " idempotence/containment failures";
  return o;
}

bool is_group(const Structure& m) {
  const int n = m.size(0);
  const std::size_t mul = m.signature().function_id("mul");
  const int e = m.fun(m.signature().function_id("e"), Tuple{});
  for (int x = 0; x < n; ++x) {
    bool found = false;
    for (int y = 0; y < n && !found; ++y) found = m.fun(mul, {x, y}) == e && m.fun(mul, {y, x}) == e;
    if (!found) return false;
  }
  return true;
}

Outcome worked_definability() {
  auto t0 = Clock::now();
  Outcome o;
  std::ostringstream out;

  Theory pre = phltest::theory("preorder.phl");
  Theory pos = phltest::theory("pos.phl");
  auto pre_pool = all_models(pre, 3);
  auto r1 = definability_check(pre, {*pos.find_axiom("antisym")}, pre_pool);
  std::vector<Structure> posets;
  for (const auto& m : pre_pool)
    if (is_model(m, pos)) posets.push_back(m);
  auto e1 = make_universe(pre, posets, 4);
  auto h1 = hsp_closure(e1, pre_pool);
  bool ok1 = r1.ok() && r1.defined == posets.size() && h1.added.empty() && same_members(h1.closure, e1);
  out << " preorders<=3: pool " << pre_pool.size() << ", defined " << r1.defined << ", fixed point "
      << (r1.fixed_point ? "yes" : "no") << ", orthogonality disagreements " << r1.judgments.at(0).disagreements << ";";

  Theory inv = phltest::theory("mon_inv.phl");
  auto inv_pool = all_models(inv, 4);
  Sequent total = parse_sequent(inv.signature, "[x:*] true |- def(inv(x))");
  std::vector<Structure> groups, satisfying;
  for (const auto& m : inv_pool) {
    if (is_group(m)) groups.push_back(m);
    if (holds(m, total).ok) satisfying.push_back(m);
  }
  auto r2 = closure_check(inv, groups, inv_pool);
  bool exact = groups.size() == satisfying.size();
  for (std::size_t i = 0; exact && i < groups.size(); ++i) exact = isomorphic(groups[i], satisfying[i]);
  bool ok2 = r2.fixed_point && exact && groups.size() == 5;
  out << " monoids with partial inverse<=4: pool " << inv_pool.size() << ", groups " << groups.size()
      << ", satisfying inv total " << satisfying.size() << ", fixed point " << (r2.fixed_point ? "yes" : "no") << ";";

  auto pos_pool = all_models(pos, 4);
  std::vector<Structure> cls;
  Structure square;
  {
    Structure chain2(share_signature(pos), "chain2");
    chain2.add_elements(0, 2);
    chain2.set_rel(0, {0, 0});
    chain2.set_rel(0, {0, 1});
    chain2.set_rel(0, {1, 1});
    square = product({chain2, chain2});
  }
  for (const auto& m : pos_pool)
    if (!isomorphic(m, square)) cls.push_back(m);
  auto r3 = closure_check(pos, cls, pos_pool);
  bool ok3 = !r3.fixed_point && !r3.witnesses.empty();
  out << " posets<=4 minus 2x2: fixed point " << (r3.fixed_point ? "yes" : "no") << ", witness "
      << (r3.witnesses.empty() ? "none" : r3.witnesses.front()) << ";";

  double s = seconds_since(t0);
  o.pass = ok1 && ok2 && ok3 && s < 300;
  o.detail = out.str() + " " + fmt_seconds(s);
  return o;
}

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

Outcome sketch_correspondence() {
  Outcome o;
  std::ostringstream out;
  for (const char* file : {"product.sketch", "kernel_pair.sketch"}) {
    Sketch s = parse_sketch(phltest::data(std::string("sketches/") + file));
    Theory t = sketch_to_pht(s);
    FinderOptions labelled;
    labelled.iso_reduce = false;
    std::size_t vectors = 0, mismatches = 0, nonzero = 0;
    for (const auto& sizes : size_vectors(s.objects.size(), 3)) {
      std::size_t a = enumerate_models(t, sizes, [](const Structure&) { return true; }, labelled).models;
      std::size_t b = count_sketch_models(s, sizes);
      ++vectors;
      nonzero += a > 0;
      if (a != b) ++mismatches;
      if (s.name == "binary_product") {
        std::size_t ab = static_cast<std::size_t>(sizes[0] * sizes[1]);
        std::size_t closed = static_cast<std::size_t>(sizes[2]) == ab ? factorial(ab) : 0;
        if (a != closed) ++mismatches;
      }
    }
    if (mismatches || nonzero == 0) o.pass = false;
    out << " " << s.name << ": " << vectors << " size vectors, " << nonzero << " nonempty, " << mismatches
        << " mismatches;";
  }
  o.detail = out.str();
  return o;
}

Outcome adjunction() {
  Outcome o;
  RelativeTheory jsl = phltest::relative("join.phl");
  Theory target = pht_of(jsl);
  auto inc = inclusion_morphism(jsl);
  auto algebras = all_models(target, 4);
  std::size_t presentations = 0, comparisons = 0, mismatches = 0;
  for (const char* text : {"[]", "[a:*]", "[a:*, b:*]", "[a:*, b:*] a = b", "[a:*, b:*, c:*]",
                           "[a:*, b:*, c:*] a = c"}) {
    auto [ctx, phi] = parse_formula_in_context(jsl.base.signature, text);
    auto p = representing_model(jsl.base, ctx, phi, 4);
    auto f = F_rho(inc, p, ChaseOptions{8, 2000, 20'000'000, std::nullopt});
    if (!p.status.saturated || !f.status.saturated) {
      o.pass = false;
      continue;
    }
    ++presentations;
    for (const auto& m : algebras) {
      ++comparisons;
      if (count_homs(f.model, m) != count_homs(p.model, U_rho(inc, m))) ++mismatches;
    }
  }
  o.pass = o.pass && mismatches == 0 && comparisons > 0;
  o.detail = std::to_string(presentations) + " presentations x " + std::to_string(algebras.size()) +
             " algebras, " + std::to_string(mismatches) + " mismatches";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"golden derivations", golden_derivations},
      {"soundness sweep", soundness_sweep},
      {"completeness bridge", completeness_bridge},
      {"representability", representability},
      {"factorization", factorization},
      {"orthogonality <=> validity", orthogonality_validity},
      {"closure laws", closure_laws},
      {"worked definability", worked_definability},
      {"sketch correspondence", sketch_correspondence},
      {"adjunction", adjunction},
  };
  int failures = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index << "] " << c.name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
