#include "doctest.h"
#include "support.hpp"

#include "phl/derivation.hpp"
#include "phl/model_finder.hpp"
#include "phl/prover.hpp"

using namespace phl;
using phltest::Rng;

namespace {

Term v(const char* n) { return Term::var(n); }

const std::vector<std::string> kGolden = {"symmetry_vars",  "symmetry_terms", "transitivity_vars",
                                          "transitivity_terms", "cut_rule",   "subst_term",
                                          "subst_formula",  "weakening",      "permutation"};
const std::vector<std::string> kPerturbed = {"bad_transitivity_swapped", "bad_symmetry_relabel",
                                             "bad_cut_rule_swapped", "bad_weakening_relabel"};

struct Loaded {
  Theory theory;
  DerivationFile file;
};

Loaded load(const Theory& base, const std::string& name) {
  auto f = parse_derivation(base, phltest::data("derivations/" + name + ".deriv"));
  return {f.theory_with_hypotheses(base), f};
}

void collect_nodes(Derivation& d, std::vector<Derivation*>& out) {
  out.push_back(&d);
  for (auto& c : d.children) collect_nodes(c, out);
}

Theory with_axioms(Theory t, const std::vector<std::string>& sequents) {
  int k = 0;
  for (const auto& s : sequents) t.axioms.push_back({"h" + std::to_string(k++), parse_sequent(t.signature, s), {}});
  return t;
}

}  // namespace

TEST_SUITE("prover") {

TEST_CASE("single rule instances") {
  Theory pos = phltest::theory("pos.phl");
  RuleInstance id;
  id.rule = Rule::Id;
  id.context = Context{{"x", "*"}, {"y", "*"}};
  id.formula = Formula::rel("leq", {v("x"), v("y")});
  CHECK(check_rule(pos, id, {}) == parse_sequent(pos.signature, "[x:*, y:*] leq(x,y) |- leq(x,y)"));

  Theory terms = phltest::theory("terms.phl");
  RuleInstance sfun;
  sfun.rule = Rule::SFun;
  sfun.context = Context{{"x", "s"}};
  sfun.formula = Formula::defined(Term::app("f", {Term::app("f", {v("x")})}));
  sfun.index = 0;
  Sequent got = check_rule(terms, sfun, {});
  CHECK(same_sequent(got, parse_sequent(terms.signature, "[x:s] def(f(f(x))) |- def(f(x))")));

  RuleInstance cut;
  cut.rule = Rule::Cut;
  auto p1 = parse_sequent(terms.signature, "[x:s] P0(x) |- Q0(x)");
  auto p2 = parse_sequent(terms.signature, "[x:s] Q1(x) |- Th(x)");
  CHECK_THROWS_AS(check_rule(terms, cut, {p1, p2}), RuleError);
  auto p3 = parse_sequent(terms.signature, "[x:s] Q0(x) |- Th(x)");
  CHECK(same_sequent(check_rule(terms, cut, {p1, p3}), parse_sequent(terms.signature, "[x:s] P0(x) |- Th(x)")));

  RuleInstance ax;
  ax.rule = Rule::Axiom;
  ax.axiom = "no_such_axiom";
  CHECK_THROWS_AS(check_rule(terms, ax, {}), RuleError);
}

TEST_CASE("golden derivations check") {
  Theory terms = phltest::theory("terms.phl");
  for (const auto& name : kGolden) {
    auto l = load(terms, name);
    auto res = check_derivation(l.theory, l.file.derivation);
    INFO(name << ": " << res.reason);
    CHECK(res.ok);
  }
  auto sym = load(terms, "symmetry_vars");
  CHECK(same_sequent(sym.file.derivation.root, parse_sequent(terms.signature, "[y0:s, y1:s] y0 = y1 |- y1 = y0")));
}

TEST_CASE("perturbed derivations fail") {
  Theory terms = phltest::theory("terms.phl");
  for (const auto& name : kPerturbed) {
    auto l = load(terms, name);
    auto res = check_derivation(l.theory, l.file.derivation);
    INFO(name);
    CHECK_FALSE(res.ok);
    CHECK_FALSE(res.reason.empty());
  }
}

TEST_CASE("single Id node") {
  Theory pos = phltest::theory("pos.phl");
  Derivation d;
  d.root = parse_sequent(pos.signature, "[x:*] leq(x,x) |- leq(x,x)");
  d.rule.rule = Rule::Id;
  CHECK(check_derivation(pos, d).ok);
  d.root = parse_sequent(pos.signature, "[x:*] true |- leq(x,x)");
  CHECK_FALSE(check_derivation(pos, d).ok);
}

TEST_CASE("property: swapping the premises of a Cut breaks a golden derivation") {
  Theory terms = phltest::theory("terms.phl");
  int swaps = 0;
  for (const auto& name : kGolden) {
    auto l = load(terms, name);
    std::vector<Derivation*> nodes;
    collect_nodes(l.file.derivation, nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Derivation copy = l.file.derivation;
      std::vector<Derivation*> cn;
      collect_nodes(copy, cn);
      Derivation* n = cn[i];
      if (n->rule.rule != Rule::Cut || same_sequent(n->children[0].root, n->children[1].root)) continue;
      std::swap(n->children[0], n->children[1]);
      INFO(name << " node " << i);
      CHECK_FALSE(check_derivation(l.theory, copy).ok);
      ++swaps;
    }
    // Relabelling a leaf as a two-premise rule always breaks it.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!nodes[i]->children.empty()) continue;
      Derivation copy = l.file.derivation;
      std::vector<Derivation*> cn;
      collect_nodes(copy, cn);
      cn[i]->rule.rule = Rule::Cut;
      CHECK_FALSE(check_derivation(l.theory, copy).ok);
    }
  }
  CHECK(swaps > 10);
}

TEST_CASE("derivation text round trip") {
  Theory terms = phltest::theory("terms.phl");
  for (const auto& name : kGolden) {
    auto l = load(terms, name);
    std::string text = print_derivation(l.file.derivation, l.file.name, l.file.hypotheses);
    auto back = parse_derivation(terms, text);
    CHECK(print_derivation(back.derivation, back.name, back.hypotheses) == text);
    CHECK(back.derivation.size() == l.file.derivation.size());
    CHECK(check_derivation(back.theory_with_hypotheses(terms), back.derivation).ok);
  }
}

TEST_CASE("prove: examples") {
  Theory pos = phltest::theory("pos.phl");
  auto chain4 = parse_sequent(pos.signature, "[x:*, y:*, z:*, w:*] leq(x,y) /\\ leq(y,z) /\\ leq(z,w) |- leq(x,w)");
  ProveOptions two;
  two.depth = 2;
  auto r = prove(pos, chain4, two);
  CHECK(r.verdict == Verdict::Proved);
  CHECK(r.depth == 2);
  ProveOptions one;
  one.depth = 1;
  one.model_size = 3;
  CHECK(prove(pos, chain4, one).verdict == Verdict::Unknown);

  ProveOptions zero;
  zero.depth = 0;
  auto same = prove(pos, parse_sequent(pos.signature, "[x:*, y:*] leq(x,y) |- leq(x,y)"), zero);
  CHECK(same.verdict == Verdict::Proved);
  CHECK(same.depth == 0);

  Theory mon = phltest::theory("mon.phl");
  ProveOptions k2;
  k2.model_size = 2;
  auto idem = prove(mon, parse_sequent(mon.signature, "[x:*] true |- mul(x,x) = x"), k2);
  REQUIRE(idem.verdict == Verdict::Refuted);
  REQUIRE(idem.countermodel.has_value());
  CHECK(isomorphic(*idem.countermodel, phltest::model(mon, "z2.model")));
  CHECK(is_model(*idem.countermodel, mon));

  ProveOptions bad;
  bad.depth = -1;
  CHECK_THROWS_AS(prove(pos, chain4, bad), BudgetError);
  bad.depth = 2;
  bad.model_size = 0;
  CHECK_THROWS_AS(prove(pos, chain4, bad), BudgetError);
}

TEST_CASE("prove: derived rules within depth 4") {
  Theory terms = phltest::theory("terms.phl");
  Theory hyp = with_axioms(terms, {"[x:s] P0(x) |- Q0(x)", "[x:s] P1(x) |- Q1(x)", "[x:s] C(x) /\\ Q0(x) /\\ Q1(x) |- Th(x)"});
  const std::vector<std::pair<const Theory*, std::string>> goals = {
      {&hyp, "[x:s, y:s] P0(x) |- Q0(x)"},
      {&hyp, "[x:s] C(x) /\\ P0(x) /\\ P1(x) |- Th(x)"},
      {&terms, "[x:s] P0(x) /\\ Q0(x) |- Q0(x) /\\ P0(x)"},
      {&terms, "[x:s, y:s] x = y |- y = x"},
      {&terms, "[x:s, y:s, z:s] x = y /\\ y = z |- x = z"},
      {&terms, "[x:s, y:s] x = y /\\ def(f(x)) |- f(x) = f(y)"},
      {&terms, "[x:s, y:s] x = y /\\ P0(f(x)) |- P0(f(y))"},
      {&terms, "[x:s, y:s] R(f(x), y) |- def(f(x)) /\\ def(x)"},
  };
  ProveOptions opts;
  opts.depth = 4;
  for (const auto& [t, text] : goals) {
    INFO(text);
    CHECK(prove(*t, parse_sequent(t->signature, text), opts).verdict == Verdict::Proved);
  }
}

TEST_CASE("property: prove is sound and its countermodels are genuine") {
  Rng r(2024);
  for (const char* file : {"pos.phl", "mon.phl"}) {
    Theory t = phltest::theory(file);
    auto models = all_models(t, 2);
    ProveOptions opts;
    opts.depth = 3;
    opts.model_size = 2;
    for (int i = 0; i < 40; ++i) {
      Sequent s = phltest::random_sequent(r, t.signature, 3, 2, 1);
      auto res = prove(t, s, opts);
      INFO(print(s));
      if (res.verdict == Verdict::Proved) {
        for (const auto& m : models) CHECK(phltest::naive_holds(m, s));
      } else if (res.verdict == Verdict::Refuted) {
        REQUIRE(res.countermodel.has_value());
        CHECK(is_model(*res.countermodel, t));
        CHECK(phltest::naive_sat(*res.countermodel, s.context, s.premise, res.witness));
        CHECK_FALSE(phltest::naive_sat(*res.countermodel, s.context, s.conclusion, res.witness));
      }
    }
  }
}

}
