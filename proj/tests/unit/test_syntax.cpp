#include "doctest.h"
#include "support.hpp"

using namespace phl;
using phltest::Rng;

namespace {

Term v(const char* n) { return Term::var(n); }

// A random signature over sorts s0..s(k-1) with a handful of symbols.
Theory random_theory(Rng& r) {
  Theory t;
  t.name = "R" + std::to_string(r.below(1000));
  int nsorts = 1 + r.below(2);
  for (int i = 0; i < nsorts; ++i) t.signature.add_sort("s" + std::to_string(i));
  const auto sorts = t.signature.sorts();
  int nf = r.below(4), nr = r.below(3);
  for (int i = 0; i < nf; ++i) {
    FunctionSymbol f;
    f.name = "f" + std::to_string(i);
    int ar = r.below(3);
    for (int k = 0; k < ar; ++k) f.arg_sorts.push_back(r.pick(sorts));
    f.result_sort = r.pick(sorts);
    t.signature.add_function(f);
  }
  for (int i = 0; i < nr; ++i) {
    RelationSymbol R;
    R.name = "R" + std::to_string(i);
    int ar = r.below(3);
    for (int k = 0; k < ar; ++k) R.arg_sorts.push_back(r.pick(sorts));
    t.signature.add_relation(R);
  }
  int na = r.below(4);
  for (int i = 0; i < na; ++i) {
    Axiom a;
    a.name = "a" + std::to_string(i);
    a.sequent = phltest::random_sequent(r, t.signature, 3, 3, 2);
    t.axioms.push_back(a);
  }
  return t;
}

}  // namespace

TEST_SUITE("syntax") {

TEST_CASE("well-formedness diagnostics") {
  Theory pos = phltest::theory("pos.phl");
  const Axiom* antisym = pos.find_axiom("antisym");
  REQUIRE(antisym != nullptr);
  CHECK(well_formed(pos.signature, antisym->sequent).empty());

  Context x{{"x", "*"}};
  CHECK(well_formed(pos.signature, x, v("x")).empty());

  Context xy{{"x", "*"}, {"y", "*"}};
  auto bad = Formula::rel("leq", {v("x"), Term::app("c", {})});
  auto diags = well_formed(pos.signature, xy, bad);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].message.find("c") != std::string::npos);

  CHECK_THROWS_AS(parse_formula(pos.signature, xy, "leq(x,c)"), WellFormednessError);
}

TEST_CASE("substitution examples") {
  Theory pos = phltest::theory("pos.phl");
  Context xy{{"x", "*"}, {"y", "*"}};
  Context z{{"z", "*"}};
  auto f = Formula::rel("leq", {v("x"), v("y")});
  auto g = substitute(pos.signature, f, xy, {{"x", v("z")}, {"y", v("z")}}, z);
  CHECK(g == Formula::rel("leq", {v("z"), v("z")}));

  Theory mon = phltest::theory("mon.phl");
  auto comm = parse_formula(mon.signature, xy, "mul(x,y) = mul(y,x)");
  auto e = Term::app("e", {});
  auto h = substitute(mon.signature, comm, xy, {{"x", e}, {"y", v("y")}}, Context{{"y", "*"}});
  CHECK(h == Formula::eq(Term::app("mul", {e, v("y")}), Term::app("mul", {v("y"), e})));

  Theory terms = phltest::theory("terms.phl");
  Context xs{{"x", "s"}};
  auto fx = Term::app("f", {v("x")});
  CHECK(substitute(terms.signature, fx, xs, {{"x", fx}}, xs) == Term::app("f", {fx}));
}

TEST_CASE("substitution errors") {
  Theory cat = phltest::theory("cat.phl");
  Context x{{"x", "ob"}};
  Context f{{"f", "mor"}};
  auto phi = Formula::defined(Term::app("id", {v("x")}));
  CHECK_THROWS_AS(substitute(cat.signature, phi, x, {{"x", v("f")}}, f), SortError);
  CHECK_THROWS_AS(substitute(cat.signature, phi, x, {}, f), SortError);
  CHECK_THROWS_AS(substitute(cat.signature, phi, x, {{"x", v("x")}, {"y", v("x")}}, x), SortError);
}

TEST_CASE("parsing the bundled theories") {
  Theory pos = phltest::theory("pos.phl");
  CHECK(pos.signature.sorts().size() == 1);
  CHECK(pos.signature.relations().size() == 1);
  CHECK(pos.signature.functions().empty());
  CHECK(pos.axioms.size() == 3);

  Theory empty = parse_theory("");
  CHECK(empty.signature.sorts().empty());
  CHECK(empty.axioms.empty());

  Theory cat = phltest::theory("cat.phl");
  CHECK(cat.signature.sorts() == std::vector<std::string>{"ob", "mor"});
  CHECK(cat.signature.functions().size() == 4);
  CHECK(parse_theory(print_theory(cat)) == cat);
  CHECK(print_theory(parse_theory(print_theory(cat))) == print_theory(cat));
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_theory("theory T\nsorts: s;\nfun f : s -> ;\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span().line == 3);
    CHECK(e.span().column > 0);
  }
  CHECK_THROWS_AS(parse_theory("theory T\nsorts: s;\nrel R : t;\n"), WellFormednessError);
}

TEST_CASE("conjunction units") {
  CHECK(Formula::conj({}) == Formula::truth());
  auto a = Formula::rel("P", {});
  CHECK(Formula::conj({a}) == a);
  CHECK(same_modulo_nesting(Formula::conj({Formula::conj({a, a}), Formula::truth(), a}), Formula::conj({a, a, a})));
  CHECK_FALSE(same_modulo_nesting(Formula::conj({a, Formula::rel("Q", {})}), Formula::conj({Formula::rel("Q", {}), a})));
  CHECK(Formula::defined(v("x")) == Formula::eq(v("x"), v("x")));
}

TEST_CASE("property: print/parse round trip on random theories") {
  Rng r(1234);
  for (int i = 0; i < 300; ++i) {
    Theory t = random_theory(r);
    REQUIRE(well_formed(t).empty());
    std::string text = print_theory(t);
    Theory back = parse_theory(text);
    INFO(text);
    CHECK(back == t);
    CHECK(print_theory(back) == text);
  }
}

TEST_CASE("property: substitution composes and preserves well-formedness") {
  Rng r(99);
  Theory terms = phltest::theory("terms.phl");
  Theory cat = phltest::theory("cat.phl");
  for (int i = 0; i < 300; ++i) {
    const Theory& t = (i % 2) ? terms : cat;
    const Signature& sig = t.signature;
    Context src = phltest::random_context(r, sig, 3, 1);
    Context mid = phltest::random_context(r, sig, 3, 1);
    Context dst = phltest::random_context(r, sig, 3, 1);
    Formula phi = phltest::random_formula(r, sig, src, 3, 2);

    auto assign = [&](const Context& from, const Context& to) -> std::optional<Substitution> {
      Substitution s;
      for (const auto& var : from.vars()) {
        auto tm = phltest::random_term(r, sig, to, var.sort, 1);
        if (!tm) return std::nullopt;
        s[var.name] = *tm;
      }
      return s;
    };
    auto s1 = assign(src, mid);
    auto s2 = assign(mid, dst);
    if (!s1 || !s2) continue;

    Formula once = substitute(sig, phi, src, *s1, mid);
    CHECK(well_formed(sig, mid, once).empty());
    Formula twice = substitute(sig, once, mid, *s2, dst);
    CHECK(well_formed(sig, dst, twice).empty());
    CHECK(phl::apply(compose(*s2, *s1), phi) == twice);
    Substitution both;
    for (const auto& var : src.vars()) both[var.name] = compose(*s2, *s1).at(var.name);
    CHECK(substitute(sig, phi, src, both, dst) == twice);
  }
}

TEST_CASE("alpha normalization and freshening") {
  Theory pos = phltest::theory("pos.phl");
  Sequent a = parse_sequent(pos.signature, "[x:*, y:*] leq(x,y) |- leq(x,x)");
  Sequent b = parse_sequent(pos.signature, "[p:*, q:*] leq(p,q) |- leq(p,p)");
  CHECK(alpha_normalize(a) == alpha_normalize(b));

  Context renamed;
  auto s = freshen(a.context, {"x"}, renamed);
  CHECK(renamed.size() == 2);
  CHECK_FALSE(renamed.contains("x"));
  CHECK(renamed.contains("y"));
  CHECK(s.count("x") == 1);
}

}
