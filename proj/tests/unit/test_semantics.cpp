#include "doctest.h"
#include "support.hpp"

#include "phl/model_finder.hpp"

using namespace phl;
using phltest::Rng;

namespace {

Term v(const char* n) { return Term::var(n); }

Structure chain(const Theory& pos, int n) {
  Structure m(share_signature(pos), "chain" + std::to_string(n));
  m.add_elements(0, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set_rel(0, {i, j});
  return m;
}

// Image of each tuple under h lies in the target's interpretation.
bool monotone(const Structure& m, const Structure& n, const Homomorphism& h, const Context& ctx, const Formula& f) {
  auto target = interp_formula(n, ctx, f);
  std::set<Tuple> in(target.begin(), target.end());
  for (auto t : interp_formula(m, ctx, f)) {
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = h(m.signature().sort_id(ctx[i].sort), t[i]);
    if (!in.count(t)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("semantics") {

TEST_CASE("term interpretation") {
  Theory mon = phltest::theory("mon.phl");
  Structure z2 = phltest::model(mon, "z2.model");
  Context xy{{"x", "*"}, {"y", "*"}};
  auto t = parse_term(mon.signature, xy, "mul(x,mul(y,e))");
  CHECK(interp_term(z2, xy, t, {1, 1}) == 0);
  CHECK(interp_term(z2, xy, v("x"), {1, 0}) == 1);

  Theory inv = phltest::theory("mon_inv.phl");
  Structure m = parse_model(inv, "model M of T_mon_inv\ncarrier *: e a;\nfun e: () -> e;\n"
                                 "fun mul: (e,e) -> e; fun mul: (e,a) -> a; fun mul: (a,e) -> a; fun mul: (a,a) -> a;\n"
                                 "fun inv: (e) -> e;\n");
  Context x{{"x", "*"}};
  CHECK_FALSE(interp_term(m, x, Term::app("inv", {v("x")}), {1}).has_value());
  CHECK(interp_formula(m, x, Formula::defined(Term::app("inv", {v("x")}))) == std::vector<Tuple>{{0}});
  CHECK(is_model(m, inv));
}

TEST_CASE("formula interpretation and validity") {
  Theory pos = phltest::theory("pos.phl");
  Structure c2 = phltest::model(pos, "chain2.model");
  Context xy{{"x", "*"}, {"y", "*"}};
  auto leq = Formula::rel("leq", {v("x"), v("y")});
  CHECK(interp_formula(c2, xy, leq) == std::vector<Tuple>{{0, 0}, {0, 1}, {1, 1}});
  CHECK(interp_formula(c2, Context{{"x", "*"}}, Formula::truth()) == std::vector<Tuple>{{0}, {1}});

  const Sequent& antisym = pos.find_axiom("antisym")->sequent;
  CHECK(holds(c2, antisym).ok);
  Structure cyc = phltest::model(pos, "cycle2.model");
  auto h = holds(cyc, antisym);
  CHECK_FALSE(h.ok);
  CHECK(h.witness == Tuple{0, 1});
  CHECK(holds(cyc, Sequent{xy, leq, leq}).ok);

  CHECK(is_model(c2, pos));
  CHECK(is_model(phltest::model(pos, "empty_pos.model"), pos));
  auto mc = check_model(cyc, pos);
  CHECK_FALSE(mc.ok);
  REQUIRE(mc.violations.size() == 1);
  CHECK(mc.violations[0].axiom == "antisym");
}

TEST_CASE("homomorphisms between small posets") {
  Theory pos = phltest::theory("pos.phl");
  Structure c2 = phltest::model(pos, "chain2.model");
  Structure pt = chain(pos, 1);
  CHECK(check_hom(c2, c2, identity_hom(c2)));
  CHECK(check_hom(c2, pt, Homomorphism{{{0, 0}}}));
  CHECK(check_hom(c2, c2, Homomorphism{{{1, 1}}}));
  CHECK_FALSE(check_hom(c2, c2, Homomorphism{{{1, 0}}}));
  CHECK(count_homs(c2, c2) == 3);
  CHECK(count_homs(chain(pos, 3), chain(pos, 3)) == 10);
}

TEST_CASE("products") {
  Theory pos = phltest::theory("pos.phl");
  Structure c2 = phltest::model(pos, "chain2.model");
  Structure sq = product({c2, c2});
  CHECK(sq.size(0) == 4);
  CHECK(sq.relation_size(0) == 9);
  CHECK(is_model(sq, pos));

  Theory mon = phltest::theory("mon.phl");
  Structure term = product(share_signature(mon), {});
  CHECK(term.size(0) == 1);
  CHECK(term.fun(0, Tuple{}) == 0);
  CHECK(is_model(term, mon));

  Structure none = product({c2, phltest::model(pos, "empty_pos.model")});
  CHECK(none.size(0) == 0);

  CHECK_THROWS_AS(product({c2, c2, c2, c2}, 8), BudgetError);
}

TEST_CASE("chain colimits") {
  Theory pos = phltest::theory("pos.phl");
  std::vector<Structure> stages{chain(pos, 1), chain(pos, 2), chain(pos, 3)};
  auto col = chain_colimit(Diagram::chain(stages, {Homomorphism{{{0}}}, Homomorphism{{{0, 1}}}}));
  CHECK(isomorphic(col.object, chain(pos, 3)));
  for (std::size_t i = 0; i < stages.size(); ++i) CHECK(check_hom(stages[i], col.object, col.coprojections[i]));

  Structure c2 = chain(pos, 2);
  auto flat = chain_colimit(Diagram::chain({c2, c2, c2}, {identity_hom(c2), identity_hom(c2)}));
  CHECK(isomorphic(flat.object, c2));

  Theory mon = phltest::theory("mon.phl");
  auto doc = parse_model_document(mon, phltest::data("models/z4_z2.hom"));
  const Structure& z4 = *doc.find_model("Z4");
  const Structure& z2 = *doc.find_model("Z2");
  auto q = chain_colimit(Diagram::chain({z4, z2}, {doc.homs.at(0).hom}));
  CHECK(isomorphic(q.object, z2));
  CHECK(is_model(q.object, mon));

  // A non-hom step breaks functoriality.
  CHECK_THROWS_AS(chain_colimit(Diagram::chain({c2, c2}, {Homomorphism{{{1, 0}}}})), Error);
}

TEST_CASE("property: interpretation agrees with the naive oracle") {
  Rng r(7);
  Theory terms = phltest::theory("terms.phl");
  Theory cat = phltest::theory("cat.phl");
  auto sterms = share_signature(terms);
  auto scat = share_signature(cat);
  for (int i = 0; i < 200; ++i) {
    bool use_cat = i % 2;
    const Signature& sig = use_cat ? cat.signature : terms.signature;
    std::vector<int> sizes;
    for (std::size_t s = 0; s < sig.sorts().size(); ++s) sizes.push_back(r.below(4));
    Structure m = phltest::random_structure(r, use_cat ? scat : sterms, sizes);
    Context ctx = phltest::random_context(r, sig, 3);
    Formula f = phltest::random_formula(r, sig, ctx, 3, 2);
    CHECK(interp_formula(m, ctx, f) == phltest::naive_interp(m, ctx, f));
    Sequent s = phltest::random_sequent(r, sig);
    CHECK(holds(m, s).ok == phltest::naive_holds(m, s));
  }
}

TEST_CASE("property: enumerate_homs agrees with brute force") {
  Rng r(11);
  Theory terms = phltest::theory("terms.phl");
  auto sig = share_signature(terms);
  for (int i = 0; i < 60; ++i) {
    Structure m = phltest::random_structure(r, sig, {r.below(3)}, 0.3, 0.15);
    Structure n = phltest::random_structure(r, sig, {1 + r.below(3)}, 0.9, 0.7);
    auto fast = enumerate_homs(m, n);
    auto slow = phltest::brute_homs(m, n);
    std::sort(fast.begin(), fast.end());
    std::sort(slow.begin(), slow.end());
    CHECK(fast == slow);
    CHECK(count_homs(m, n) == slow.size());
  }
}

TEST_CASE("property: interpretation is monotone along homomorphisms") {
  Rng r(21);
  for (const char* file : {"pos.phl", "mon.phl", "cat.phl"}) {
    Theory t = phltest::theory(file);
    auto models = all_models(t, 2);
    REQUIRE(!models.empty());
    for (int i = 0; i < 40; ++i) {
      const Structure& m = r.pick(models);
      const Structure& n = r.pick(models);
      Context ctx = phltest::random_context(r, t.signature, 3);
      Formula f = phltest::random_formula(r, t.signature, ctx, 3, 2);
      for (const auto& h : enumerate_homs(m, n)) CHECK(monotone(m, n, h, ctx, f));
    }
  }
}

TEST_CASE("property: products and chain colimits of models are models") {
  Rng r(5);
  for (const char* file : {"pos.phl", "mon.phl", "cat.phl"}) {
    Theory t = phltest::theory(file);
    auto models = all_models(t, 2);
    for (int i = 0; i < 30; ++i) {
      std::vector<Structure> fs;
      int k = r.below(3);
      for (int j = 0; j < k; ++j) fs.push_back(r.pick(models));
      Structure p = fs.empty() ? product(share_signature(t), {}) : product(fs);
      CHECK(is_model(p, t));

      const Structure& a = r.pick(models);
      const Structure& b = r.pick(models);
      auto homs = enumerate_homs(a, b);
      if (homs.empty()) continue;
      auto col = chain_colimit(Diagram::chain({a, b}, {r.pick(homs)}));
      CHECK(is_model(col.object, t));
      CHECK(check_hom(a, col.object, col.coprojections[0]));
      CHECK(check_hom(b, col.object, col.coprojections[1]));
    }
  }
}

TEST_CASE("model finder counts") {
  // Posets up to iso: 1, 1, 2, 5, 16 on 0..4 points; monoids: 0, 1, 2, 7, 35 on 0..4 elements.
  Theory pos = phltest::theory("pos.phl");
  Theory mon = phltest::theory("mon.phl");
  std::vector<std::size_t> posets, monoids;
  for (int n = 0; n <= 4; ++n) {
    posets.push_back(enumerate_models(pos, {n}, [](const Structure&) { return true; }).models);
    monoids.push_back(enumerate_models(mon, {n}, [](const Structure&) { return true; }).models);
  }
  CHECK(posets == std::vector<std::size_t>{1, 1, 2, 5, 16});
  CHECK(monoids == std::vector<std::size_t>{0, 1, 2, 7, 35});

  // Labelled posets on 3 points: 19.
  FinderOptions labelled;
  labelled.iso_reduce = false;
  CHECK(enumerate_models(pos, {3}, [](const Structure&) { return true; }, labelled).models == 19);
}

}
