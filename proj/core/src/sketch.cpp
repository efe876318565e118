#include <algorithm>
#include <functional>
#include <set>

#include "phl/lexer.hpp"
#include "phl/translation.hpp"

namespace phl {

const SketchArrow* Sketch::find_arrow(std::string_view n) const {
  for (const auto& a : arrows)
    if (a.name == n) return &a;
  return nullptr;
}

namespace {

std::string identity_name(const std::string& object) { return "id_" + object; }

// Arrows including identities, as (name, source, target).
std::vector<SketchArrow> all_arrows(const Sketch& s) {
  std::vector<SketchArrow> out = s.arrows;
  for (const auto& o : s.objects) out.push_back({identity_name(o), o, o});
  return out;
}

const SketchArrow& arrow_of(const std::vector<SketchArrow>& arrows, const std::string& name) {
  for (const auto& a : arrows)
    if (a.name == name) return a;
  throw Error("unknown arrow '" + name + "'");
}

bool is_identity(const Sketch& s, const std::string& name) {
  for (const auto& o : s.objects)
    if (identity_name(o) == name) return true;
  return false;
}

// g ∘ f for a composable pair, identities included.
std::string composite(const Sketch& s, const std::string& g, const std::string& f) {
  if (is_identity(s, f)) return g;
  if (is_identity(s, g)) return f;
  auto it = s.compose.find({g, f});
  if (it == s.compose.end()) throw Error("composite " + g + " . " + f + " is not in the composition table");
  return it->second;
}

}  // namespace

void validate_sketch(const Sketch& s) {
  std::set<std::string> objects(s.objects.begin(), s.objects.end());
  if (objects.size() != s.objects.size()) throw Error("duplicate object");
  std::set<std::string> symbols;
  for (const auto& o : s.objects) symbols.insert(identity_name(o));
  for (const auto& a : s.arrows) {
    if (!objects.count(a.source) || !objects.count(a.target))
      throw Error("arrow '" + a.name + "' has an undeclared endpoint");
    if (!symbols.insert(a.name).second) throw Error("duplicate arrow name '" + a.name + "'");
  }
  for (const auto& c : s.cones) {
    if (!symbols.insert(c.name).second) throw Error("cone name '" + c.name + "' clashes with an arrow");
    if (!objects.count(c.apex)) throw Error("cone '" + c.name + "' has an undeclared apex");
  }
  auto arrows = all_arrows(s);
  for (const auto& [gf, h] : s.compose) {
    const SketchArrow& g = arrow_of(arrows, gf.first);
    const SketchArrow& f = arrow_of(arrows, gf.second);
    const SketchArrow& hh = arrow_of(arrows, h);
    if (f.target != g.source) throw Error("composite " + g.name + " . " + f.name + " is not composable");
    if (hh.source != f.source || hh.target != g.target)
      throw Error("composite " + g.name + " . " + f.name + " = " + h + " has the wrong type");
  }
  for (const auto& f : s.arrows)
    for (const auto& g : s.arrows)
      if (f.target == g.source) composite(s, g.name, f.name);
  for (const auto& f : arrows)
    for (const auto& g : arrows)
      for (const auto& h : arrows)
        if (f.target == g.source && g.target == h.source &&
            composite(s, composite(s, h.name, g.name), f.name) != composite(s, h.name, composite(s, g.name, f.name)))
          throw Error("composition is not associative at " + h.name + " . " + g.name + " . " + f.name);
  for (const auto& c : s.cones) {
    for (const auto& l : c.legs)
      if (arrow_of(arrows, l).source != c.apex) throw Error("leg '" + l + "' of cone '" + c.name + "' is not from the apex");
    if (c.pullback) {
      if (c.legs.size() != 2 || c.base_arrows.size() != 2)
        throw Error("pullback cone '" + c.name + "' needs two legs and two base arrows");
      const SketchArrow& r0 = arrow_of(arrows, c.base_arrows[0]);
      const SketchArrow& r1 = arrow_of(arrows, c.base_arrows[1]);
      if (r0.source != arrow_of(arrows, c.legs[0]).target || r1.source != arrow_of(arrows, c.legs[1]).target ||
          r0.target != r1.target)
        throw Error("pullback cone '" + c.name + "' is not over a cospan");
      if (composite(s, r0.name, c.legs[0]) != composite(s, r1.name, c.legs[1]))
        throw Error("pullback cone '" + c.name + "' does not commute");
    } else if (!c.base_arrows.empty()) {
      throw Error("product cone '" + c.name + "' has base arrows");
    }
  }
}

Theory sketch_to_pht(const Sketch& s, bool domain_sequents) {
  validate_sketch(s);
  Theory t;
  t.name = s.name;
  Signature& sig = t.signature;
  for (const auto& o : s.objects) sig.add_sort(o);
  auto arrows = all_arrows(s);
  for (const auto& a : arrows) sig.add_function({a.name, {a.source}, a.target, {}});
  for (const auto& c : s.cones) {
    std::vector<std::string> feet;
    for (const auto& l : c.legs) feet.push_back(arrow_of(arrows, l).target);
    sig.add_function({c.name, feet, c.apex, {}});
  }

  auto x = [](std::string name = "x") { return Term::var(std::move(name)); };
  auto app1 = [](const std::string& f, Term a) { return Term::app(f, {std::move(a)}); };
  auto add = [&](std::string name, Context ctx, Formula pre, Formula post) {
    t.axioms.push_back({std::move(name), {std::move(ctx), std::move(pre), std::move(post)}, {}});
  };

  for (const auto& a : arrows) add(a.name + "_total", {{"x", a.source}}, Formula::truth(), Formula::defined(app1(a.name, x())));
  for (const auto& f : arrows)
    for (const auto& g : arrows)
      if (f.target == g.source)
        add("comp_" + g.name + "_" + f.name, {{"x", f.source}}, Formula::truth(),
            Formula::eq(app1(g.name, app1(f.name, x())), app1(composite(s, g.name, f.name), x())));
  for (const auto& o : s.objects)
    add(o + "_id", {{"x", o}}, Formula::truth(), Formula::eq(x(), app1(identity_name(o), x())));

  for (const auto& c : s.cones) {
    Context feet;
    std::vector<Term> xs, legs_of_x;
    for (std::size_t i = 0; i < c.legs.size(); ++i) {
      std::string v = "x" + std::to_string(i);
      feet.add(v, arrow_of(arrows, c.legs[i]).target);
      xs.push_back(x(v));
      legs_of_x.push_back(app1(c.legs[i], x()));
    }
    Term mediated = Term::app(c.name, xs);
    std::vector<Formula> projections;
    for (std::size_t i = 0; i < c.legs.size(); ++i)
      projections.push_back(Formula::eq(app1(c.legs[i], mediated), xs[i]));
    add(c.name + "_eta", {{"x", c.apex}}, Formula::truth(), Formula::eq(Term::app(c.name, legs_of_x), x()));
    if (c.pullback) {
      Formula matching = Formula::eq(app1(c.base_arrows[0], xs[0]), app1(c.base_arrows[1], xs[1]));
      add(c.name + "_beta", feet, matching, Formula::conj(projections));
      if (domain_sequents) add(c.name + "_dom", feet, Formula::defined(mediated), matching);
    } else {
      add(c.name + "_beta", feet, Formula::truth(), Formula::conj(projections));
      if (domain_sequents) add(c.name + "_def", feet, Formula::truth(), Formula::defined(mediated));
    }
  }
  require_well_formed(well_formed(t));
  return t;
}

Sketch parse_sketch(std::string_view text) {
  TokenStream ts(text);
  Sketch s;
  ts.expect_word("sketch");
  s.name = ts.expect_name("sketch name");
  while (!ts.at_end()) {
    if (ts.accept_word("objects")) {
      ts.accept(":");
      while (!ts.peek().is(";")) s.objects.push_back(ts.expect_name("object"));
    } else if (ts.accept_word("arrow")) {
      SketchArrow a;
      a.name = ts.expect_name("arrow name");
      ts.expect(":");
      a.source = ts.expect_name("object");
      ts.expect("->");
      a.target = ts.expect_name("object");
      s.arrows.push_back(std::move(a));
    } else if (ts.accept_word("compose")) {
      std::string g = ts.expect_name("arrow");
      std::string f = ts.expect_name("arrow");
      ts.expect("=");
      s.compose[{g, f}] = ts.expect_name("arrow");
    } else if (ts.peek().is_word("product-cone") || ts.peek().is_word("pullback-cone")) {
      SketchCone c;
      c.pullback = ts.next().text == "pullback-cone";
      c.name = ts.expect_name("cone name");
      ts.expect_word("apex");
      c.apex = ts.expect_name("object");
      ts.expect_word("legs");
      while (ts.peek().is_name() && !ts.peek().is_word("base")) c.legs.push_back(ts.next().text);
      if (c.pullback) {
        ts.expect_word("base");
        while (ts.peek().is_name()) c.base_arrows.push_back(ts.next().text);
      }
      s.cones.push_back(std::move(c));
    } else {
      ts.fail("expected 'objects', 'arrow', 'compose', 'product-cone' or 'pullback-cone'");
    }
    ts.expect(";");
  }
  validate_sketch(s);
  return s;
}

std::size_t count_sketch_models(const Sketch& s, const std::vector<int>& sizes) {
  validate_sketch(s);
  if (sizes.size() != s.objects.size()) throw Error("size vector does not match the number of objects");
  auto obj = [&](const std::string& o) {
    return static_cast<std::size_t>(std::find(s.objects.begin(), s.objects.end(), o) - s.objects.begin());
  };
  const auto arrows = all_arrows(s);
  const std::size_t n = s.arrows.size();
  std::vector<std::size_t> src(n), tgt(n);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    src[i] = obj(s.arrows[i].source);
    tgt[i] = obj(s.arrows[i].target);
    index[s.arrows[i].name] = i;
  }
  std::vector<std::vector<int>> table(n);
  // An arrow as a function on elements; identities act trivially.
  auto apply = [&](const std::string& a, int x) {
    auto it = index.find(a);
    return it == index.end() ? x : table[it->second][static_cast<std::size_t>(x)];
  };
  // Number of arrow tables that must be filled before a check can run.
  auto ready_after = [&](const std::vector<std::string>& names) {
    std::size_t k = 0;
    for (const auto& a : names)
      if (auto it = index.find(a); it != index.end()) k = std::max(k, it->second + 1);
    return k;
  };

  // Each check runs once every arrow it mentions has a table.
  std::vector<std::vector<std::function<bool()>>> checks(n + 1);
  for (const auto& [gf, h] : s.compose) {
    std::string g = gf.first, f = gf.second, hh = h;
    std::size_t from = obj(arrow_of(arrows, f).source);
    checks[ready_after({g, f, hh})].push_back([&, g, f, hh, from] {
      for (int x = 0; x < sizes[from]; ++x)
        if (apply(g, apply(f, x)) != apply(hh, x)) return false;
      return true;
    });
  }
  for (const auto& c : s.cones) {
    std::vector<std::string> mentioned = c.legs;
    mentioned.insert(mentioned.end(), c.base_arrows.begin(), c.base_arrows.end());
    std::size_t apex = obj(c.apex);
    std::vector<std::size_t> feet;
    for (const auto& l : c.legs) feet.push_back(obj(arrow_of(arrows, l).target));
    checks[ready_after(mentioned)].push_back([&, c, apex, feet] {
      // The legs must induce a bijection from the apex onto the limit set.
      std::set<std::vector<int>> images;
      for (int x = 0; x < sizes[apex]; ++x) {
        std::vector<int> img;
        for (const auto& l : c.legs) img.push_back(apply(l, x));
        if (!images.insert(img).second) return false;
      }
      std::size_t limit = 0;
      if (c.pullback) {
        for (int a = 0; a < sizes[feet[0]]; ++a)
          for (int b = 0; b < sizes[feet[1]]; ++b)
            if (apply(c.base_arrows[0], a) == apply(c.base_arrows[1], b)) ++limit;
      } else {
        limit = 1;
        for (std::size_t f : feet) limit *= static_cast<std::size_t>(sizes[f]);
      }
      return images.size() == limit;
    });
  }

  for (const auto& check : checks[0])
    if (!check()) return 0;
  std::size_t count = 0;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == n) {
      ++count;
      return;
    }
    int dom = sizes[src[k]], cod = sizes[tgt[k]];
    table[k].assign(static_cast<std::size_t>(dom), 0);
    if (dom > 0 && cod == 0) return;
    while (true) {
      bool ok = true;
      for (const auto& check : checks[k + 1])
        if (!check()) {
          ok = false;
          break;
        }
      if (ok) go(k + 1);
      std::size_t i = 0;
      while (i < table[k].size() && ++table[k][i] == cod) table[k][i++] = 0;
      if (i == table[k].size()) break;
    }
  };
  go(0);
  return count;
}

}  // namespace phl
