#include "phl/saturation.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "phl/text.hpp"

namespace phl {

namespace {

struct Pattern {
  int var = -1;
  int fun = -1;
  std::vector<Pattern> args;
};

struct PAtom {
  bool is_eq = false;
  int rel = -1;
  std::vector<Pattern> args;
};

struct CompiledAxiom {
  std::string name;
  std::vector<std::size_t> var_sorts;
  std::vector<PAtom> premise;
  std::vector<PAtom> conclusion;
};

Pattern to_pattern(const CTerm& t) {
  Pattern p;
  p.var = t.var;
  p.fun = t.fun;
  for (const auto& a : t.args) p.args.push_back(to_pattern(a));
  return p;
}

std::vector<PAtom> to_atoms(const CFormula& f) {
  std::vector<PAtom> out;
  for (const auto& a : f.atoms) {
    PAtom p;
    p.is_eq = a.is_eq;
    p.rel = a.rel;
    for (const auto& t : a.args) p.args.push_back(to_pattern(t));
    out.push_back(std::move(p));
  }
  return out;
}

int atom_rank(const PAtom& a) {
  if (!a.is_eq) return 0;
  if (a.args[0].var < 0 || a.args[1].var < 0) return 1;
  return 2;
}

using Key = std::pair<int, std::vector<int>>;

class EGraph {
 public:
  EGraph(const Signature& sig) : sig_(sig) {
    for (const auto& f : sig.functions()) fun_result_.push_back(sig.sort_id(f.result_sort));
  }

  int find(int c) {
    while (parent_[static_cast<std::size_t>(c)] != c) {
      int p = parent_[static_cast<std::size_t>(c)];
      parent_[static_cast<std::size_t>(c)] = parent_[static_cast<std::size_t>(p)];
      c = p;
    }
    return c;
  }

  int new_class(std::size_t sort) {
    int id = static_cast<int>(parent_.size());
    parent_.push_back(id);
    class_sort_.push_back(sort);
    ++live_classes_;
    changed_ = true;
    return id;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    --live_classes_;
    changed_ = true;
    return true;
  }

  std::optional<int> lookup(int fun, std::vector<int> args) {
    for (auto& a : args) a = find(a);
    auto it = memo_.find(Key{fun, args});
    if (it == memo_.end()) return std::nullopt;
    return find(it->second);
  }

  int add_node(int fun, std::vector<int> args) {
    for (auto& a : args) a = find(a);
    Key key{fun, args};
    auto it = memo_.find(key);
    if (it != memo_.end()) return find(it->second);
    int c = new_class(fun_result_[static_cast<std::size_t>(fun)]);
    nodes_.push_back({fun, args, c});
    memo_.emplace(std::move(key), c);
    return c;
  }

  bool add_fact(int rel, std::vector<int> args) {
    for (auto& a : args) a = find(a);
    bool inserted = facts_.insert(Key{rel, std::move(args)}).second;
    if (inserted) changed_ = true;
    return inserted;
  }

  bool has_fact(int rel, std::vector<int> args) {
    for (auto& a : args) a = find(a);
    return facts_.count(Key{rel, std::move(args)}) > 0;
  }

  void rebuild() {
    while (true) {
      bool merged = false;
      std::map<Key, int> memo;
      std::vector<Node> nodes;
      for (auto& n : nodes_) {
        for (auto& a : n.args) a = find(a);
        n.cls = find(n.cls);
        auto [it, inserted] = memo.emplace(Key{n.fun, n.args}, n.cls);
        if (inserted) {
          nodes.push_back(n);
        } else if (find(it->second) != n.cls) {
          unite(it->second, n.cls);
          merged = true;
        }
      }
      nodes_ = std::move(nodes);
      memo_ = std::move(memo);
      if (!merged) break;
    }
    for (auto& [k, v] : memo_) v = find(v);
    for (auto& n : nodes_) n.cls = find(n.cls);
    std::set<Key> facts;
    for (const auto& f : facts_) {
      Key k = f;
      for (auto& a : k.second) a = find(a);
      facts.insert(std::move(k));
    }
    facts_ = std::move(facts);
  }

  // Indexes over the canonical state; valid until the next mutation.
  void index() {
    classes_by_sort_.assign(sig_.sorts().size(), {});
    for (std::size_t c = 0; c < parent_.size(); ++c)
      if (parent_[c] == static_cast<int>(c)) classes_by_sort_[class_sort_[c]].push_back(static_cast<int>(c));
    nodes_by_fun_.assign(sig_.functions().size(), {});
    nodes_by_class_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      nodes_by_fun_[static_cast<std::size_t>(nodes_[i].fun)].push_back(i);
      nodes_by_class_[nodes_[i].cls].push_back(i);
    }
    facts_by_rel_.assign(sig_.relations().size(), {});
    for (const auto& f : facts_) facts_by_rel_[static_cast<std::size_t>(f.first)].push_back(f.second);
  }

  struct Node {
    int fun;
    std::vector<int> args;
    int cls;
  };

  const Signature& sig_;
  std::vector<std::size_t> fun_result_;
  std::vector<int> parent_;
  std::vector<std::size_t> class_sort_;
  std::size_t live_classes_ = 0;
  std::vector<Node> nodes_;
  std::map<Key, int> memo_;
  std::set<Key> facts_;
  bool changed_ = false;

  std::vector<std::vector<int>> classes_by_sort_;
  std::vector<std::vector<std::size_t>> nodes_by_fun_;
  std::map<int, std::vector<std::size_t>> nodes_by_class_;
  std::vector<std::vector<std::vector<int>>> facts_by_rel_;
};

struct WorkExceeded {};

class Chase {
 public:
  Chase(const Theory& theory, const Context& ctx, const Formula& phi, const ChaseOptions& opt)
      : theory_(theory), ctx_(ctx), phi_(phi), opt_(opt), g_(theory.signature) {
    const Signature& sig = theory.signature;
    for (const auto& a : theory.axioms) {
      CompiledAxiom c;
      c.name = a.name;
      CFormula pre = compile(sig, a.sequent.context, a.sequent.premise);
      CFormula post = compile(sig, a.sequent.context, a.sequent.conclusion);
      c.var_sorts = pre.var_sorts;
      c.premise = to_atoms(pre);
      std::stable_sort(c.premise.begin(), c.premise.end(),
                       [](const PAtom& x, const PAtom& y) { return atom_rank(x) < atom_rank(y); });
      c.conclusion = to_atoms(post);
      axioms_.push_back(std::move(c));
    }
    if (opt.goal) goal_ = to_atoms(compile(sig, ctx, *opt.goal));
  }

  Presentation run() {
    if (opt_.depth < 0) throw BudgetError("depth budget must be non-negative");
    const Signature& sig = theory_.signature;
    Presentation out;
    out.context = ctx_;
    out.constraint = phi_;
    for (const auto& v : ctx_.vars()) generic_.push_back(g_.new_class(sig.sort_id(v.sort)));
    auto phi_atoms = to_atoms(compile(sig, ctx_, phi_));
    for (const auto& a : phi_atoms) assert_atom(a, generic_);
    g_.rebuild();
    out.trace.push_back({0, {}, g_.live_classes_});
    if (goal_reached()) out.goal_round = 0;

    int round = 1;
    bool finished = false;
    while (!finished) {
      if (out.goal_round) {
        out.status = {false, round - 1, "goal"};
        break;
      }
      if (g_.live_classes_ > opt_.max_classes) {
        out.status = {false, round - 1, "classes"};
        break;
      }
      std::vector<std::pair<std::size_t, std::vector<int>>> triggers;
      try {
        triggers = find_triggers();
      } catch (const WorkExceeded&) {
        out.status = {false, round - 1, "work"};
        break;
      }
      if (triggers.empty()) {
        out.status = {true, round - 1, ""};
        break;
      }
      if (round > opt_.depth) {
        out.status = {false, round - 1, "depth"};
        break;
      }
      RoundTrace tr;
      tr.round = round;
      std::map<std::size_t, std::size_t> counts;
      for (const auto& [ax, binding] : triggers) {
        for (const auto& a : axioms_[ax].conclusion) assert_atom(a, binding);
        ++counts[ax];
        if (g_.live_classes_ > opt_.max_classes) break;
      }
      for (const auto& [ax, n] : counts) tr.fired.push_back({axioms_[ax].name, n});
      g_.rebuild();
      tr.classes = g_.live_classes_;
      out.trace.push_back(std::move(tr));
      if (goal_reached()) out.goal_round = round;
      ++round;
    }
    finalize(out);
    return out;
  }

 private:
  int add_term(const Pattern& p, const std::vector<int>& binding) {
    if (p.var >= 0) return binding[static_cast<std::size_t>(p.var)];
    std::vector<int> args;
    for (const auto& a : p.args) args.push_back(add_term(a, binding));
    return g_.add_node(p.fun, std::move(args));
  }

  void assert_atom(const PAtom& a, const std::vector<int>& binding) {
    if (a.is_eq) {
      int l = add_term(a.args[0], binding);
      int r = add_term(a.args[1], binding);
      g_.unite(l, r);
      return;
    }
    std::vector<int> args;
    for (const auto& t : a.args) args.push_back(add_term(t, binding));
    g_.add_fact(a.rel, std::move(args));
  }

  std::optional<int> eval(const Pattern& p, const std::vector<int>& binding) {
    if (p.var >= 0) return g_.find(binding[static_cast<std::size_t>(p.var)]);
    std::vector<int> args;
    for (const auto& a : p.args) {
      auto c = eval(a, binding);
      if (!c) return std::nullopt;
      args.push_back(*c);
    }
    return g_.lookup(p.fun, std::move(args));
  }

  bool holds(const std::vector<PAtom>& atoms, const std::vector<int>& binding) {
    for (const auto& a : atoms) {
      if (a.is_eq) {
        auto l = eval(a.args[0], binding);
        if (!l) return false;
        auto r = eval(a.args[1], binding);
        if (!r || *l != *r) return false;
      } else {
        std::vector<int> args;
        for (const auto& t : a.args) {
          auto c = eval(t, binding);
          if (!c) return false;
          args.push_back(*c);
        }
        if (!g_.has_fact(a.rel, std::move(args))) return false;
      }
    }
    return true;
  }

  bool goal_reached() { return opt_.goal && holds(goal_, generic_); }

  // ---- premise matching over the indexed e-graph ----

  void tick() {
    if (++work_ > opt_.work_budget) throw WorkExceeded{};
  }

  void match(const Pattern& p, const CompiledAxiom& ax, const std::function<void(int)>& k) {
    if (p.var >= 0) {
      int& b = binding_[static_cast<std::size_t>(p.var)];
      if (b >= 0) {
        k(b);
        return;
      }
      for (int c : g_.classes_by_sort_[ax.var_sorts[static_cast<std::size_t>(p.var)]]) {
        tick();
        b = c;
        k(c);
      }
      b = -1;
      return;
    }
    for (std::size_t ni : g_.nodes_by_fun_[static_cast<std::size_t>(p.fun)]) {
      tick();
      const auto& node = g_.nodes_[ni];
      match_args(p.args, node.args, 0, ax, [&] { k(node.cls); });
    }
  }

  void match_against(const Pattern& p, int c, const CompiledAxiom& ax, const std::function<void()>& k) {
    if (p.var >= 0) {
      int& b = binding_[static_cast<std::size_t>(p.var)];
      if (b >= 0) {
        if (b == c) k();
        return;
      }
      b = c;
      k();
      b = -1;
      return;
    }
    auto it = g_.nodes_by_class_.find(c);
    if (it == g_.nodes_by_class_.end()) return;
    for (std::size_t ni : it->second) {
      const auto& node = g_.nodes_[ni];
      if (node.fun != p.fun) continue;
      tick();
      match_args(p.args, node.args, 0, ax, k);
    }
  }

  void match_args(const std::vector<Pattern>& ps, const std::vector<int>& cs, std::size_t i, const CompiledAxiom& ax,
                  const std::function<void()>& k) {
    if (i == ps.size()) {
      k();
      return;
    }
    match_against(ps[i], cs[i], ax, [&] { match_args(ps, cs, i + 1, ax, k); });
  }

  void match_atom(const PAtom& a, const CompiledAxiom& ax, const std::function<void()>& k) {
    if (!a.is_eq) {
      for (const auto& fact : g_.facts_by_rel_[static_cast<std::size_t>(a.rel)]) {
        tick();
        match_args(a.args, fact, 0, ax, k);
      }
      return;
    }
    const Pattern* l = &a.args[0];
    const Pattern* r = &a.args[1];
    if (l->var >= 0 && r->var >= 0 && l->var == r->var) {
      k();  // variables are always defined
      return;
    }
    if (l->var >= 0 && r->var < 0) std::swap(l, r);
    if (l->var >= 0 && binding_[static_cast<std::size_t>(l->var)] < 0 && r->var >= 0 &&
        binding_[static_cast<std::size_t>(r->var)] >= 0)
      std::swap(l, r);
    match(*l, ax, [&](int c) { match_against(*r, c, ax, k); });
  }

  void match_premise(std::size_t i, std::size_t axi, std::set<std::vector<int>>& found) {
    const CompiledAxiom& ax = axioms_[axi];
    if (i < ax.premise.size()) {
      match_atom(ax.premise[i], ax, [&] { match_premise(i + 1, axi, found); });
      return;
    }
    complete_free(0, axi, found);
  }

  void complete_free(std::size_t v, std::size_t axi, std::set<std::vector<int>>& found) {
    const CompiledAxiom& ax = axioms_[axi];
    if (v == ax.var_sorts.size()) {
      tick();
      if (!holds(ax.conclusion, binding_)) found.insert(binding_);
      return;
    }
    if (binding_[v] >= 0) {
      complete_free(v + 1, axi, found);
      return;
    }
    for (int c : g_.classes_by_sort_[ax.var_sorts[v]]) {
      tick();
      binding_[v] = c;
      complete_free(v + 1, axi, found);
    }
    binding_[v] = -1;
  }

  std::vector<std::pair<std::size_t, std::vector<int>>> find_triggers() {
    g_.index();
    work_ = 0;
    std::vector<std::pair<std::size_t, std::vector<int>>> out;
    for (std::size_t axi = 0; axi < axioms_.size(); ++axi) {
      std::set<std::vector<int>> found;
      binding_.assign(axioms_[axi].var_sorts.size(), -1);
      match_premise(0, axi, found);
      for (const auto& b : found) out.push_back({axi, b});
    }
    return out;
  }

  // ---- presentation ----

  void finalize(Presentation& out) {
    const Signature& sig = theory_.signature;
    const std::size_t nsorts = sig.sorts().size();
    g_.index();
    // Canonical representative per class: least (depth, printed form).
    std::map<int, std::pair<std::size_t, std::string>> key;
    std::map<int, Term> rep;
    for (std::size_t i = 0; i < generic_.size(); ++i) {
      int c = g_.find(generic_[i]);
      Term t = Term::var(ctx_[i].name);
      std::pair<std::size_t, std::string> k{0, print(t)};
      auto it = key.find(c);
      if (it == key.end() || k < it->second) {
        key[c] = k;
        rep[c] = t;
      }
    }
    bool improved = true;
    while (improved) {
      improved = false;
      for (const auto& n : g_.nodes_) {
        std::vector<Term> args;
        std::size_t depth = 0;
        bool ready = true;
        for (int a : n.args) {
          auto it = rep.find(a);
          if (it == rep.end()) {
            ready = false;
            break;
          }
          depth = std::max(depth, key[a].first);
          args.push_back(it->second);
        }
        if (!ready) continue;
        Term t = Term::app(sig.functions()[static_cast<std::size_t>(n.fun)].name, std::move(args));
        std::pair<std::size_t, std::string> k{depth + 1, print(t)};
        auto it = key.find(n.cls);
        if (it == key.end() || k < it->second) {
          key[n.cls] = k;
          rep[n.cls] = std::move(t);
          improved = true;
        }
      }
    }
    // Element order: per sort by representative key.
    std::vector<std::vector<int>> order(nsorts);
    for (std::size_t s = 0; s < nsorts; ++s) {
      order[s] = g_.classes_by_sort_[s];
      std::sort(order[s].begin(), order[s].end(), [&](int a, int b) { return key.at(a) < key.at(b); });
    }
    std::map<int, int> elem;
    auto sigp = std::make_shared<const Signature>(sig);
    out.model = Structure(sigp, "repn");
    out.representatives.assign(nsorts, {});
    for (std::size_t s = 0; s < nsorts; ++s) {
      std::vector<std::string> names;
      for (int c : order[s]) {
        elem[c] = static_cast<int>(names.size());
        names.push_back(key.at(c).second);
        out.representatives[s].push_back(rep.at(c));
      }
      out.model.add_elements(s, std::move(names));
    }
    for (const auto& n : g_.nodes_) {
      Tuple args;
      for (int a : n.args) args.push_back(elem.at(a));
      out.model.set_fun(static_cast<std::size_t>(n.fun), args, elem.at(n.cls));
    }
    for (const auto& [r, args] : g_.facts_) {
      Tuple t;
      for (int a : args) t.push_back(elem.at(a));
      out.model.set_rel(static_cast<std::size_t>(r), t);
    }
    for (int c : generic_) out.generic.push_back(elem.at(g_.find(c)));
  }

  const Theory& theory_;
  const Context& ctx_;
  const Formula& phi_;
  const ChaseOptions& opt_;
  EGraph g_;
  std::vector<CompiledAxiom> axioms_;
  std::vector<PAtom> goal_;
  std::vector<int> generic_;
  std::vector<int> binding_;
  std::size_t work_ = 0;
};

}  // namespace

Presentation saturate(const Theory& theory, const Context& ctx, const Formula& phi, const ChaseOptions& options) {
  require_well_formed(well_formed(theory.signature, ctx, phi));
  return Chase(theory, ctx, phi, options).run();
}

std::optional<int> Presentation::element_of(const Term& t) const {
  return interp_term(model, context, t, generic);
}

bool Presentation::provably_equal(const Term& a, const Term& b) const {
  auto x = element_of(a);
  auto y = element_of(b);
  return x && y && *x == *y;
}

bool Presentation::generic_satisfies(const Formula& psi) const {
  CFormula c = compile(model.signature(), context, psi);
  return satisfies(model, c, generic.data());
}

}  // namespace phl
