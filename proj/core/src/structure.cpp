#include "phl/structure.hpp"

#include <algorithm>
#include <numeric>

namespace phl {

Structure::Structure(std::shared_ptr<const Signature> sig, std::string nm) : name(std::move(nm)), sig_(std::move(sig)) {
  const Signature& s = *sig_;
  names_.resize(s.sorts().size());
  lookup_.resize(s.sorts().size());
  for (const auto& f : s.functions()) {
    std::vector<std::size_t> args;
    for (const auto& a : f.arg_sorts) args.push_back(s.sort_id(a));
    fun_sorts_.push_back(args);
    fun_result_.push_back(s.sort_id(f.result_sort));
    fun_shape_.push_back(make_shape(args));
    funs_.emplace_back(fun_shape_.back().total, -1);
  }
  for (const auto& r : s.relations()) {
    std::vector<std::size_t> args;
    for (const auto& a : r.arg_sorts) args.push_back(s.sort_id(a));
    rel_sorts_.push_back(args);
    rel_shape_.push_back(make_shape(args));
    rels_.emplace_back(rel_shape_.back().total, 0);
  }
}

std::size_t Structure::total_size() const {
  std::size_t n = 0;
  for (const auto& v : names_) n += v.size();
  return n;
}

std::vector<int> Structure::sizes() const {
  std::vector<int> out;
  for (std::size_t s = 0; s < names_.size(); ++s) out.push_back(size(s));
  return out;
}

std::optional<int> Structure::find_element(std::size_t sort, const std::string& nm) const {
  auto it = lookup_[sort].find(nm);
  if (it == lookup_[sort].end()) return std::nullopt;
  return it->second;
}

Structure::Shape Structure::make_shape(const std::vector<std::size_t>& sorts) const {
  Shape sh;
  for (std::size_t s : sorts) {
    int n = static_cast<int>(names_[s].size());
    sh.radix.push_back(n);
    if (n != 0 && sh.total > table_cap_ / static_cast<std::size_t>(n))
      throw BudgetError("table size exceeds the configured cap of " + std::to_string(table_cap_));
    sh.total *= static_cast<std::size_t>(n);
  }
  return sh;
}

Tuple Structure::decode(const Shape& s, std::size_t k) {
  Tuple out(s.radix.size());
  for (std::size_t i = s.radix.size(); i-- > 0;) {
    std::size_t r = static_cast<std::size_t>(s.radix[i]);
    out[i] = static_cast<int>(k % r);
    k /= r;
  }
  return out;
}

void Structure::relayout(std::size_t changed) {
  for (std::size_t f = 0; f < funs_.size(); ++f) {
    const auto& sorts = fun_sorts_[f];
    if (std::find(sorts.begin(), sorts.end(), changed) == sorts.end()) continue;
    Shape old = fun_shape_[f];
    Shape sh = make_shape(sorts);
    std::vector<int> table(sh.total, -1);
    for (std::size_t k = 0; k < old.total; ++k)
      if (funs_[f][k] >= 0) table[index(sh, decode(old, k).data())] = funs_[f][k];
    fun_shape_[f] = sh;
    funs_[f] = std::move(table);
  }
  for (std::size_t r = 0; r < rels_.size(); ++r) {
    const auto& sorts = rel_sorts_[r];
    if (std::find(sorts.begin(), sorts.end(), changed) == sorts.end()) continue;
    Shape old = rel_shape_[r];
    Shape sh = make_shape(sorts);
    std::vector<char> table(sh.total, 0);
    for (std::size_t k = 0; k < old.total; ++k)
      if (rels_[r][k]) table[index(sh, decode(old, k).data())] = 1;
    rel_shape_[r] = sh;
    rels_[r] = std::move(table);
  }
}

int Structure::add_element(std::size_t sort, std::string nm) {
  if (lookup_[sort].count(nm)) throw Error("duplicate element '" + nm + "' in sort " + sig_->sorts()[sort]);
  int id = static_cast<int>(names_[sort].size());
  lookup_[sort].emplace(nm, id);
  names_[sort].push_back(std::move(nm));
  relayout(sort);
  return id;
}

void Structure::add_elements(std::size_t sort, int n) {
  int base = size(sort);
  for (int i = 0; i < n; ++i) {
    std::string nm = std::to_string(base + i);
    if (lookup_[sort].count(nm)) throw Error("duplicate element '" + nm + "'");
    lookup_[sort].emplace(nm, base + i);
    names_[sort].push_back(std::move(nm));
  }
  relayout(sort);
}

void Structure::add_elements(std::size_t sort, std::vector<std::string> nms) {
  for (auto& nm : nms) {
    int id = static_cast<int>(names_[sort].size());
    if (!lookup_[sort].emplace(nm, id).second) throw Error("duplicate element '" + nm + "'");
    names_[sort].push_back(std::move(nm));
  }
  relayout(sort);
}

void Structure::set_fun(std::size_t f, const Tuple& args, int value) {
  if (args.size() != fun_sorts_[f].size()) throw SortError("wrong number of arguments for " + sig_->functions()[f].name);
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i] < 0 || args[i] >= size(fun_sorts_[f][i])) throw SortError("argument out of range");
  if (value < -1 || value >= size(fun_result_[f])) throw SortError("value out of range");
  funs_[f][index(fun_shape_[f], args.data())] = value;
}

void Structure::set_rel(std::size_t r, const Tuple& args, bool value) {
  if (args.size() != rel_sorts_[r].size()) throw SortError("wrong number of arguments for " + sig_->relations()[r].name);
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i] < 0 || args[i] >= size(rel_sorts_[r][i])) throw SortError("argument out of range");
  rels_[r][index(rel_shape_[r], args.data())] = value ? 1 : 0;
}

std::size_t Structure::defined_entries(std::size_t f) const {
  return static_cast<std::size_t>(std::count_if(funs_[f].begin(), funs_[f].end(), [](int v) { return v >= 0; }));
}

std::size_t Structure::relation_size(std::size_t r) const {
  return static_cast<std::size_t>(std::count(rels_[r].begin(), rels_[r].end(), 1));
}

bool Structure::operator==(const Structure& o) const {
  return names_ == o.names_ && funs_ == o.funs_ && rels_ == o.rels_ &&
         (sig_ == o.sig_ || (sig_ && o.sig_ && *sig_ == *o.sig_));
}

// ---------------------------------------------------------------------------

Homomorphism identity_hom(const Structure& m) {
  Homomorphism h;
  for (std::size_t s = 0; s < m.num_sorts(); ++s) {
    std::vector<int> v(static_cast<std::size_t>(m.size(s)));
    std::iota(v.begin(), v.end(), 0);
    h.maps.push_back(std::move(v));
  }
  return h;
}

Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
  Homomorphism h;
  for (std::size_t s = 0; s < f.maps.size(); ++s) {
    std::vector<int> v;
    for (int x : f.maps[s]) v.push_back(g.maps[s][static_cast<std::size_t>(x)]);
    h.maps.push_back(std::move(v));
  }
  return h;
}

// ---------------------------------------------------------------------------

CTerm compile(const Signature& sig, const Context& ctx, const Term& t) {
  CTerm c;
  if (t.is_var()) {
    auto i = ctx.index_of(t.name());
    if (!i) throw SortError("variable '" + t.name() + "' not in context");
    c.var = static_cast<int>(*i);
    return c;
  }
  c.fun = static_cast<int>(sig.function_id(t.name()));
  for (const auto& a : t.args()) c.args.push_back(compile(sig, ctx, a));
  return c;
}

CFormula compile(const Signature& sig, const Context& ctx, const Formula& f) {
  CFormula out;
  for (const auto& v : ctx.vars()) out.var_sorts.push_back(sig.sort_id(v.sort));
  for (const auto& a : atoms(f)) {
    CAtom c;
    if (a.kind() == Formula::Kind::Eq) {
      c.is_eq = true;
    } else {
      c.rel = static_cast<int>(sig.relation_id(a.relation()));
    }
    for (const auto& t : a.terms()) c.args.push_back(compile(sig, ctx, t));
    out.atoms.push_back(std::move(c));
  }
  return out;
}

int eval(const Structure& m, const CTerm& t, const int* tuple) {
  if (t.var >= 0) return tuple[t.var];
  int buf[8];
  std::vector<int> heap;
  int* args = buf;
  if (t.args.size() > 8) {
    heap.resize(t.args.size());
    args = heap.data();
  }
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    args[i] = eval(m, t.args[i], tuple);
    if (args[i] < 0) return -1;
  }
  return m.fun(static_cast<std::size_t>(t.fun), args);
}

bool satisfies(const Structure& m, const CAtom& a, const int* tuple) {
  if (a.is_eq) {
    int l = eval(m, a.args[0], tuple);
    if (l < 0) return false;
    int r = eval(m, a.args[1], tuple);
    return r >= 0 && l == r;
  }
  int buf[8];
  std::vector<int> heap;
  int* args = buf;
  if (a.args.size() > 8) {
    heap.resize(a.args.size());
    args = heap.data();
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    args[i] = eval(m, a.args[i], tuple);
    if (args[i] < 0) return false;
  }
  return m.rel(static_cast<std::size_t>(a.rel), args);
}

bool satisfies(const Structure& m, const CFormula& f, const int* tuple) {
  for (const auto& a : f.atoms)
    if (!satisfies(m, a, tuple)) return false;
  return true;
}

// ---------------------------------------------------------------------------

namespace {
std::vector<std::size_t> context_sorts(const Signature& sig, const Context& ctx) {
  std::vector<std::size_t> out;
  for (const auto& v : ctx.vars()) out.push_back(sig.sort_id(v.sort));
  return out;
}
}  // namespace

void for_each_tuple(const Structure& m, const std::vector<std::size_t>& sorts,
                    const std::function<bool(const Tuple&)>& visit) {
  for (std::size_t s : sorts)
    if (m.size(s) == 0) return;
  Tuple t(sorts.size(), 0);
  while (true) {
    if (!visit(t)) return;
    std::size_t i = sorts.size();
    while (i > 0) {
      --i;
      if (++t[i] < m.size(sorts[i])) break;
      t[i] = 0;
      if (i == 0) return;
    }
    if (sorts.empty()) return;
  }
}

std::optional<int> interp_term(const Structure& m, const Context& ctx, const Term& t, const Tuple& tuple) {
  auto sorts = context_sorts(m.signature(), ctx);
  if (tuple.size() != sorts.size()) throw SortError("tuple length does not match the context");
  for (std::size_t i = 0; i < sorts.size(); ++i)
    if (tuple[i] < 0 || tuple[i] >= m.size(sorts[i])) throw SortError("tuple component out of range for its sort");
  int v = eval(m, compile(m.signature(), ctx, t), tuple.data());
  if (v < 0) return std::nullopt;
  return v;
}

std::vector<Tuple> interp_formula(const Structure& m, const Context& ctx, const Formula& f) {
  CFormula c = compile(m.signature(), ctx, f);
  std::vector<Tuple> out;
  for_each_tuple(m, c.var_sorts, [&](const Tuple& t) {
    if (satisfies(m, c, t.data())) out.push_back(t);
    return true;
  });
  return out;
}

HoldsResult holds(const Structure& m, const Sequent& s) {
  CFormula pre = compile(m.signature(), s.context, s.premise);
  CFormula post = compile(m.signature(), s.context, s.conclusion);
  HoldsResult r;
  for_each_tuple(m, pre.var_sorts, [&](const Tuple& t) {
    if (satisfies(m, pre, t.data()) && !satisfies(m, post, t.data())) {
      r.ok = false;
      r.witness = t;
      return false;
    }
    return true;
  });
  return r;
}

ModelCheck check_model(const Structure& m, const Theory& t) {
  ModelCheck out;
  for (const auto& a : t.axioms) {
    auto r = holds(m, a.sequent);
    if (!r.ok) {
      out.ok = false;
      out.violations.push_back({a.name, r.witness});
    }
  }
  return out;
}

bool is_model(const Structure& m, const Theory& t) {
  for (const auto& a : t.axioms)
    if (!holds(m, a.sequent)) return false;
  return true;
}

// ---------------------------------------------------------------------------

bool check_hom(const Structure& m, const Structure& n, const Homomorphism& h) {
  if (h.maps.size() != m.num_sorts()) return false;
  for (std::size_t s = 0; s < m.num_sorts(); ++s) {
    if (h.maps[s].size() != static_cast<std::size_t>(m.size(s))) return false;
    for (int x : h.maps[s])
      if (x < 0 || x >= n.size(s)) return false;
  }
  const Signature& sig = m.signature();
  Tuple img;
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const auto& table = m.fun_table(f);
    const auto& sorts = m.fun_arg_sorts(f);
    std::size_t rs = m.fun_result_sort(f);
    for (std::size_t k = 0; k < table.size(); ++k) {
      if (table[k] < 0) continue;
      Tuple args = m.decode_fun_args(f, k);
      img.resize(args.size());
      for (std::size_t i = 0; i < args.size(); ++i) img[i] = h(sorts[i], args[i]);
      if (n.fun(f, img) != h(rs, table[k])) return false;
    }
  }
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const auto& table = m.rel_table(r);
    const auto& sorts = m.rel_arg_sorts(r);
    for (std::size_t k = 0; k < table.size(); ++k) {
      if (!table[k]) continue;
      Tuple args = m.decode_rel_args(r, k);
      img.resize(args.size());
      for (std::size_t i = 0; i < args.size(); ++i) img[i] = h(sorts[i], args[i]);
      if (!n.rel(r, img)) return false;
    }
  }
  return true;
}

namespace {

struct HomConstraint {
  bool is_fun = false;
  std::size_t symbol = 0;
  std::vector<std::pair<std::size_t, int>> args;  // (sort, element)
  std::pair<std::size_t, int> value{0, 0};        // functions only
};

class HomSearch {
 public:
  HomSearch(const Structure& m, const Structure& n, const HomSearchOptions& opt,
            const std::function<bool(const Homomorphism&)>& visit)
      : m_(m), n_(n), opt_(opt), visit_(visit) {}

  void run() {
    const Signature& sig = m_.signature();
    for (std::size_t s = 0; s < m_.num_sorts(); ++s) {
      if (m_.size(s) > 0 && n_.size(s) == 0) return;
      if (opt_.injective && m_.size(s) > n_.size(s)) return;
    }
    std::vector<std::vector<int>> pos(m_.num_sorts());
    for (std::size_t s = 0; s < m_.num_sorts(); ++s)
      for (int e = 0; e < m_.size(s); ++e) {
        pos[s].push_back(static_cast<int>(order_.size()));
        order_.push_back({s, e});
      }
    constraints_.resize(order_.size());
    auto last_pos = [&](const HomConstraint& c) {
      int p = -1;
      for (auto [s, e] : c.args) p = std::max(p, pos[s][static_cast<std::size_t>(e)]);
      if (c.is_fun) p = std::max(p, pos[c.value.first][static_cast<std::size_t>(c.value.second)]);
      return p;
    };
    for (std::size_t f = 0; f < sig.functions().size(); ++f) {
      const auto& table = m_.fun_table(f);
      for (std::size_t k = 0; k < table.size(); ++k) {
        if (table[k] < 0) continue;
        HomConstraint c;
        c.is_fun = true;
        c.symbol = f;
        Tuple args = m_.decode_fun_args(f, k);
        for (std::size_t i = 0; i < args.size(); ++i) c.args.push_back({m_.fun_arg_sorts(f)[i], args[i]});
        c.value = {m_.fun_result_sort(f), table[k]};
        constraints_[static_cast<std::size_t>(last_pos(c))].push_back(std::move(c));
      }
    }
    for (std::size_t r = 0; r < sig.relations().size(); ++r) {
      const auto& table = m_.rel_table(r);
      for (std::size_t k = 0; k < table.size(); ++k) {
        if (!table[k]) continue;
        HomConstraint c;
        c.symbol = r;
        Tuple args = m_.decode_rel_args(r, k);
        for (std::size_t i = 0; i < args.size(); ++i) c.args.push_back({m_.rel_arg_sorts(r)[i], args[i]});
        int p = last_pos(c);
        if (p < 0) {
          if (!n_.rel(r, Tuple{})) return;
          continue;
        }
        constraints_[static_cast<std::size_t>(p)].push_back(std::move(c));
      }
    }
    h_.maps.resize(m_.num_sorts());
    used_.resize(m_.num_sorts());
    for (std::size_t s = 0; s < m_.num_sorts(); ++s) {
      h_.maps[s].assign(static_cast<std::size_t>(m_.size(s)), -1);
      used_[s].assign(static_cast<std::size_t>(n_.size(s)), 0);
    }
    search(0);
  }

 private:
  bool ok(std::size_t p) {
    for (const auto& c : constraints_[p]) {
      buf_.resize(c.args.size());
      for (std::size_t i = 0; i < c.args.size(); ++i) buf_[i] = h_(c.args[i].first, c.args[i].second);
      if (c.is_fun) {
        if (n_.fun(c.symbol, buf_) != h_(c.value.first, c.value.second)) return false;
      } else if (!n_.rel(c.symbol, buf_)) {
        return false;
      }
    }
    return true;
  }

  // Returns false when the visitor asked to stop.
  bool search(std::size_t p) {
    if (p == order_.size()) return visit_(h_);
    auto [s, e] = order_[p];
    int forced = -1;
    if (s < opt_.fixed.size() && static_cast<std::size_t>(e) < opt_.fixed[s].size()) forced = opt_.fixed[s][static_cast<std::size_t>(e)];
    for (int v = 0; v < n_.size(s); ++v) {
      if (forced >= 0 && v != forced) continue;
      if (opt_.injective && used_[s][static_cast<std::size_t>(v)]) continue;
      h_.maps[s][static_cast<std::size_t>(e)] = v;
      if (ok(p)) {
        used_[s][static_cast<std::size_t>(v)] = 1;
        bool cont = search(p + 1);
        used_[s][static_cast<std::size_t>(v)] = 0;
        if (!cont) {
          h_.maps[s][static_cast<std::size_t>(e)] = -1;
          return false;
        }
      }
    }
    h_.maps[s][static_cast<std::size_t>(e)] = -1;
    return true;
  }

  const Structure& m_;
  const Structure& n_;
  const HomSearchOptions& opt_;
  const std::function<bool(const Homomorphism&)>& visit_;
  std::vector<std::pair<std::size_t, int>> order_;
  std::vector<std::vector<HomConstraint>> constraints_;
  Homomorphism h_;
  std::vector<std::vector<char>> used_;
  Tuple buf_;
};

}  // namespace

void for_each_hom(const Structure& m, const Structure& n, const std::function<bool(const Homomorphism&)>& visit,
                  const HomSearchOptions& options) {
  HomSearch(m, n, options, visit).run();
}

std::vector<Homomorphism> enumerate_homs(const Structure& m, const Structure& n) {
  std::vector<Homomorphism> out;
  for_each_hom(m, n, [&](const Homomorphism& h) {
    out.push_back(h);
    return true;
  });
  return out;
}

std::size_t count_homs(const Structure& m, const Structure& n) {
  std::size_t c = 0;
  for_each_hom(m, n, [&](const Homomorphism&) {
    ++c;
    return true;
  });
  return c;
}

std::optional<Homomorphism> find_hom(const Structure& m, const Structure& n, const HomSearchOptions& options) {
  std::optional<Homomorphism> out;
  for_each_hom(
      m, n,
      [&](const Homomorphism& h) {
        out = h;
        return false;
      },
      options);
  return out;
}

std::vector<std::size_t> fingerprint(const Structure& m) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < m.num_sorts(); ++s) out.push_back(static_cast<std::size_t>(m.size(s)));
  for (std::size_t f = 0; f < m.signature().functions().size(); ++f) out.push_back(m.defined_entries(f));
  for (std::size_t r = 0; r < m.signature().relations().size(); ++r) out.push_back(m.relation_size(r));
  return out;
}

std::optional<Homomorphism> find_isomorphism(const Structure& m, const Structure& n) {
  if (fingerprint(m) != fingerprint(n)) return std::nullopt;
  // With equal sizes and equal table occupancy an injective hom maps entries
  // bijectively, so its inverse is a hom too.
  HomSearchOptions opt;
  opt.injective = true;
  return find_hom(m, n, opt);
}

bool isomorphic(const Structure& m, const Structure& n) { return find_isomorphism(m, n).has_value(); }

bool is_injective(const Structure& m, const Homomorphism& h) {
  for (std::size_t s = 0; s < m.num_sorts(); ++s) {
    std::vector<int> v = h.maps[s];
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) return false;
  }
  return true;
}

bool is_surjective(const Structure& n, const Homomorphism& h) {
  for (std::size_t s = 0; s < n.num_sorts(); ++s) {
    std::vector<char> hit(static_cast<std::size_t>(n.size(s)), 0);
    for (int x : h.maps[s]) hit[static_cast<std::size_t>(x)] = 1;
    if (std::count(hit.begin(), hit.end(), 0)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Structure product(std::shared_ptr<const Signature> sig, const std::vector<const Structure*>& factors,
                  std::size_t cap) {
  const std::size_t nsorts = sig->sorts().size();
  Structure p(sig, "");
  std::vector<std::size_t> counts(nsorts, 1);
  std::size_t total = 0;
  for (std::size_t s = 0; s < nsorts; ++s) {
    for (const Structure* f : factors) {
      std::size_t k = static_cast<std::size_t>(f->size(s));
      if (k != 0 && counts[s] > cap / k) throw BudgetError("product exceeds the size cap of " + std::to_string(cap));
      counts[s] *= k;
    }
    total += counts[s];
    if (total > cap) throw BudgetError("product exceeds the size cap of " + std::to_string(cap));
  }
  const std::size_t nf = factors.size();
  auto decode = [&](std::size_t s, std::size_t k) {
    Tuple comp(nf);
    for (std::size_t i = nf; i-- > 0;) {
      std::size_t r = static_cast<std::size_t>(factors[i]->size(s));
      comp[i] = static_cast<int>(k % r);
      k /= r;
    }
    return comp;
  };
  auto encode = [&](std::size_t s, const Tuple& comp) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < nf; ++i) k = k * static_cast<std::size_t>(factors[i]->size(s)) + static_cast<std::size_t>(comp[i]);
    return static_cast<int>(k);
  };
  for (std::size_t s = 0; s < nsorts; ++s) {
    std::vector<std::string> names;
    names.reserve(counts[s]);
    for (std::size_t k = 0; k < counts[s]; ++k) {
      Tuple comp = decode(s, k);
      std::string nm = "(";
      for (std::size_t i = 0; i < nf; ++i) {
        if (i) nm += ",";
        nm += factors[i]->element_name(s, comp[i]);
      }
      names.push_back(nm + ")");
    }
    p.add_elements(s, std::move(names));
  }
  for (std::size_t f = 0; f < sig->functions().size(); ++f) {
    auto& table = p.fun_table(f);
    const auto& sorts = p.fun_arg_sorts(f);
    std::size_t rs = p.fun_result_sort(f);
    for (std::size_t k = 0; k < table.size(); ++k) {
      Tuple args = p.decode_fun_args(f, k);
      std::vector<Tuple> comps;
      for (std::size_t i = 0; i < args.size(); ++i) comps.push_back(decode(sorts[i], static_cast<std::size_t>(args[i])));
      Tuple value(nf);
      bool defined = true;
      Tuple fa(args.size());
      for (std::size_t j = 0; j < nf && defined; ++j) {
        for (std::size_t i = 0; i < args.size(); ++i) fa[i] = comps[i][j];
        value[j] = factors[j]->fun(f, fa);
        defined = value[j] >= 0;
      }
      table[k] = defined ? encode(rs, value) : -1;
    }
  }
  for (std::size_t r = 0; r < sig->relations().size(); ++r) {
    auto& table = p.rel_table(r);
    const auto& sorts = p.rel_arg_sorts(r);
    for (std::size_t k = 0; k < table.size(); ++k) {
      Tuple args = p.decode_rel_args(r, k);
      std::vector<Tuple> comps;
      for (std::size_t i = 0; i < args.size(); ++i) comps.push_back(decode(sorts[i], static_cast<std::size_t>(args[i])));
      bool holds_all = true;
      Tuple fa(args.size());
      for (std::size_t j = 0; j < nf && holds_all; ++j) {
        for (std::size_t i = 0; i < args.size(); ++i) fa[i] = comps[i][j];
        holds_all = factors[j]->rel(r, fa);
      }
      table[k] = holds_all ? 1 : 0;
    }
  }
  std::string nm;
  for (const Structure* f : factors) nm += (nm.empty() ? "" : "x") + f->name;
  p.name = factors.empty() ? "terminal" : nm;
  return p;
}

Structure product(const std::vector<Structure>& factors, std::size_t cap) {
  if (factors.empty()) throw Error("product of an empty list needs a signature");
  std::vector<const Structure*> ptrs;
  for (const auto& f : factors) ptrs.push_back(&f);
  return product(factors.front().signature_ptr(), ptrs, cap);
}

// ---------------------------------------------------------------------------

Diagram Diagram::chain(std::vector<Structure> stages, const std::vector<Homomorphism>& steps) {
  Diagram d;
  const std::size_t n = stages.size();
  if (steps.size() + 1 != n && !(n == 0 && steps.empty())) throw Error("a chain of n stages needs n-1 connecting homs");
  d.leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    d.arrows[{i, i}] = identity_hom(stages[i]);
    d.leq[i][i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      d.arrows[{i, j}] = compose(steps[j - 1], d.arrows[{i, j - 1}]);
      d.leq[i][j] = true;
    }
  }
  d.stages = std::move(stages);
  return d;
}

namespace {
struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};
}  // namespace

Colimit chain_colimit(const Diagram& d) {
  const std::size_t n = d.stages.size();
  if (n == 0) throw Error("colimit of an empty diagram is not supported (empty index is not directed)");
  auto sig = d.stages.front().signature_ptr();
  if (d.leq.size() != n) throw Error("order relation has the wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    if (!d.leq[i][i]) throw Error("order relation is not reflexive");
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && d.leq[i][j] && d.leq[j][i]) throw Error("order relation is not antisymmetric");
      for (std::size_t k = 0; k < n; ++k)
        if (d.leq[i][j] && d.leq[j][k] && !d.leq[i][k]) throw Error("order relation is not transitive");
      bool bound = false;
      for (std::size_t k = 0; k < n && !bound; ++k) bound = d.leq[i][k] && d.leq[j][k];
      if (!bound) throw Error("index poset is not directed");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!d.leq[i][j]) continue;
      auto it = d.arrows.find({i, j});
      if (it == d.arrows.end()) throw Error("missing connecting hom " + std::to_string(i) + "->" + std::to_string(j));
      if (!check_hom(d.stages[i], d.stages[j], it->second))
        throw Error("connecting map " + std::to_string(i) + "->" + std::to_string(j) + " is not a homomorphism");
      if (i == j && it->second != identity_hom(d.stages[i])) throw Error("diagram does not preserve identities");
      for (std::size_t k = 0; k < n; ++k)
        if (d.leq[j][k] && compose(d.arrows.at({j, k}), it->second) != d.arrows.at({i, k}))
          throw Error("diagram is not functorial at " + std::to_string(i) + "<=" + std::to_string(j) + "<=" +
                      std::to_string(k));
    }

  const std::size_t nsorts = sig->sorts().size();
  Colimit out;
  out.object = Structure(sig, "colim");
  out.coprojections.resize(n);
  for (auto& c : out.coprojections) c.maps.resize(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s) {
    std::vector<std::size_t> offset(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + static_cast<std::size_t>(d.stages[i].size(s));
    UnionFind uf(offset[n]);
    for (const auto& [ij, h] : d.arrows)
      for (int a = 0; a < d.stages[ij.first].size(s); ++a)
        uf.unite(offset[ij.first] + static_cast<std::size_t>(a), offset[ij.second] + static_cast<std::size_t>(h(s, a)));
    std::map<std::size_t, int> cls;
    for (std::size_t i = 0; i < n; ++i) {
      auto& m = out.coprojections[i].maps[s];
      for (int a = 0; a < d.stages[i].size(s); ++a) {
        std::size_t root = uf.find(offset[i] + static_cast<std::size_t>(a));
        auto it = cls.find(root);
        if (it == cls.end()) {
          int id = out.object.add_element(s, "[" + std::to_string(i) + ";" + d.stages[i].element_name(s, a) + "]");
          it = cls.emplace(root, id).first;
        }
        m.push_back(it->second);
      }
    }
  }
  Structure& c = out.object;
  for (std::size_t i = 0; i < n; ++i) {
    const Structure& st = d.stages[i];
    const Homomorphism& q = out.coprojections[i];
    for (std::size_t f = 0; f < sig->functions().size(); ++f) {
      const auto& table = st.fun_table(f);
      for (std::size_t k = 0; k < table.size(); ++k) {
        if (table[k] < 0) continue;
        Tuple args = st.decode_fun_args(f, k);
        for (std::size_t a = 0; a < args.size(); ++a) args[a] = q(st.fun_arg_sorts(f)[a], args[a]);
        int v = q(st.fun_result_sort(f), table[k]);
        int old = c.fun(f, args);
        if (old >= 0 && old != v) throw Error("colimit tables are not single-valued (diagram not directed?)");
        c.set_fun(f, args, v);
      }
    }
    for (std::size_t r = 0; r < sig->relations().size(); ++r) {
      const auto& table = st.rel_table(r);
      for (std::size_t k = 0; k < table.size(); ++k) {
        if (!table[k]) continue;
        Tuple args = st.decode_rel_args(r, k);
        for (std::size_t a = 0; a < args.size(); ++a) args[a] = q(st.rel_arg_sorts(r)[a], args[a]);
        c.set_rel(r, args);
      }
    }
  }
  return out;
}

}  // namespace phl
