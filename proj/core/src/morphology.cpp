#include "phl/morphology.hpp"

namespace phl {

bool is_closed_mono(const Structure& m, const Structure& n, const Homomorphism& h) {
  if (!check_hom(m, n, h)) throw Error("not a homomorphism");
  if (!is_injective(m, h)) throw Error("not a monomorphism");
  const Signature& sig = m.signature();
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    bool reflected = true;
    for_each_tuple(m, m.fun_arg_sorts(f), [&](const Tuple& args) {
      if (m.fun(f, args) >= 0) return true;
      Tuple image(args.size());
      for (std::size_t i = 0; i < args.size(); ++i) image[i] = h(m.fun_arg_sorts(f)[i], args[i]);
      if (n.fun(f, image) >= 0) reflected = false;
      return reflected;
    });
    if (!reflected) return false;
  }
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    bool reflected = true;
    for_each_tuple(m, m.rel_arg_sorts(r), [&](const Tuple& args) {
      if (m.rel(r, args)) return true;
      Tuple image(args.size());
      for (std::size_t i = 0; i < args.size(); ++i) image[i] = h(m.rel_arg_sorts(r)[i], args[i]);
      if (n.rel(r, image)) reflected = false;
      return reflected;
    });
    if (!reflected) return false;
  }
  return true;
}

Submodel closed_submodel_generated(const Structure& b, const std::vector<std::vector<int>>& generators) {
  const std::size_t sorts = b.num_sorts();
  std::vector<std::vector<char>> in(sorts);
  for (std::size_t s = 0; s < sorts; ++s) {
    in[s].assign(static_cast<std::size_t>(b.size(s)), 0);
    if (s < generators.size())
      for (int e : generators[s]) in[s].at(static_cast<std::size_t>(e)) = 1;
  }
  const Signature& sig = b.signature();
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t f = 0; f < sig.functions().size(); ++f) {
      const auto& table = b.fun_table(f);
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i] < 0) continue;
        char& target = in[b.fun_result_sort(f)][static_cast<std::size_t>(table[i])];
        if (target) continue;
        Tuple args = b.decode_fun_args(f, i);
        bool inside = true;
        for (std::size_t k = 0; k < args.size() && inside; ++k)
          inside = in[b.fun_arg_sorts(f)[k]][static_cast<std::size_t>(args[k])];
        if (inside) {
          target = 1;
          changed = true;
        }
      }
    }
  }

  Submodel out{Structure(b.signature_ptr(), b.name), {}};
  out.inclusion.maps.resize(sorts);
  std::vector<std::vector<int>> local(sorts);
  for (std::size_t s = 0; s < sorts; ++s) {
    std::vector<std::string> names;
    local[s].assign(static_cast<std::size_t>(b.size(s)), -1);
    for (int e = 0; e < b.size(s); ++e) {
      if (!in[s][static_cast<std::size_t>(e)]) continue;
      local[s][static_cast<std::size_t>(e)] = static_cast<int>(names.size());
      names.push_back(b.element_name(s, e));
      out.inclusion.maps[s].push_back(e);
    }
    out.model.add_elements(s, std::move(names));
  }
  Structure& m = out.model;
  for (std::size_t f = 0; f < sig.functions().size(); ++f)
    for_each_tuple(m, m.fun_arg_sorts(f), [&](const Tuple& args) {
      Tuple outer(args.size());
      for (std::size_t k = 0; k < args.size(); ++k) outer[k] = out.inclusion(m.fun_arg_sorts(f)[k], args[k]);
      int v = b.fun(f, outer);
      if (v >= 0) m.set_fun(f, args, local[m.fun_result_sort(f)][static_cast<std::size_t>(v)]);
      return true;
    });
  for (std::size_t r = 0; r < sig.relations().size(); ++r)
    for_each_tuple(m, m.rel_arg_sorts(r), [&](const Tuple& args) {
      Tuple outer(args.size());
      for (std::size_t k = 0; k < args.size(); ++k) outer[k] = out.inclusion(m.rel_arg_sorts(r)[k], args[k]);
      if (b.rel(r, outer)) m.set_rel(r, args);
      return true;
    });
  return out;
}

std::vector<std::vector<int>> image(const Structure& m, const Homomorphism& h) {
  std::vector<std::vector<int>> out(m.num_sorts());
  for (std::size_t s = 0; s < m.num_sorts(); ++s)
    for (int e = 0; e < m.size(s); ++e) out[s].push_back(h(s, e));
  return out;
}

bool is_dense(const Structure& m, const Structure& n, const Homomorphism& h) {
  return closed_submodel_generated(n, image(m, h)).model.sizes() == n.sizes();
}

Factorization factorize(const Structure& m, const Structure& n, const Homomorphism& h) {
  if (!check_hom(m, n, h)) throw Error("not a homomorphism");
  Submodel sub = closed_submodel_generated(n, image(m, h));
  Factorization out{sub.model, {}, sub.inclusion};
  out.dense.maps.resize(m.num_sorts());
  for (std::size_t s = 0; s < m.num_sorts(); ++s) {
    std::vector<int> local(static_cast<std::size_t>(n.size(s)), -1);
    for (std::size_t i = 0; i < sub.inclusion.maps[s].size(); ++i)
      local[static_cast<std::size_t>(sub.inclusion.maps[s][i])] = static_cast<int>(i);
    for (int e = 0; e < m.size(s); ++e) out.dense.maps[s].push_back(local[static_cast<std::size_t>(h(s, e))]);
  }
  return out;
}

namespace {

// Homs b → target extending g along e (at most `limit` of them are visited).
std::size_t count_extensions(const Structure& target, const Structure& a, const Structure& b, const Homomorphism& e,
                             const Homomorphism& g, std::size_t limit) {
  HomSearchOptions opt;
  opt.fixed.resize(b.num_sorts());
  for (std::size_t s = 0; s < b.num_sorts(); ++s) {
    opt.fixed[s].assign(static_cast<std::size_t>(b.size(s)), -1);
    for (int x = 0; x < a.size(s); ++x) {
      int& slot = opt.fixed[s][static_cast<std::size_t>(e(s, x))];
      if (slot >= 0 && slot != g(s, x)) return 0;
      slot = g(s, x);
    }
  }
  std::size_t n = 0;
  for_each_hom(b, target, [&](const Homomorphism&) { return ++n < limit; }, opt);
  return n;
}

}  // namespace

bool orthogonal(const Structure& target, const Structure& a, const Structure& b, const Homomorphism& e) {
  bool ok = true;
  for_each_hom(a, target, [&](const Homomorphism& g) {
    ok = count_extensions(target, a, b, e, g, 2) == 1;
    return ok;
  });
  return ok;
}

std::optional<Homomorphism> is_retraction(const Structure& m, const Structure& n, const Homomorphism& h) {
  std::optional<Homomorphism> section;
  Homomorphism id = identity_hom(n);
  for_each_hom(n, m, [&](const Homomorphism& s) {
    if (compose(h, s) == id) section = s;
    return !section;
  });
  return section;
}

std::optional<Homomorphism> is_U_retraction(const TheoryMorphism& rho, const Structure& m, const Structure& n,
                                            const Homomorphism& h) {
  const Signature& src = rho.source.signature;
  const Signature& tgt = m.signature();
  Homomorphism uh;
  for (const auto& s : src.sorts()) uh.maps.push_back(h.maps[tgt.sort_id(rho.sort(s))]);
  return is_retraction(U_rho(rho, m), U_rho(rho, n), uh);
}

std::size_t count_diagonal_fillers(const Structure&, const Structure& b, const Structure& c, const Structure&,
                                   const Homomorphism& e, const Homomorphism& m, const Homomorphism& u,
                                   const Homomorphism& v) {
  std::size_t count = 0;
  HomSearchOptions opt;
  opt.fixed.resize(b.num_sorts());
  for (std::size_t s = 0; s < b.num_sorts(); ++s) {
    opt.fixed[s].assign(static_cast<std::size_t>(b.size(s)), -1);
    for (std::size_t x = 0; x < e.maps[s].size(); ++x) {
      int& slot = opt.fixed[s][static_cast<std::size_t>(e.maps[s][x])];
      if (slot >= 0 && slot != u.maps[s][x]) return 0;
      slot = u.maps[s][x];
    }
  }
  for_each_hom(
      b, c,
      [&](const Homomorphism& d) {
        if (compose(m, d) == v) ++count;
        return true;
      },
      opt);
  return count;
}

}  // namespace phl
