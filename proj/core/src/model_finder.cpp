#include "phl/model_finder.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace phl {

namespace {

constexpr int kUnknown = -2;
constexpr int kUndef = -1;

struct Cell {
  bool is_fun = true;
  std::size_t sym = 0;
  std::size_t index = 0;
  int max_arg = -1;
};

struct Instance {
  std::size_t axiom;
  Tuple tuple;
};

class Finder {
 public:
  Finder(const Theory& theory, const std::vector<int>& sizes, const std::function<bool(const Structure&)>& visit,
         const FinderOptions& opt)
      : theory_(theory), sig_(theory.signature), sizes_(sizes), visit_(visit), opt_(opt) {}

  FinderResult run() {
    if (sizes_.size() != sig_.sorts().size()) throw Error("size vector does not match the number of sorts");
    sigp_ = std::make_shared<const Signature>(sig_);
    for (std::size_t f = 0; f < sig_.functions().size(); ++f) {
      std::vector<int> radix;
      for (const auto& s : sig_.functions()[f].arg_sorts) radix.push_back(sizes_[sig_.sort_id(s)]);
      fun_radix_.push_back(radix);
      fun_result_.push_back(sig_.sort_id(sig_.functions()[f].result_sort));
      fun_val_.emplace_back(table_size(radix), kUnknown);
    }
    for (std::size_t r = 0; r < sig_.relations().size(); ++r) {
      std::vector<int> radix;
      for (const auto& s : sig_.relations()[r].arg_sorts) radix.push_back(sizes_[sig_.sort_id(s)]);
      rel_radix_.push_back(radix);
      rel_val_.emplace_back(table_size(radix), kUnknown);
    }
    for (std::size_t f = 0; f < fun_val_.size(); ++f)
      for (std::size_t k = 0; k < fun_val_[f].size(); ++k) cells_.push_back({true, f, k, max_of(decode(fun_radix_[f], k))});
    for (std::size_t r = 0; r < rel_val_.size(); ++r)
      for (std::size_t k = 0; k < rel_val_[r].size(); ++k) cells_.push_back({false, r, k, max_of(decode(rel_radix_[r], k))});
    std::stable_sort(cells_.begin(), cells_.end(), [](const Cell& a, const Cell& b) { return a.max_arg < b.max_arg; });

    fun_axioms_.assign(fun_val_.size(), {});
    rel_axioms_.assign(rel_val_.size(), {});
    for (std::size_t a = 0; a < theory_.axioms.size(); ++a) {
      const Sequent& s = theory_.axioms[a].sequent;
      pre_.push_back(compile(sig_, s.context, s.premise));
      post_.push_back(compile(sig_, s.context, s.conclusion));
      std::set<std::size_t> fs, rs;
      for (const auto* cf : {&pre_.back(), &post_.back()})
        for (const auto& atom : cf->atoms) {
          if (!atom.is_eq) rs.insert(static_cast<std::size_t>(atom.rel));
          for (const auto& t : atom.args) collect_funs(t, fs);
        }
      for (auto f : fs) fun_axioms_[f].push_back(a);
      for (auto r : rs) rel_axioms_[r].push_back(a);
      std::vector<int> ids;
      std::vector<int> radix;
      for (auto s : pre_.back().var_sorts) radix.push_back(sizes_[s]);
      std::size_t n = table_size(radix);
      for (std::size_t k = 0; k < n; ++k) {
        ids.push_back(static_cast<int>(instances_.size()));
        instances_.push_back({a, decode(radix, k)});
      }
      pending_.push_back(std::move(ids));
      live_.push_back(pending_.back().size());
    }
    for (std::size_t a = 0; a < theory_.axioms.size(); ++a)
      if (!propagate(a)) return result_;
    search(0);
    return result_;
  }

 private:
  static std::size_t table_size(const std::vector<int>& radix) {
    std::size_t n = 1;
    for (int r : radix) n *= static_cast<std::size_t>(r);
    return n;
  }
  static Tuple decode(const std::vector<int>& radix, std::size_t k) {
    Tuple out(radix.size());
    for (std::size_t i = radix.size(); i-- > 0;) {
      out[i] = static_cast<int>(k % static_cast<std::size_t>(radix[i]));
      k /= static_cast<std::size_t>(radix[i]);
    }
    return out;
  }
  static int max_of(const Tuple& t) { return t.empty() ? -1 : *std::max_element(t.begin(), t.end()); }
  static void collect_funs(const CTerm& t, std::set<std::size_t>& out) {
    if (t.fun >= 0) out.insert(static_cast<std::size_t>(t.fun));
    for (const auto& a : t.args) collect_funs(a, out);
  }

  int eval(const CTerm& t, const int* tuple) const {
    if (t.var >= 0) return tuple[t.var];
    const auto& radix = fun_radix_[static_cast<std::size_t>(t.fun)];
    std::size_t k = 0;
    bool unknown = false;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      int v = eval(t.args[i], tuple);
      if (v == kUndef) return kUndef;
      if (v == kUnknown) {
        unknown = true;
        continue;
      }
      k = k * static_cast<std::size_t>(radix[i]) + static_cast<std::size_t>(v);
    }
    if (unknown) return kUnknown;
    return fun_val_[static_cast<std::size_t>(t.fun)][k];
  }

  // 1 true, 0 false, -1 unknown
  int eval(const CAtom& a, const int* tuple) const {
    if (a.is_eq) {
      int l = eval(a.args[0], tuple);
      if (l == kUndef) return 0;
      int r = eval(a.args[1], tuple);
      if (r == kUndef) return 0;
      if (l == kUnknown || r == kUnknown) return -1;
      return l == r ? 1 : 0;
    }
    const auto& radix = rel_radix_[static_cast<std::size_t>(a.rel)];
    std::size_t k = 0;
    bool unknown = false;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      int v = eval(a.args[i], tuple);
      if (v == kUndef) return 0;
      if (v == kUnknown) {
        unknown = true;
        continue;
      }
      k = k * static_cast<std::size_t>(radix[i]) + static_cast<std::size_t>(v);
    }
    if (unknown) return -1;
    int v = rel_val_[static_cast<std::size_t>(a.rel)][k];
    return v == kUnknown ? -1 : v;
  }

  int eval(const CFormula& f, const int* tuple) const {
    int result = 1;
    for (const auto& a : f.atoms) {
      int v = eval(a, tuple);
      if (v == 0) return 0;
      if (v < 0) result = -1;
    }
    return result;
  }

  // Resolves pending instances of axiom `a`; false on a violated instance.
  bool propagate(std::size_t a) {
    auto& ids = pending_[a];
    std::size_t& live = live_[a];
    for (std::size_t i = live; i-- > 0;) {
      const Instance& inst = instances_[static_cast<std::size_t>(ids[i])];
      int pre = eval(pre_[a], inst.tuple.data());
      if (pre == 0) {
        remove(a, i);
        continue;
      }
      int post = eval(post_[a], inst.tuple.data());
      if (post == 1) {
        remove(a, i);
        continue;
      }
      if (pre == 1 && post == 0) return false;
    }
    return true;
  }

  void remove(std::size_t a, std::size_t i) {
    auto& ids = pending_[a];
    std::size_t& live = live_[a];
    std::swap(ids[i], ids[live - 1]);
    --live;
    trail_.push_back(a);
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      ++live_[trail_.back()];
      trail_.pop_back();
    }
  }

  bool search(std::size_t i) {
    if (i == cells_.size()) return leaf();
    const Cell& c = cells_[i];
    const auto& axioms = c.is_fun ? fun_axioms_[c.sym] : rel_axioms_[c.sym];
    int hi = c.is_fun ? sizes_[fun_result_[c.sym]] : 2;
    int choices = c.is_fun ? hi + 1 : 2;
    // defined values first, then undefined
    for (int step = 0; step < choices; ++step) {
      int v = (c.is_fun && step == hi) ? kUndef : step;
      if (++nodes_ > opt_.node_budget) {
        result_.complete = false;
        return false;
      }
      (c.is_fun ? fun_val_[c.sym][c.index] : rel_val_[c.sym][c.index]) = v;
      std::size_t mark = trail_.size();
      bool ok = true;
      for (std::size_t a : axioms)
        if (!propagate(a)) {
          ok = false;
          break;
        }
      bool cont = true;
      if (ok) cont = search(i + 1);
      undo(mark);
      if (!cont) {
        (c.is_fun ? fun_val_[c.sym][c.index] : rel_val_[c.sym][c.index]) = kUnknown;
        return false;
      }
    }
    (c.is_fun ? fun_val_[c.sym][c.index] : rel_val_[c.sym][c.index]) = kUnknown;
    return true;
  }

  bool leaf() {
    Structure m(sigp_);
    for (std::size_t s = 0; s < sizes_.size(); ++s) m.add_elements(s, sizes_[s]);
    for (std::size_t f = 0; f < fun_val_.size(); ++f) m.fun_table(f) = fun_val_[f];
    for (std::size_t r = 0; r < rel_val_.size(); ++r)
      for (std::size_t k = 0; k < rel_val_[r].size(); ++k) m.rel_table(r)[k] = static_cast<char>(rel_val_[r][k]);
    if (opt_.iso_reduce && !is_canonical(m)) return true;
    ++result_.models;
    if (!visit_(m)) {
      result_.complete = false;
      return false;
    }
    return true;
  }

  const Theory& theory_;
  const Signature& sig_;
  std::shared_ptr<const Signature> sigp_;
  std::vector<int> sizes_;
  const std::function<bool(const Structure&)>& visit_;
  const FinderOptions& opt_;
  std::vector<std::vector<int>> fun_radix_, rel_radix_;
  std::vector<std::size_t> fun_result_;
  std::vector<std::vector<int>> fun_val_, rel_val_;
  std::vector<Cell> cells_;
  std::vector<CFormula> pre_, post_;
  std::vector<std::vector<std::size_t>> fun_axioms_, rel_axioms_;
  std::vector<Instance> instances_;
  std::vector<std::vector<int>> pending_;
  std::vector<std::size_t> live_;
  std::vector<std::size_t> trail_;
  std::size_t nodes_ = 0;
  FinderResult result_;
};

// Lexicographic comparison of the relabelled encoding against the identity one.
class CanonicalCheck {
 public:
  explicit CanonicalCheck(const Structure& m) : m_(m) {}

  bool run() {
    perms_.resize(m_.num_sorts());
    inv_.resize(m_.num_sorts());
    for (std::size_t s = 0; s < m_.num_sorts(); ++s) {
      perms_[s].resize(static_cast<std::size_t>(m_.size(s)));
      std::iota(perms_[s].begin(), perms_[s].end(), 0);
    }
    return rec(0);
  }

 private:
  // Returns false when a smaller relabelling exists.
  bool rec(std::size_t s) {
    if (s == m_.num_sorts()) return compare() >= 0;
    std::sort(perms_[s].begin(), perms_[s].end());
    do {
      if (!rec(s + 1)) return false;
    } while (std::next_permutation(perms_[s].begin(), perms_[s].end()));
    return true;
  }

  // perm maps old element -> new element. Compares relabelled against identity:
  // negative when relabelled is smaller.
  int compare() {
    for (std::size_t s = 0; s < m_.num_sorts(); ++s) {
      inv_[s].assign(perms_[s].size(), 0);
      for (std::size_t i = 0; i < perms_[s].size(); ++i) inv_[s][static_cast<std::size_t>(perms_[s][i])] = static_cast<int>(i);
    }
    const Signature& sig = m_.signature();
    Tuple old;
    for (std::size_t f = 0; f < sig.functions().size(); ++f) {
      const auto& table = m_.fun_table(f);
      const auto& sorts = m_.fun_arg_sorts(f);
      std::size_t rs = m_.fun_result_sort(f);
      for (std::size_t k = 0; k < table.size(); ++k) {
        Tuple args = m_.decode_fun_args(f, k);
        old.resize(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) old[i] = inv_[sorts[i]][static_cast<std::size_t>(args[i])];
        int v = m_.fun(f, old);
        int relabelled = v < 0 ? -1 : perms_[rs][static_cast<std::size_t>(v)];
        if (relabelled != table[k]) return relabelled < table[k] ? -1 : 1;
      }
    }
    for (std::size_t r = 0; r < sig.relations().size(); ++r) {
      const auto& table = m_.rel_table(r);
      const auto& sorts = m_.rel_arg_sorts(r);
      for (std::size_t k = 0; k < table.size(); ++k) {
        Tuple args = m_.decode_rel_args(r, k);
        old.resize(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) old[i] = inv_[sorts[i]][static_cast<std::size_t>(args[i])];
        int v = m_.rel(r, old) ? 1 : 0;
        if (v != table[k]) return v < table[k] ? -1 : 1;
      }
    }
    return 0;
  }

  const Structure& m_;
  std::vector<std::vector<int>> perms_;
  std::vector<std::vector<int>> inv_;
};

}  // namespace

bool is_canonical(const Structure& m) { return CanonicalCheck(m).run(); }

FinderResult enumerate_models(const Theory& theory, const std::vector<int>& sizes,
                              const std::function<bool(const Structure&)>& visit, const FinderOptions& options) {
  return Finder(theory, sizes, visit, options).run();
}

std::vector<std::vector<int>> size_vectors(std::size_t sorts, int max_size, int min_size) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(sorts, min_size);
  while (true) {
    out.push_back(v);
    std::size_t i = sorts;
    bool done = true;
    while (i > 0) {
      --i;
      if (++v[i] <= max_size) {
        done = false;
        break;
      }
      v[i] = min_size;
    }
    if (done) break;
  }
  std::stable_sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::accumulate(a.begin(), a.end(), 0) < std::accumulate(b.begin(), b.end(), 0);
  });
  return out;
}

std::vector<Structure> all_models(const Theory& theory, int max_size, const FinderOptions& options, int min_size) {
  std::vector<Structure> out;
  for (const auto& sizes : size_vectors(theory.signature.sorts().size(), max_size, min_size)) {
    std::string prefix = "M";
    for (std::size_t i = 0; i < sizes.size(); ++i) prefix += (i ? "x" : "") + std::to_string(sizes[i]);
    int k = 0;
    enumerate_models(
        theory, sizes,
        [&](const Structure& m) {
          out.push_back(m);
          if (out.back().name.empty()) out.back().name = prefix + "_" + std::to_string(k++);
          return true;
        },
        options);
  }
  return out;
}

}  // namespace phl
