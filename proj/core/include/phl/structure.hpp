#pragma once

// Finite partial Σ-structures, interpretation, validity and homomorphisms.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "phl/syntax.hpp"

namespace phl {

using Tuple = std::vector<int>;

/// Function tables and relation tables are dense arrays indexed by the mixed-radix
/// encoding of the argument tuple; -1 marks an undefined function entry.
class Structure {
 public:
  static constexpr std::size_t kDefaultTableCap = std::size_t{1} << 24;

  Structure() = default;
  explicit Structure(std::shared_ptr<const Signature> sig, std::string name = {});

  const Signature& signature() const { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }

  std::string name;

  std::size_t num_sorts() const { return names_.size(); }
  int size(std::size_t sort) const { return static_cast<int>(names_[sort].size()); }
  std::size_t total_size() const;
  std::vector<int> sizes() const;

  const std::string& element_name(std::size_t sort, int e) const { return names_[sort][static_cast<std::size_t>(e)]; }
  std::optional<int> find_element(std::size_t sort, const std::string& name) const;
  /// Appends an element; throws Error on a duplicate name.
  int add_element(std::size_t sort, std::string name);
  /// Appends n elements named by their index offset by the current size.
  void add_elements(std::size_t sort, int n);
  void add_elements(std::size_t sort, std::vector<std::string> names);

  int fun(std::size_t f, const int* args) const { return funs_[f][index(fun_shape_[f], args)]; }
  int fun(std::size_t f, const Tuple& args) const { return fun(f, args.data()); }
  void set_fun(std::size_t f, const Tuple& args, int value);
  bool rel(std::size_t r, const int* args) const { return rels_[r][index(rel_shape_[r], args)] != 0; }
  bool rel(std::size_t r, const Tuple& args) const { return rel(r, args.data()); }
  void set_rel(std::size_t r, const Tuple& args, bool value = true);

  // Raw table access; the entry at `i` has arguments decode(shape, i).
  const std::vector<int>& fun_table(std::size_t f) const { return funs_[f]; }
  std::vector<int>& fun_table(std::size_t f) { return funs_[f]; }
  const std::vector<char>& rel_table(std::size_t r) const { return rels_[r]; }
  std::vector<char>& rel_table(std::size_t r) { return rels_[r]; }
  const std::vector<std::size_t>& fun_arg_sorts(std::size_t f) const { return fun_sorts_[f]; }
  std::size_t fun_result_sort(std::size_t f) const { return fun_result_[f]; }
  const std::vector<std::size_t>& rel_arg_sorts(std::size_t r) const { return rel_sorts_[r]; }
  Tuple decode_fun_args(std::size_t f, std::size_t i) const { return decode(fun_shape_[f], i); }
  Tuple decode_rel_args(std::size_t r, std::size_t i) const { return decode(rel_shape_[r], i); }

  std::size_t defined_entries(std::size_t f) const;
  std::size_t relation_size(std::size_t r) const;

  bool operator==(const Structure& o) const;

  void set_table_cap(std::size_t cap) { table_cap_ = cap; }

 private:
  struct Shape {
    std::vector<int> radix;
    std::size_t total = 1;
  };
  static std::size_t index(const Shape& s, const int* args) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < s.radix.size(); ++i) k = k * static_cast<std::size_t>(s.radix[i]) + static_cast<std::size_t>(args[i]);
    return k;
  }
  static Tuple decode(const Shape& s, std::size_t k);
  Shape make_shape(const std::vector<std::size_t>& sorts) const;
  void relayout(std::size_t changed_sort);

  std::shared_ptr<const Signature> sig_;
  std::vector<std::vector<std::string>> names_;
  std::vector<std::unordered_map<std::string, int>> lookup_;
  std::vector<std::vector<std::size_t>> fun_sorts_, rel_sorts_;
  std::vector<std::size_t> fun_result_;
  std::vector<Shape> fun_shape_, rel_shape_;
  std::vector<std::vector<int>> funs_;
  std::vector<std::vector<char>> rels_;
  std::size_t table_cap_ = kDefaultTableCap;
};

/// Per-sort total maps, source element index to target element index.
struct Homomorphism {
  std::vector<std::vector<int>> maps;

  int operator()(std::size_t sort, int e) const { return maps[sort][static_cast<std::size_t>(e)]; }
  bool operator==(const Homomorphism&) const = default;
  bool operator<(const Homomorphism& o) const { return maps < o.maps; }
};

Homomorphism identity_hom(const Structure& m);
/// g ∘ f
Homomorphism compose(const Homomorphism& g, const Homomorphism& f);

// ---------------------------------------------------------------------------
// Compiled terms and formulas for repeated evaluation.

struct CTerm {
  int var = -1;  // context index when >= 0
  int fun = -1;
  std::vector<CTerm> args;
};

struct CAtom {
  bool is_eq = false;
  int rel = -1;
  std::vector<CTerm> args;  // {lhs, rhs} for equations
};

/// A flattened conjunction of atoms.
struct CFormula {
  std::vector<CAtom> atoms;
  std::vector<std::size_t> var_sorts;
};

CTerm compile(const Signature& sig, const Context& ctx, const Term& t);
CFormula compile(const Signature& sig, const Context& ctx, const Formula& f);

/// -1 when undefined.
int eval(const Structure& m, const CTerm& t, const int* tuple);
bool satisfies(const Structure& m, const CAtom& a, const int* tuple);
bool satisfies(const Structure& m, const CFormula& f, const int* tuple);

// ---------------------------------------------------------------------------

std::optional<int> interp_term(const Structure& m, const Context& ctx, const Term& t, const Tuple& tuple);
/// All tuples (in lexicographic order) satisfying the formula.
std::vector<Tuple> interp_formula(const Structure& m, const Context& ctx, const Formula& f);

/// Calls `visit` on every tuple of the context's carrier product; stops when it returns false.
void for_each_tuple(const Structure& m, const std::vector<std::size_t>& sorts,
                    const std::function<bool(const Tuple&)>& visit);

struct HoldsResult {
  bool ok = true;
  Tuple witness;
  explicit operator bool() const { return ok; }
};

HoldsResult holds(const Structure& m, const Sequent& s);

struct Violation {
  std::string axiom;
  Tuple witness;
};

struct ModelCheck {
  bool ok = true;
  std::vector<Violation> violations;
  explicit operator bool() const { return ok; }
};

ModelCheck check_model(const Structure& m, const Theory& t);
bool is_model(const Structure& m, const Theory& t);

// ---------------------------------------------------------------------------

bool check_hom(const Structure& m, const Structure& n, const Homomorphism& h);

struct HomSearchOptions {
  bool injective = false;
  /// Per sort, per source element: a forced image or -1.
  std::vector<std::vector<int>> fixed;
};

/// Visits every homomorphism m → n; stop early by returning false.
void for_each_hom(const Structure& m, const Structure& n, const std::function<bool(const Homomorphism&)>& visit,
                  const HomSearchOptions& options = {});
std::vector<Homomorphism> enumerate_homs(const Structure& m, const Structure& n);
std::size_t count_homs(const Structure& m, const Structure& n);
std::optional<Homomorphism> find_hom(const Structure& m, const Structure& n, const HomSearchOptions& options = {});

/// Sizes and table occupancy per symbol; equal for isomorphic structures.
std::vector<std::size_t> fingerprint(const Structure& m);
/// An isomorphism m → n when one exists.
std::optional<Homomorphism> find_isomorphism(const Structure& m, const Structure& n);
bool isomorphic(const Structure& m, const Structure& n);

bool is_injective(const Structure& m, const Homomorphism& h);
bool is_surjective(const Structure& n, const Homomorphism& h);

// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultProductCap = 100000;

/// Componentwise product; the empty list gives the terminal structure.
Structure product(std::shared_ptr<const Signature> sig, const std::vector<const Structure*>& factors,
                  std::size_t cap = kDefaultProductCap);
Structure product(const std::vector<Structure>& factors, std::size_t cap = kDefaultProductCap);

/// A functor from a finite poset: `leq[i][j]` when i ≤ j, with `arrows[{i,j}]` the
/// connecting hom for every i ≤ j (identities included).
struct Diagram {
  std::vector<Structure> stages;
  std::vector<std::vector<bool>> leq;
  std::map<std::pair<std::size_t, std::size_t>, Homomorphism> arrows;

  /// A chain 0 ≤ 1 ≤ ... from consecutive connecting homs; composites are filled in.
  static Diagram chain(std::vector<Structure> stages, const std::vector<Homomorphism>& steps);
};

struct Colimit {
  Structure object;
  std::vector<Homomorphism> coprojections;
};

/// Throws Error when the input is not a functor from a directed poset.
Colimit chain_colimit(const Diagram& d);

}  // namespace phl
