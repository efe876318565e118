#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "phl/birkhoff.hpp"
#include "phl/derivation.hpp"
#include "phl/freemodel.hpp"
#include "phl/model_finder.hpp"
#include "phl/model_text.hpp"
#include "phl/morphology.hpp"
#include "phl/prover.hpp"
#include "phl/text.hpp"
#include "phl/translation.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace phl;

namespace {

enum Exit { kOk = 0, kFalse = 1, kUnknown = 2, kUsage = 10, kParse = 11, kIll = 12, kIo = 13, kInternal = 14 };

struct IoError : Error {
  using Error::Error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Loaded {
  Theory theory;
  std::optional<RelativeTheory> relative;
};

Loaded load_theory(const std::string& path) {
  std::string text = slurp(path);
  Loaded out;
  if (is_relative_theory_text(text)) {
    out.relative = parse_relative_theory(text);
    out.theory = pht_of(*out.relative);
  } else {
    out.theory = parse_theory(text);
  }
  return out;
}

bool looks_like_derivation(const std::string& text) {
  return text.find("[rule") != std::string::npos;
}

std::string tuple_text(const Structure& m, const Context& ctx, const Tuple& t) {
  std::vector<std::size_t> sorts;
  for (const auto& v : ctx.vars()) sorts.push_back(m.signature().sort_id(v.sort));
  return print_tuple(m, sorts, t);
}

json hom_json(const Structure& m, const Homomorphism& h, const Structure& n) {
  json out = json::object();
  for (std::size_t s = 0; s < m.num_sorts(); ++s) {
    json map = json::object();
    for (int e = 0; e < m.size(s); ++e) map[m.element_name(s, e)] = n.element_name(s, h(s, e));
    out[m.signature().sorts()[s]] = map;
  }
  return out;
}

constexpr int kDepthUnset = std::numeric_limits<int>::min();

int default_depth() {
  if (const char* env = std::getenv("PHL_BUDGET_DEPTH")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw BudgetError(std::string("PHL_BUDGET_DEPTH is not a number: ") + env);
    }
  }
  return 4;
}

void emit(bool as_json, const json& j, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& theory_path, const std::string& file, bool as_json) {
  Loaded th = load_theory(theory_path);
  std::string text = slurp(file);
  json j;
  std::ostringstream out;
  if (looks_like_derivation(text)) {
    DerivationFile df = parse_derivation(th.theory, text);
    DerivationCheck c = check_derivation(df.theory_with_hypotheses(th.theory), df.derivation);
    j["kind"] = "derivation";
    j["name"] = df.name;
    j["ok"] = c.ok;
    j["nodes"] = df.derivation.size();
    if (!c.ok) {
      j["path"] = c.path;
      j["reason"] = c.reason;
    }
    out << (df.name.empty() ? "derivation" : df.name) << ": " << (c.ok ? "valid" : "invalid") << " ("
        << df.derivation.size() << " nodes)\n";
    if (!c.ok) {
      out << "  failing node at path [";
      for (std::size_t i = 0; i < c.path.size(); ++i) out << (i ? " " : "") << c.path[i];
      out << "]: " << c.reason << "\n";
    }
    emit(as_json, j, out.str());
    return c.ok ? kOk : kFalse;
  }

  ModelDocument doc = parse_model_document(th.theory, text);
  bool all = true;
  j["kind"] = "models";
  j["models"] = json::array();
  for (const auto& m : doc.models) {
    ModelCheck c = check_model(m, th.theory);
    json mj;
    mj["name"] = m.name;
    mj["model"] = c.ok;
    if (th.relative) mj["algebra"] = c.ok;
    mj["violations"] = json::array();
    out << m.name << ": " << (c.ok ? "model" : "not a model") << " of " << th.theory.name << "\n";
    for (const auto& v : c.violations) {
      const Axiom* ax = th.theory.find_axiom(v.axiom);
      std::string w = ax ? tuple_text(m, ax->sequent.context, v.witness) : "";
      mj["violations"].push_back({{"axiom", v.axiom}, {"witness", w}});
      out << "  violates " << v.axiom << " at " << w << "\n";
    }
    all = all && c.ok;
    j["models"].push_back(mj);
  }
  for (const auto& h : doc.homs) {
    const Structure* m = doc.find_model(h.source);
    const Structure* n = doc.find_model(h.target);
    bool ok = check_hom(*m, *n, h.hom);
    j["homs"].push_back({{"name", h.name}, {"homomorphism", ok}});
    out << h.name << ": " << (ok ? "homomorphism" : "not a homomorphism") << "\n";
    all = all && ok;
  }
  emit(as_json, j, out.str());
  return all ? kOk : kFalse;
}

int cmd_prove(const std::string& theory_path, const std::string& sequent, int depth, int size, bool as_json) {
  Loaded th = load_theory(theory_path);
  Sequent s = parse_sequent(th.theory.signature, sequent);
  ProveOptions opt;
  opt.depth = depth;
  opt.model_size = size;
  ProofResult r = prove(th.theory, s, opt);
  json j;
  std::ostringstream out;
  j["sequent"] = print(s);
  j["verdict"] = to_string(r.verdict);
  j["depth"] = depth;
  j["model_size"] = size;
  out << to_string(r.verdict);
  switch (r.verdict) {
    case Verdict::Proved: {
      j["round"] = r.depth;
      json trace = json::array();
      for (const auto& round : r.trace) {
        json fired = json::object();
        for (const auto& [ax, n] : round.fired) fired[ax] = n;
        trace.push_back({{"round", round.round}, {"classes", round.classes}, {"fired", fired}});
      }
      j["certificate"] = trace;
      out << " at round " << r.depth << "\n";
      for (const auto& round : r.trace) {
        out << "  round " << round.round << ":";
        for (const auto& [ax, n] : round.fired) out << " " << ax << "x" << n;
        out << " (" << round.classes << " classes)\n";
      }
      break;
    }
    case Verdict::Refuted: {
      std::string w = tuple_text(*r.countermodel, s.context, r.witness);
      j["source"] = r.countermodel_source;
      j["witness"] = w;
      j["countermodel"] = print_model(*r.countermodel, th.theory.name);
      out << " by " << r.countermodel_source << "; witness " << w << "\n" << print_model(*r.countermodel, th.theory.name);
      break;
    }
    case Verdict::Unknown:
      j["note"] = r.note;
      out << ": " << r.note << "\n";
      break;
  }
  emit(as_json, j, out.str());
  return r.verdict == Verdict::Proved ? kOk : r.verdict == Verdict::Refuted ? kFalse : kUnknown;
}

std::string status_text(const SaturationStatus& st) {
  return st.saturated ? "Saturated(" + std::to_string(st.depth) + ")"
                      : "Truncated(" + std::to_string(st.depth) + ", " + st.reason + ")";
}

int cmd_free(const std::string& theory_path, const std::string& input, int depth, bool as_json) {
  Loaded th = load_theory(theory_path);
  json j;
  std::ostringstream out;
  Presentation p;
  if (fs::is_regular_file(input)) {
    if (!th.relative) throw Error("a base model needs a relative theory");
    Structure m = parse_model(th.relative->base, slurp(input));
    FreeAlgebra fa = free_algebra(*th.relative, m, depth);
    p = fa.presentation;
    j["unit"] = hom_json(m, fa.unit, p.model);
  } else {
    auto [ctx, phi] = parse_formula_in_context(th.theory.signature, input);
    p = representing_model(th.theory, ctx, phi, depth);
  }
  j["status"] = status_text(p.status);
  j["saturated"] = p.status.saturated;
  j["sizes"] = p.model.sizes();
  j["model"] = print_model(p.model, th.theory.name);
  out << print_model(p.model, th.theory.name) << "# " << status_text(p.status) << "\n";
  emit(as_json, j, out.str());
  return p.status.saturated ? kOk : kUnknown;
}

int cmd_factor(const std::string& theory_path, const std::string& hom_path, const std::string& hom_name,
               bool as_json) {
  Loaded th = load_theory(theory_path);
  ModelDocument doc = parse_model_document(th.theory, slurp(hom_path));
  if (doc.homs.empty()) throw Error("no hom in '" + hom_path + "'");
  const NamedHom* h = &doc.homs.front();
  if (!hom_name.empty()) {
    h = nullptr;
    for (const auto& c : doc.homs)
      if (c.name == hom_name) h = &c;
    if (!h) throw Error("no hom named '" + hom_name + "'");
  }
  const Structure& m = *doc.find_model(h->source);
  const Structure& n = *doc.find_model(h->target);
  json j;
  std::ostringstream out;
  if (!check_hom(m, n, h->hom)) {
    j["homomorphism"] = false;
    emit(as_json, j, h->name + " is not a homomorphism\n");
    return kFalse;
  }
  Factorization f = factorize(m, n, h->hom);
  f.mid.name = h->name + "_image";
  j["homomorphism"] = true;
  j["mid"] = print_model(f.mid, th.theory.name);
  j["dense"] = hom_json(m, f.dense, f.mid);
  j["closed_mono"] = hom_json(f.mid, f.closed_mono, n);
  out << print_model(f.mid, th.theory.name) << "\n"
      << print_hom(h->name + "_dense", m, f.mid, f.dense) << "\n"
      << print_hom(h->name + "_closed", f.mid, n, f.closed_mono);
  emit(as_json, j, out.str());
  return kOk;
}

int cmd_translate(const std::string& source_path, const std::string& target_path, const std::string& morphism_path,
                  const std::string& sequent, const std::string& model_path, bool check, int depth, int size,
                  bool as_json) {
  Loaded src = load_theory(source_path);
  Loaded tgt = load_theory(target_path);
  TheoryMorphism rho = parse_morphism(slurp(morphism_path), src.theory, tgt.theory);
  json j;
  std::ostringstream out;
  int code = kOk;
  j["morphism"] = rho.name;
  if (!sequent.empty()) {
    Sequent s = translate(rho, parse_sequent(src.theory.signature, sequent));
    j["translated"] = print(s);
    out << print(s) << "\n";
  }
  if (!model_path.empty()) {
    ModelDocument doc = parse_model_document(tgt.theory, slurp(model_path));
    j["models"] = json::array();
    for (const auto& m : doc.models) {
      Structure u = U_rho(rho, m);
      bool ok = is_model(u, src.theory);
      j["models"].push_back({{"name", m.name}, {"reduct", print_model(u, src.theory.name)}, {"model", ok}});
      out << print_model(u, src.theory.name) << (ok ? "" : "# not a model of the source theory\n");
      if (!ok) code = kFalse;
    }
  }
  if (check || (sequent.empty() && model_path.empty())) {
    ProveOptions opt;
    opt.depth = depth;
    opt.model_size = size;
    MorphismCheck mc = check_theory_morphism(rho, opt);
    j["status"] = mc.status;
    j["obligations"] = json::array();
    for (const auto& o : mc.obligations) {
      j["obligations"].push_back({{"axiom", o.axiom}, {"sequent", print(o.translated)}, {"verdict", to_string(o.verdict)}});
      out << "  " << o.axiom << ": " << to_string(o.verdict) << "  " << print(o.translated) << "\n";
    }
    out << rho.name << ": " << mc.status << "\n";
    if (mc.status == "rejected")
      code = kFalse;
    else if (mc.status == "provisional" && code == kOk)
      code = kUnknown;
  }
  emit(as_json, j, out.str());
  return code;
}

int cmd_sketch(const std::string& path, bool domain_sequents, int count, bool as_json) {
  Sketch s = parse_sketch(slurp(path));
  validate_sketch(s);
  Theory t = sketch_to_pht(s, domain_sequents);
  json j;
  std::ostringstream out;
  j["theory"] = print_theory(t);
  out << print_theory(t);
  int code = kOk;
  if (count > 0) {
    j["counts"] = json::array();
    FinderOptions labelled;
    labelled.iso_reduce = false;
    for (const auto& sizes : size_vectors(s.objects.size(), count)) {
      std::size_t theory_models = enumerate_models(t, sizes, [](const Structure&) { return true; }, labelled).models;
      std::size_t sketch_models = count_sketch_models(s, sizes);
      j["counts"].push_back({{"sizes", sizes}, {"theory", theory_models}, {"sketch", sketch_models}});
      out << "# sizes";
      for (int n : sizes) out << " " << n;
      out << ": theory " << theory_models << ", sketch " << sketch_models << "\n";
      if (theory_models != sketch_models) code = kFalse;
    }
  }
  emit(as_json, j, out.str());
  return code;
}

std::vector<Structure> load_models(const Theory& t, const std::string& path) {
  std::vector<Structure> out;
  auto add_file = [&](const fs::path& p) {
    ModelDocument doc = parse_model_document(t, slurp(p.string()));
    for (auto& m : doc.models) out.push_back(std::move(m));
  };
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path))
      if (e.is_regular_file() && e.path().extension() == ".model") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) add_file(f);
  } else {
    add_file(path);
  }
  return out;
}

std::vector<Axiom> load_judgments(const Theory& t, const std::string& path) {
  TokenStream ts(slurp(path));
  std::vector<Axiom> out;
  std::size_t n = 0;
  while (!ts.at_end()) {
    if (!ts.accept_word("judgment") && !ts.accept_word("axiom")) ts.fail("expected 'judgment' or 'axiom'");
    Axiom a;
    ++n;
    a.name = ts.peek().is("[") ? "J" + std::to_string(n) : ts.expect_name("judgment name");
    a.sequent = parse_sequent(ts, t.signature);
    ts.expect(";");
    out.push_back(std::move(a));
  }
  return out;
}

int cmd_birkhoff(const std::string& theory_path, const std::string& pool_path, int pool_size,
                 const std::string& class_path, const std::string& judgments_path, int arity, int depth,
                 bool as_json) {
  Loaded th = load_theory(theory_path);
  std::vector<Structure> pool =
      pool_path.empty() ? all_models(th.theory, pool_size) : load_models(th.theory, pool_path);
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (pool[i].name.empty()) pool[i].name = "M" + std::to_string(i);
  DefinabilityReport r;
  if (!judgments_path.empty())
    r = definability_check(th.theory, load_judgments(th.theory, judgments_path), pool, arity, depth);
  else if (!class_path.empty())
    r = closure_check(th.theory, load_models(th.theory, class_path), pool, arity);
  else
    r = definability_check(th.theory, {}, pool, arity, depth);

  json j;
  std::ostringstream out;
  j["pool"] = r.pool;
  j["class"] = r.defined;
  j["fixed_point"] = r.fixed_point;
  j["witnesses"] = r.witnesses;
  j["judgments"] = json::array();
  out << "pool " << r.pool << ", class " << r.defined << ", fixed point: " << (r.fixed_point ? "yes" : "no") << "\n";
  for (const auto& w : r.witnesses) out << "  outside the class: " << w << "\n";
  for (const auto& jr : r.judgments) {
    j["judgments"].push_back({{"judgment", jr.judgment},
                              {"checked", jr.checked},
                              {"skipped", jr.skipped},
                              {"disagreements", jr.disagreements},
                              {"witness", jr.witness}});
    out << "  " << jr.judgment << ": orthogonality vs validity on " << jr.checked << " models, "
        << jr.disagreements << " disagreements";
    if (jr.skipped) out << " (skipped: presentation did not saturate)";
    if (!jr.witness.empty()) out << ", e.g. " << jr.witness;
    out << "\n";
  }
  j["ok"] = r.ok();
  out << (r.ok() ? "PASS" : "FAIL") << "\n";
  emit(as_json, j, out.str());
  return r.ok() ? kOk : kFalse;
}

int cmd_fmt(const std::string& path, const std::string& theory_path) {
  std::string text = slurp(path);
  TokenStream probe(text);
  std::string head = probe.peek().text;
  if (head == "sketch") {
    Sketch s = parse_sketch(text);
    std::cout << print_theory(sketch_to_pht(s));
    return kOk;
  }
  if (is_relative_theory_text(text)) {
    std::cout << print_relative_theory(parse_relative_theory(text));
    return kOk;
  }
  if (head == "theory") {
    std::cout << print_theory(parse_theory(text));
    return kOk;
  }
  if (theory_path.empty()) throw Error("formatting this file needs --theory");
  Loaded th = load_theory(theory_path);
  if (looks_like_derivation(text)) {
    DerivationFile df = parse_derivation(th.theory, text);
    std::cout << print_derivation(df.derivation, df.name, df.hypotheses);
    return kOk;
  }
  ModelDocument doc = parse_model_document(th.theory, text);
  for (std::size_t i = 0; i < doc.models.size(); ++i)
    std::cout << (i ? "\n" : "") << print_model(doc.models[i], th.theory.name);
  for (const auto& h : doc.homs)
    std::cout << "\n" << print_hom(h.name, *doc.find_model(h.source), *doc.find_model(h.target), h.hom);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finitary partial Horn logic toolkit"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable report");

  std::string theory, file, sequent, hom_name, morphism, model, pool, cls, judgments, source, target;
  int depth = kDepthUnset, size = 4, count = 0, pool_size = 3, arity = 2;
  bool check = false, no_domain = false;

  auto* c_check = app.add_subcommand("check", "Check models, homs or a derivation against a theory");
  c_check->add_option("theory", theory)->required();
  c_check->add_option("file", file)->required();

  auto* c_prove = app.add_subcommand("prove", "Decide a sequent within the budgets");
  c_prove->add_option("theory", theory)->required();
  c_prove->add_option("sequent", sequent)->required();
  c_prove->add_option("-d,--depth", depth, "Chase rounds (default 4, or PHL_BUDGET_DEPTH)");
  c_prove->add_option("-k,--model-size", size, "Countermodel size per sort")->capture_default_str();

  auto* c_free = app.add_subcommand("free", "Representing model of [ctx] PHI, or free algebra on a model file");
  c_free->add_option("theory", theory)->required();
  c_free->add_option("input", file)->required();
  c_free->add_option("-d,--depth", depth, "Chase rounds");

  auto* c_factor = app.add_subcommand("factor", "Dense / closed-mono factorization of a hom");
  c_factor->add_option("theory", theory)->required();
  c_factor->add_option("homfile", file)->required();
  c_factor->add_option("--hom", hom_name, "Hom to factor (default: the first)");

  auto* c_translate = app.add_subcommand("translate", "Translate along a theory morphism");
  c_translate->add_option("source", source)->required();
  c_translate->add_option("target", target)->required();
  c_translate->add_option("morphism", morphism)->required();
  c_translate->add_option("--sequent", sequent, "Source sequent to translate");
  c_translate->add_option("--model", model, "Target models to reduct along the morphism");
  c_translate->add_flag("--check", check, "Discharge the axiom obligations");
  c_translate->add_option("-d,--depth", depth, "Chase rounds for obligations");
  c_translate->add_option("-k,--model-size", size, "Countermodel size for obligations")->capture_default_str();

  auto* c_sketch = app.add_subcommand("sketch2pht", "Translate a finite limit sketch");
  c_sketch->add_option("sketch", file)->required();
  c_sketch->add_flag("--no-domain-sequents", no_domain, "Emit only the groups a)-e)");
  c_sketch->add_option("--count", count, "Compare model counts up to this size per object");

  auto* c_birk = app.add_subcommand("birkhoff", "Closure and definability report over a pool");
  c_birk->add_option("theory", theory)->required();
  c_birk->add_option("--pool", pool, "Directory or file of models (default: all models up to --pool-size)");
  c_birk->add_option("--pool-size", pool_size, "Size per sort for the enumerated pool")->capture_default_str();
  c_birk->add_option("--class", cls, "Models forming the class to test");
  c_birk->add_option("--judgments", judgments, "Judgments defining the class");
  c_birk->add_option("--arity", arity, "Largest product arity")->capture_default_str();
  c_birk->add_option("-d,--depth", depth, "Chase rounds for the judgment presentations");

  auto* c_fmt = app.add_subcommand("fmt", "Pretty-print a theory, model, derivation or sketch");
  c_fmt->add_option("file", file)->required();
  c_fmt->add_option("--theory", theory, "Theory for models and derivations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (depth == kDepthUnset) depth = default_depth();
    if (depth < 0) throw BudgetError("depth budget must be non-negative");
    if (size < 1) throw BudgetError("model size budget must be at least 1");
    if (*c_check) return cmd_check(theory, file, as_json);
    if (*c_prove) return cmd_prove(theory, sequent, depth, size, as_json);
    if (*c_free) return cmd_free(theory, file, depth, as_json);
    if (*c_factor) return cmd_factor(theory, file, hom_name, as_json);
    if (*c_translate)
      return cmd_translate(source, target, morphism, sequent, model, check, depth, size, as_json);
    if (*c_sketch) return cmd_sketch(file, !no_domain, count, as_json);
    if (*c_birk) return cmd_birkhoff(theory, pool, pool_size, cls, judgments, arity, depth, as_json);
    if (*c_fmt) return cmd_fmt(file, theory);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const WellFormednessError& e) {
    std::cerr << "ill-formed: " << e.what() << "\n";
    for (const auto& d : e.diagnostics()) std::cerr << "  " << to_string(d) << "\n";
    return kIll;
  } catch (const SortError& e) {
    std::cerr << "sort error: " << e.what() << "\n";
    return kIll;
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
