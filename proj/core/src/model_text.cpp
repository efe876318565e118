#include "phl/model_text.hpp"

namespace phl {

const Structure* ModelDocument::find_model(std::string_view name) const {
  for (const auto& m : models)
    if (m.name == name) return &m;
  return nullptr;
}

std::shared_ptr<const Signature> share_signature(const Theory& theory) {
  return std::make_shared<const Signature>(theory.signature);
}

namespace {

std::size_t expect_sort(TokenStream& ts, const Signature& sig) {
  const Token& t = ts.peek();
  if (t.is(":")) {
    if (sig.sorts().size() != 1) ts.fail("sort name required (signature has several sorts)");
    return 0;
  }
  std::string name = ts.expect_name("sort name");
  auto s = sig.sort_index(name);
  if (!s) ts.fail_at(t, "unknown sort '" + name + "'");
  return *s;
}

int expect_element(TokenStream& ts, const Structure& m, std::size_t sort) {
  Token t = ts.peek();
  std::string name = ts.expect_name("element name");
  auto e = m.find_element(sort, name);
  if (!e) ts.fail_at(t, "unknown element '" + name + "' of sort " + m.signature().sorts()[sort]);
  return *e;
}

Tuple parse_tuple(TokenStream& ts, const Structure& m, const std::vector<std::size_t>& sorts) {
  Tuple out;
  if (ts.accept("(")) {
    for (std::size_t i = 0; i < sorts.size(); ++i) {
      if (i) ts.expect(",");
      out.push_back(expect_element(ts, m, sorts[i]));
    }
    ts.expect(")");
    return out;
  }
  if (sorts.size() != 1) ts.fail("expected a parenthesised tuple");
  out.push_back(expect_element(ts, m, sorts[0]));
  return out;
}

const Structure* lookup(const std::vector<Structure>& a, const std::vector<Structure>& b, const std::string& name) {
  for (const auto& m : a)
    if (m.name == name) return &m;
  for (const auto& m : b)
    if (m.name == name) return &m;
  return nullptr;
}

NamedHom parse_hom(TokenStream& ts, const std::vector<Structure>& local, const std::vector<Structure>& known) {
  ts.expect_word("hom");
  NamedHom h;
  h.name = ts.expect_name("hom name");
  ts.expect(":");
  Token src_tok = ts.peek();
  h.source = ts.expect_name("source model");
  ts.expect("->");
  Token dst_tok = ts.peek();
  h.target = ts.expect_name("target model");
  const Structure* m = lookup(local, known, h.source);
  if (!m) ts.fail_at(src_tok, "unknown model '" + h.source + "'");
  const Structure* n = lookup(local, known, h.target);
  if (!n) ts.fail_at(dst_tok, "unknown model '" + h.target + "'");
  const Signature& sig = m->signature();
  h.hom.maps.resize(m->num_sorts());
  for (std::size_t s = 0; s < m->num_sorts(); ++s) h.hom.maps[s].assign(static_cast<std::size_t>(m->size(s)), -1);
  while (ts.accept_word("map")) {
    std::size_t s = expect_sort(ts, sig);
    ts.expect(":");
    while (!ts.accept(";")) {
      int a = expect_element(ts, *m, s);
      ts.expect("->");
      int b = expect_element(ts, *n, s);
      h.hom.maps[s][static_cast<std::size_t>(a)] = b;
    }
  }
  for (std::size_t s = 0; s < m->num_sorts(); ++s)
    for (int a = 0; a < m->size(s); ++a)
      if (h.hom.maps[s][static_cast<std::size_t>(a)] < 0)
        ts.fail("hom '" + h.name + "' does not map element '" + m->element_name(s, a) + "'");
  return h;
}

}  // namespace

Structure parse_model(TokenStream& ts, const Theory&, std::shared_ptr<const Signature> sig) {
  ts.expect_word("model");
  Structure m(sig, ts.expect_name("model name"));
  // The theory named in the header is informational; tables are checked against sig.
  if (ts.accept_word("of")) ts.expect_name("theory name");
  while (true) {
    if (ts.accept_word("carrier")) {
      std::size_t s = expect_sort(ts, *sig);
      ts.expect(":");
      std::vector<std::string> names;
      while (!ts.accept(";")) {
        Token t = ts.peek();
        names.push_back(ts.expect_name("element name"));
        if (m.find_element(s, names.back())) ts.fail_at(t, "duplicate element '" + names.back() + "'");
      }
      m.add_elements(s, std::move(names));
    } else if (ts.peek().is_word("fun")) {
      ts.next();
      Token ft = ts.peek();
      std::string name = ts.expect_name("function name");
      auto f = sig->function_index(name);
      if (!f) ts.fail_at(ft, "unknown function symbol '" + name + "'");
      ts.expect(":");
      while (!ts.accept(";")) {
        Token at = ts.peek();
        Tuple args = parse_tuple(ts, m, m.fun_arg_sorts(*f));
        ts.expect("->");
        int v = expect_element(ts, m, m.fun_result_sort(*f));
        int old = m.fun(*f, args);
        if (old >= 0 && old != v) ts.fail_at(at, "function '" + name + "' given two values at the same arguments");
        m.set_fun(*f, args, v);
      }
    } else if (ts.peek().is_word("rel")) {
      ts.next();
      Token rt = ts.peek();
      std::string name = ts.expect_name("relation name");
      auto r = sig->relation_index(name);
      if (!r) ts.fail_at(rt, "unknown relation symbol '" + name + "'");
      ts.expect(":");
      while (!ts.accept(";")) m.set_rel(*r, parse_tuple(ts, m, m.rel_arg_sorts(*r)));
    } else {
      break;
    }
  }
  return m;
}

ModelDocument parse_model_document(const Theory& theory, std::string_view text, const std::vector<Structure>& known) {
  auto sig = share_signature(theory);
  TokenStream ts(text);
  ModelDocument doc;
  while (!ts.at_end()) {
    if (ts.peek().is_word("model")) {
      doc.models.push_back(parse_model(ts, theory, sig));
    } else if (ts.peek().is_word("hom")) {
      doc.homs.push_back(parse_hom(ts, doc.models, known));
    } else {
      ts.fail("expected 'model' or 'hom'");
    }
  }
  return doc;
}

Structure parse_model(const Theory& theory, std::string_view text) {
  ModelDocument doc = parse_model_document(theory, text);
  if (doc.models.size() != 1 || !doc.homs.empty()) throw ParseError({}, "expected exactly one model");
  return std::move(doc.models.front());
}

std::string print_tuple(const Structure& m, const std::vector<std::size_t>& sorts, const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += quote_name(m.element_name(sorts[i], t[i]));
  }
  return out + ")";
}

std::string print_model(const Structure& m, const std::string& theory_name) {
  const Signature& sig = m.signature();
  std::string out = "model " + quote_name(m.name.empty() ? "M" : m.name);
  if (!theory_name.empty()) out += " of " + quote_name(theory_name);
  out += "\n";
  for (std::size_t s = 0; s < m.num_sorts(); ++s) {
    out += "carrier " + quote_name(sig.sorts()[s]) + ":";
    for (int e = 0; e < m.size(s); ++e) out += " " + quote_name(m.element_name(s, e));
    out += ";\n";
  }
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const auto& table = m.fun_table(f);
    for (std::size_t k = 0; k < table.size(); ++k) {
      if (table[k] < 0) continue;
      out += "fun " + quote_name(sig.functions()[f].name) + ": " +
             print_tuple(m, m.fun_arg_sorts(f), m.decode_fun_args(f, k)) + " -> " +
             quote_name(m.element_name(m.fun_result_sort(f), table[k])) + ";\n";
    }
  }
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const auto& table = m.rel_table(r);
    bool any = false;
    std::string line = "rel " + quote_name(sig.relations()[r].name) + ":";
    for (std::size_t k = 0; k < table.size(); ++k) {
      if (!table[k]) continue;
      any = true;
      line += " " + print_tuple(m, m.rel_arg_sorts(r), m.decode_rel_args(r, k));
    }
    if (any) out += line + ";\n";
  }
  return out;
}

std::string print_hom(const std::string& name, const Structure& m, const Structure& n, const Homomorphism& h) {
  std::string out = "hom " + quote_name(name) + " : " + quote_name(m.name) + " -> " + quote_name(n.name) + "\n";
  const Signature& sig = m.signature();
  for (std::size_t s = 0; s < m.num_sorts(); ++s) {
    out += "map " + quote_name(sig.sorts()[s]) + ":";
    for (int a = 0; a < m.size(s); ++a)
      out += " " + quote_name(m.element_name(s, a)) + "->" + quote_name(n.element_name(s, h(s, a)));
    out += ";\n";
  }
  return out;
}

}  // namespace phl
