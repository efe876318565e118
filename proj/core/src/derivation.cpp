#include "phl/derivation.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "phl/lexer.hpp"
#include "phl/text.hpp"

namespace phl {

namespace {

constexpr std::array<std::pair<Rule, const char*>, 11> kRuleNames{{
    {Rule::Axiom, "Axiom"},
    {Rule::Id, "Id"},
    {Rule::Cut, "Cut"},
    {Rule::Subst, "Subst"},
    {Rule::Refl, "Refl"},
    {Rule::Eq, "Eq"},
    {Rule::SRel, "SRel"},
    {Rule::SEq, "SEq"},
    {Rule::SFun, "SFun"},
    {Rule::EConj, "EConj"},
    {Rule::IConj, "IConj"},
}};

[[noreturn]] void fail(Rule r, const std::string& msg) { throw RuleError(to_string(r) + ": " + msg); }

void require_wf(Rule r, std::vector<Diagnostic> diags) {
  if (!diags.empty()) fail(r, diags.front().message);
}

const Context& need_context(const RuleInstance& in) {
  if (!in.context) fail(in.rule, "missing context");
  return *in.context;
}

const Formula& need_formula(const RuleInstance& in) {
  if (!in.formula) fail(in.rule, "missing formula");
  return *in.formula;
}

std::vector<Formula> top_parts(const Formula& f) {
  if (f.kind() == Formula::Kind::Conj) return f.parts();
  if (f.is_truth()) return {};
  return {f};
}

}  // namespace

std::string to_string(Rule r) {
  for (const auto& [rule, name] : kRuleNames)
    if (rule == r) return name;
  return "?";
}

std::optional<Rule> rule_from_string(std::string_view s) {
  for (const auto& [rule, name] : kRuleNames)
    if (s == name) return rule;
  return std::nullopt;
}

int rule_arity(Rule r) {
  switch (r) {
    case Rule::Cut: return 2;
    case Rule::Subst: return 1;
    case Rule::IConj: return -1;
    default: return 0;
  }
}

Sequent check_rule(const Theory& theory, const RuleInstance& in, const std::vector<Sequent>& premises) {
  const Signature& sig = theory.signature;
  int arity = rule_arity(in.rule);
  if (arity >= 0 && premises.size() != static_cast<std::size_t>(arity))
    fail(in.rule, "expected " + std::to_string(arity) + " premise(s), got " + std::to_string(premises.size()));

  switch (in.rule) {
    case Rule::Axiom: {
      const Axiom* ax = theory.find_axiom(in.axiom);
      if (!ax) fail(in.rule, "no axiom named '" + in.axiom + "'");
      return ax->sequent;
    }
    case Rule::Id: {
      const Context& ctx = need_context(in);
      const Formula& phi = need_formula(in);
      require_wf(in.rule, well_formed(sig, ctx, phi));
      return {ctx, phi, phi};
    }
    case Rule::Cut: {
      const Sequent& a = premises[0];
      const Sequent& b = premises[1];
      if (!(a.context == b.context))
        fail(in.rule, "premises have different contexts " + print(a.context) + " and " + print(b.context));
      if (!same_modulo_nesting(a.conclusion, b.premise))
        fail(in.rule, "cut formula mismatch: '" + print(a.conclusion) + "' vs '" + print(b.premise) + "'");
      return {a.context, a.premise, b.conclusion};
    }
    case Rule::Subst: {
      const Sequent& p = premises[0];
      const Context& target = need_context(in);
      require_wf(in.rule, well_formed(sig, target));
      for (const auto& [name, term] : in.subst)
        if (!p.context.contains(name)) fail(in.rule, "'" + name + "' is not a variable of the premise context");
      std::vector<Formula> parts;
      Formula premise, conclusion;
      try {
        premise = substitute(sig, p.premise, p.context, in.subst, target);
        conclusion = substitute(sig, p.conclusion, p.context, in.subst, target);
        parts.push_back(premise);
        for (const Variable& v : p.context.vars()) {
          Term t = substitute(sig, Term::var(v.name), p.context, in.subst, target);
          parts.push_back(Formula::defined(std::move(t)));
        }
      } catch (const SortError& e) {
        fail(in.rule, e.what());
      }
      return {target, Formula::conj(std::move(parts)), conclusion};
    }
    case Rule::Refl: {
      const Context& ctx = need_context(in);
      if (in.index >= ctx.size()) fail(in.rule, "variable index " + std::to_string(in.index) + " out of range");
      return {ctx, Formula::truth(), Formula::defined(Term::var(ctx[in.index].name))};
    }
    case Rule::Eq: {
      const Context& z = need_context(in);
      const Formula& phi = need_formula(in);
      require_wf(in.rule, well_formed(sig, z));
      if (in.xs.size() != in.ys.size()) fail(in.rule, "variable lists have different lengths");
      std::set<std::string> seen_x, seen_y;
      Substitution rename;
      std::vector<Formula> parts{phi};
      for (std::size_t i = 0; i < in.xs.size(); ++i) {
        const std::string* sx = z.sort_of(in.xs[i]);
        const std::string* sy = z.sort_of(in.ys[i]);
        if (!sx) fail(in.rule, "'" + in.xs[i] + "' is not in the context");
        if (!sy) fail(in.rule, "'" + in.ys[i] + "' is not in the context");
        if (*sx != *sy) fail(in.rule, "'" + in.xs[i] + "' and '" + in.ys[i] + "' have different sorts");
        if (!seen_x.insert(in.xs[i]).second || !seen_y.insert(in.ys[i]).second)
          fail(in.rule, "repeated variable in a variable list");
        rename[in.xs[i]] = Term::var(in.ys[i]);
        parts.push_back(Formula::eq(Term::var(in.xs[i]), Term::var(in.ys[i])));
      }
      // φ may mention context variables outside x⃗; they are left in place.
      require_wf(in.rule, well_formed(sig, z, phi));
      return {z, Formula::conj(std::move(parts)), phl::apply(rename, phi)};
    }
    case Rule::SRel: {
      const Context& ctx = need_context(in);
      const Formula& f = need_formula(in);
      if (f.kind() != Formula::Kind::Rel) fail(in.rule, "premise is not a relation atom");
      require_wf(in.rule, well_formed(sig, ctx, f));
      if (in.index >= f.terms().size()) fail(in.rule, "argument index out of range");
      return {ctx, f, Formula::defined(f.terms()[in.index])};
    }
    case Rule::SEq: {
      const Context& ctx = need_context(in);
      const Formula& f = need_formula(in);
      if (f.kind() != Formula::Kind::Eq) fail(in.rule, "premise is not an equation");
      require_wf(in.rule, well_formed(sig, ctx, f));
      return {ctx, f, Formula::defined(in.right ? f.rhs() : f.lhs())};
    }
    case Rule::SFun: {
      const Context& ctx = need_context(in);
      const Formula& f = need_formula(in);
      if (f.kind() != Formula::Kind::Eq || f.lhs() != f.rhs() || f.lhs().is_var())
        fail(in.rule, "premise is not the definedness of an application");
      require_wf(in.rule, well_formed(sig, ctx, f));
      if (in.index >= f.lhs().args().size()) fail(in.rule, "argument index out of range");
      return {ctx, f, Formula::defined(f.lhs().args()[in.index])};
    }
    case Rule::EConj: {
      const Context& ctx = need_context(in);
      const Formula& f = need_formula(in);
      require_wf(in.rule, well_formed(sig, ctx, f));
      std::vector<Formula> parts = top_parts(f);
      if (in.index >= parts.size()) fail(in.rule, "conjunct index out of range");
      return {ctx, f, parts[in.index]};
    }
    case Rule::IConj: {
      if (premises.empty()) {
        const Context& ctx = need_context(in);
        const Formula& phi = need_formula(in);
        require_wf(in.rule, well_formed(sig, ctx, phi));
        return {ctx, phi, Formula::truth()};
      }
      std::vector<Formula> parts;
      for (const Sequent& p : premises) {
        if (!(p.context == premises[0].context)) fail(in.rule, "premises have different contexts");
        if (!same_modulo_nesting(p.premise, premises[0].premise))
          fail(in.rule, "premises have different antecedents: '" + print(premises[0].premise) + "' vs '" +
                            print(p.premise) + "'");
        parts.push_back(p.conclusion);
      }
      return {premises[0].context, premises[0].premise, Formula::conj(std::move(parts))};
    }
  }
  fail(in.rule, "unknown rule");
}

std::size_t Derivation::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::size_t Derivation::height() const {
  std::size_t h = 0;
  for (const auto& c : children) h = std::max(h, c.height());
  return h + 1;
}

RuleInstance complete_instance(RuleInstance in, const Sequent& root) {
  if (!in.context) in.context = root.context;
  if (!in.formula) {
    switch (in.rule) {
      case Rule::Eq: {
        std::vector<Formula> as = atoms(root.premise);
        std::size_t keep = as.size() >= in.xs.size() ? as.size() - in.xs.size() : 0;
        as.resize(keep);
        in.formula = Formula::conj(std::move(as));
        break;
      }
      case Rule::Id:
      case Rule::SRel:
      case Rule::SEq:
      case Rule::SFun:
      case Rule::EConj:
      case Rule::IConj:
        in.formula = root.premise;
        break;
      default:
        break;
    }
  }
  return in;
}

bool same_sequent(const Sequent& a, const Sequent& b) {
  return a.context == b.context && same_modulo_nesting(a.premise, b.premise) &&
         same_modulo_nesting(a.conclusion, b.conclusion);
}

bool alpha_equivalent(const Sequent& a, const Sequent& b) {
  if (a.context.sorts() != b.context.sorts()) return false;
  return same_sequent(alpha_normalize(a), alpha_normalize(b));
}

namespace {

bool check_node(const Theory& theory, const Derivation& d, DerivationCheck& out) {
  std::vector<Diagnostic> diags = well_formed(theory.signature, d.root);
  if (!diags.empty()) {
    out.ok = false;
    out.reason = "ill-formed sequent: " + diags.front().message;
    return false;
  }
  std::vector<Sequent> premises;
  for (const auto& c : d.children) premises.push_back(c.root);
  try {
    Sequent got = check_rule(theory, complete_instance(d.rule, d.root), premises);
    bool match = d.rule.rule == Rule::Axiom ? alpha_equivalent(got, d.root) : same_sequent(got, d.root);
    if (!match) {
      out.ok = false;
      out.reason = to_string(d.rule.rule) + " yields '" + print(got) + "', not '" + print(d.root) + "'";
      return false;
    }
  } catch (const RuleError& e) {
    out.ok = false;
    out.reason = e.what();
    return false;
  }
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    out.path.push_back(i);
    if (!check_node(theory, d.children[i], out)) return false;
    out.path.pop_back();
  }
  return true;
}

}  // namespace

DerivationCheck check_derivation(const Theory& theory, const Derivation& d) {
  DerivationCheck out;
  check_node(theory, d, out);
  return out;
}

Theory DerivationFile::theory_with_hypotheses(const Theory& base) const {
  Theory t = base;
  for (const Axiom& h : hypotheses) t.axioms.push_back(h);
  return t;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t parse_index(TokenStream& ts) {
  Token t = ts.next();
  if (t.kind != Token::Kind::Ident || t.text.empty() ||
      !std::all_of(t.text.begin(), t.text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    ts.fail_at(t, "expected an index, found '" + t.text + "'");
  return static_cast<std::size_t>(std::stoul(t.text));
}

void parse_rule_data(TokenStream& ts, const Signature& sig, const Sequent& root, RuleInstance& in) {
  bool has_data = ts.accept("{");
  switch (in.rule) {
    case Rule::Axiom:
      if (!has_data) ts.fail("Axiom needs {name}");
      in.axiom = ts.expect_name("axiom name");
      break;
    case Rule::Subst:
      if (!has_data) ts.fail("Subst needs {x := t, ...}");
      while (!ts.peek().is("}")) {
        std::string x = ts.expect_name("variable");
        ts.expect(":=");
        in.subst[x] = parse_term(ts, sig, root.context);
        if (!ts.accept(",")) break;
      }
      break;
    case Rule::Eq:
      if (!has_data) ts.fail("Eq needs {x.. -> y..}");
      while (!ts.peek().is("->")) in.xs.push_back(ts.expect_name("variable"));
      ts.expect("->");
      while (!ts.peek().is("}")) in.ys.push_back(ts.expect_name("variable"));
      break;
    case Rule::Refl:
      if (has_data) {
        if (ts.peek().kind == Token::Kind::Ident && root.context.contains(ts.peek().text))
          in.index = *root.context.index_of(ts.next().text);
        else
          in.index = parse_index(ts);
      } else {
        const Formula& c = root.conclusion;
        if (c.kind() == Formula::Kind::Eq && c.lhs() == c.rhs() && c.lhs().is_var())
          if (auto i = root.context.index_of(c.lhs().name())) in.index = *i;
      }
      break;
    case Rule::SRel:
    case Rule::SFun:
    case Rule::EConj:
      if (has_data) in.index = parse_index(ts);
      break;
    case Rule::SEq:
      if (has_data) {
        if (ts.accept_word("right"))
          in.right = true;
        else
          ts.expect_word("left");
      }
      break;
    default:
      break;
  }
  if (has_data) ts.expect("}");
}

struct Line {
  std::size_t indent;
  int number;
  std::string text;
};

}  // namespace

DerivationFile parse_derivation(const Theory& theory, std::string_view text) {
  DerivationFile file;
  std::vector<Line> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      std::size_t indent = raw.find_first_not_of(" \t");
      if (indent == std::string::npos) continue;
      if (raw[indent] == '#' || raw.compare(indent, 2, "//") == 0) continue;
      lines.push_back({indent, number, raw});
    }
  }

  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    TokenStream ts(lines[i].text, lines[i].number);
    if (ts.accept_word("derivation")) {
      file.name = ts.expect_name("derivation name");
      ts.accept(";");
      ts.expect_end();
    } else if (ts.accept_word("hypothesis")) {
      Axiom h;
      h.span = ts.peek().span;
      h.name = ts.expect_name("hypothesis name");
      h.sequent = parse_sequent(ts, theory.signature);
      ts.accept(";");
      ts.expect_end();
      require_well_formed(well_formed(theory.signature, h.sequent));
      file.hypotheses.push_back(h);
    } else {
      break;
    }
  }
  if (i == lines.size()) throw ParseError({}, "derivation has no nodes");

  struct Open {
    std::size_t indent;
    Derivation* node;
  };
  std::vector<Open> stack;
  bool have_root = false;
  for (; i < lines.size(); ++i) {
    const Line& line = lines[i];
    TokenStream ts(line.text, line.number);
    Derivation node;
    node.root = parse_sequent(ts, theory.signature);
    ts.expect("[");
    ts.expect_word("rule");
    Token rname = ts.next();
    auto rule = rule_from_string(rname.text);
    if (!rule) ts.fail_at(rname, "unknown rule '" + rname.text + "'");
    node.rule.rule = *rule;
    parse_rule_data(ts, theory.signature, node.root, node.rule);
    ts.expect("]");
    ts.expect_end();

    while (!stack.empty() && stack.back().indent >= line.indent) stack.pop_back();
    if (stack.empty()) {
      if (have_root) throw ParseError({line.number, static_cast<int>(line.indent) + 1}, "second root node");
      file.derivation = std::move(node);
      have_root = true;
      stack.push_back({line.indent, &file.derivation});
    } else {
      Derivation* parent = stack.back().node;
      parent->children.push_back(std::move(node));
      stack.push_back({line.indent, &parent->children.back()});
    }
  }
  return file;
}

namespace {

void print_node(std::ostringstream& out, const Derivation& d, std::size_t depth) {
  out << std::string(depth * 2, ' ') << print(d.root) << "  [rule " << to_string(d.rule.rule);
  const RuleInstance& in = d.rule;
  switch (in.rule) {
    case Rule::Axiom: out << " {" << quote_name(in.axiom) << "}"; break;
    case Rule::Subst: out << " {" << print(in.subst) << "}"; break;
    case Rule::Eq: {
      out << " {";
      for (const auto& x : in.xs) out << x << " ";
      out << "->";
      for (const auto& y : in.ys) out << " " << y;
      out << "}";
      break;
    }
    case Rule::Refl:
    case Rule::SRel:
    case Rule::SFun:
    case Rule::EConj: out << " {" << in.index << "}"; break;
    case Rule::SEq: out << (in.right ? " {right}" : " {left}"); break;
    default: break;
  }
  out << "]\n";
  for (const auto& c : d.children) print_node(out, c, depth + 1);
}

}  // namespace

std::string print_derivation(const Derivation& d, const std::string& name, const std::vector<Axiom>& hypotheses) {
  std::ostringstream out;
  if (!name.empty()) out << "derivation " << quote_name(name) << "\n";
  for (const Axiom& h : hypotheses) out << "hypothesis " << quote_name(h.name) << " " << print(h.sequent) << ";\n";
  print_node(out, d, 0);
  return out.str();
}

}  // namespace phl
