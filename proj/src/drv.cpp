#include "lightfield/drv.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "lightfield/syntax.hpp"

namespace lightfield {

std::string SExpr::head() const {
  if (kind != Kind::List || items.empty() || items[0].kind != Kind::Symbol) return "";
  return items[0].text;
}

SExprError::SExprError(const std::string& msg, std::size_t line)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

ElaborationError::ElaborationError(std::size_t line, std::string form, std::string condition)
    : std::runtime_error("line " + std::to_string(line) + " (" + form + "): " + condition),
      line_(line),
      form_(std::move(form)),
      condition_(std::move(condition)) {}

std::vector<SExpr> parse_sexprs(std::string_view text) {
  std::size_t i = 0, line = 1;
  std::vector<std::vector<SExpr>> stack(1);
  std::vector<std::size_t> open_lines;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      stack.emplace_back();
      open_lines.push_back(line);
      ++i;
    } else if (c == ')') {
      if (stack.size() == 1) throw SExprError("unbalanced ')'", line);
      SExpr l;
      l.kind = SExpr::Kind::List;
      l.items = std::move(stack.back());
      l.line = open_lines.back();
      stack.pop_back();
      open_lines.pop_back();
      stack.back().push_back(std::move(l));
      ++i;
    } else if (c == '"') {
      SExpr s;
      s.kind = SExpr::Kind::String;
      s.line = line;
      ++i;
      while (true) {
        if (i >= text.size()) throw SExprError("unterminated string", s.line);
        const char d = text[i++];
        if (d == '"') break;
        if (d == '\n') ++line;
        if (d == '\\') {
          if (i >= text.size()) throw SExprError("unterminated string", s.line);
          s.text += text[i++];
        } else {
          s.text += d;
        }
      }
      stack.back().push_back(std::move(s));
    } else {
      SExpr s;
      s.line = line;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' &&
             text[i] != ')' && text[i] != '"' && text[i] != ';')
        s.text += text[i++];
      stack.back().push_back(std::move(s));
    }
  }
  if (stack.size() != 1) throw SExprError("unbalanced '('", open_lines.back());
  return std::move(stack[0]);
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

const SExpr& expect_string(const SExpr& e, const char* what) {
  if (e.kind != SExpr::Kind::String) throw SExprError(std::string("expected a string for ") + what, e.line);
  return e;
}

const std::string& expect_symbol(const SExpr& e, const char* what) {
  if (e.kind != SExpr::Kind::Symbol) throw SExprError(std::string("expected a name for ") + what, e.line);
  return e.text;
}

std::vector<std::string> symbol_list(const SExpr& e, const char* what) {
  if (!e.is_list()) throw SExprError(std::string("expected a list for ") + what, e.line);
  std::vector<std::string> out;
  for (const auto& x : e.items) out.push_back(expect_symbol(x, what));
  return out;
}

TypeExpr read_type(const SExpr& e, const TypeAliases& aliases) {
  try {
    return parse_type(expect_string(e, "a type").text, &aliases);
  } catch (const std::invalid_argument& ex) {
    throw SExprError(std::string("bad type: ") + ex.what(), e.line);
  }
}

bool is_keyword(const SExpr& e) { return e.kind == SExpr::Kind::Symbol && e.text.size() > 1 && e.text[0] == ':'; }

}  // namespace

DrvFile parse_drv(std::string_view text) {
  DrvFile f;
  bool have_body = false;
  for (const auto& form : parse_sexprs(text)) {
    if (form.head() == "alias") {
      if (form.items.size() != 3) throw SExprError("alias takes a name and a type", form.line);
      const auto& n = expect_symbol(form.items[1], "alias");
      f.aliases.insert_or_assign(n, read_type(form.items[2], f.aliases));
      continue;
    }
    if (have_body) throw SExprError("only one derivation per file", form.line);
    have_body = true;
    if (form.head() == "certificate") {
      if (form.items.size() != 5 || !form.items[2].is_symbol(":type"))
        throw SExprError("expected (certificate NAME :type \"T\" BODY)", form.line);
      f.name = expect_symbol(form.items[1], "certificate");
      f.claimed = read_type(form.items[3], f.aliases);
      f.body = form.items[4];
    } else {
      f.body = form;
    }
  }
  if (!have_body) throw SExprError("no derivation found", 1);
  return f;
}

bool is_explicit(const SExpr& body) { return body.head() == "rule"; }

Derivation read_explicit(const SExpr& body, const TypeAliases& aliases) {
  if (body.head() != "rule" || body.items.size() < 2) throw SExprError("expected (rule NAME ...)", body.line);
  Derivation d;
  const auto& rn = expect_symbol(body.items[1], "rule");
  auto r = rule_from_name(rn);
  if (!r) throw SExprError("unknown rule " + rn, body.line);
  d.rule = *r;
  for (std::size_t i = 2; i < body.items.size(); ++i) {
    const SExpr& e = body.items[i];
    if (!is_keyword(e)) {
      if (is_explicit(e)) {
        d.premises.push_back(read_explicit(e, aliases));
        continue;
      }
      throw SExprError("expected a keyword or a (rule ...) premise", e.line);
    }
    if (i + 1 >= body.items.size()) throw SExprError(e.text + " needs a value", e.line);
    const SExpr& v = body.items[++i];
    const std::string& k = e.text;
    if (k == ":concl") {
      try {
        d.concl = parse_judgment(expect_string(v, ":concl").text, &aliases);
      } catch (const SExprError&) {
        throw;
      } catch (const std::exception& ex) {
        throw SExprError(std::string("bad conclusion: ") + ex.what(), v.line);
      }
    } else if (k == ":var") {
      d.witness.vars = {expect_symbol(v, ":var")};
    } else if (k == ":vars") {
      d.witness.vars = symbol_list(v, ":vars");
    } else if (k == ":into") {
      d.witness.into = expect_symbol(v, ":into");
    } else if (k == ":inst") {
      d.witness.inst = read_type(v, aliases);
    } else if (k == ":alpha") {
      d.witness.alpha = expect_symbol(v, ":alpha");
    } else if (k == ":split") {
      if (!v.is_list()) throw SExprError("expected a list of lists for :split", v.line);
      std::vector<std::vector<std::string>> parts;
      for (const auto& p : v.items) parts.push_back(symbol_list(p, ":split"));
      d.witness.split = std::move(parts);
    } else if (k == ":gamma") {
      d.witness.to_gamma = symbol_list(v, ":gamma");
    } else if (k == ":depth") {
      const auto& s = expect_symbol(v, ":depth");
      if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit)) throw SExprError("bad depth", v.line);
      d.witness.depth = std::stoul(s);
    } else if (k == ":minor") {
      const auto& s = expect_symbol(v, ":minor");
      if (s != "exp" && s != "lin") throw SExprError(":minor is exp or lin", v.line);
      d.witness.minor_exp = s == "exp";
    } else {
      throw SExprError("unknown keyword " + k, e.line);
    }
  }
  return d;
}

namespace {

void print_node(const Derivation& d, std::size_t indent, std::string& out) {
  out += std::string(indent, ' ') + "(rule " + rule_name(d.rule);
  const auto& w = d.witness;
  auto list = [](const std::vector<std::string>& xs) {
    std::string s = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + xs[i];
    return s + ")";
  };
  if (w.vars.size() == 1 && d.rule != Rule::TupleAbs && d.rule != Rule::Contr) out += " :var " + w.vars[0];
  else if (!w.vars.empty()) out += " :vars " + list(w.vars);
  if (w.into) out += " :into " + *w.into;
  if (w.inst) out += " :inst " + quote(print_type(*w.inst));
  if (w.alpha) out += " :alpha " + *w.alpha;
  if (w.split) {
    out += " :split (";
    for (std::size_t i = 0; i < w.split->size(); ++i) out += (i ? " " : "") + list((*w.split)[i]);
    out += ")";
  }
  if (d.rule == Rule::ParaIntro) out += " :gamma " + list(w.to_gamma);
  if (w.depth) out += " :depth " + std::to_string(*w.depth);
  if (w.minor_exp) out += " :minor exp";
  if (d.concl) out += "\n" + std::string(indent + 2, ' ') + ":concl " + quote(print_judgment(*d.concl));
  for (const auto& p : d.premises) {
    out += "\n";
    print_node(p, indent + 2, out);
  }
  out += ")";
}

}  // namespace

std::string print_derivation(const Derivation& d) {
  std::string out;
  print_node(d, 0, out);
  return out + "\n";
}

namespace {

// ---- elaboration ----

struct Avail {
  TypingMap gamma;
  TypingMap delta;
  /// Exponential assumptions that may be copied, each use getting a fresh name.
  TypingMap copyable;
};

bool teq(const TypeExpr& a, const TypeExpr& b) { return type_eq(a, b, 0); }

std::optional<std::vector<TypeExpr>> tuple_parts(const TypeExpr& t, std::size_t n) {
  if (!t.is(TypeKind::ForAll)) return std::nullopt;
  const std::string& a = t.name();
  const TypeExpr& b = t.body();
  if (!b.is(TypeKind::Lin) || !b.right().is(TypeKind::Var) || b.right().name() != a) return std::nullopt;
  std::vector<TypeExpr> parts;
  TypeExpr k = b.left();
  while (k.is(TypeKind::Lin)) {
    parts.push_back(k.left());
    k = k.right();
  }
  if (!k.is(TypeKind::Var) || k.name() != a || parts.size() != n) return std::nullopt;
  for (const auto& p : parts)
    if (p.free_vars().count(a)) return std::nullopt;
  return parts;
}

std::set<std::string> type_vars_of(const Avail& av) {
  std::set<std::string> out;
  for (const auto* m : {&av.gamma, &av.delta, &av.copyable})
    for (const auto& kv : *m) {
      auto fv = kv.second.free_vars();
      out.insert(fv.begin(), fv.end());
    }
  return out;
}

class Elaborator {
 public:
  Elaborator(const LemmaTable& lemmas, const TypeAliases& aliases) : lemmas_(lemmas), aliases_(aliases) {}

  Derivation go(const SExpr& e, const Avail& av, const std::optional<TypeExpr>& goal) {
    if (e.kind == SExpr::Kind::Symbol) return conform(symbol(e, av), goal, e);
    if (e.kind == SExpr::Kind::String) fail(e, "string", "unexpected string");
    const std::string h = e.head();
    if (h == "lam") return lam(e, av, goal);
    if (h == "tlam") return tlam(e, av, goal);
    if (h == "tup") return tup(e, av, goal);
    if (h == "box") return box(e, av, goal);
    if (h == "gen") return gen(e, av, goal);
    if (h == "ap" || h == "ap!") return conform(ap(e, av), goal, e);
    if (h == "inst") return conform(inst(e, av), goal, e);
    if (h == "cut") return cut(e, av, goal);
    if (h == "the") {
      need(e, 3);
      return conform(go(e.items[2], av, type(e.items[1])), goal, e);
    }
    if (h == "lift") return conform(lift_form(e, av), goal, e);
    if (h == "rule") fail(e, h, "explicit nodes cannot appear inside a script");
    fail(e, h.empty() ? "list" : h, "unknown script form");
  }

 private:
  [[noreturn]] static void fail(const SExpr& e, const std::string& form, const std::string& why) {
    throw ElaborationError(e.line, form, why);
  }

  static void need(const SExpr& e, std::size_t n) {
    if (e.items.size() != n) fail(e, e.head(), "expects " + std::to_string(n - 1) + " argument(s)");
  }

  TypeExpr type(const SExpr& e) {
    try {
      return parse_type(expect_string(e, "a type").text, &aliases_);
    } catch (const std::exception& ex) {
      fail(e, "type", ex.what());
    }
  }

  std::string fresh(const std::string& base) {
    const auto cut = base.find("_c");
    const std::string stem = cut == std::string::npos ? base : base.substr(0, cut);
    return stem + "_c" + std::to_string(++counter_);
  }

  static const Judgment& J(const Derivation& d) { return *d.concl; }

  Derivation node(Rule r, Judgment j, std::vector<Derivation> premises = {}, Witness w = {}) {
    Derivation d;
    d.rule = r;
    d.concl = std::move(j);
    d.premises = std::move(premises);
    d.witness = std::move(w);
    return d;
  }

  static std::vector<std::string> names(const TypingContext& c) {
    std::vector<std::string> out;
    for (const auto& kv : c.gamma) out.push_back(kv.first);
    for (const auto& kv : c.delta) out.push_back(kv.first);
    std::sort(out.begin(), out.end());
    return out;
  }

  static Avail without_linear(const Avail& av, const Derivation& used) {
    Avail out = av;
    for (const auto& kv : J(used).ctx.delta) out.delta.erase(kv.first);
    return out;
  }

  // Renames exponential assumptions of `later` shared with `earlier`; the
  // returned pairs are contracted once both sit in one context.
  std::vector<std::pair<std::string, std::string>> separate(const std::vector<const Derivation*>& earlier,
                                                            Derivation& later) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::set<std::string> seen;
    for (const auto* d : earlier)
      for (const auto& kv : J(*d).ctx.gamma) seen.insert(kv.first);
    std::vector<std::string> shared;
    for (const auto& kv : J(later).ctx.gamma)
      if (seen.count(kv.first)) shared.push_back(kv.first);
    for (const auto& x : shared) {
      const std::string y = fresh(x);
      later = rename_var(later, x, y);
      pairs.emplace_back(x, y);
    }
    return pairs;
  }

  Derivation contract(Derivation d, const std::vector<std::pair<std::string, std::string>>& pairs) {
    for (const auto& [x, y] : pairs) {
      Judgment j = J(d);
      TypeExpr a = j.ctx.gamma.at(x);
      j.ctx.gamma.erase(x);
      j.ctx.gamma.erase(y);
      j.ctx.gamma.emplace(x, a);
      j.subject = substitute(j.subject, y, Term::free(x));
      Witness w;
      w.vars = {x, y};
      w.into = x;
      d = node(Rule::Contr, std::move(j), {std::move(d)}, std::move(w));
    }
    return d;
  }

  Derivation conform(Derivation d, const std::optional<TypeExpr>& goal, const SExpr& e) {
    if (!goal || teq(J(d).type, *goal)) return d;
    if (type_eq(J(d).type, *goal, 1)) {
      Judgment j = J(d);
      j.type = *goal;
      return node(goal->is(TypeKind::Seq) ? Rule::SeqFold : Rule::SeqUnfold, std::move(j), {std::move(d)});
    }
    fail(e, e.is_list() ? e.head() : e.text, "expected " + print_type(*goal) + ", found " + print_type(J(d).type));
  }

  Derivation symbol(const SExpr& e, const Avail& av) {
    const std::string& x = e.text;
    if (auto it = av.delta.find(x); it != av.delta.end()) {
      Judgment j{{{}, {{x, it->second}}}, Term::free(x), it->second};
      Witness w;
      w.vars = {x};
      return node(Rule::Ax, std::move(j), {}, std::move(w));
    }
    if (auto it = av.copyable.find(x); it != av.copyable.end()) {
      const std::string y = fresh(x);
      origin_[y] = x;
      Judgment j{{{}, {{y, it->second}}}, Term::free(y), it->second};
      Witness w;
      w.vars = {y};
      return node(Rule::Ax, std::move(j), {}, std::move(w));
    }
    if (av.gamma.count(x)) fail(e, x, "exponential assumption used outside a box or a !-argument");
    if (auto it = lemmas_.find(x); it != lemmas_.end()) {
      Witness w;
      w.vars = {x};
      return node(Rule::Lemma, Judgment{{}, Term::free(x), it->second.type}, {}, std::move(w));
    }
    fail(e, x, "unknown name, or a linear assumption already used");
  }

  void check_binder(const SExpr& e, const std::string& x, const Avail& av) {
    if (av.gamma.count(x) || av.delta.count(x) || av.copyable.count(x)) fail(e, x, "binder shadows an assumption");
    if (lemmas_.count(x)) fail(e, x, "binder shadows a certified constant");
  }

  // Generalizations and folds forced by the expected type of an introduction.
  template <class Body>
  Derivation intro(const SExpr& e, const Avail& av, const TypeExpr& goal, Body body) {
    if (goal.is(TypeKind::Seq)) {
      Derivation d = intro(e, av, seq_unfolding(), body);
      Judgment j = J(d);
      j.type = goal;
      return node(Rule::SeqFold, std::move(j), {std::move(d)});
    }
    if (goal.is(TypeKind::ForAll)) {
      const auto used = type_vars_of(av);
      std::string a = goal.name();
      TypeExpr inner = goal.body();
      if (used.count(a)) {
        auto avoid = used;
        auto fv = goal.free_vars();
        avoid.insert(fv.begin(), fv.end());
        a = fresh_type_var(a, avoid);
        inner = subst_type(inner, goal.name(), TypeExpr::var(a));
      }
      Derivation d = intro(e, av, inner, body);
      Judgment j = J(d);
      j.type = TypeExpr::forall(a, j.type);
      Witness w;
      w.alpha = a;
      return node(Rule::ForAllIntro, std::move(j), {std::move(d)}, std::move(w));
    }
    return body(goal);
  }

  Derivation weaken(Derivation d, const std::string& x, const TypeExpr& a, bool exponential) {
    const auto& c = J(d).ctx;
    if (c.gamma.count(x) || c.delta.count(x)) return d;
    Judgment j = J(d);
    (exponential ? j.ctx.gamma : j.ctx.delta).emplace(x, a);
    return node(Rule::Weak, std::move(j), {std::move(d)});
  }

  Derivation lam(const SExpr& e, const Avail& av, const std::optional<TypeExpr>& goal) {
    need(e, 3);
    struct Binder {
      std::string name;
      std::optional<TypeExpr> type;
    };
    std::vector<Binder> bs;
    const SExpr& spec = e.items[1];
    if (spec.kind == SExpr::Kind::Symbol) {
      bs.push_back({spec.text, std::nullopt});
    } else if (spec.is_list() && spec.items.size() == 2 && spec.items[1].kind == SExpr::Kind::String) {
      bs.push_back({expect_symbol(spec.items[0], "lam"), type(spec.items[1])});
    } else if (spec.is_list() && !spec.items.empty()) {
      for (const auto& b : spec.items) bs.push_back({expect_symbol(b, "lam"), std::nullopt});
    } else {
      fail(e, "lam", "bad binder list");
    }
    return lam_from(e, av, goal, bs, 0);
  }

  template <class Binder>
  Derivation lam_from(const SExpr& e, const Avail& av, const std::optional<TypeExpr>& goal, const std::vector<Binder>& bs,
                      std::size_t k) {
    if (k == bs.size()) return go(e.items[2], av, goal);
    const auto& b = bs[k];
    check_binder(e, b.name, av);
    auto build = [&](const TypeExpr& g) -> Derivation {
      if (!g.is_arrow()) fail(e, "lam", "expected type " + print_type(g) + " is not an arrow");
      const bool bang = g.is(TypeKind::Bang);
      if (b.type && !teq(*b.type, g.left())) fail(e, "lam", "stated domain differs from " + print_type(g.left()));
      Avail inner = av;
      (bang ? inner.gamma : inner.delta).emplace(b.name, g.left());
      Derivation d = weaken(lam_from(e, inner, g.right(), bs, k + 1), b.name, g.left(), bang);
      Judgment j = J(d);
      (bang ? j.ctx.gamma : j.ctx.delta).erase(b.name);
      j.subject = Term::abs(b.name, j.subject);
      j.type = bang ? TypeExpr::bang(g.left(), j.type) : TypeExpr::lin(g.left(), j.type);
      Witness w;
      w.vars = {b.name};
      return node(bang ? Rule::BangAbs : Rule::LinAbs, std::move(j), {std::move(d)}, std::move(w));
    };
    if (goal) return intro(e, av, *goal, build);
    if (!b.type) fail(e, "lam", "binder " + b.name + " needs a stated type here");
    Avail inner = av;
    inner.delta.emplace(b.name, *b.type);
    Derivation d = weaken(lam_from(e, inner, std::nullopt, bs, k + 1), b.name, *b.type, false);
    Judgment j = J(d);
    j.ctx.delta.erase(b.name);
    j.subject = Term::abs(b.name, j.subject);
    j.type = TypeExpr::lin(*b.type, j.type);
    Witness w;
    w.vars = {b.name};
    return node(Rule::LinAbs, std::move(j), {std::move(d)}, std::move(w));
  }

  Derivation tlam(const SExpr& e, const Avail& av, const std::optional<TypeExpr>& goal) {
    need(e, 3);
    const auto xs = symbol_list(e.items[1], "tlam");
    if (xs.size() < 2) fail(e, "tlam", "needs at least two binders");
    if (!goal) fail(e, "tlam", "needs an expected type");
    for (const auto& x : xs) check_binder(e, x, av);
    return intro(e, av, *goal, [&](const TypeExpr& g) {
      if (!g.is(TypeKind::Lin)) fail(e, "tlam", "expected type " + print_type(g) + " is not a linear arrow");
      auto parts = tuple_parts(g.left(), xs.size());
      if (!parts) fail(e, "tlam", print_type(g.left()) + " is not a " + std::to_string(xs.size()) + "-tuple type");
      Avail inner = av;
      for (std::size_t i = 0; i < xs.size(); ++i) inner.delta.emplace(xs[i], (*parts)[i]);
      Derivation d = go(e.items[2], inner, g.right());
      for (std::size_t i = 0; i < xs.size(); ++i) d = weaken(std::move(d), xs[i], (*parts)[i], false);
      Judgment j = J(d);
      for (const auto& x : xs) j.ctx.delta.erase(x);
      j.subject = Term::destr(xs, j.subject);
      j.type = TypeExpr::lin(tuple_type(*parts), j.type);
      Witness w;
      w.vars = xs;
      return node(Rule::TupleAbs, std::move(j), {std::move(d)}, std::move(w));
    });
  }

  Derivation tup(const SExpr& e, const Avail& av, const std::optional<TypeExpr>& goal) {
    const std::size_t n = e.items.size() - 1;
    if (n < 2) fail(e, "tup", "needs at least two components");
    auto build = [&](const std::optional<std::vector<TypeExpr>>& parts) {
      std::vector<Derivation> ds;
      std::vector<std::pair<std::string, std::string>> pairs;
      Avail cur = av;
      for (std::size_t i = 0; i < n; ++i) {
        Derivation d = go(e.items[i + 1], cur, parts ? std::optional<TypeExpr>((*parts)[i]) : std::nullopt);
        cur = without_linear(cur, d);
        std::vector<const Derivation*> before;
        for (const auto& p : ds) before.push_back(&p);
        auto more = separate(before, d);
        pairs.insert(pairs.end(), more.begin(), more.end());
        ds.push_back(std::move(d));
      }
      Judgment j;
      std::vector<Term> items;
      std::vector<TypeExpr> types;
      Witness w;
      w.split.emplace();
      for (const auto& d : ds) {
        for (const auto& kv : J(d).ctx.gamma) j.ctx.gamma.insert(kv);
        for (const auto& kv : J(d).ctx.delta) j.ctx.delta.insert(kv);
        items.push_back(J(d).subject);
        types.push_back(J(d).type);
        w.split->push_back(names(J(d).ctx));
      }
      j.subject = Term::tuple(items);
      j.type = parts ? tuple_type(*parts) : tuple_type(types);
      return contract(node(Rule::TupleIntro, std::move(j), std::move(ds), std::move(w)), pairs);
    };
    if (!goal) return build(std::nullopt);
    if (auto parts = tuple_parts(*goal, n)) return conform(build(parts), goal, e);
    return intro(e, av, *goal, [&](const TypeExpr& g) {
      auto parts = tuple_parts(g, n);
      if (!parts) fail(e, "tup", print_type(g) + " is not a " + std::to_string(n) + "-tuple type");
      return conform(build(parts), g, e);
    });
  }

  Derivation box(const SExpr& e, const Avail& av, const std::optional<TypeExpr>& goal) {
    need(e, 2);
    Avail inner;
    for (const auto& kv : av.gamma) inner.delta.insert(kv);
    for (const auto& [x, t] : av.delta)
      if (t.is(TypeKind::Para)) inner.delta.emplace(x, t.body());
    auto build = [&](const std::optional<TypeExpr>& g) {
      Derivation d = go(e.items[1], inner, g);
      Judgment j = J(d);
      Witness w;
      TypingContext c;
      for (const auto& [x, t] : j.ctx.delta) {
        if (av.gamma.count(x)) {
          c.gamma.emplace(x, t);
          w.to_gamma.push_back(x);
        } else {
          c.delta.emplace(x, TypeExpr::para(t));
        }
      }
      j.ctx = c;
      j.type = TypeExpr::para(j.type);
      return node(Rule::ParaIntro, std::move(j), {std::move(d)}, std::move(w));
    };
    if (!goal) return build(std::nullopt);
    return intro(e, av, *goal, [&](const TypeExpr& g) {
      if (!g.is(TypeKind::Para)) fail(e, "box", "expected type " + print_type(g) + " is not a paragraph");
      return build(g.body());
    });
  }

  Derivation gen(const SExpr& e, const Avail& av, const std::optional<TypeExpr>& goal) {
    need(e, 3);
    const std::string a = expect_symbol(e.items[1], "gen");
    if (type_vars_of(av).count(a)) fail(e, "gen", "eigenvariable " + a + " occurs in the context");
    std::optional<TypeExpr> inner;
    if (goal) {
      if (!goal->is(TypeKind::ForAll)) fail(e, "gen", "expected type " + print_type(*goal) + " is not universal");
      inner = subst_type(goal->body(), goal->name(), TypeExpr::var(a));
    }
    Derivation d = go(e.items[2], av, inner);
    Judgment j = J(d);
    j.type = TypeExpr::forall(a, j.type);
    Witness w;
    w.alpha = a;
    return node(Rule::ForAllIntro, std::move(j), {std::move(d)}, std::move(w));
  }

  Derivation inst(const SExpr& e, const Avail& av) {
    if (e.items.size() < 3) fail(e, "inst", "needs a term and at least one type");
    Derivation d = go(e.items[1], av, std::nullopt);
    for (std::size_t i = 2; i < e.items.size(); ++i) {
      if (J(d).type.is(TypeKind::Seq)) d = conform(std::move(d), seq_unfolding(), e);
      const TypeExpr t = J(d).type;
      if (!t.is(TypeKind::ForAll)) fail(e, "inst", "type " + print_type(t) + " is not universal");
      Witness w;
      w.inst = type(e.items[i]);
      Judgment j = J(d);
      j.type = subst_type(t.body(), t.name(), *w.inst);
      d = node(Rule::ForAllElim, std::move(j), {std::move(d)}, std::move(w));
    }
    return d;
  }

  Derivation ap(const SExpr& e, const Avail& av) {
    if (e.items.size() < 3) fail(e, e.head(), "needs a function and at least one argument");
    const bool exp_minor = e.head() == "ap!";
    if (exp_minor && e.items.size() != 3) fail(e, "ap!", "takes exactly one argument");
    Derivation f = go(e.items[1], av, std::nullopt);
    for (std::size_t i = 2; i < e.items.size(); ++i) {
      const TypeExpr t = J(f).type;
      const SExpr& arg = e.items[i];
      if (t.is(TypeKind::Lin)) {
        if (exp_minor) fail(e, "ap!", "function type is a linear arrow");
        Derivation a = go(arg, without_linear(av, f), t.left());
        auto pairs = separate({&f}, a);
        Judgment j;
        j.ctx = J(f).ctx;
        for (const auto& kv : J(a).ctx.gamma) j.ctx.gamma.insert(kv);
        for (const auto& kv : J(a).ctx.delta) j.ctx.delta.insert(kv);
        j.subject = Term::app(J(f).subject, J(a).subject);
        j.type = t.right();
        Witness w;
        w.split = std::vector<std::vector<std::string>>{names(J(f).ctx), names(J(a).ctx)};
        f = contract(node(Rule::LinApp, std::move(j), {std::move(f), std::move(a)}, std::move(w)), pairs);
      } else if (t.is(TypeKind::Bang)) {
        Avail minor;
        (exp_minor ? minor.copyable : minor.delta) = av.gamma;
        Derivation a = go(arg, minor, t.left());
        const auto& used = J(a).ctx.delta;
        Witness w;
        std::string promoted_name;
        std::optional<TypeExpr> promoted_type;
        Term arg_subject = J(a).subject;
        if (exp_minor) {
          w.minor_exp = true;
          for (const auto& [y, ty] : used) {
            const std::string& o = origin_.at(y);
            if (!promoted_name.empty() && promoted_name != o)
              fail(arg, "ap!", "argument uses both " + promoted_name + " and " + o);
            promoted_name = o;
            promoted_type = ty;
          }
        } else if (used.size() > 1) {
          fail(arg, "ap", "argument of a !-arrow uses " + std::to_string(used.size()) + " assumptions");
        } else if (!used.empty()) {
          promoted_name = used.begin()->first;
          promoted_type = used.begin()->second;
        }
        std::vector<std::pair<std::string, std::string>> pairs;
        if (promoted_type) {
          std::string into = promoted_name;
          if (J(f).ctx.gamma.count(into)) {
            into = fresh(promoted_name);
            pairs.emplace_back(promoted_name, into);
          }
          if (exp_minor) {
            w.into = into;
            for (const auto& kv : used) arg_subject = substitute(arg_subject, kv.first, Term::free(into));
          } else if (into != promoted_name) {
            a = rename_var(a, promoted_name, into);
            arg_subject = J(a).subject;
          }
          promoted_name = into;
        }
        Judgment j;
        j.ctx = J(f).ctx;
        if (promoted_type) j.ctx.gamma.emplace(promoted_name, *promoted_type);
        j.subject = Term::app(J(f).subject, arg_subject);
        j.type = t.right();
        std::vector<std::string> pn;
        if (promoted_type) pn.push_back(promoted_name);
        w.split = std::vector<std::vector<std::string>>{names(J(f).ctx), pn};
        f = contract(node(Rule::BangApp, std::move(j), {std::move(f), std::move(a)}, std::move(w)), pairs);
      } else {
        fail(e, e.head(), "function type " + print_type(t) + " is not an arrow");
      }
    }
    return f;
  }

  Derivation cut(const SExpr& e, const Avail& av, const std::optional<TypeExpr>& goal) {
    need(e, 4);
    const std::string x = expect_symbol(e.items[1], "cut");
    check_binder(e, x, av);
    Derivation n = go(e.items[2], av, std::nullopt);
    const TypeExpr a = J(n).type;
    if (!a.is(TypeKind::Para)) fail(e, "cut", "cut term has type " + print_type(a) + ", not a paragraph");
    Avail rest = without_linear(av, n);
    rest.delta.emplace(x, a);
    Derivation m = weaken(go(e.items[3], rest, goal), x, a, false);
    auto pairs = separate({&n}, m);
    Judgment j;
    j.ctx = J(n).ctx;
    for (const auto& kv : J(m).ctx.gamma) j.ctx.gamma.insert(kv);
    for (const auto& kv : J(m).ctx.delta)
      if (kv.first != x) j.ctx.delta.insert(kv);
    j.subject = substitute(J(m).subject, x, J(n).subject);
    j.type = J(m).type;
    Witness w;
    w.vars = {x};
    auto second = names(J(m).ctx);
    second.erase(std::remove(second.begin(), second.end(), x), second.end());
    w.split = std::vector<std::vector<std::string>>{names(J(n).ctx), second};
    return contract(node(Rule::ParaElim, std::move(j), {std::move(n), std::move(m)}, std::move(w)), pairs);
  }

  Derivation lift_form(const SExpr& e, const Avail&) {
    need(e, 3);
    const std::string& s = expect_symbol(e.items[1], "lift");
    if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit) || s == "0") fail(e, "lift", "depth must be positive");
    Derivation d = go(e.items[2], Avail{}, std::nullopt);
    try {
      return lift(d, std::stoul(s), lemmas_);
    } catch (const std::invalid_argument& ex) {
      fail(e, "lift", ex.what());
    }
  }

  const LemmaTable& lemmas_;
  const TypeAliases& aliases_;
  std::map<std::string, std::string> origin_;
  std::size_t counter_ = 0;
};

}  // namespace

Derivation elaborate(const SExpr& script, const LemmaTable& lemmas, const TypeAliases& aliases,
                     const std::optional<TypeExpr>& goal) {
  Elaborator el(lemmas, aliases);
  Derivation d = el.go(script, Avail{}, goal);
  return d;
}

Derivation load_derivation(const DrvFile& file, const LemmaTable& lemmas) {
  if (is_explicit(file.body)) return read_explicit(file.body, file.aliases);
  return elaborate(file.body, lemmas, file.aliases, file.claimed);
}

CheckReport check_file(const DrvFile& file, const LemmaTable& lemmas, Derivation* out) {
  Derivation d;
  try {
    d = load_derivation(file, lemmas);
  } catch (const ElaborationError& e) {
    CheckReport r;
    r.node = "line " + std::to_string(e.line());
    r.rule = e.form();
    r.condition = e.condition();
    return r;
  }
  CheckReport r = check(d, lemmas);
  if (r.accepted && file.claimed && d.concl && !type_eq(d.concl->type, *file.claimed)) {
    r.accepted = false;
    r.node = "root";
    r.rule = rule_name(d.rule);
    r.condition = "derived type " + print_type(d.concl->type) + " differs from the claimed " + print_type(*file.claimed);
  }
  if (r.accepted && d.concl && (!d.concl->ctx.gamma.empty() || !d.concl->ctx.delta.empty())) {
    r.accepted = false;
    r.node = "root";
    r.rule = rule_name(d.rule);
    r.condition = "root judgment has open assumptions";
  }
  if (out) *out = std::move(d);
  return r;
}

}  // namespace lightfield
