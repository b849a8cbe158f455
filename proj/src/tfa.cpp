#include "lightfield/tfa.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "lightfield/combinators.hpp"
#include "lightfield/syntax.hpp"

namespace lightfield {

namespace {

constexpr std::array<std::pair<Rule, const char*>, 17> kRuleNames{{
    {Rule::Ax, "Ax"},
    {Rule::Weak, "Weak"},
    {Rule::Contr, "Contr"},
    {Rule::LinAbs, "LinAbs"},
    {Rule::LinApp, "LinApp"},
    {Rule::BangAbs, "BangAbs"},
    {Rule::BangApp, "BangApp"},
    {Rule::ParaIntro, "ParaIntro"},
    {Rule::ParaElim, "ParaElim"},
    {Rule::ForAllIntro, "ForAllIntro"},
    {Rule::ForAllElim, "ForAllElim"},
    {Rule::TupleIntro, "TupleIntro"},
    {Rule::TupleAbs, "TupleAbs"},
    {Rule::SeqFold, "SeqFold"},
    {Rule::SeqUnfold, "SeqUnfold"},
    {Rule::ParaLift, "ParaLift"},
    {Rule::Lemma, "Lemma"},
}};

bool teq(const TypeExpr& a, const TypeExpr& b) { return type_eq(a, b, 0); }

bool same_map(const TypingMap& a, const TypingMap& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, t] : a) {
    auto it = b.find(k);
    if (it == b.end() || !teq(t, it->second)) return false;
  }
  return true;
}

bool same_ctx(const TypingContext& a, const TypingContext& b) { return same_map(a.gamma, b.gamma) && same_map(a.delta, b.delta); }

bool submap(const TypingMap& small, const TypingMap& big) {
  for (const auto& [k, t] : small) {
    auto it = big.find(k);
    if (it == big.end() || !teq(t, it->second)) return false;
  }
  return true;
}

std::set<std::string> names_of(const TypingContext& c) {
  std::set<std::string> out;
  for (const auto& kv : c.gamma) out.insert(kv.first);
  for (const auto& kv : c.delta) out.insert(kv.first);
  return out;
}

std::optional<TypingMap> join(const std::vector<const TypingMap*>& parts) {
  TypingMap out;
  for (const auto* p : parts)
    for (const auto& kv : *p)
      if (!out.insert(kv).second) return std::nullopt;
  return out;
}

std::string joined(const std::set<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : " ") + x;
  return s;
}

using Failure = std::optional<std::string>;

struct NodeChecker {
  const LemmaTable& lemmas;
  std::set<std::string>& flags;
  const std::string& path;

  [[noreturn]] void malformed(const std::string& msg) const { throw MalformedDerivation(path, msg); }

  const Judgment& concl_of(const Derivation& d) const {
    if (!d.concl) malformed("conclusion missing");
    return *d.concl;
  }

  void arity(const Derivation& d, std::size_t n) const {
    if (d.premises.size() != n)
      malformed(std::string(rule_name(d.rule)) + " expects " + std::to_string(n) + " premise(s), found " +
                std::to_string(d.premises.size()));
  }

  const std::string& var_witness(const Derivation& d) const {
    if (d.witness.vars.empty()) malformed(std::string(rule_name(d.rule)) + " needs a variable witness");
    return d.witness.vars[0];
  }

  // Each premise must own exactly the names listed for it.
  Failure split_matches(const Derivation& d, const std::vector<std::set<std::string>>& owned) const {
    if (!d.witness.split) malformed(std::string(rule_name(d.rule)) + " needs a context split witness");
    const auto& split = *d.witness.split;
    if (split.size() != owned.size()) malformed("split witness has " + std::to_string(split.size()) + " parts");
    for (std::size_t i = 0; i < split.size(); ++i) {
      std::set<std::string> listed(split[i].begin(), split[i].end());
      if (listed != owned[i]) return "split witness for premise " + std::to_string(i) + " lists {" + joined(listed) +
                                     "} but the premise uses {" + joined(owned[i]) + "}";
    }
    return std::nullopt;
  }

  Failure run(const Derivation& d) const {
    const Judgment& c = concl_of(d);
    std::vector<const Judgment*> p;
    for (const auto& q : d.premises) p.push_back(&concl_of(q));
    switch (d.rule) {
      case Rule::Ax: {
        arity(d, 0);
        if (!c.ctx.gamma.empty()) return "exponential context must be empty";
        if (c.ctx.delta.size() != 1) return "linear context must hold exactly one assumption";
        const auto& [x, a] = *c.ctx.delta.begin();
        if (!d.witness.vars.empty() && d.witness.vars[0] != x) return "witness names " + d.witness.vars[0] + ", context holds " + x;
        if (!alpha_eq(c.subject, Term::free(x))) return "subject is not the variable " + x;
        if (!teq(c.type, a)) return "type differs from the assumption";
        return std::nullopt;
      }
      case Rule::Lemma: {
        arity(d, 0);
        if (!c.ctx.gamma.empty() || !c.ctx.delta.empty()) return "contexts must be empty";
        if (!c.subject.is(TermKind::Free)) return "subject must be a constant";
        auto it = lemmas.find(c.subject.name());
        if (it == lemmas.end()) return "no certified type for " + c.subject.name();
        if (!teq(it->second.type, c.type)) return "type differs from the certified type of " + c.subject.name();
        if (it->second.flagged) flags.insert("cites flagged " + c.subject.name());
        return std::nullopt;
      }
      case Rule::Weak: {
        arity(d, 1);
        if (!alpha_eq(c.subject, p[0]->subject) || !teq(c.type, p[0]->type)) return "subject or type changed";
        if (!submap(p[0]->ctx.gamma, c.ctx.gamma) || !submap(p[0]->ctx.delta, c.ctx.delta))
          return "conclusion context does not extend the premise";
        if (!join({&c.ctx.gamma, &c.ctx.delta})) return "a name is both exponential and linear";
        return std::nullopt;
      }
      case Rule::Contr: {
        arity(d, 1);
        if (d.witness.vars.size() != 2 || !d.witness.into) malformed("Contr needs two variables and a target");
        const auto& x = d.witness.vars[0];
        const auto& y = d.witness.vars[1];
        const auto& z = *d.witness.into;
        if (x == y) return "contracted variables must differ";
        const auto& pg = p[0]->ctx.gamma;
        auto ix = pg.find(x), iy = pg.find(y);
        if (ix == pg.end() || iy == pg.end()) return "contracted variables must both be exponential in the premise";
        if (!teq(ix->second, iy->second)) return "contracted variables have different types";
        TypingMap g = pg;
        g.erase(x);
        g.erase(y);
        if (g.count(z) || p[0]->ctx.delta.count(z)) return "target " + z + " already occurs in the premise";
        g.emplace(z, ix->second);
        if (!same_map(g, c.ctx.gamma) || !same_map(p[0]->ctx.delta, c.ctx.delta)) return "conclusion contexts do not match";
        const Term expect = substitute(substitute(p[0]->subject, x, Term::free(z)), y, Term::free(z));
        if (!alpha_eq(expect, c.subject)) return "subject is not M[z/x, z/y]";
        if (!teq(c.type, p[0]->type)) return "type changed";
        return std::nullopt;
      }
      case Rule::LinAbs:
      case Rule::BangAbs: {
        arity(d, 1);
        const auto& x = var_witness(d);
        const bool bang = d.rule == Rule::BangAbs;
        const auto& from = bang ? p[0]->ctx.gamma : p[0]->ctx.delta;
        auto it = from.find(x);
        if (it == from.end()) return x + (bang ? " is not exponential in the premise" : " is not linear in the premise");
        TypingContext expect = p[0]->ctx;
        (bang ? expect.gamma : expect.delta).erase(x);
        if (!same_ctx(expect, c.ctx)) return "conclusion contexts do not match";
        if (!alpha_eq(c.subject, Term::abs(x, p[0]->subject))) return "subject is not the abstraction over " + x;
        const TypeExpr t = bang ? TypeExpr::bang(it->second, p[0]->type) : TypeExpr::lin(it->second, p[0]->type);
        if (!teq(c.type, t)) return "type is not " + print_type(t);
        return std::nullopt;
      }
      case Rule::LinApp: {
        arity(d, 2);
        if (!p[0]->type.is(TypeKind::Lin)) return "function type is not a linear arrow";
        if (!teq(p[0]->type.left(), p[1]->type)) return "argument type differs from the domain";
        if (!teq(p[0]->type.right(), c.type)) return "type differs from the codomain";
        if (!alpha_eq(c.subject, Term::app(p[0]->subject, p[1]->subject))) return "subject is not the application";
        auto g = join({&p[0]->ctx.gamma, &p[1]->ctx.gamma});
        auto l = join({&p[0]->ctx.delta, &p[1]->ctx.delta});
        if (!g) return "exponential contexts of the premises overlap";
        if (!l) return "linear contexts of the premises overlap";
        if (!same_map(*g, c.ctx.gamma) || !same_map(*l, c.ctx.delta)) return "conclusion contexts are not the union";
        return split_matches(d, {names_of(p[0]->ctx), names_of(p[1]->ctx)});
      }
      case Rule::BangApp: {
        arity(d, 2);
        if (!p[0]->type.is(TypeKind::Bang)) return "function type is not a !-arrow";
        if (!teq(p[0]->type.left(), p[1]->type)) return "argument type differs from the domain";
        if (!teq(p[0]->type.right(), c.type)) return "type differs from the codomain";
        if (!p[1]->ctx.gamma.empty()) return "minor premise must have an empty exponential context";
        const auto& minor = p[1]->ctx.delta;
        TypingMap promoted;
        Term arg = p[1]->subject;
        if (d.witness.minor_exp) {
          if (!d.witness.into) malformed("exponential reading needs the merged name");
          flags.insert("exponential reading of the !-E minor premise");
          if (!minor.empty()) {
            const TypeExpr& a = minor.begin()->second;
            for (const auto& [x, t] : minor) {
              if (!teq(t, a)) return "minor premise copies have different types";
              arg = substitute(arg, x, Term::free(*d.witness.into));
            }
            promoted.emplace(*d.witness.into, a);
          }
        } else {
          if (minor.size() > 1) return "minor premise context has " + std::to_string(minor.size()) + " assumptions, at most 1 allowed";
          promoted = minor;
        }
        if (!alpha_eq(c.subject, Term::app(p[0]->subject, arg))) return "subject is not the application";
        auto g = join({&p[0]->ctx.gamma, &promoted});
        if (!g) return "promoted assumption clashes with the major premise";
        if (!same_map(*g, c.ctx.gamma) || !same_map(p[0]->ctx.delta, c.ctx.delta)) return "conclusion contexts do not match";
        std::set<std::string> pn;
        for (const auto& kv : promoted) pn.insert(kv.first);
        return split_matches(d, {names_of(p[0]->ctx), pn});
      }
      case Rule::ParaIntro: {
        arity(d, 1);
        if (!p[0]->ctx.gamma.empty()) return "premise must have an empty exponential context";
        TypingContext expect;
        for (const auto& [x, t] : p[0]->ctx.delta) {
          if (std::find(d.witness.to_gamma.begin(), d.witness.to_gamma.end(), x) != d.witness.to_gamma.end())
            expect.gamma.emplace(x, t);
          else
            expect.delta.emplace(x, TypeExpr::para(t));
        }
        for (const auto& x : d.witness.to_gamma)
          if (!p[0]->ctx.delta.count(x)) return x + " is not an assumption of the premise";
        if (!same_ctx(expect, c.ctx)) return "conclusion contexts are not the promoted premise context";
        if (!alpha_eq(c.subject, p[0]->subject)) return "subject changed";
        if (!teq(c.type, TypeExpr::para(p[0]->type))) return "type is not the paragraph of the premise type";
        return std::nullopt;
      }
      case Rule::ParaElim: {
        arity(d, 2);
        const auto& x = var_witness(d);
        if (!p[0]->type.is(TypeKind::Para)) return "cut term type is not a paragraph";
        auto it = p[1]->ctx.delta.find(x);
        if (it == p[1]->ctx.delta.end()) return x + " is not linear in the second premise";
        if (!teq(it->second, p[0]->type)) return x + " has a different type from the cut term";
        TypingMap rest = p[1]->ctx.delta;
        rest.erase(x);
        auto g = join({&p[0]->ctx.gamma, &p[1]->ctx.gamma});
        auto l = join({&p[0]->ctx.delta, &rest});
        if (!g) return "exponential contexts of the premises overlap";
        if (!l) return "linear contexts of the premises overlap";
        if (g->count(x) || l->count(x)) return x + " escapes into the conclusion";
        if (!same_map(*g, c.ctx.gamma) || !same_map(*l, c.ctx.delta)) return "conclusion contexts are not the union";
        if (!alpha_eq(c.subject, substitute(p[1]->subject, x, p[0]->subject))) return "subject is not M[N/x]";
        if (!teq(c.type, p[1]->type)) return "type differs from the second premise";
        auto second = names_of(p[1]->ctx);
        second.erase(x);
        return split_matches(d, {names_of(p[0]->ctx), second});
      }
      case Rule::ForAllIntro: {
        arity(d, 1);
        if (!c.type.is(TypeKind::ForAll)) return "type is not universal";
        const auto& a = c.type.name();
        if (d.witness.alpha && *d.witness.alpha != a) return "eigenvariable witness differs from the binder";
        if (!teq(c.type.body(), p[0]->type)) return "body differs from the premise type";
        for (const auto* m : {&c.ctx.gamma, &c.ctx.delta})
          for (const auto& [x, t] : *m)
            if (t.free_vars().count(a)) return "eigenvariable " + a + " occurs free in the type of " + x;
        if (!same_ctx(c.ctx, p[0]->ctx) || !alpha_eq(c.subject, p[0]->subject)) return "contexts or subject changed";
        return std::nullopt;
      }
      case Rule::ForAllElim: {
        arity(d, 1);
        if (!d.witness.inst) malformed("ForAllElim needs an instantiation witness");
        if (!p[0]->type.is(TypeKind::ForAll)) return "premise type is not universal";
        const TypeExpr t = subst_type(p[0]->type.body(), p[0]->type.name(), *d.witness.inst);
        if (!teq(c.type, t)) return "type is not the instance " + print_type(t);
        if (!same_ctx(c.ctx, p[0]->ctx) || !alpha_eq(c.subject, p[0]->subject)) return "contexts or subject changed";
        return std::nullopt;
      }
      case Rule::TupleIntro: {
        if (d.premises.size() < 2) malformed("TupleIntro needs at least two premises");
        std::vector<const TypingMap*> gs, ls;
        std::vector<TypeExpr> parts;
        std::vector<Term> items;
        std::vector<std::set<std::string>> owned;
        for (const auto* q : p) {
          gs.push_back(&q->ctx.gamma);
          ls.push_back(&q->ctx.delta);
          parts.push_back(q->type);
          items.push_back(q->subject);
          owned.push_back(names_of(q->ctx));
        }
        auto g = join(gs);
        auto l = join(ls);
        if (!g) return "exponential contexts of the premises overlap";
        if (!l) return "linear contexts of the premises overlap";
        if (!same_map(*g, c.ctx.gamma) || !same_map(*l, c.ctx.delta)) return "conclusion contexts are not the union";
        if (!alpha_eq(c.subject, Term::tuple(items))) return "subject is not the tuple of the premise subjects";
        if (!teq(c.type, tuple_type(parts))) return "type is not the tensor of the premise types";
        return split_matches(d, owned);
      }
      case Rule::TupleAbs: {
        arity(d, 1);
        const auto& xs = d.witness.vars;
        if (xs.size() < 2) malformed("TupleAbs needs at least two binders");
        TypingContext expect = p[0]->ctx;
        std::vector<TypeExpr> parts;
        for (const auto& x : xs) {
          auto it = expect.delta.find(x);
          if (it == expect.delta.end()) return x + " is not linear in the premise";
          parts.push_back(it->second);
          expect.delta.erase(it);
        }
        if (!same_ctx(expect, c.ctx)) return "conclusion contexts do not match";
        if (!alpha_eq(c.subject, Term::destr(xs, p[0]->subject))) return "subject is not the tuple abstraction";
        const TypeExpr t = TypeExpr::lin(tuple_type(parts), p[0]->type);
        if (!teq(c.type, t)) return "type is not " + print_type(t);
        return std::nullopt;
      }
      case Rule::SeqFold:
      case Rule::SeqUnfold: {
        arity(d, 1);
        if (!same_ctx(c.ctx, p[0]->ctx) || !alpha_eq(c.subject, p[0]->subject)) return "contexts or subject changed";
        if (!type_eq(c.type, p[0]->type, 1)) return "types are not one Seq step apart";
        return std::nullopt;
      }
      case Rule::ParaLift: {
        arity(d, 1);
        if (!d.witness.depth || *d.witness.depth == 0) malformed("ParaLift needs a positive depth");
        const std::size_t n = *d.witness.depth;
        if (!p[0]->ctx.gamma.empty() || !p[0]->ctx.delta.empty()) return "premise contexts must be empty";
        if (!c.ctx.gamma.empty() || !c.ctx.delta.empty()) return "conclusion contexts must be empty";
        if (!p[0]->type.is(TypeKind::Lin)) return "premise type is not a linear arrow";
        const TypeExpr t = TypeExpr::lin(TypeExpr::para(p[0]->type.left(), n), TypeExpr::para(p[0]->type.right(), n));
        if (!teq(c.type, t)) return "type is not " + print_type(t);
        if (!alpha_eq(c.subject, lift_term(p[0]->subject, n))) return "subject is not the lifted term";
        return std::nullopt;
      }
    }
    return "unknown rule";
  }
};

bool walk(const Derivation& d, const std::string& path, const LemmaTable& lemmas, CheckReport& r) {
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    const std::string sub = path == "root" ? std::to_string(i) : path + "." + std::to_string(i);
    if (!walk(d.premises[i], sub, lemmas, r)) return false;
  }
  ++r.nodes;
  NodeChecker nc{lemmas, r.flags, path};
  if (auto f = nc.run(d)) {
    r.accepted = false;
    r.node = path;
    r.rule = rule_name(d.rule);
    r.condition = *f;
    return false;
  }
  return true;
}

}  // namespace

const char* rule_name(Rule r) {
  for (const auto& [k, n] : kRuleNames)
    if (k == r) return n;
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& s) {
  for (const auto& [k, n] : kRuleNames)
    if (s == n) return k;
  return std::nullopt;
}

MalformedDerivation::MalformedDerivation(const std::string& path, const std::string& msg)
    : std::runtime_error("malformed derivation at " + path + ": " + msg), path_(path) {}

CheckReport check(const Derivation& d, const LemmaTable& lemmas) {
  CheckReport r;
  r.accepted = true;
  walk(d, "root", lemmas, r);
  return r;
}

Derivation lift(const Derivation& d, std::size_t n, const LemmaTable& lemmas) {
  if (!d.concl) throw MalformedDerivation("root", "conclusion missing");
  const Judgment& j = *d.concl;
  if (!j.ctx.gamma.empty() || !j.ctx.delta.empty()) throw NotClosed();
  if (!j.type.is(TypeKind::Lin)) throw NotArrow();
  if (n == 0) return d;
  Derivation out;
  out.rule = Rule::ParaLift;
  out.witness.depth = n;
  out.premises.push_back(d);
  out.concl = Judgment{{}, lift_term(j.subject, n),
                       TypeExpr::lin(TypeExpr::para(j.type.left(), n), TypeExpr::para(j.type.right(), n))};
  (void)lemmas;
  return out;
}

std::string print_context(const TypingContext& c) {
  auto part = [](const TypingMap& m) {
    std::string s;
    for (const auto& [x, t] : m) s += (s.empty() ? "" : ", ") + x + " : " + print_type(t);
    return s;
  };
  std::string g = part(c.gamma), l = part(c.delta);
  return g + (g.empty() ? "" : " ") + ";" + (l.empty() ? "" : " ") + l;
}

std::string print_judgment(const Judgment& j) {
  return print_context(j.ctx) + " |- " + print_term(j.subject) + " : " + print_type(j.type);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\n");
  return std::string(s.substr(b, e - b + 1));
}

TypingMap parse_typing_map(std::string_view s, const TypeAliases* aliases) {
  TypingMap m;
  if (trim(s).empty()) return m;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    const std::string entry = trim(s.substr(start, comma - start));
    const auto colon = entry.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("context entry without ':' in '" + entry + "'");
    const std::string x = trim(std::string_view(entry).substr(0, colon));
    if (x.empty()) throw std::invalid_argument("context entry without a name");
    if (!m.emplace(x, parse_type(entry.substr(colon + 1), aliases)).second)
      throw std::invalid_argument("duplicate assumption " + x);
    start = comma + 1;
  }
  return m;
}

}  // namespace

Judgment parse_judgment(const std::string& text, const TypeAliases* aliases) {
  const auto turn = text.find("|-");
  if (turn == std::string::npos) throw std::invalid_argument("judgment without '|-'");
  const std::string_view lhs = std::string_view(text).substr(0, turn);
  const std::string_view rhs = std::string_view(text).substr(turn + 2);
  const auto semi = lhs.find(';');
  if (semi == std::string_view::npos) throw std::invalid_argument("judgment context without ';'");
  const auto colon = rhs.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("judgment without ': type'");
  Judgment j;
  j.ctx.gamma = parse_typing_map(lhs.substr(0, semi), aliases);
  j.ctx.delta = parse_typing_map(lhs.substr(semi + 1), aliases);
  for (const auto& kv : j.ctx.gamma)
    if (j.ctx.delta.count(kv.first)) throw std::invalid_argument(kv.first + " is both exponential and linear");
  j.subject = parse_term(rhs.substr(0, colon));
  j.type = parse_type(rhs.substr(colon + 1), aliases);
  return j;
}

Derivation rename_var(const Derivation& d, const std::string& from, const std::string& to) {
  Derivation out = d;
  auto rn = [&](std::string& s) {
    if (s == from) s = to;
  };
  auto rn_map = [&](TypingMap& m) {
    auto it = m.find(from);
    if (it == m.end()) return;
    TypeExpr t = it->second;
    m.erase(it);
    m.emplace(to, t);
  };
  if (out.concl) {
    rn_map(out.concl->ctx.gamma);
    rn_map(out.concl->ctx.delta);
    out.concl->subject = substitute(out.concl->subject, from, Term::free(to));
  }
  for (auto& v : out.witness.vars) rn(v);
  if (out.witness.into) rn(*out.witness.into);
  for (auto& v : out.witness.to_gamma) rn(v);
  if (out.witness.split)
    for (auto& part : *out.witness.split)
      for (auto& v : part) rn(v);
  for (auto& p : out.premises) p = rename_var(p, from, to);
  return out;
}

std::size_t count_nodes(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += count_nodes(p);
  return n;
}

}  // namespace lightfield
