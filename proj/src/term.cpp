#include "lightfield/term.hpp"

#include <algorithm>
#include <functional>

namespace lightfield {

using detail::TermNode;

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::shared_ptr<const TermNode> finish(TermNode n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911u;
  switch (n.kind) {
    case TermKind::Bound:
      n.fv_bound = n.index + 1;
      h = mix(h, n.index);
      break;
    case TermKind::Free:
      n.has_free = true;
      h = mix(h, std::hash<std::string>{}(n.name));
      break;
    case TermKind::Abs:
    case TermKind::Destr: {
      const auto& b = n.kids[0];
      const std::uint32_t width = n.kind == TermKind::Abs ? 1u : static_cast<std::uint32_t>(n.binders.size());
      n.fv_bound = b.fv_bound() > width ? b.fv_bound() - width : 0;
      n.size = 1 + b.size();
      n.has_free = b.node_has_free();
      h = mix(mix(h, width), b.hash());
      break;
    }
    case TermKind::App:
    case TermKind::Tuple:
      for (const auto& k : n.kids) {
        n.fv_bound = std::max(n.fv_bound, k.fv_bound());
        n.size += k.size();
        n.has_free = n.has_free || k.node_has_free();
        h = mix(h, k.hash());
      }
      break;
  }
  n.hash = h;
  return std::make_shared<const TermNode>(std::move(n));
}

}  // namespace

Term::Term() : Term(free("_")) {}

Term Term::free(std::string name) {
  TermNode n;
  n.kind = TermKind::Free;
  n.name = std::move(name);
  return Term(finish(std::move(n)));
}

Term Term::bound(std::uint32_t index) {
  TermNode n;
  n.kind = TermKind::Bound;
  n.index = index;
  return Term(finish(std::move(n)));
}

Term Term::app(Term fn, Term arg) {
  TermNode n;
  n.kind = TermKind::App;
  n.kids = {std::move(fn), std::move(arg)};
  return Term(finish(std::move(n)));
}

Term Term::apps(Term fn, const std::vector<Term>& args) {
  for (const auto& a : args) fn = app(std::move(fn), a);
  return fn;
}

Term Term::tuple(std::vector<Term> items) {
  if (items.size() < 2) throw std::invalid_argument("tuple arity must be at least 2");
  TermNode n;
  n.kind = TermKind::Tuple;
  n.kids = std::move(items);
  return Term(finish(std::move(n)));
}

Term Term::lam_raw(std::string hint, Term body) {
  TermNode n;
  n.kind = TermKind::Abs;
  n.name = std::move(hint);
  n.kids = {std::move(body)};
  return Term(finish(std::move(n)));
}

Term Term::destr_raw(std::vector<std::string> hints, Term body) {
  if (hints.size() < 2) throw std::invalid_argument("destructor arity must be at least 2");
  TermNode n;
  n.kind = TermKind::Destr;
  n.index = static_cast<std::uint32_t>(hints.size());
  n.binders = std::move(hints);
  n.kids = {std::move(body)};
  return Term(finish(std::move(n)));
}

namespace {

// Turns free occurrences of names[k] into index depth + k.
Term close_over(const Term& t, const std::vector<std::string>& names, std::uint32_t depth) {
  if (!t.node_has_free()) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      return t;
    case TermKind::Free: {
      auto it = std::find(names.begin(), names.end(), t.name());
      if (it == names.end()) return t;
      return Term::bound(depth + static_cast<std::uint32_t>(it - names.begin()));
    }
    case TermKind::Abs:
      return Term::lam_raw(t.name(), close_over(t.body(), names, depth + 1));
    case TermKind::Destr:
      return Term::destr_raw(t.binders(), close_over(t.body(), names, depth + static_cast<std::uint32_t>(t.arity())));
    case TermKind::App:
      return Term::app(close_over(t.fn(), names, depth), close_over(t.arg(), names, depth));
    case TermKind::Tuple: {
      std::vector<Term> xs;
      for (const auto& k : t.items()) xs.push_back(close_over(k, names, depth));
      return Term::tuple(std::move(xs));
    }
  }
  return t;
}

Term open_at(const Term& t, const std::vector<std::string>& names, std::uint32_t depth) {
  if (t.fv_bound() <= depth) return t;
  switch (t.kind()) {
    case TermKind::Bound: {
      const auto i = t.index() - depth;
      if (i < names.size()) return Term::free(names[i]);
      return Term::bound(t.index() - static_cast<std::uint32_t>(names.size()));
    }
    case TermKind::Free:
      return t;
    case TermKind::Abs:
      return Term::lam_raw(t.name(), open_at(t.body(), names, depth + 1));
    case TermKind::Destr:
      return Term::destr_raw(t.binders(), open_at(t.body(), names, depth + static_cast<std::uint32_t>(t.arity())));
    case TermKind::App:
      return Term::app(open_at(t.fn(), names, depth), open_at(t.arg(), names, depth));
    case TermKind::Tuple: {
      std::vector<Term> xs;
      for (const auto& k : t.items()) xs.push_back(open_at(k, names, depth));
      return Term::tuple(std::move(xs));
    }
  }
  return t;
}

}  // namespace

Term Term::abs(const std::string& name, const Term& body) {
  return lam_raw(name, close_over(body, {name}, 0));
}

Term Term::abs(const std::vector<std::string>& names, const Term& body) {
  Term t = body;
  for (auto it = names.rbegin(); it != names.rend(); ++it) t = abs(*it, t);
  return t;
}

Term Term::destr(const std::vector<std::string>& names, const Term& body) {
  // xn sits at index 0
  std::vector<std::string> rev(names.rbegin(), names.rend());
  return destr_raw(names, close_over(body, rev, 0));
}

Term Term::open(const std::vector<std::string>& names) const { return open_at(*this, names, 0); }

TermKind Term::kind() const { return node_->kind; }
std::uint32_t Term::index() const { return node_->index; }
const std::string& Term::name() const { return node_->name; }
const std::vector<std::string>& Term::binders() const { return node_->binders; }
std::size_t Term::arity() const {
  return node_->kind == TermKind::Destr ? node_->binders.size() : node_->kids.size();
}
const Term& Term::body() const { return node_->kids[0]; }
const Term& Term::fn() const { return node_->kids[0]; }
const Term& Term::arg() const { return node_->kids[1]; }
const std::vector<Term>& Term::items() const { return node_->kids; }
std::uint32_t Term::fv_bound() const { return node_->fv_bound; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hash; }
bool Term::node_has_free() const { return node_->has_free; }

std::set<std::string> Term::free_vars() const {
  std::set<std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (!t.node_has_free()) return;
    if (t.is(TermKind::Free)) {
      out.insert(t.name());
      return;
    }
    for (const auto& k : t.node_->kids) walk(k);
  };
  walk(*this);
  return out;
}

bool Term::has_free(const std::string& name) const {
  if (!node_has_free()) return false;
  if (is(TermKind::Free)) return node_->name == name;
  return std::any_of(node_->kids.begin(), node_->kids.end(), [&](const Term& k) { return k.has_free(name); });
}

bool alpha_eq(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.hash != y.hash || x.size != y.size) return false;
  switch (x.kind) {
    case TermKind::Bound:
      return x.index == y.index;
    case TermKind::Free:
      return x.name == y.name;
    case TermKind::Destr:
      if (x.binders.size() != y.binders.size()) return false;
      break;
    default:
      break;
  }
  if (x.kids.size() != y.kids.size()) return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!alpha_eq(x.kids[i], y.kids[i])) return false;
  return true;
}

Term substitute(const Term& body, const std::string& var, const Term& replacement) {
  if (replacement.fv_bound() != 0) throw std::invalid_argument("substitute: replacement has dangling indices");
  std::function<Term(const Term&)> go = [&](const Term& t) -> Term {
    if (!t.has_free(var)) return t;
    switch (t.kind()) {
      case TermKind::Free:
        return replacement;
      case TermKind::Abs:
        return Term::lam_raw(t.name(), go(t.body()));
      case TermKind::Destr:
        return Term::destr_raw(t.binders(), go(t.body()));
      case TermKind::App:
        return Term::app(go(t.fn()), go(t.arg()));
      case TermKind::Tuple: {
        std::vector<Term> xs;
        for (const auto& k : t.items()) xs.push_back(go(k));
        return Term::tuple(std::move(xs));
      }
      case TermKind::Bound:
        break;
    }
    return t;
  };
  return go(body);
}

namespace {

Term shift_from(const Term& t, std::uint32_t by, std::uint32_t cutoff) {
  if (by == 0 || t.fv_bound() <= cutoff) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      return Term::bound(t.index() + by);
    case TermKind::Abs:
      return Term::lam_raw(t.name(), shift_from(t.body(), by, cutoff + 1));
    case TermKind::Destr:
      return Term::destr_raw(t.binders(), shift_from(t.body(), by, cutoff + static_cast<std::uint32_t>(t.arity())));
    case TermKind::App:
      return Term::app(shift_from(t.fn(), by, cutoff), shift_from(t.arg(), by, cutoff));
    case TermKind::Tuple: {
      std::vector<Term> xs;
      for (const auto& k : t.items()) xs.push_back(shift_from(k, by, cutoff));
      return Term::tuple(std::move(xs));
    }
    case TermKind::Free:
      break;
  }
  return t;
}

}  // namespace

Term desugar_tuples(const Term& t) {
  switch (t.kind()) {
    case TermKind::Bound:
    case TermKind::Free:
      return t;
    case TermKind::Abs:
      return Term::lam_raw(t.name(), desugar_tuples(t.body()));
    case TermKind::App:
      return Term::app(desugar_tuples(t.fn()), desugar_tuples(t.arg()));
    case TermKind::Tuple: {
      // \x. x M1 ... Mn, every Mi moves under one new binder
      Term acc = Term::bound(0);
      for (const auto& m : t.items()) acc = Term::app(acc, shift_from(desugar_tuples(m), 1, 0));
      return Term::lam_raw("x", acc);
    }
    case TermKind::Destr: {
      // \p. p (\x1. ... \xn. M); indices of M past the n binders skip p
      const auto n = static_cast<std::uint32_t>(t.arity());
      Term inner = shift_from(desugar_tuples(t.body()), 1, n);
      for (auto it = t.binders().rbegin(); it != t.binders().rend(); ++it) inner = Term::lam_raw(*it, inner);
      return Term::lam_raw("p", Term::app(Term::bound(0), inner));
    }
  }
  return t;
}

Term shift_indices(const Term& term, std::uint32_t by, std::uint32_t cutoff) { return shift_from(term, by, cutoff); }

bool contains_tuples(const Term& t) {
  switch (t.kind()) {
    case TermKind::Tuple:
    case TermKind::Destr:
      return true;
    case TermKind::Abs:
      return contains_tuples(t.body());
    case TermKind::App:
      return contains_tuples(t.fn()) || contains_tuples(t.arg());
    default:
      return false;
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string n = base.empty() ? "x" : base;
  while (avoid.count(n)) n += '\'';
  return n;
}

}  // namespace lightfield
