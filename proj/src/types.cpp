#include "lightfield/types.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

namespace lightfield {

using detail::TypeNode;

TypeExpr::TypeExpr() : TypeExpr(seq()) {}

TypeExpr TypeExpr::var(std::string name) {
  TypeNode n;
  n.kind = TypeKind::Var;
  n.name = std::move(name);
  return TypeExpr(std::make_shared<const TypeNode>(std::move(n)));
}

TypeExpr TypeExpr::lin(TypeExpr a, TypeExpr b) {
  TypeNode n;
  n.kind = TypeKind::Lin;
  n.kids = {std::move(a), std::move(b)};
  return TypeExpr(std::make_shared<const TypeNode>(std::move(n)));
}

TypeExpr TypeExpr::bang(TypeExpr a, TypeExpr b) {
  TypeNode n;
  n.kind = TypeKind::Bang;
  n.kids = {std::move(a), std::move(b)};
  return TypeExpr(std::make_shared<const TypeNode>(std::move(n)));
}

TypeExpr TypeExpr::forall(std::string name, TypeExpr body) {
  TypeNode n;
  n.kind = TypeKind::ForAll;
  n.name = std::move(name);
  n.kids = {std::move(body)};
  return TypeExpr(std::make_shared<const TypeNode>(std::move(n)));
}

TypeExpr TypeExpr::para(TypeExpr a, std::size_t times) {
  for (std::size_t i = 0; i < times; ++i) {
    TypeNode n;
    n.kind = TypeKind::Para;
    n.kids = {std::move(a)};
    a = TypeExpr(std::make_shared<const TypeNode>(std::move(n)));
  }
  return a;
}

TypeExpr TypeExpr::seq() {
  static const TypeExpr s = [] {
    TypeNode n;
    n.kind = TypeKind::Seq;
    return TypeExpr(std::make_shared<const TypeNode>(std::move(n)));
  }();
  return s;
}

TypeKind TypeExpr::kind() const { return node_->kind; }
const std::string& TypeExpr::name() const { return node_->name; }
const TypeExpr& TypeExpr::left() const { return node_->kids.at(0); }
const TypeExpr& TypeExpr::right() const { return node_->kids.at(1); }
const TypeExpr& TypeExpr::body() const { return node_->kids.at(0); }

std::set<std::string> TypeExpr::free_vars() const {
  std::set<std::string> out;
  std::vector<std::string> bound;
  std::function<void(const TypeExpr&)> walk = [&](const TypeExpr& t) {
    switch (t.kind()) {
      case TypeKind::Var:
        if (std::find(bound.begin(), bound.end(), t.name()) == bound.end()) out.insert(t.name());
        return;
      case TypeKind::ForAll:
        bound.push_back(t.name());
        walk(t.body());
        bound.pop_back();
        return;
      case TypeKind::Para:
        walk(t.body());
        return;
      case TypeKind::Lin:
      case TypeKind::Bang:
        walk(t.left());
        walk(t.right());
        return;
      case TypeKind::Seq:
        return;
    }
  };
  walk(*this);
  return out;
}

TypeSyntaxError::TypeSyntaxError(const std::string& msg, std::size_t column)
    : std::invalid_argument("column " + std::to_string(column) + ": " + msg), column_(column) {}

std::string fresh_type_var(const std::string& base, const std::set<std::string>& avoid) {
  std::string n = base.empty() ? "a" : base;
  while (avoid.count(n)) n += '\'';
  return n;
}

TypeExpr bool_type(std::size_t n) {
  const TypeExpr a = TypeExpr::var("a");
  TypeExpr t = a;
  for (std::size_t i = 0; i <= n; ++i) t = TypeExpr::lin(a, t);
  return TypeExpr::forall("a", t);
}

TypeExpr tuple_type(const std::vector<TypeExpr>& parts) {
  if (parts.size() < 2) throw std::invalid_argument("tuple type needs at least two components");
  std::set<std::string> avoid;
  for (const auto& p : parts) {
    auto fv = p.free_vars();
    avoid.insert(fv.begin(), fv.end());
  }
  const TypeExpr a = TypeExpr::var(fresh_type_var("a", avoid));
  TypeExpr k = a;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) k = TypeExpr::lin(*it, k);
  return TypeExpr::forall(a.name(), TypeExpr::lin(k, a));
}

TypeExpr nat_type() {
  const TypeExpr a = TypeExpr::var("a");
  const TypeExpr aa = TypeExpr::lin(a, a);
  return TypeExpr::forall("a", TypeExpr::bang(aa, TypeExpr::para(aa)));
}

TypeExpr list_type(const TypeExpr& elem) {
  const TypeExpr a = TypeExpr::var(fresh_type_var("a", elem.free_vars()));
  const TypeExpr aa = TypeExpr::lin(a, a);
  return TypeExpr::forall(a.name(), TypeExpr::bang(TypeExpr::lin(elem, aa), TypeExpr::para(aa)));
}

TypeExpr word2_type() { return list_type(bool_type(2)); }
TypeExpr field_type() { return word2_type(); }

TypeExpr expand(const TypeMacro& m) {
  switch (m.kind) {
    case TypeMacro::Kind::Bool: return bool_type(m.n);
    case TypeMacro::Kind::Tuple: return tuple_type(m.args);
    case TypeMacro::Kind::Nat: return nat_type();
    case TypeMacro::Kind::List:
      if (m.args.size() != 1) throw std::invalid_argument("List takes one argument");
      return list_type(m.args[0]);
    case TypeMacro::Kind::Word2: return word2_type();
    case TypeMacro::Kind::Seq: break;
  }
  return TypeExpr::seq();
}

TypeExpr seq_unfolding() {
  static const TypeExpr u = [] {
    const TypeExpr a = TypeExpr::var("a");
    const TypeExpr b2 = bool_type(2);
    return TypeExpr::forall(
        "a", TypeExpr::lin(TypeExpr::lin(b2, a),
                           TypeExpr::lin(TypeExpr::lin(tuple_type({b2, TypeExpr::seq()}), a), a)));
  }();
  return u;
}

namespace {

TypeExpr map_kids(const TypeExpr& t, const std::function<TypeExpr(const TypeExpr&)>& f) {
  switch (t.kind()) {
    case TypeKind::Lin: return TypeExpr::lin(f(t.left()), f(t.right()));
    case TypeKind::Bang: return TypeExpr::bang(f(t.left()), f(t.right()));
    case TypeKind::ForAll: return TypeExpr::forall(t.name(), f(t.body()));
    case TypeKind::Para: return TypeExpr::para(f(t.body()));
    default: return t;
  }
}

int lookup(const std::vector<std::string>& ctx, const std::string& n) {
  for (std::size_t i = ctx.size(); i-- > 0;)
    if (ctx[i] == n) return static_cast<int>(ctx.size() - 1 - i);
  return -1;
}

struct Eq {
  std::vector<std::string> ca, cb;

  bool run(const TypeExpr& a, const TypeExpr& b, std::size_t ka, std::size_t kb) {
    if (a.is(TypeKind::Seq) && b.is(TypeKind::Seq)) return true;
    if (a.is(TypeKind::Seq)) return ka > 0 && run(seq_unfolding(), b, ka - 1, kb);
    if (b.is(TypeKind::Seq)) return kb > 0 && run(a, seq_unfolding(), ka, kb - 1);
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case TypeKind::Var: {
        const int ia = lookup(ca, a.name()), ib = lookup(cb, b.name());
        if (ia >= 0 || ib >= 0) return ia == ib;
        return a.name() == b.name();
      }
      case TypeKind::Lin:
      case TypeKind::Bang:
        return run(a.left(), b.left(), ka, kb) && run(a.right(), b.right(), ka, kb);
      case TypeKind::ForAll: {
        ca.push_back(a.name());
        cb.push_back(b.name());
        const bool r = run(a.body(), b.body(), ka, kb);
        ca.pop_back();
        cb.pop_back();
        return r;
      }
      case TypeKind::Para:
        return run(a.body(), b.body(), ka, kb);
      case TypeKind::Seq:
        break;
    }
    return true;
  }
};

}  // namespace

TypeExpr unfold_seq(const TypeExpr& t) {
  if (t.is(TypeKind::Seq)) return seq_unfolding();
  return map_kids(t, unfold_seq);
}

TypeExpr fold_seq(const TypeExpr& t) {
  if (t.is(TypeKind::ForAll) && type_eq(t, seq_unfolding(), 0)) return TypeExpr::seq();
  return map_kids(t, fold_seq);
}

bool type_eq(const TypeExpr& a, const TypeExpr& b, std::size_t budget) {
  if (a.same_node(b)) return true;
  return Eq{}.run(a, b, budget, budget);
}

TypeExpr subst_type(const TypeExpr& a, const std::string& alpha, const TypeExpr& b) {
  const auto fvb = b.free_vars();
  std::function<TypeExpr(const TypeExpr&)> go = [&](const TypeExpr& t) -> TypeExpr {
    switch (t.kind()) {
      case TypeKind::Var:
        return t.name() == alpha ? b : t;
      case TypeKind::ForAll: {
        if (t.name() == alpha) return t;
        const auto fvt = t.body().free_vars();
        if (!fvt.count(alpha)) return t;
        if (!fvb.count(t.name())) return TypeExpr::forall(t.name(), go(t.body()));
        std::set<std::string> avoid = fvb;
        avoid.insert(fvt.begin(), fvt.end());
        avoid.insert(alpha);
        const std::string fresh = fresh_type_var(t.name(), avoid);
        return TypeExpr::forall(fresh, go(subst_type(t.body(), t.name(), TypeExpr::var(fresh))));
      }
      default:
        return map_kids(t, go);
    }
  };
  return go(a);
}

// ---- text ----

namespace {

enum class TT { Ident, Arrow, Bang, Para, Star, LParen, RParen, Dot, Forall, End };

struct TTok {
  TT kind;
  std::string text;
  std::size_t col;
};

std::vector<TTok> lex_type(std::string_view s) {
  std::vector<TTok> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (starts("-o")) {
      out.push_back({TT::Arrow, "-o", col});
      i += 2;
    } else if (starts("⊸")) {
      out.push_back({TT::Arrow, "-o", col});
      i += std::string_view("⊸").size();
    } else if (starts("§")) {
      out.push_back({TT::Para, "$", col});
      i += std::string_view("§").size();
    } else if (starts("⊗")) {
      out.push_back({TT::Star, "*", col});
      i += std::string_view("⊗").size();
    } else if (starts("∀")) {
      out.push_back({TT::Forall, "forall", col});
      i += std::string_view("∀").size();
    } else if (c == '!') {
      out.push_back({TT::Bang, "!", col});
      ++i;
    } else if (c == '$') {
      out.push_back({TT::Para, "$", col});
      ++i;
    } else if (c == '*') {
      out.push_back({TT::Star, "*", col});
      ++i;
    } else if (c == '(') {
      out.push_back({TT::LParen, "(", col});
      ++i;
    } else if (c == ')') {
      out.push_back({TT::RParen, ")", col});
      ++i;
    } else if (c == '.') {
      out.push_back({TT::Dot, ".", col});
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
      std::string w(s.substr(i, j - i));
      out.push_back({w == "forall" ? TT::Forall : TT::Ident, w, col});
      i = j;
    } else {
      throw TypeSyntaxError(std::string("unexpected character '") + c + "'", col);
    }
  }
  out.push_back({TT::End, "", s.size() + 1});
  return out;
}

bool is_reserved(const std::string& w) {
  if (w == "Seq" || w == "N" || w == "W2" || w == "F" || w == "L" || w == "forall") return true;
  return w.size() >= 2 && w[0] == 'B' && std::all_of(w.begin() + 1, w.end(), ::isdigit);
}

class TypeParser {
 public:
  TypeParser(std::vector<TTok> t, const TypeAliases* aliases) : t_(std::move(t)), aliases_(aliases) {}

  TypeExpr parse() {
    TypeExpr r = type();
    if (peek().kind != TT::End) fail("trailing input '" + peek().text + "'");
    return r;
  }

 private:
  const TTok& peek() const { return t_[pos_]; }
  TTok next() { return t_[pos_ < t_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& m) const { throw TypeSyntaxError(m, peek().col); }
  void expect(TT k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    next();
  }

  TypeExpr type() {
    if (peek().kind == TT::Forall) {
      next();
      std::vector<std::string> names;
      while (peek().kind == TT::Ident) {
        if (is_reserved(peek().text)) fail("reserved name '" + peek().text + "' used as type variable");
        if (aliases_ && aliases_->count(peek().text)) fail("alias '" + peek().text + "' used as type variable");
        names.push_back(next().text);
      }
      if (names.empty()) fail("expected type variable");
      expect(TT::Dot, "'.'");
      TypeExpr body = type();
      for (auto it = names.rbegin(); it != names.rend(); ++it) body = TypeExpr::forall(*it, body);
      return body;
    }
    if (peek().kind == TT::Bang) {
      const std::size_t col = peek().col;
      next();
      TypeExpr a = tensor();
      if (peek().kind != TT::Arrow)
        throw PolarityViolation("column " + std::to_string(col) + ": '!' must be the left side of an arrow");
      next();
      return TypeExpr::bang(a, type());
    }
    TypeExpr a = tensor();
    if (peek().kind == TT::Arrow) {
      next();
      return TypeExpr::lin(a, type());
    }
    return a;
  }

  TypeExpr tensor() {
    std::vector<TypeExpr> parts{prefix()};
    while (peek().kind == TT::Star) {
      next();
      parts.push_back(prefix());
    }
    return parts.size() == 1 ? parts[0] : tuple_type(parts);
  }

  TypeExpr prefix() {
    if (peek().kind == TT::Para) {
      next();
      return TypeExpr::para(prefix());
    }
    if (peek().kind == TT::Bang) throw PolarityViolation("column " + std::to_string(peek().col) + ": '!' in positive position");
    return atom();
  }

  TypeExpr atom() {
    if (peek().kind == TT::LParen) {
      next();
      TypeExpr t = type();
      expect(TT::RParen, "')'");
      return t;
    }
    if (peek().kind != TT::Ident) fail(peek().kind == TT::End ? "unexpected end of type" : "unexpected '" + peek().text + "'");
    const std::string w = next().text;
    if (w == "Seq") return TypeExpr::seq();
    if (w == "N") return nat_type();
    if (w == "W2") return word2_type();
    if (w == "F") return field_type();
    if (w == "L") {
      expect(TT::LParen, "'(' after L");
      TypeExpr e = type();
      expect(TT::RParen, "')'");
      return list_type(e);
    }
    if (w.size() >= 2 && w[0] == 'B' && std::all_of(w.begin() + 1, w.end(), ::isdigit)) return bool_type(std::stoul(w.substr(1)));
    if (aliases_) {
      auto it = aliases_->find(w);
      if (it != aliases_->end()) return it->second;
    }
    return TypeExpr::var(w);
  }

  std::vector<TTok> t_;
  const TypeAliases* aliases_;
  std::size_t pos_ = 0;
};

// Precedence: 0 forall, 1 arrow, 2 tensor, 3 prefix, 4 atom.
struct Printed {
  std::string text;
  int level;
};

std::string wrap(const Printed& p, int need) { return p.level >= need ? p.text : "(" + p.text + ")"; }

Printed print_at(const TypeExpr& t);

// Recognizes A1 -o ... -o An -o a with a not free in any Ai.
std::optional<std::vector<TypeExpr>> tuple_parts(const TypeExpr& k, const std::string& a) {
  std::vector<TypeExpr> parts;
  const TypeExpr* cur = &k;
  while (cur->is(TypeKind::Lin)) {
    if (cur->left().free_vars().count(a)) return std::nullopt;
    parts.push_back(cur->left());
    cur = &cur->right();
  }
  if (!cur->is(TypeKind::Var) || cur->name() != a || parts.size() < 2) return std::nullopt;
  return parts;
}

std::optional<Printed> fold_macro(const TypeExpr& t) {
  if (!t.is(TypeKind::ForAll)) return std::nullopt;
  const std::string& a = t.name();
  const TypeExpr& body = t.body();
  auto is_a = [&](const TypeExpr& x) { return x.is(TypeKind::Var) && x.name() == a; };
  auto is_aa = [&](const TypeExpr& x) { return x.is(TypeKind::Lin) && is_a(x.left()) && is_a(x.right()); };
  {
    std::size_t k = 0;
    const TypeExpr* cur = &body;
    while (cur->is(TypeKind::Lin) && is_a(cur->left())) {
      ++k;
      cur = &cur->right();
    }
    if (is_a(*cur) && k >= 2) return Printed{"B" + std::to_string(k - 1), 4};
  }
  if (body.is(TypeKind::Bang) && body.right().is(TypeKind::Para) && is_aa(body.right().body())) {
    const TypeExpr& l = body.left();
    if (is_aa(l)) return Printed{"N", 4};
    if (l.is(TypeKind::Lin) && is_aa(l.right()) && !l.left().free_vars().count(a)) {
      if (type_eq(l.left(), bool_type(2), 0)) return Printed{"W2", 4};
      return Printed{"L(" + print_at(l.left()).text + ")", 4};
    }
  }
  if (body.is(TypeKind::Lin) && is_a(body.right())) {
    if (auto parts = tuple_parts(body.left(), a)) {
      std::string s;
      for (std::size_t i = 0; i < parts->size(); ++i) s += (i ? " * " : "") + wrap(print_at((*parts)[i]), 3);
      return Printed{s, 2};
    }
  }
  return std::nullopt;
}

Printed print_at(const TypeExpr& t) {
  if (auto m = fold_macro(t)) return *m;
  switch (t.kind()) {
    case TypeKind::Var: return {t.name(), 4};
    case TypeKind::Seq: return {"Seq", 4};
    case TypeKind::Para: return {"$" + wrap(print_at(t.body()), 3), 3};
    case TypeKind::ForAll: return {"forall " + t.name() + ". " + print_at(t.body()).text, 0};
    case TypeKind::Lin: return {wrap(print_at(t.left()), 2) + " -o " + wrap(print_at(t.right()), 0), 1};
    case TypeKind::Bang: return {"!" + wrap(print_at(t.left()), 3) + " -o " + wrap(print_at(t.right()), 0), 1};
  }
  return {"?", 4};
}

}  // namespace

TypeExpr parse_type(std::string_view text, const TypeAliases* aliases) { return TypeParser(lex_type(text), aliases).parse(); }

std::string print_type(const TypeExpr& t) { return print_at(t).text; }

}  // namespace lightfield
