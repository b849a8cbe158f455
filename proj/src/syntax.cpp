#include "lightfield/syntax.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace lightfield {

SyntaxError::SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Lambda, Dot, LParen, RParen, LAngle, RAngle, LBracket, RBracket, Comma, Ident, Equals, Assign, Semi, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col;
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, c), l, cl});
      advance(1);
    };
    switch (c) {
      case '\\': single(Tok::Lambda); continue;
      case '.': single(Tok::Dot); continue;
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case '<': single(Tok::LAngle); continue;
      case '>': single(Tok::RAngle); continue;
      case ',': single(Tok::Comma); continue;
      case '[': single(Tok::LBracket); continue;
      case ']': single(Tok::RBracket); continue;
      case '=': single(Tok::Equals); continue;
      case ';': single(Tok::Semi); continue;
      default: break;
    }
    if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') {
      out.push_back({Tok::Assign, ":=", l, cl});
      advance(2);
      continue;
    }
    // λ in UTF-8
    if (static_cast<unsigned char>(c) == 0xCE && i + 1 < src.size() && static_cast<unsigned char>(src[i + 1]) == 0xBB) {
      out.push_back({Tok::Lambda, "λ", l, cl});
      i += 2;
      ++col;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Term term() {
    if (peek().kind == Tok::Lambda) return lambda();
    Term acc = atom();
    while (true) {
      const auto k = peek().kind;
      if (k == Tok::Lambda) return Term::app(acc, lambda());
      if (k == Tok::Ident || k == Tok::LParen || k == Tok::LAngle) {
        acc = Term::app(acc, atom());
        continue;
      }
      return acc;
    }
  }

  Program program() {
    Program p;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Ident && peek().text == "instance" && peek(1).kind == Tok::Ident &&
          peek(2).kind == Tok::Equals) {
        next();
        Definition d;
        d.is_instance = true;
        d.name = next().text;
        next();
        d.term = Term::free(expect(Tok::Ident, "template name").text);
        expect(Tok::LBracket, "'['");
        while (true) {
          std::string hole = expect(Tok::Ident, "hole name").text;
          expect(Tok::Assign, "':='");
          d.holes.emplace_back(std::move(hole), term());
          if (peek().kind != Tok::Comma) break;
          next();
        }
        expect(Tok::RBracket, "']'");
        expect(Tok::Semi, "';' after definition");
        p.definitions.push_back(std::move(d));
        continue;
      }
      if (peek().kind == Tok::Ident && peek(1).kind == Tok::Equals) {
        Definition d;
        d.name = next().text;
        next();
        d.term = term();
        expect(Tok::Semi, "';' after definition");
        p.definitions.push_back(std::move(d));
        continue;
      }
      if (p.main) fail("only one main term allowed");
      p.main = term();
      if (peek().kind == Tok::Semi) next();
    }
    return p;
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail("trailing input '" + peek().text + "'");
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().line, peek().column); }

  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return next();
  }

  Term lambda() {
    expect(Tok::Lambda, "'\\'");
    if (peek().kind == Tok::LAngle) {
      next();
      std::vector<std::string> xs;
      xs.push_back(expect(Tok::Ident, "binder").text);
      while (peek().kind == Tok::Comma) {
        next();
        xs.push_back(expect(Tok::Ident, "binder").text);
      }
      expect(Tok::RAngle, "'>'");
      if (xs.size() < 2) fail("tuple destructor needs at least two binders");
      expect(Tok::Dot, "'.'");
      return Term::destr(xs, term());
    }
    std::string x = expect(Tok::Ident, "binder").text;
    expect(Tok::Dot, "'.'");
    return Term::abs(x, term());
  }

  Term atom() {
    const auto& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        return Term::free(next().text);
      case Tok::LParen: {
        next();
        Term inner = term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::LAngle: {
        next();
        std::vector<Term> xs;
        xs.push_back(term());
        while (peek().kind == Tok::Comma) {
          next();
          xs.push_back(term());
        }
        expect(Tok::RAngle, "'>'");
        if (xs.size() < 2) fail("tuple needs at least two components");
        return Term::tuple(std::move(xs));
      }
      default:
        fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

class Printer {
 public:
  explicit Printer(const Term& root) : free_(root.free_vars()) {}

  void term(const Term& t, std::string& out) {
    switch (t.kind()) {
      case TermKind::Abs: {
        const std::string x = pick(t.name());
        out += '\\' + x + ". ";
        scope_.push_back(x);
        term(t.body(), out);
        scope_.pop_back();
        return;
      }
      case TermKind::Destr: {
        out += "\\<";
        std::vector<std::string> xs;
        for (const auto& h : t.binders()) {
          xs.push_back(pick(h));
          scope_.push_back(xs.back());
        }
        for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
        out += ">. ";
        term(t.body(), out);
        scope_.resize(scope_.size() - xs.size());
        return;
      }
      case TermKind::App: {
        const bool wrap_fn = t.fn().is(TermKind::Abs) || t.fn().is(TermKind::Destr);
        if (wrap_fn) out += '(';
        term(t.fn(), out);
        if (wrap_fn) out += ')';
        out += ' ';
        const bool wrap_arg = t.arg().is(TermKind::App) || t.arg().is(TermKind::Abs) || t.arg().is(TermKind::Destr);
        if (wrap_arg) out += '(';
        term(t.arg(), out);
        if (wrap_arg) out += ')';
        return;
      }
      default:
        atom(t, out);
    }
  }

 private:
  void atom(const Term& t, std::string& out) {
    switch (t.kind()) {
      case TermKind::Bound:
        if (t.index() >= scope_.size()) {
          out += "#" + std::to_string(t.index());
        } else {
          out += scope_[scope_.size() - 1 - t.index()];
        }
        return;
      case TermKind::Free:
        out += t.name();
        return;
      case TermKind::Tuple:
        out += '<';
        for (std::size_t i = 0; i < t.items().size(); ++i) {
          if (i) out += ", ";
          term(t.items()[i], out);
        }
        out += '>';
        return;
      default:
        term(t, out);
    }
  }

  std::string pick(const std::string& hint) const {
    std::string x = hint.empty() ? "x" : hint;
    auto taken = [&](const std::string& n) {
      if (free_.count(n)) return true;
      for (const auto& s : scope_)
        if (s == n) return true;
      return false;
    };
    while (taken(x)) x += '\'';
    return x;
  }

  std::set<std::string> free_;
  std::vector<std::string> scope_;
};

}  // namespace

Term parse_term(std::string_view text) {
  Parser p(lex(text));
  Term t = p.term();
  p.expect_end();
  return t;
}

Program parse_program(std::string_view text) { return Parser(lex(text)).program(); }

std::string print_term(const Term& term) {
  std::string out;
  Printer(term).term(term, out);
  return out;
}

void Environment::define(const std::string& name, const Term& term) {
  if (!defs_.count(name)) order_.push_back(name);
  defs_.insert_or_assign(name, resolve(term));
}

void Environment::define(const Definition& def) {
  if (!def.is_instance) {
    define(def.name, def.term);
    return;
  }
  Term t = resolve(def.term);
  for (const auto& [hole, filler] : def.holes) t = substitute(t, hole, resolve(filler));
  define(def.name, t);
}

void Environment::load(const Program& program) {
  for (const auto& d : program.definitions) define(d);
}

const Term& Environment::get(const std::string& name) const {
  auto it = defs_.find(name);
  if (it == defs_.end()) throw std::out_of_range("undefined combinator '" + name + "'");
  return it->second;
}

Term Environment::resolve(const Term& term) const {
  Term t = term;
  for (const auto& name : term.free_vars()) {
    auto it = defs_.find(name);
    if (it != defs_.end()) t = substitute(t, name, it->second);
  }
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lightfield
