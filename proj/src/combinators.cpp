#include "lightfield/combinators.hpp"

#include <cstdlib>
#include <regex>

namespace lightfield {

namespace {

std::string excerpt(const Term& t) {
  std::string s = print_term(t);
  if (s.size() > 120) s = s.substr(0, 117) + "...";
  return s;
}

const Term& trit_term(Trit t) {
  static const Term tt = parse_term("\\x. \\y. \\z. x");
  static const Term ff = parse_term("\\x. \\y. \\z. y");
  static const Term bot = parse_term("\\x. \\y. \\z. z");
  switch (t) {
    case Trit::tt: return tt;
    case Trit::ff: return ff;
    case Trit::bot: break;
  }
  return bot;
}

template <typename Elem>
Term encode_list(const std::vector<Elem>& xs, Term (*enc)(Elem)) {
  Term acc = Term::free("x");
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) acc = Term::apps(Term::free("f"), {enc(*it), acc});
  return Term::abs(std::vector<std::string>{"f", "x"}, acc);
}

// Walks λf. λx. f e_{n-1} (... (f e_0 x)), handing each closed element over.
template <typename F>
void walk_list(const Term& v, F&& each) {
  if (!v.is(TermKind::Abs) || !v.body().is(TermKind::Abs)) throw NotAWord(v);
  const Term* cur = &v.body().body();
  while (true) {
    if (cur->is(TermKind::Bound) && cur->index() == 0) return;
    if (!cur->is(TermKind::App) || !cur->fn().is(TermKind::App)) throw NotAWord(*cur);
    const Term& head = cur->fn().fn();
    if (!head.is(TermKind::Bound) || head.index() != 1) throw NotAWord(*cur);
    const Term& e = cur->fn().arg();
    if (e.fv_bound() != 0) throw NotAWord(e);
    each(e);
    cur = &cur->arg();
  }
}

Term enc_trit(Trit t) { return encode_trit(t); }
Term enc_pair(TritPair p) { return encode_trit_pair(p); }

}  // namespace

NotCanonical::NotCanonical(const std::string& what_type, const Term& offending)
    : std::runtime_error("not a canonical " + what_type + ": " + excerpt(offending)), offending_(offending) {}

char trit_char(Trit t) {
  switch (t) {
    case Trit::tt: return '1';
    case Trit::ff: return '0';
    case Trit::bot: break;
  }
  return '_';
}

Trit trit_from_char(char c) {
  switch (c) {
    case '1': return Trit::tt;
    case '0': return Trit::ff;
    case '_': return Trit::bot;
    default: throw std::invalid_argument(std::string("not a trit: '") + c + "'");
  }
}

std::string to_string(const TritWord& w) {
  std::string s;
  for (Trit t : w.trits) s += trit_char(t);
  return s;
}

TritWord word_from_string(const std::string& s) {
  TritWord w;
  for (char c : s) w.trits.push_back(trit_from_char(c));
  return w;
}

Term encode_trit(Trit t) { return trit_term(t); }

Trit decode_trit(const Term& v) {
  for (Trit t : {Trit::tt, Trit::ff, Trit::bot})
    if (v == trit_term(t)) return t;
  throw NotCanonical("boolean", v);
}

Term encode_trit_pair(TritPair p) { return Term::tuple({encode_trit(p.first), encode_trit(p.second)}); }

TritPair decode_trit_pair(const Term& v) {
  if (!v.is(TermKind::Tuple) || v.arity() != 2) throw NotCanonical("boolean pair", v);
  return {decode_trit(v.items()[0]), decode_trit(v.items()[1])};
}

Term encode_word(const TritWord& w) { return encode_list(w.trits, enc_trit); }

TritWord decode_word(const Value& v) { return decode_word(v.term()); }

TritWord decode_word(const Term& v) {
  TritWord w;
  walk_list(v, [&](const Term& e) {
    try {
      w.trits.push_back(decode_trit(e));
    } catch (const NotCanonical&) {
      throw NotAWord(e);
    }
  });
  return w;
}

Term encode_pair_word(const PairWord& w) { return encode_list(w, enc_pair); }

PairWord decode_pair_word(const Term& v) {
  PairWord w;
  walk_list(v, [&](const Term& e) { w.push_back(decode_trit_pair(e)); });
  return w;
}

std::vector<TritWord> decode_word_tuple(const Term& v, std::size_t t) {
  if (!v.is(TermKind::Tuple) || v.arity() != t) throw NotCanonical(std::to_string(t) + "-tuple of words", v);
  std::vector<TritWord> out;
  for (const auto& k : v.items()) out.push_back(decode_word(k));
  return out;
}

Term encode_seq(const SeqValue& s) {
  Term acc = Term::abs(std::vector<std::string>{"t", "c"}, Term::app(Term::free("t"), encode_trit(Trit::bot)));
  for (auto it = s.trits.rbegin(); it != s.trits.rend(); ++it)
    acc = Term::abs(std::vector<std::string>{"t", "c"}, Term::app(Term::free("c"), Term::tuple({encode_trit(*it), acc})));
  return acc;
}

SeqValue decode_seq(const Term& v) {
  SeqValue s;
  const Term* cur = &v;
  while (true) {
    if (!cur->is(TermKind::Abs) || !cur->body().is(TermKind::Abs)) throw NotCanonical("sequence", *cur);
    const Term& b = cur->body().body();
    if (!b.is(TermKind::App) || !b.fn().is(TermKind::Bound)) throw NotCanonical("sequence", *cur);
    if (b.fn().index() == 1) {
      if (b.arg() != encode_trit(Trit::bot)) throw NotCanonical("sequence", *cur);
      return s;
    }
    const Term& pair = b.arg();
    if (b.fn().index() != 0 || !pair.is(TermKind::Tuple) || pair.arity() != 2 || pair.fv_bound() != 0)
      throw NotCanonical("sequence", *cur);
    s.trits.push_back(decode_trit(pair.items()[0]));
    cur = &pair.items()[1];
  }
}

Term encode_numeral(std::size_t n) {
  Term acc = Term::free("x");
  for (std::size_t i = 0; i < n; ++i) acc = Term::app(Term::free("f"), acc);
  return Term::abs(std::vector<std::string>{"f", "x"}, acc);
}

std::size_t decode_numeral(const Term& v) {
  if (!v.is(TermKind::Abs) || !v.body().is(TermKind::Abs)) throw NotCanonical("numeral", v);
  std::size_t n = 0;
  const Term* cur = &v.body().body();
  while (cur->is(TermKind::App) && cur->fn().is(TermKind::Bound) && cur->fn().index() == 1) {
    ++n;
    cur = &cur->arg();
  }
  if (!cur->is(TermKind::Bound) || cur->index() != 0) throw NotCanonical("numeral", v);
  return n;
}

Library::Library(const std::string& dir) {
  for (const char* f : {"core.lam", "patterns.lam", "field.lam"}) {
    const std::string path = dir + "/lib/" + f;
    env_.load(parse_program(read_file(path)));
    files_.push_back(path);
  }
}

std::string Library::data_dir() {
  if (const char* d = std::getenv("LIGHTFIELD_DATA")) return d;
  return LIGHTFIELD_DATA_DIR;
}

const Library& Library::standard() {
  static const Library lib(data_dir());
  return lib;
}

Term Library::b_dup(std::size_t t) const {
  if (t < 2) throw std::invalid_argument("bDup needs at least two copies");
  std::vector<Term> arms;
  for (Trit c : {Trit::tt, Trit::ff, Trit::bot}) arms.push_back(Term::tuple(std::vector<Term>(t, encode_trit(c))));
  return Term::abs("b", Term::apps(Term::free("b"), arms));
}

Term Library::b_cast(std::size_t) const { return get("bCast0"); }

Term Library::t_cast(std::size_t m) const {
  if (m == 0) return get("tCast0");
  return Term::abs("p", Term::app(lift_term(t_cast(m - 1), 1), Term::app(get("tCast0"), Term::free("p"))));
}

Term Library::w_cast(std::size_t m) const {
  if (m == 0) return get("wCast0");
  return Term::abs("l", Term::app(lift_term(w_cast(m - 1), 1), Term::app(get("wCast0"), Term::free("l"))));
}

Term Library::w_dup(std::size_t t, std::size_t m) const {
  if (t < 2) throw std::invalid_argument("wDup needs at least two copies");
  if (m > 0)
    return Term::abs("l", Term::app(lift_term(w_dup(t, m - 1), 1), Term::app(get("wCast0"), Term::free("l"))));
  std::vector<std::string> xs;
  for (std::size_t i = 1; i <= t; ++i) xs.push_back("x" + std::to_string(i));
  std::vector<Term> arms;
  for (Trit c : {Trit::tt, Trit::ff, Trit::bot}) {
    std::vector<Term> items;
    for (const auto& x : xs) items.push_back(Term::apps(get("wSuc"), {encode_trit(c), Term::free(x)}));
    arms.push_back(Term::destr(xs, Term::tuple(std::move(items))));
  }
  Term step = Term::abs("b", Term::apps(Term::free("b"), arms));
  Term base = Term::tuple(std::vector<Term>(t, get("wNil")));
  return Term::abs("l", Term::apps(Term::free("l"), {step, base}));
}

Term Library::lookup(const std::string& name) const {
  if (contains(name)) return get(name);
  static const std::regex family(R"((bDup|bCast|tCast|wCast)(\d+))");
  static const std::regex dup(R"(wDup(\d+)_(\d+))");
  std::smatch m;
  if (std::regex_match(name, m, family)) {
    const std::size_t k = std::stoul(m[2]);
    if (m[1] == "bDup") return b_dup(k);
    if (m[1] == "bCast") return b_cast(k);
    if (m[1] == "tCast") return t_cast(k);
    return w_cast(k);
  }
  if (std::regex_match(name, m, dup)) return w_dup(std::stoul(m[1]), std::stoul(m[2]));
  throw std::out_of_range("undefined combinator '" + name + "'");
}

Term lift_term(const Term& m, std::size_t n) {
  Term t = m;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string x = fresh_name("x", t.free_vars());
    t = Term::abs(x, Term::app(t, Term::free(x)));
  }
  return t;
}

Value word_op(const std::string& name, const std::vector<Term>& args, EvalBudget budget) {
  return eval(Term::apps(Library::standard().lookup(name), args), budget);
}

Trit bxor_apply(Trit a, Trit b) { return decode_trit(word_op("bXor", {encode_trit(a), encode_trit(b)}).term()); }
Trit band_apply(Trit a, Trit b) { return decode_trit(word_op("bAnd", {encode_trit(a), encode_trit(b)}).term()); }

std::pair<Trit, SeqValue> split_seq(const SeqValue& s) {
  const Term v = word_op("sSplit", {encode_seq(s)}).term();
  if (!v.is(TermKind::Tuple) || v.arity() != 2) throw NotCanonical("split result", v);
  return {decode_trit(v.items()[0]), decode_seq(v.items()[1])};
}

TritWord w_rev(const TritWord& w) { return decode_word(word_op("wRev", {encode_word(w)})); }
TritWord w_drop_b(const TritWord& w) { return decode_word(word_op("wDropB", {encode_word(w)})); }
SeqValue w_tos(const TritWord& w) { return decode_seq(word_op("wTos", {encode_word(w)}).term()); }
TritWord w_proj(const PairWord& w) { return decode_word(word_op("wProj", {encode_pair_word(w)})); }
TritWord w_projb(const PairWord& w) { return decode_word(word_op("wProjb", {encode_pair_word(w)})); }

TritWord w_suc(Trit b, const TritWord& w) {
  return decode_word(word_op("wSuc", {encode_trit(b), encode_word(w)}));
}

Trit b_cast(std::size_t m, Trit b) {
  return decode_trit(word_op("bCast" + std::to_string(m), {encode_trit(b)}).term());
}

TritPair t_cast(std::size_t m, TritPair p) {
  return decode_trit_pair(word_op("tCast" + std::to_string(m), {encode_trit_pair(p)}).term());
}

TritWord w_cast(std::size_t m, const TritWord& w) {
  return decode_word(word_op("wCast" + std::to_string(m), {encode_word(w)}));
}

std::vector<Trit> b_dup(std::size_t t, Trit b) {
  const Term v = word_op("bDup" + std::to_string(t), {encode_trit(b)}).term();
  if (!v.is(TermKind::Tuple) || v.arity() != t) throw NotCanonical(std::to_string(t) + "-tuple", v);
  std::vector<Trit> out;
  for (const auto& k : v.items()) out.push_back(decode_trit(k));
  return out;
}

std::vector<TritWord> w_dup(std::size_t t, std::size_t m, const TritWord& w) {
  const Term v = word_op("wDup" + std::to_string(t) + "_" + std::to_string(m), {encode_word(w)}).term();
  return decode_word_tuple(v, t);
}

}  // namespace lightfield
