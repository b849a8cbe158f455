#include <algorithm>
#include <random>

#include "doctest.h"
#include "lightfield/combinators.hpp"

using namespace lightfield;

namespace {

const Trit kTrits[] = {Trit::tt, Trit::ff, Trit::bot};

Term nf(const std::string& name, const std::vector<Term>& args) { return word_op(name, args).term(); }

TritWord random_word(std::mt19937& rng, std::size_t len, bool with_bot = true) {
  std::uniform_int_distribution<int> d(0, with_bot ? 2 : 1);
  TritWord w;
  for (std::size_t i = 0; i < len; ++i) w.trits.push_back(kTrits[d(rng)]);
  return w;
}

// Every word over the given alphabet up to max_len, shortest first.
std::vector<TritWord> all_words(std::size_t max_len, std::size_t alphabet) {
  std::vector<TritWord> out{TritWord{}};
  std::size_t from = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t to = out.size();
    for (std::size_t i = from; i < to; ++i)
      for (std::size_t a = 0; a < alphabet; ++a) {
        TritWord w = out[i];
        w.trits.push_back(kTrits[a]);
        out.push_back(w);
      }
    from = to;
  }
  return out;
}

}  // namespace

TEST_CASE("canonical encodings") {
  CHECK(encode_trit(Trit::tt) == parse_term("\\x. \\y. \\z. x"));
  CHECK(encode_trit(Trit::ff) == parse_term("\\x. \\y. \\z. y"));
  CHECK(encode_trit(Trit::bot) == parse_term("\\x. \\y. \\z. z"));
  CHECK(encode_word({}) == parse_term("\\f. \\x. x"));
  CHECK(encode_word(word_from_string("10")) == parse_term("\\f. \\x. f (\\x. \\y. \\z. x) (f (\\x. \\y. \\z. y) x)"));
  CHECK(encode_seq({}) == parse_term("\\t. \\c. t (\\x. \\y. \\z. z)"));
  CHECK(encode_numeral(2) == parse_term("\\f. \\x. f (f x)"));
  // library constants agree with the encoders
  const auto& lib = Library::standard();
  CHECK(lib.get("tt") == encode_trit(Trit::tt));
  CHECK(lib.get("wNil") == encode_word({}));
  CHECK(lib.get("sNil") == encode_seq({}));
}

TEST_CASE("decoders reject non-canonical shapes") {
  CHECK_THROWS_AS(decode_word(parse_term("\\f. \\x. f (\\x. x) x")), NotAWord);
  CHECK_THROWS_AS(decode_word(parse_term("\\f. \\x. x f")), NotAWord);
  CHECK_THROWS_AS(decode_word(parse_term("\\f. \\x. f x x")), NotAWord);
  CHECK_THROWS_AS(decode_trit(parse_term("\\x. x")), NotCanonical);
  CHECK_THROWS_AS(decode_seq(parse_term("\\t. \\c. t (\\x. \\y. \\z. x)")), NotCanonical);
  try {
    decode_word(parse_term("\\f. \\x. f (\\x. \\y. \\z. x) (f q x)"));
    FAIL("expected NotAWord");
  } catch (const NotAWord& e) {
    CHECK(e.offending() == parse_term("q"));
  }
}

TEST_CASE("property: encode/decode round trips") {
  std::mt19937 rng(11);
  for (std::size_t len = 0; len <= 32; ++len) {
    TritWord w = random_word(rng, len);
    CHECK(decode_word(encode_word(w)) == w);
    SeqValue s{w.trits};
    CHECK(decode_seq(encode_seq(s)) == s);
    CHECK(decode_numeral(encode_numeral(len)) == len);
  }
}

TEST_CASE("golden: xor and and tables") {
  const Term tt = encode_trit(Trit::tt), ff = encode_trit(Trit::ff), bot = encode_trit(Trit::bot);
  CHECK(nf("bXor", {ff, ff}) == ff);
  CHECK(nf("bXor", {tt, tt}) == ff);
  CHECK(nf("bXor", {ff, tt}) == tt);
  CHECK(nf("bXor", {tt, ff}) == tt);
  CHECK(nf("bAnd", {ff, ff}) == ff);
  CHECK(nf("bAnd", {tt, tt}) == tt);
  CHECK(nf("bAnd", {ff, tt}) == ff);
  CHECK(nf("bAnd", {tt, ff}) == ff);
  for (Trit b : kTrits) {
    CHECK(nf("bXor", {bot, encode_trit(b)}) == encode_trit(b));
    CHECK(nf("bXor", {encode_trit(b), bot}) == encode_trit(b));
    CHECK(nf("bAnd", {bot, encode_trit(b)}) == bot);
    CHECK(nf("bAnd", {encode_trit(b), bot}) == bot);
  }
  CHECK(bxor_apply(Trit::ff, Trit::tt) == Trit::tt);
  CHECK(band_apply(Trit::tt, Trit::tt) == Trit::tt);
}

TEST_CASE("golden: sequences") {
  const SeqValue s{{Trit::tt, Trit::ff, Trit::bot}};
  auto [head, tail] = split_seq(s);
  CHECK(head == Trit::tt);
  CHECK(tail == SeqValue{{Trit::ff, Trit::bot}});
  auto [h0, t0] = split_seq({});
  CHECK(h0 == Trit::bot);
  CHECK(t0 == SeqValue{});
  // split then re-cons with the sequence constructor
  std::mt19937 rng(3);
  for (std::size_t len = 1; len <= 10; ++len) {
    TritWord w = random_word(rng, len);
    const Term v = nf("sSplit", {encode_seq({w.trits})});
    const Term recons = Term::abs(std::vector<std::string>{"t", "c"}, Term::app(Term::free("c"), v));
    CHECK(eval(recons).term() == encode_seq({w.trits}));
  }
}

TEST_CASE("golden: word operations on every word up to length 6") {
  for (const auto& w : all_words(6, 3)) {
    TritWord rev = w;
    std::reverse(rev.trits.begin(), rev.trits.end());
    CHECK(nf("wRev", {encode_word(w)}) == encode_word(rev));

    TritWord dropped;
    std::copy_if(w.trits.begin(), w.trits.end(), std::back_inserter(dropped.trits),
                 [](Trit t) { return t != Trit::bot; });
    CHECK(nf("wDropB", {encode_word(w)}) == encode_word(dropped));

    CHECK(nf("wTos", {encode_word(w)}) == encode_seq({w.trits}));

    for (Trit b : kTrits) {
      TritWord suc = w;
      suc.trits.insert(suc.trits.begin(), b);
      CHECK(nf("wSuc", {encode_trit(b), encode_word(w)}) == encode_word(suc));
    }
  }
}

TEST_CASE("golden: projections") {
  std::mt19937 rng(5);
  for (std::size_t len = 0; len <= 8; ++len) {
    PairWord pw;
    TritWord firsts, seconds;
    for (std::size_t i = 0; i < len; ++i) {
      const TritPair p{random_word(rng, 1).trits[0], random_word(rng, 1).trits[0]};
      pw.push_back(p);
      firsts.trits.push_back(p.first);
      seconds.trits.push_back(p.second);
    }
    CHECK(nf("wProj", {encode_pair_word(pw)}) == encode_word(firsts));
    CHECK(nf("wProjb", {encode_pair_word(pw)}) == encode_word(seconds));
    CHECK(decode_pair_word(encode_pair_word(pw)) == pw);
  }
  // empty input yields the empty word
  CHECK(nf("wProj", {encode_word({})}) == encode_word({}));
  CHECK(nf("wTos", {encode_word({})}) == encode_seq({}));
}

TEST_CASE("golden: casts, dups and lifts") {
  for (Trit b : kTrits) {
    for (std::size_t m = 0; m <= 2; ++m) CHECK(nf("bCast" + std::to_string(m), {encode_trit(b)}) == encode_trit(b));
    for (std::size_t t = 2; t <= 4; ++t) {
      CHECK(nf("bDup" + std::to_string(t), {encode_trit(b)}) ==
            Term::tuple(std::vector<Term>(t, encode_trit(b))));
    }
    for (Trit c : kTrits)
      for (std::size_t m = 0; m <= 2; ++m) CHECK(t_cast(m, {b, c}) == TritPair{b, c});
  }
  CHECK(b_dup(3, Trit::tt) == std::vector<Trit>{Trit::tt, Trit::tt, Trit::tt});
  const TritWord w = word_from_string("10_1");
  CHECK(nf("wDup2_1", {encode_word(w)}) == Term::tuple({encode_word(w), encode_word(w)}));
  // lift leaves behaviour unchanged
  const Term m = Library::standard().get("wRev");
  CHECK(lift_term(m, 2) == Term::abs("x", Term::app(Term::abs("x", Term::app(m, Term::free("x"))), Term::free("x"))));
  for (std::size_t n = 1; n <= 3; ++n)
    CHECK(eval(Term::app(lift_term(m, n), encode_word(w))).term() == eval(Term::app(m, encode_word(w))).term());
}

TEST_CASE("property: cast transparency up to length 16") {
  std::mt19937 rng(17);
  for (std::size_t len = 0; len <= 16; ++len) {
    const TritWord w = random_word(rng, len);
    for (std::size_t m = 0; m <= 2; ++m) CHECK(w_cast(m, w) == w);
    for (std::size_t t = 2; t <= 3; ++t)
      for (std::size_t m = 0; m <= 1; ++m) CHECK(w_dup(t, m, w) == std::vector<TritWord>(t, w));
    CHECK(w_tos(w) == SeqValue{w.trits});
  }
}

TEST_CASE("library sources round trip through the printer") {
  const auto& lib = Library::standard();
  for (const auto& path : lib.source_files()) {
    Program p = parse_program(read_file(path));
    for (const auto& d : p.definitions) {
      CHECK(parse_term(print_term(d.term)) == d.term);
      for (const auto& [hole, filler] : d.holes) CHECK(parse_term(print_term(filler)) == filler);
    }
  }
  for (const auto& name : lib.environment().order()) CHECK(parse_term(print_term(lib.get(name))) == lib.get(name));
}
