#include "lightfield/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "lightfield/certify.hpp"
#include "lightfield/drv.hpp"
#include "lightfield/patterns.hpp"
#include "lightfield/types.hpp"

namespace lightfield {

FieldOracle native_oracle() {
  return {poly_add, poly_mul, poly_mod};
}

namespace {

const Trit kTrits[] = {Trit::tt, Trit::ff, Trit::bot};

std::vector<TritWord> words_upto(std::size_t max_len, std::size_t alphabet) {
  std::vector<TritWord> out{TritWord{}};
  std::size_t from = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t to = out.size();
    for (std::size_t i = from; i < to; ++i)
      for (std::size_t a = 0; a < alphabet; ++a) {
        TritWord w = out[i];
        w.trits.push_back(kTrits[a]);
        out.push_back(std::move(w));
      }
    from = to;
  }
  return out;
}

// Counts instances and remembers the first mismatch.
struct Tally {
  std::size_t total = 0;
  std::size_t failed = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++total;
    if (!ok && failed++ == 0) first = what;
  }
  void nf(const std::string& name, const std::vector<Term>& args, const Term& expected, const std::string& what) {
    bool ok = false;
    try {
      ok = alpha_eq(word_op(name, args).term(), expected);
    } catch (const std::exception&) {
    }
    expect(ok, name + " " + what);
  }
  CriterionResult result(int id, const std::string& name, const std::string& unit) const {
    CriterionResult r{id, name, failed == 0, {}};
    std::ostringstream s;
    s << total - failed << "/" << total << " " << unit;
    if (failed) s << "; first failure: " << first;
    r.detail = s.str();
    return r;
  }
};

Term seq_term(const std::vector<Trit>& ts) { return encode_seq(SeqValue{ts}); }

CriterionResult golden_reductions(const SelftestOptions&) {
  Tally t;
  const Term tt = encode_trit(Trit::tt), ff = encode_trit(Trit::ff), bot = encode_trit(Trit::bot);

  // bit tables: four literal rows, then the bot rows for every bit
  t.nf("bXor", {ff, ff}, ff, "ff ff");
  t.nf("bXor", {tt, tt}, ff, "tt tt");
  t.nf("bXor", {ff, tt}, tt, "ff tt");
  t.nf("bXor", {tt, ff}, tt, "tt ff");
  t.nf("bAnd", {ff, ff}, ff, "ff ff");
  t.nf("bAnd", {tt, tt}, tt, "tt tt");
  t.nf("bAnd", {ff, tt}, ff, "ff tt");
  t.nf("bAnd", {tt, ff}, ff, "tt ff");
  for (Trit b : kTrits) {
    const Term bt = encode_trit(b);
    const std::string c(1, trit_char(b));
    t.nf("bXor", {bot, bt}, bt, "_ " + c);
    t.nf("bXor", {bt, bot}, bt, c + " _");
    t.nf("bAnd", {bot, bt}, bot, "_ " + c);
    t.nf("bAnd", {bt, bot}, bot, c + " _");
  }

  const auto words = words_upto(4, 3);
  for (const auto& w : words) {
    const std::string ws = "[" + to_string(w) + "]";
    const Term wt = encode_word(w);
    if (!w.trits.empty()) {
      const std::vector<Trit> tail(w.trits.begin() + 1, w.trits.end());
      t.nf("sSplit", {seq_term(w.trits)}, Term::tuple({encode_trit(w.trits[0]), seq_term(tail)}), ws);
    }
    TritWord rev{{w.trits.rbegin(), w.trits.rend()}};
    t.nf("wRev", {wt}, encode_word(rev), ws);
    t.nf("wTos", {wt}, seq_term(w.trits), ws);
    for (Trit b : kTrits) {
      TritWord suc = w;
      suc.trits.insert(suc.trits.begin(), b);
      t.nf("wSuc", {encode_trit(b), wt}, encode_word(suc), std::string(1, trit_char(b)) + " " + ws);
    }
    for (std::size_t m = 0; m <= 2; ++m) t.nf("wCast" + std::to_string(m), {wt}, wt, ws);
    for (std::size_t k = 2; k <= 3; ++k)
      for (std::size_t m = 0; m <= 2; ++m)
        t.nf("wDup" + std::to_string(k) + "_" + std::to_string(m), {wt}, Term::tuple(std::vector<Term>(k, wt)), ws);
    for (std::size_t n = 1; n <= 3; ++n) {
      bool ok = false;
      try {
        const Term& m = Library::standard().get("wRev");
        ok = alpha_eq(eval(Term::app(lift_term(m, n), wt)).term(), eval(Term::app(m, wt)).term());
      } catch (const std::exception&) {
      }
      t.expect(ok, "lift " + std::to_string(n) + " wRev " + ws);
    }
  }

  // bot prefixes before a bot-free word
  for (const auto& w : words_upto(4, 2))
    for (std::size_t k = 0; k <= 3; ++k) {
      TritWord in = w;
      in.trits.insert(in.trits.begin(), k, Trit::bot);
      t.nf("wDropB", {encode_word(in)}, encode_word(w), "[" + to_string(in) + "]");
    }

  for (Trit b : kTrits) {
    const Term bt = encode_trit(b);
    const std::string c(1, trit_char(b));
    for (std::size_t m = 0; m <= 2; ++m) t.nf("bCast" + std::to_string(m), {bt}, bt, c);
    for (std::size_t k = 2; k <= 4; ++k) t.nf("bDup" + std::to_string(k), {bt}, Term::tuple(std::vector<Term>(k, bt)), c);
    for (Trit d : kTrits) {
      const Term pair = Term::tuple({bt, encode_trit(d)});
      for (std::size_t m = 0; m <= 2; ++m)
        t.nf("tCast" + std::to_string(m), {pair}, pair, "<" + c + "," + trit_char(d) + ">");
    }
  }

  // pair lists of length up to 3
  std::vector<PairWord> lists{PairWord{}};
  for (std::size_t from = 0, len = 1; len <= 3; ++len) {
    const std::size_t to = lists.size();
    for (std::size_t i = from; i < to; ++i)
      for (Trit a : kTrits)
        for (Trit b : kTrits) {
          PairWord p = lists[i];
          p.emplace_back(a, b);
          lists.push_back(std::move(p));
        }
    from = to;
  }
  for (const auto& pw : lists) {
    TritWord firsts, seconds;
    for (const auto& [a, b] : pw) {
      firsts.trits.push_back(a);
      seconds.trits.push_back(b);
    }
    const Term in = encode_pair_word(pw);
    t.nf("wProj", {in}, encode_word(firsts), "[" + to_string(firsts) + "|" + to_string(seconds) + "]");
    t.nf("wProjb", {in}, encode_word(seconds), "[" + to_string(firsts) + "|" + to_string(seconds) + "]");
    t.nf("mtPair", {encode_word(firsts), encode_word(seconds)}, in,
         "[" + to_string(firsts) + "] [" + to_string(seconds) + "]");
  }
  return t.result(1, "golden reductions", "judgments reproduce");
}

CriterionResult pattern_equivalences(const SelftestOptions&) {
  const auto& lib = Library::standard();
  std::size_t cases = 0;
  std::vector<std::string> failures;
  auto run = [&](const std::string& what, const Term& lhs, const Term& rhs, InputFamily fam, std::size_t size,
                 Alphabet alpha) {
    EquivOptions o;
    o.family = fam;
    o.max_size = size;
    o.alphabet = alpha;
    try {
      const auto r = equiv_check(lhs, rhs, o);
      cases += r.cases;
      if (!r.pass) failures.push_back(what + " differs on " + r.counterexample->input);
    } catch (const std::exception& e) {
      failures.push_back(what + ": " + e.what());
    }
  };
  run("tosFromFold", tos_from_fold(lib), lib.get("wTos"), InputFamily::Words, 8, Alphabet::Trits);
  run("projFromMap", proj_from_map(lib), lib.get("wProj"), InputFamily::PairLists, 8, Alphabet::Bits);
  run("projFromMap", proj_from_map(lib), lib.get("wProj"), InputFamily::PairLists, 4, Alphabet::Trits);
  for (const char* h : {"bCast0", "\\b. b ff tt bot", "\\b. bXor tt b"}) {
    const Term ht = lib.resolve(parse_term(h));
    run(std::string("mapFromFold(") + h + ")", map_from_fold(ht, lib), map_of(ht, lib), InputFamily::Words, 8,
        Alphabet::Trits);
  }
  CriterionResult r{2, "pattern equivalences", failures.empty(), {}};
  r.detail = std::to_string(cases) + " inputs, " + std::to_string(failures.size()) + " counterexamples";
  if (!failures.empty()) r.detail += "; " + failures.front();
  return r;
}

std::string bits_msb(Poly a, std::size_t n) {
  std::string s;
  for (std::size_t i = n; i-- > 0;) s += ((a.bits >> i) & 1u) ? '1' : '0';
  return s;
}

CriterionResult field_differential(const SelftestOptions& opts) {
  Tally t;
  const auto& o = opts.oracle;
  auto check_pair = [&](const ParamsRef& p, Poly a, Poly b) {
    const auto ea = FieldElement::from_poly(p, a), eb = FieldElement::from_poly(p, b);
    const std::string tag = "n=" + std::to_string(p->n) + " " + bits_msb(a, p->n) + " " + bits_msb(b, p->n);
    auto guarded = [&](const char* op, auto&& church, Poly expected) {
      bool ok = false;
      try {
        ok = church() == expected;
      } catch (const std::exception&) {
      }
      t.expect(ok, std::string(op) + " " + tag);
    };
    guarded("add", [&] { return bf_add(ea, eb).poly(); }, o.mod(o.add(a, b), p->p));
    guarded("mult", [&] { return bf_mult(ea, eb).poly(); }, o.mod(o.mul(a, b), p->p));
    // the pair also names a dividend of length 2n
    const Poly d{(a.bits << p->n) | b.bits};
    guarded("mod", [&] { return FieldElement::from_word(p, w_mod(p, word_from_string(bits_msb(d, 2 * p->n)))).poly(); },
            o.mod(d, p->p));
  };
  auto check_one = [&](const ParamsRef& p, Poly a) {
    bool ok = false;
    try {
      ok = bf_sqr(FieldElement::from_poly(p, a)).poly() == o.mod(o.mul(a, a), p->p);
    } catch (const std::exception&) {
    }
    t.expect(ok, "sqr n=" + std::to_string(p->n) + " " + bits_msb(a, p->n));
  };
  for (const auto& p : FieldParams::defaults()) {
    const std::uint64_t size = std::uint64_t{1} << p->n;
    if (p->n <= 4) {
      for (std::uint64_t a = 0; a < size; ++a) {
        check_one(p, {a});
        for (std::uint64_t b = 0; b < size; ++b) check_pair(p, {a}, {b});
      }
    } else {
      std::mt19937_64 rng(opts.seed);
      std::uniform_int_distribution<std::uint64_t> d(0, size - 1);
      for (std::size_t i = 0; i < opts.random_pairs; ++i) {
        const Poly a{d(rng)}, b{d(rng)};
        check_one(p, a);
        check_pair(p, a, b);
      }
    }
  }
  return t.result(3, "field differential", "Church results equal the oracle");
}

CriterionResult field_identities(const SelftestOptions&) {
  Tally t;
  const auto p = FieldParams::make(3, "1011");
  std::vector<FieldElement> els;
  for (std::uint64_t x = 0; x < 8; ++x) els.push_back(FieldElement::from_poly(p, {x}));
  const auto zero = els[0], one = els[1];
  auto name = [](const FieldElement& e) { return e.to_string(); };
  for (const auto& a : els) {
    t.expect(bf_add(a, a) == zero, "a+a " + name(a));
    t.expect(bf_mult(a, one) == a, "a*1 " + name(a));
    for (const auto& b : els) {
      const auto ab = bf_mult(a, b);
      t.expect(ab == bf_mult(b, a), "a*b " + name(a) + " " + name(b));
      t.expect(bf_sqr(bf_add(a, b)) == bf_add(bf_sqr(a), bf_sqr(b)), "frobenius " + name(a) + " " + name(b));
      for (const auto& c : els)
        t.expect(bf_mult(ab, c) == bf_mult(a, bf_mult(b, c)),
                 "assoc " + name(a) + " " + name(b) + " " + name(c));
    }
  }
  return t.result(4, "field identities", "identities hold");
}

CriterionResult certificates(const SelftestOptions& opts) {
  const std::string dir = opts.data_dir.empty() ? Library::data_dir() : opts.data_dir;
  Tally t;
  const auto rep = certify_library(Library::standard(), dir);
  for (const auto& r : rep.results) t.expect(r.report.accepted, r.name + " rejected at " + r.report.node);

  const auto catalogue = load_catalogue(dir + "/catalogue.txt");
  auto type_of = [&](const std::string& n) -> const TypeExpr& {
    for (const auto& e : catalogue)
      if (e.name == n) return e.type;
    throw std::out_of_range("no catalogue entry " + n);
  };
  const TypeExpr b2 = bool_type(2), w = word2_type(), f = field_type();
  std::vector<std::pair<std::string, TypeExpr>> stated{
      {"bXor", TypeExpr::lin(b2, TypeExpr::lin(b2, b2))},
      {"wTos", TypeExpr::lin(w, TypeExpr::para(TypeExpr::seq(), 1))},
      {"wMod", TypeExpr::lin(w, TypeExpr::para(f, 1))},
      {"bfSqr", TypeExpr::lin(f, TypeExpr::para(f, 1))},
      {"bfMult", TypeExpr::lin(f, TypeExpr::lin(f, TypeExpr::para(f, 2)))},
  };
  for (std::size_t m = 0; m <= 2; ++m)
    stated.emplace_back("bCast" + std::to_string(m), TypeExpr::lin(b2, TypeExpr::para(b2, m + 1)));
  for (const auto& [k, m] : {std::pair{2, 0}, {2, 1}, {3, 0}})
    stated.emplace_back("wDup" + std::to_string(k) + "_" + std::to_string(m),
                        TypeExpr::lin(w, TypeExpr::para(tuple_type(std::vector<TypeExpr>(k, w)), m + 1)));
  for (const auto& [n, ty] : stated) {
    const auto* r = rep.find(n);
    t.expect(r && r->report.accepted && type_eq(type_of(n), ty, 4), n + " type");
  }

  struct Negative {
    const char* file;
    const char* node;
    const char* rule;
  };
  for (const auto& c : {Negative{"linearity", "0", "TupleIntro"}, Negative{"eigenvariable", "root", "ForAllIntro"},
                        Negative{"bang_minor", "root", "BangApp"}, Negative{"bad_contraction", "root", "Contr"}}) {
    bool ok = false;
    try {
      const auto r = check_file(parse_drv(read_file(dir + "/certs/negative/" + c.file + ".drv")), {});
      ok = !r.accepted && r.node == c.node && r.rule == c.rule;
    } catch (const std::exception&) {
    }
    t.expect(ok, std::string("negative ") + c.file);
  }
  return t.result(5, "typing certificates", "certificate checks");
}

CriterionResult seq_fixpoint(const SelftestOptions&) {
  Tally t;
  const TypeExpr s = TypeExpr::seq();
  const TypeExpr one = unfold_seq(s), two = unfold_seq(one);
  t.expect(type_eq(s, one), "S = one unfolding");
  t.expect(type_eq(s, two), "S = two unfoldings");
  const TypeExpr mutated = parse_type("forall a. (B3 -o a) -o ((B2 * Seq) -o a) -o a");
  t.expect(!type_eq(s, mutated), "S != mutated unfolding");
  return t.result(6, "sequence fix point", "type equations");
}

CriterionResult polynomial_steps(const SelftestOptions&) {
  const std::vector<std::size_t> ns{2, 3, 4, 8};
  const auto steps = mult_step_counts(ns);
  constexpr double kMaxSlope = 4.0;
  bool pass = true;
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    s << (i ? ", " : "") << "n=" << ns[i] << ":" << steps[i];
    if (i == 0) continue;
    const double slope = std::log(static_cast<double>(steps[i]) / static_cast<double>(steps[i - 1])) /
                         std::log(static_cast<double>(ns[i]) / static_cast<double>(ns[i - 1]));
    s << " (slope " << slope << ")";
    pass = pass && slope <= kMaxSlope;
  }
  return {7, "polynomial step growth", pass, s.str()};
}

}  // namespace

std::vector<std::uint64_t> mult_step_counts(const std::vector<std::size_t>& degrees) {
  std::vector<std::uint64_t> out;
  for (std::size_t n : degrees) {
    ParamsRef p;
    for (const auto& q : FieldParams::defaults())
      if (q->n == n) p = q;
    if (!p) throw std::invalid_argument("no default field of degree " + std::to_string(n));
    const auto ones = FieldElement::from_poly(p, {(std::uint64_t{1} << n) - 1});
    FieldTrace tr;
    bf_mult(ones, ones, &tr);
    out.push_back(tr.steps);
  }
  return out;
}

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> all{
      {1, "golden reductions", golden_reductions},
      {2, "pattern equivalences", pattern_equivalences},
      {3, "field differential", field_differential},
      {4, "field identities", field_identities},
      {5, "typing certificates", certificates},
      {6, "sequence fix point", seq_fixpoint},
      {7, "polynomial step growth", polynomial_steps},
  };
  return all;
}

CriterionResult run_criterion(const Criterion& c, const SelftestOptions& opts) {
  try {
    return c.run(opts);
  } catch (const std::exception& e) {
    return {c.id, c.name, false, std::string("error: ") + e.what()};
  }
}

}  // namespace lightfield
