#include <functional>
#include <random>

#include "doctest.h"
#include "lightfield/certify.hpp"
#include "lightfield/drv.hpp"
#include "lightfield/field.hpp"
#include "lightfield/syntax.hpp"
#include "lightfield/tfa.hpp"

using namespace lightfield;

namespace {

const std::string& data_dir() {
  static const std::string d = Library::data_dir();
  return d;
}

const CertifyReport& certified() {
  static const CertifyReport r = certify_library(Library::standard(), data_dir());
  return r;
}

const std::vector<CatalogueEntry>& catalogue() {
  static const auto c = load_catalogue(data_dir() + "/catalogue.txt");
  return c;
}

const CatalogueEntry& entry(const std::string& name) {
  for (const auto& e : catalogue())
    if (e.name == name) return e;
  throw std::out_of_range(name);
}

Derivation explicit_certificate(const std::string& name) {
  const auto& e = entry(name);
  DrvFile f = parse_drv(certificate_text(e, data_dir()));
  f.claimed = e.type;
  Derivation d;
  REQUIRE(check_file(f, catalogue_lemmas(catalogue()), &d).accepted);
  return d;
}

CheckReport check_text(const std::string& text, const LemmaTable& lemmas = {}) {
  return check_file(parse_drv(text), lemmas);
}

// Types as stated for the library, written out without macros where they
// are short enough to keep the check independent of the macro printer.
TypeExpr stated_type(const std::string& name) {
  const std::string b2 = "(forall c. c -o c -o c -o c)";
  const std::string w2 = "(forall c. !(" + b2 + " -o c -o c) -o $(c -o c))";
  if (name == "bXor") return parse_type(b2 + " -o " + b2 + " -o " + b2);
  if (name == "wTos") return parse_type(w2 + " -o $Seq");
  if (name == "wMod") return parse_type(w2 + " -o $" + w2);
  if (name == "bfSqr") return parse_type(w2 + " -o $" + w2);
  if (name == "bfMult") return parse_type(w2 + " -o " + w2 + " -o $$" + w2);
  throw std::out_of_range(name);
}

}  // namespace

TEST_CASE("every catalogue certificate is accepted") {
  const auto& rep = certified();
  REQUIRE(rep.results.size() == catalogue().size());
  for (const auto& r : rep.results) {
    INFO(r.name << " " << r.report.node << " " << r.report.rule << ": " << r.report.condition);
    CHECK(r.report.accepted);
  }
  CHECK(rep.all_accepted());
}

TEST_CASE("certified types match the stated types") {
  for (const char* n : {"bXor", "wTos", "wMod", "bfSqr", "bfMult"}) {
    INFO(n);
    CHECK(type_eq(entry(n).type, stated_type(n)));
    CHECK(certified().find(n)->report.accepted);
  }
  for (std::size_t m = 0; m <= 2; ++m) {
    const auto& e = entry("bCast" + std::to_string(m));
    CHECK(type_eq(e.type, TypeExpr::lin(bool_type(2), TypeExpr::para(bool_type(2), m + 1))));
  }
  const auto w = word2_type();
  CHECK(type_eq(entry("wDup2_0").type, TypeExpr::lin(w, TypeExpr::para(tuple_type({w, w}), 1))));
  CHECK(type_eq(entry("wDup2_1").type, TypeExpr::lin(w, TypeExpr::para(tuple_type({w, w}), 2))));
  CHECK(type_eq(entry("wDup3_0").type, TypeExpr::lin(w, TypeExpr::para(tuple_type({w, w, w}), 1))));
}

TEST_CASE("only the squaring certificates depend on the exponential reading") {
  for (const auto& r : certified().results) {
    INFO(r.name);
    const bool expect = r.name == "wSqr" || r.name == "bfSqr";
    CHECK(r.report.flags.empty() != expect);
  }
  CHECK(certified().find("wSqr")->report.flags.count("exponential reading of the !-E minor premise"));
}

TEST_CASE("negative fixtures are rejected at the offending node") {
  struct Case {
    const char* file;
    const char* node;
    const char* rule;
  };
  for (const auto& c : {Case{"linearity", "0", "TupleIntro"}, Case{"eigenvariable", "root", "ForAllIntro"},
                        Case{"bang_minor", "root", "BangApp"}, Case{"bad_contraction", "root", "Contr"}}) {
    INFO(c.file);
    const auto r = check_text(read_file(data_dir() + "/certs/negative/" + c.file + ".drv"));
    CHECK_FALSE(r.accepted);
    CHECK(r.node == c.node);
    CHECK(r.rule == c.rule);
    CHECK_FALSE(r.condition.empty());
  }
}

TEST_CASE("malformed derivations are distinct from rejections") {
  // LinApp without its split witness
  const char* missing = R"((rule LinApp
    :concl "; f : B2 -o B2, x : B2 |- f x : B2"
    (rule Ax :var f :concl "; f : B2 -o B2 |- f : B2 -o B2")
    (rule Ax :var x :concl "; x : B2 |- x : B2")))";
  CHECK_THROWS_AS(check(read_explicit(parse_drv(missing).body)), MalformedDerivation);
  // wrong arity
  const char* arity = R"((rule LinAbs :var x :concl "; |- \\x. x : B2 -o B2"))";
  CHECK_THROWS_AS(check(read_explicit(parse_drv(arity).body)), MalformedDerivation);
  CHECK_THROWS_AS(parse_drv("(rule Ax"), SExprError);
  CHECK_THROWS_AS(read_explicit(parse_drv("(rule Nope :concl \"; x : B2 |- x : B2\")").body), SExprError);
}

TEST_CASE("scripts with rule violations are rejected with their line") {
  auto r = check_text("(certificate dup :type \"B2 -o B2 * B2\"\n  (lam x (tup x x)))");
  CHECK_FALSE(r.accepted);
  CHECK(r.node == "line 2");
  // the expected type drives the abstraction rule; a linear variable cannot be promoted
  r = check_text("(certificate k :type \"B2 -o $B2\" (lam x (box x)))");
  CHECK_FALSE(r.accepted);
  // unused exponential assumptions are weakened
  r = check_text(R"((certificate two :type "!(B2 -o B2) -o !(B2 -o B2) -o W2"
      (lam (g h) (gen a (lam f (box (lam x x)))))))");
  CHECK(r.accepted);
  // the squaring step needs its step function twice; without the
  // exponential reading of the !-argument there is no derivation
  std::string sqr = read_file(data_dir() + "/certs/wSqr.drv");
  const auto at = sqr.find("(ap! ");
  REQUIRE(at != std::string::npos);
  sqr.replace(at, 5, "(ap ");
  CHECK_FALSE(check_text(sqr, catalogue_lemmas(catalogue())).accepted);
}

TEST_CASE("explicit derivations print and read back to the same tree") {
  for (const auto& e : catalogue()) {
    if (e.cert == "axiom") continue;
    INFO(e.name);
    const Derivation d = explicit_certificate(e.name);
    const std::string text = print_derivation(d);
    const Derivation back = read_explicit(parse_drv(text).body);
    CHECK(print_derivation(back) == text);
    const auto r = check(back, catalogue_lemmas(catalogue()));
    CHECK(r.accepted);
    CHECK(r.nodes == count_nodes(d));
  }
}

TEST_CASE("property: weakening an accepted root is accepted") {
  const auto lemmas = catalogue_lemmas(catalogue());
  for (const auto& e : catalogue()) {
    if (e.cert == "axiom") continue;
    INFO(e.name);
    const Derivation d = explicit_certificate(e.name);
    for (bool exponential : {false, true}) {
      Derivation w;
      w.rule = Rule::Weak;
      w.concl = *d.concl;
      (exponential ? w.concl->ctx.gamma : w.concl->ctx.delta).emplace("fresh", bool_type(2));
      w.premises.push_back(d);
      CHECK(check(w, lemmas).accepted);
    }
  }
}

TEST_CASE("property: changing any conclusion type is detected") {
  const auto lemmas = catalogue_lemmas(catalogue());
  std::mt19937 rng(11);
  for (const char* name : {"bXor", "wSuc", "wTos", "wModFun", "wMultStep", "wMod"}) {
    INFO(name);
    const Derivation d = explicit_certificate(name);
    const std::size_t total = count_nodes(d);
    for (int trial = 0; trial < 25; ++trial) {
      std::size_t target = std::uniform_int_distribution<std::size_t>(0, total - 1)(rng), k = 0;
      Derivation m = d;
      std::function<bool(Derivation&)> visit = [&](Derivation& n) {
        if (k++ == target) {
          n.concl->type = TypeExpr::var("zz");
          return true;
        }
        for (auto& p : n.premises)
          if (visit(p)) return true;
        return false;
      };
      visit(m);
      CHECK_FALSE(check(m, lemmas).accepted);
    }
  }
}

TEST_CASE("property: checking is deterministic") {
  const auto lemmas = catalogue_lemmas(catalogue());
  const Derivation d = explicit_certificate("wMult");
  const auto a = check(d, lemmas), b = check(d, lemmas);
  CHECK(a.accepted == b.accepted);
  CHECK(a.nodes == b.nodes);
  CHECK(a.flags == b.flags);
  auto bad = check_text(read_file(data_dir() + "/certs/negative/linearity.drv"));
  auto bad2 = check_text(read_file(data_dir() + "/certs/negative/linearity.drv"));
  CHECK(bad.node == bad2.node);
  CHECK(bad.condition == bad2.condition);
}

TEST_CASE("lemmas must match the certified type") {
  LemmaTable t;
  t["c"] = {bool_type(2), false};
  auto r = check_text(R"((rule Lemma :concl "; |- c : B2"))", t);
  CHECK(r.accepted);
  r = check_text(R"((rule Lemma :concl "; |- c : W2"))", t);
  CHECK_FALSE(r.accepted);
  r = check_text(R"((rule Lemma :concl "; |- d : B2"))", t);
  CHECK_FALSE(r.accepted);
  t["c"].flagged = true;
  CHECK(check_text(R"((rule Lemma :concl "; |- c : B2"))", t).flags.size() == 1);
}

TEST_CASE("paragraph lift") {
  const auto lemmas = catalogue_lemmas(catalogue());
  const Derivation d = explicit_certificate("wModEnd");
  for (std::size_t n = 1; n <= 3; ++n) {
    const Derivation l = lift(d, n, lemmas);
    CHECK(check(l, lemmas).accepted);
    CHECK(type_eq(l.concl->type, TypeExpr::lin(TypeExpr::para(list_type(parse_type("B2 * B2")), n),
                                               TypeExpr::para(word2_type(), n))));
    CHECK(alpha_eq(l.concl->subject, lift_term(d.concl->subject, n)));
  }
  const Derivation open = explicit_certificate("wSuc").premises[0];
  CHECK_THROWS_AS(lift(open, 1), NotClosed);
  CHECK_THROWS_AS(lift(explicit_certificate("tt"), 1), NotArrow);
}

TEST_CASE("judgment text round trip") {
  const std::string s = "f : B2 -o B2 ; x : $B2, y : W2 |- f (\\z. z) : B2";
  const Judgment j = parse_judgment(s);
  CHECK(j.ctx.gamma.size() == 1);
  CHECK(j.ctx.delta.size() == 2);
  const Judgment k = parse_judgment(print_judgment(j));
  CHECK(print_judgment(k) == print_judgment(j));
  CHECK_THROWS(parse_judgment("x : B2 |- x : B2"));
  CHECK_THROWS(parse_judgment("x : B2 ; x : B2 |- x : B2"));
}

namespace {

// Strips paragraphs, which do not change the encoding.
TypeExpr strip(TypeExpr t) {
  while (t.is(TypeKind::Para)) t = t.body();
  return t;
}

}  // namespace

TEST_CASE("property: certified closed terms evaluate to values of their type") {
  const auto& lib = Library::standard();
  const auto params = FieldParams::make(3, "1011");
  const auto b2 = bool_type(2), w2 = word2_type();
  std::mt19937 rng(5);
  auto random_word = [&](std::size_t n) {
    TritWord w;
    for (std::size_t i = 0; i < n; ++i) w.trits.push_back(static_cast<Trit>(rng() % 3));
    return w;
  };
  std::size_t exercised = 0;
  for (const auto& e : catalogue()) {
    if (e.cert == "axiom") continue;
    std::vector<TypeExpr> args;
    TypeExpr t = e.type;
    while (t.is(TypeKind::Lin)) {
      args.push_back(t.left());
      t = t.right();
    }
    const TypeExpr res = strip(t);
    bool simple = type_eq(res, b2, 0) || type_eq(res, w2, 0) || res.is(TypeKind::Seq);
    for (const auto& a : args) simple = simple && (type_eq(a, b2, 0) || type_eq(a, w2, 0));
    if (!simple) continue;
    INFO(e.name);
    Term f = substitute(substitute(lib.lookup(e.name), "modN", params->n_numeral), "modP", encode_word(params->p_hat));
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<Term> xs;
      for (const auto& a : args)
        xs.push_back(type_eq(a, b2, 0) ? encode_trit(static_cast<Trit>(rng() % 3)) : encode_word(random_word(2 * params->n)));
      const Value v = eval(Term::apps(f, xs));
      if (type_eq(res, b2, 0)) CHECK_NOTHROW(decode_trit(v.term()));
      else if (res.is(TypeKind::Seq)) CHECK_NOTHROW(decode_seq(v.term()));
      else CHECK_NOTHROW(decode_word(v.term()));
    }
    ++exercised;
  }
  CHECK(exercised >= 12);
}
