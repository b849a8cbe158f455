#include <random>

#include "doctest.h"
#include "lightfield/eval.hpp"
#include "lightfield/syntax.hpp"
#include "lightfield/term.hpp"
#include "support/reference_eval.hpp"

using namespace lightfield;

namespace {

Term P(std::string_view s) { return parse_term(s); }

// Random closed terms over a small binder pool; tuples appear only in
// constructor/destructor pairs of matching arity so they stay well formed.
Term random_term(std::mt19937& rng, std::vector<std::string>& scope, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  const int k = depth <= 0 ? 0 : pick(rng);
  if (k <= 2 && !scope.empty()) {
    std::uniform_int_distribution<std::size_t> v(0, scope.size() - 1);
    return Term::free(scope[v(rng)]);
  }
  if (k <= 5 || scope.empty()) {
    const std::string x = "v" + std::to_string(scope.size());
    scope.push_back(x);
    Term body = random_term(rng, scope, depth - 1);
    scope.pop_back();
    return Term::abs(x, body);
  }
  if (k <= 8) return Term::app(random_term(rng, scope, depth - 1), random_term(rng, scope, depth - 1));
  const std::string a = "a" + std::to_string(scope.size()), b = "b" + std::to_string(scope.size());
  scope.push_back(a);
  scope.push_back(b);
  Term body = random_term(rng, scope, depth - 1);
  scope.resize(scope.size() - 2);
  return Term::app(Term::destr({a, b}, body),
                   Term::tuple({random_term(rng, scope, depth - 1), random_term(rng, scope, depth - 1)}));
}

}  // namespace

TEST_CASE("substitute replaces, avoids capture and respects shadowing") {
  CHECK(substitute(P("x"), "x", P("\\y. y")) == P("\\y. y"));

  Term captured = substitute(P("\\y. x"), "x", P("y"));
  CHECK(captured == P("\\z. y"));
  CHECK(print_term(captured) == "\\y'. y");

  CHECK(substitute(P("\\x. x"), "x", P("z")) == P("\\x. x"));
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(P("\\x. x"), P("\\y. y")));
  CHECK_FALSE(alpha_eq(P("\\x. \\y. x"), P("\\x. \\y. y")));
  CHECK(alpha_eq(P("\\<a, b>. b a"), P("\\<c, d>. d c")));
  CHECK_FALSE(alpha_eq(P("\\<a, b>. a"), P("\\<a, b, c>. a")));
  CHECK_FALSE(alpha_eq(P("x"), P("y")));
}

TEST_CASE("eval basics") {
  CHECK(eval(P("(\\x. x) y")).term() == P("y"));
  CHECK(eval(P("(\\<a, b>. a) <\\u. u, \\v. \\w. v>")).term() == P("\\u. u"));
  CHECK(eval(P("\\f. (\\x. f x x) (\\y. y)")).term() == P("\\f. f (\\y. y) (\\y. y)"));
  // destructor on a neutral argument is stuck, not an error
  CHECK(eval(P("\\e. (\\<a, b>. a) e")).term() == P("\\e. (\\<a, b>. a) e"));
  // an unused argument is never evaluated
  CHECK(eval(P("(\\x. y) ((\\z. z z) (\\z. z z))")).term() == P("y"));
}

TEST_CASE("eval errors") {
  CHECK_THROWS_AS(eval(P("(\\<a, b>. a) <x, y, z>")), ArityMismatch);
  CHECK_THROWS_AS(eval(P("(\\z. z z) (\\z. z z)"), EvalBudget{10'000}), BudgetExhausted);
}

TEST_CASE("desugar tuples") {
  CHECK(desugar_tuples(P("<a, b>")) == P("\\x. x a b"));
  CHECK(desugar_tuples(P("\\<a, b>. a")) == P("\\p. p (\\a. \\b. a)"));
  Term plain = P("\\f. \\x. f (f x)");
  CHECK(desugar_tuples(plain) == plain);
  // bound variables from outside a destructor must skip the new p binder
  CHECK(desugar_tuples(P("\\y. \\<a, b>. y a")) == P("\\y. \\p. p (\\a. \\b. y a)"));
  CHECK(desugar_tuples(P("\\y. <y, y>")) == P("\\y. \\x. x y y"));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_term("\\x. (x");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 7);
  }
  CHECK_THROWS_AS(parse_term("<a>"), SyntaxError);
  CHECK_THROWS_AS(parse_term("\\<a>. a"), SyntaxError);
  CHECK_THROWS_AS(parse_term("x $"), SyntaxError);
}

TEST_CASE("parse and print") {
  CHECK(P("\\x. x") == Term::abs("x", Term::free("x")));
  CHECK(P("<a, b>") == Term::tuple({Term::free("a"), Term::free("b")}));
  CHECK(P("λx. x -- comment\n") == P("\\x. x"));
  const char* canonical[] = {"\\f. \\x. f (f x)", "\\<a, b>. <b, a>", "(\\x. x) (\\y. y) z", "f \\x. x"};
  for (const char* s : canonical) {
    // canonical text is a fixed point of print . parse
    CHECK(print_term(P(print_term(P(s)))) == print_term(P(s)));
  }
  CHECK(print_term(P("\\x. \\x. x")) == "\\x. \\x'. x'");
}

TEST_CASE("program definitions resolve in order") {
  Program p = parse_program("id = \\x. x;\nk = \\x. \\y. id x;\nk a b");
  Environment env;
  env.load(p);
  REQUIRE(p.main.has_value());
  CHECK(eval(env.resolve(*p.main)).term() == P("a"));
}

TEST_CASE("property: evaluation agrees with the literal big-step rules") {
  std::mt19937 rng(20261015);
  int compared = 0;
  for (int i = 0; i < 400; ++i) {
    std::vector<std::string> scope;
    Term t = random_term(rng, scope, 6);
    testing::ReferenceEvaluator ref(200'000);
    Term expected;
    try {
      expected = ref.eval(t);
    } catch (const std::runtime_error&) {
      continue;
    }
    Value v = eval(t);
    CHECK(v.term() == expected);
    CHECK(is_normal(v.term()));
    // determinism
    CHECK(eval(t).term() == v.term());
    // desugaring commutes with evaluation
    CHECK(eval(desugar_tuples(t)).term() == desugar_tuples(v.term()));
    // printing round trip
    CHECK(parse_term(print_term(t)) == t);
    ++compared;
  }
  CHECK(compared > 200);
}

TEST_CASE("property: substitution lemma") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> scope{"x"};
    Term m = random_term(rng, scope, 5);
    scope.clear();
    Term n = random_term(rng, scope, 4);
    testing::ReferenceEvaluator probe(100'000);
    try {
      probe.eval(Term::app(Term::abs("x", m), n));
      probe.eval(substitute(m, "x", n));
    } catch (const std::runtime_error&) {
      continue;
    }
    CHECK(eval(Term::app(Term::abs("x", m), n)).term() == eval(substitute(m, "x", n)).term());
  }
}
