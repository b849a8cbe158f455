#include <functional>
#include <random>

#include "doctest.h"
#include "lightfield/types.hpp"

using namespace lightfield;

namespace {

TypeExpr T(std::string_view s) { return parse_type(s); }

TypeExpr random_type(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 11);
  const char* vars[] = {"a", "b", "c"};
  const int k = depth <= 0 ? pick(rng) % 3 : pick(rng);
  switch (k) {
    case 0:
    case 1: return TypeExpr::var(vars[rng() % 3]);
    case 2: return TypeExpr::seq();
    case 3:
    case 4: return TypeExpr::lin(random_type(rng, depth - 1), random_type(rng, depth - 1));
    case 5: return TypeExpr::bang(random_type(rng, depth - 1), random_type(rng, depth - 1));
    case 6: return TypeExpr::forall(vars[rng() % 3], random_type(rng, depth - 1));
    case 7: return TypeExpr::para(random_type(rng, depth - 1));
    case 8: return bool_type(1 + rng() % 3);
    case 9: return tuple_type({random_type(rng, depth - 1), random_type(rng, depth - 1)});
    case 10: return list_type(random_type(rng, depth - 1));
    default: return nat_type();
  }
}

std::size_t count_bangs(const TypeExpr& t) {
  switch (t.kind()) {
    case TypeKind::Bang: return 1 + count_bangs(t.left()) + count_bangs(t.right());
    case TypeKind::Lin: return count_bangs(t.left()) + count_bangs(t.right());
    case TypeKind::ForAll:
    case TypeKind::Para: return count_bangs(t.body());
    default: return 0;
  }
}

}  // namespace

TEST_CASE("macro expansion is the literal definition") {
  const TypeExpr a = TypeExpr::var("a");
  const TypeExpr b2 = expand({TypeMacro::Kind::Bool, 2, {}});
  CHECK(b2.is(TypeKind::ForAll));
  CHECK(type_eq(b2, TypeExpr::forall("a", TypeExpr::lin(a, TypeExpr::lin(a, TypeExpr::lin(a, a)))), 0));
  CHECK(print_type(b2) == "B2");

  const TypeExpr elem = TypeExpr::var("x");
  const TypeExpr l = expand({TypeMacro::Kind::List, 2, {elem}});
  CHECK(type_eq(l, TypeExpr::forall("a", TypeExpr::bang(TypeExpr::lin(elem, TypeExpr::lin(a, a)),
                                                         TypeExpr::para(TypeExpr::lin(a, a)))), 0));
  const TypeExpr y = TypeExpr::var("y");
  CHECK(type_eq(expand({TypeMacro::Kind::Tuple, 2, {elem, y}}),
                TypeExpr::forall("a", TypeExpr::lin(TypeExpr::lin(elem, TypeExpr::lin(y, a)), a)), 0));
  CHECK(type_eq(expand({TypeMacro::Kind::Nat, 2, {}}), T("forall a. !(a -o a) -o $(a -o a)"), 0));
  CHECK(type_eq(expand({TypeMacro::Kind::Word2, 2, {}}), T("L(B2)"), 0));
  CHECK(type_eq(field_type(), word2_type(), 0));
  // tuple binder avoids capturing a free a
  CHECK(type_eq(tuple_type({a, a}), T("forall z. (a -o a -o z) -o z"), 0));
}

TEST_CASE("expansion is injective on the library macros") {
  const std::vector<TypeExpr> corpus{bool_type(1), bool_type(2), bool_type(3), nat_type(),
                                     word2_type(), list_type(bool_type(1)), list_type(tuple_type({bool_type(2), bool_type(2)})),
                                     tuple_type({bool_type(2), bool_type(2)}), tuple_type({bool_type(2), TypeExpr::seq()}),
                                     tuple_type({word2_type(), word2_type(), word2_type()}), TypeExpr::seq()};
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j) CHECK(type_eq(corpus[i], corpus[j], 4) == (i == j));
}

TEST_CASE("sequence fix point") {
  const TypeExpr s = TypeExpr::seq();
  const TypeExpr one = unfold_seq(s);
  const TypeExpr two = unfold_seq(one);
  CHECK(type_eq(one, T("forall a. (B2 -o a) -o ((B2 * Seq) -o a) -o a"), 0));
  CHECK(unfold_seq(T("a")).is(TypeKind::Var));
  CHECK(type_eq(fold_seq(two), one, 0));
  CHECK(type_eq(s, one, 1));
  CHECK_FALSE(type_eq(s, one, 0));
  CHECK(type_eq(s, two, 2));
  CHECK_FALSE(type_eq(s, two, 1));
  CHECK(type_eq(s, two));
  const TypeExpr mutated = T("forall a. (B3 -o a) -o ((B2 * Seq) -o a) -o a");
  for (std::size_t k = 0; k <= 6; ++k) CHECK_FALSE(type_eq(s, mutated, k));
  CHECK_FALSE(type_eq(T("a -o b"), T("b -o a"), 4));
}

TEST_CASE("substitution") {
  CHECK(type_eq(subst_type(T("a -o a"), "a", bool_type(2)), T("B2 -o B2"), 0));
  CHECK(type_eq(subst_type(T("forall a. a"), "a", T("b")), T("forall a. a"), 0));
  const TypeExpr r = subst_type(T("forall b. a -o b"), "a", T("b"));
  CHECK(r.name() == "b'");
  CHECK(type_eq(r, T("forall c. b -o c"), 0));
  CHECK(print_type(r) == "forall b'. b -o b'");
}

TEST_CASE("type syntax") {
  CHECK(type_eq(T("!a -o $b"), TypeExpr::bang(T("a"), TypeExpr::para(T("b"))), 0));
  CHECK(type_eq(T("∀a. a ⊸ §a"), T("forall a. a -o $a"), 0));
  CHECK(type_eq(T("B2 ⊗ B2"), T("B2 * B2"), 0));
  CHECK(print_type(T("W2 -o $Seq")) == "W2 -o $Seq");
  CHECK(print_type(T("F -o F -o $$F")) == "W2 -o W2 -o $$W2");
  CHECK(print_type(T("(a -o b) -o c")) == "(a -o b) -o c");
  CHECK(print_type(T("B2 -o $(B2 * B2)")) == "B2 -o $(B2 * B2)");
  CHECK_THROWS_AS(T("!a"), PolarityViolation);
  CHECK_THROWS_AS(T("a -o !b"), PolarityViolation);
  CHECK_THROWS_AS(T("$!a -o b"), PolarityViolation);
  CHECK_THROWS_AS(T("a -o"), TypeSyntaxError);
  CHECK_THROWS_AS(T("forall N. N"), TypeSyntaxError);
}

TEST_CASE("property: polarity of accepted types") {
  // random token strings: every accepted '!' becomes the left side of an arrow
  const char* toks[] = {"a", "b", "!", "-o", "$", "(", ")", "*", "B2", "forall a.", "Seq"};
  std::mt19937 rng(99);
  int accepted = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    std::size_t bangs = 0;
    const int len = 1 + static_cast<int>(rng() % 8);
    for (int k = 0; k < len; ++k) {
      const char* t = toks[rng() % std::size(toks)];
      bangs += std::string_view(t) == "!";
      s += std::string(t) + " ";
    }
    try {
      const TypeExpr t = parse_type(s);
      ++accepted;
      CHECK(count_bangs(t) == bangs);
      CHECK(type_eq(parse_type(print_type(t)), t, 0));
    } catch (const PolarityViolation&) {
      CHECK(bangs > 0);
    } catch (const TypeSyntaxError&) {
    }
  }
  CHECK(accepted > 500);
}

TEST_CASE("property: type_eq is an equivalence and printing round trips") {
  std::mt19937 rng(5);
  std::vector<TypeExpr> corpus;
  for (int i = 0; i < 60; ++i) {
    TypeExpr t = random_type(rng, 4);
    corpus.push_back(t);
    corpus.push_back(unfold_seq(t));
    corpus.push_back(unfold_seq(unfold_seq(t)));
  }
  for (const auto& t : corpus) {
    CHECK(type_eq(t, t, 0));
    CHECK(type_eq(parse_type(print_type(t)), t, 0));
  }
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      const bool ij = type_eq(corpus[i], corpus[j], 2);
      CHECK(ij == type_eq(corpus[j], corpus[i], 2));
      if (!ij) continue;
      for (std::size_t k = 0; k < corpus.size(); ++k)
        if (type_eq(corpus[j], corpus[k], 2)) CHECK(type_eq(corpus[i], corpus[k], 4));
    }
  // each unfolding is equal to the original within budget
  for (std::size_t i = 0; i < corpus.size(); i += 3) {
    CHECK(type_eq(corpus[i], corpus[i + 1], 1));
    CHECK(type_eq(corpus[i], corpus[i + 2], 2));
  }
}
