#include <random>

#include "doctest.h"
#include "lightfield/field.hpp"
#include "support/gf2_model.hpp"

using namespace lightfield;
using namespace testing;

namespace {

// Number of monic irreducible polynomials of degree n over GF(2).
int necklace_count(int n) {
  auto mobius = [](int k) {
    int m = 1;
    for (int q = 2; q * q <= k; ++q)
      if (k % q == 0) {
        k /= q;
        if (k % q == 0) return 0;
        m = -m;
      }
    return k > 1 ? -m : m;
  };
  int sum = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) sum += mobius(n / d) * (1 << d);
  return sum / n;
}

ParamsRef gf8() {
  static const ParamsRef p = FieldParams::make(3, "1011");
  return p;
}

FieldElement el(const std::string& s, const ParamsRef& p = gf8()) { return FieldElement::from_string(p, s); }

}  // namespace

TEST_CASE("oracle examples") {
  CHECK(poly_mul(Poly::from_string("11"), Poly::from_string("11")) == Poly::from_string("101"));
  CHECK(poly_mod(Poly::from_string("1011"), Poly::from_string("1011")).bits == 0);
  CHECK(is_irreducible(Poly::from_string("1011")));
  CHECK_FALSE(is_irreducible(Poly::from_string("1001")));
  CHECK(Poly::from_string("0101").to_string() == "101");
}

TEST_CASE("property: oracle agrees with an independent bit-vector model") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    const Poly a{rng() & 0xFFFF}, b{rng() & 0xFFFF};
    Poly p{(rng() & 0xFF) | 0x100};
    CHECK(poly_of(school_mul(bits_of(a), bits_of(b))) == poly_mul(a, b));
    CHECK(poly_of(long_div_rem(bits_of(a), bits_of(p))) == poly_mod(a, p));
    CHECK(poly_add(a, b) == poly_of([&] {
            Bits x = bits_of(a), y = bits_of(b);
            x.resize(std::max(x.size(), y.size()));
            for (std::size_t k = 0; k < y.size(); ++k) x[k] ^= y[k];
            return x;
          }()));
  }
  for (int n = 2; n <= 8; ++n) {
    int count = 0;
    for (std::uint64_t q = 1u << n; q < (2u << n); ++q) count += is_irreducible(Poly{q});
    CHECK(count == necklace_count(n));
  }
}

TEST_CASE("field parameters") {
  const auto p = gf8();
  CHECK(p->p_hat == word_from_string("1011_"));
  CHECK(p->p_hat.size() == 2 * p->n - 1);
  CHECK(decode_numeral(p->n_numeral) == 3);
  CHECK_THROWS_AS(FieldParams::make(3, "1001"), FieldError);
  CHECK_THROWS_AS(FieldParams::make(3, "10011"), FieldError);
  CHECK_THROWS_AS(FieldParams::make(3, "1010"), FieldError);
  const auto defaults = FieldParams::defaults();
  REQUIRE(defaults.size() == 4);
  CHECK(defaults[3]->p == Poly::from_string("100011011"));
}

TEST_CASE("field elements convert between representations") {
  const FieldElement a = el("110");
  CHECK(a.coeffs() == std::vector<bool>{false, true, true});
  CHECK(a.poly() == Poly::from_string("110"));
  CHECK(a.to_string() == "110");
  CHECK(FieldElement::from_poly(gf8(), Poly::from_string("10001")).to_string() == "111");
  CHECK_THROWS_AS(el("11"), WrongLength);
  CHECK_THROWS_AS(FieldElement::from_word(gf8(), word_from_string("1_0")), FieldError);
}

TEST_CASE("addition") {
  CHECK(bf_add(el("101"), el("011")).to_string() == "110");
  for (std::uint64_t x = 0; x < 8; ++x) {
    const auto a = FieldElement::from_poly(gf8(), {x});
    CHECK(bf_add(a, a).poly().bits == 0);
    for (std::uint64_t y = 0; y < 8; ++y) {
      const auto b = FieldElement::from_poly(gf8(), {y});
      CHECK(bf_add(a, b).poly() == poly_add(a.poly(), b.poly()));
    }
  }
  const auto other = FieldParams::make(3, "1101");
  CHECK_THROWS_AS(bf_add(el("101"), el("101", other)), ParamsMismatch);
}

TEST_CASE("modular reduction") {
  FieldTrace tr;
  CHECK(to_string(w_mod(gf8(), word_from_string("010001"), &tr)) == "111");
  REQUIRE(tr.pre_drop);
  CHECK(tr.pre_drop->size() == 6);
  CHECK(to_string(w_mod(gf8(), word_from_string("001011"))) == "000");
  for (std::uint64_t x = 0; x < 8; ++x) {
    const std::string abc = FieldElement::from_poly(gf8(), {x}).to_string();
    CHECK(to_string(w_mod(gf8(), word_from_string("000" + abc))) == abc);
  }
  for (std::uint64_t d = 0; d < 64; ++d) {
    const Poly dp{d};
    std::string s = dp.to_string();
    if (d == 0) s = "";
    s = std::string(6 - s.size(), '0') + s;
    CHECK(FieldElement::from_word(gf8(), w_mod(gf8(), word_from_string(s))).poly() == poly_mod(dp, gf8()->p));
  }
  CHECK_THROWS_AS(w_mod(gf8(), word_from_string("01000")), WrongLength);
}

TEST_CASE("square") {
  FieldTrace tr;
  CHECK(bf_sqr(el("101"), &tr).to_string() == "111");
  REQUIRE(tr.unreduced);
  CHECK(to_string(*tr.unreduced) == "010001");
  CHECK(bf_sqr(el("001")).to_string() == "001");
  for (std::uint64_t x = 0; x < 8; ++x)
    for (std::uint64_t y = 0; y < 8; ++y) {
      const auto a = FieldElement::from_poly(gf8(), {x}), b = FieldElement::from_poly(gf8(), {y});
      CHECK(bf_sqr(bf_add(a, b)) == bf_add(bf_sqr(a), bf_sqr(b)));
    }
}

TEST_CASE("multiplication") {
  FieldTrace tr;
  CHECK(bf_mult(el("101"), el("011"), &tr).to_string() == "100");
  REQUIRE(tr.unreduced);
  CHECK(to_string(*tr.unreduced) == "001111");
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(bf_mult(FieldElement::from_poly(gf8(), {x}), el("001")).poly().bits == x);
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto p = FieldParams::defaults()[n - 2];
    for (std::uint64_t x = 0; x < (1u << n); ++x) {
      const auto a = FieldElement::from_poly(p, {x});
      CHECK(bf_mult(a, a) == bf_sqr(a));
    }
  }
}

TEST_CASE("property: intermediate lengths") {
  std::mt19937 rng(9);
  for (const auto& p : FieldParams::defaults()) {
    std::uniform_int_distribution<std::uint64_t> d(0, (1u << p->n) - 1);
    for (int i = 0; i < 4; ++i) {
      const auto a = FieldElement::from_poly(p, {d(rng)}), b = FieldElement::from_poly(p, {d(rng)});
      FieldTrace tm, ts, tr;
      CHECK(bf_mult(a, b, &tm).params().n == p->n);
      CHECK(tm.unreduced->size() == 2 * p->n);
      CHECK(FieldElement::from_word(p, w_mod(p, *tm.unreduced, &tr)).poly() ==
            poly_mod(poly_mul(a.poly(), b.poly()), p->p));
      CHECK(tr.pre_drop->size() == 2 * p->n);
      bf_sqr(a, &ts);
      CHECK(ts.unreduced->size() == 2 * p->n);
    }
  }
}
