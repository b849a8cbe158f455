#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lightfield/combinators.hpp"

namespace lightfield {

/// Polynomial over GF(2), bit i the coefficient of X^i. Degree at most 63.
struct Poly {
  std::uint64_t bits = 0;
  int degree() const;
  bool operator==(const Poly&) const = default;
  /// msb first, e.g. "1011" is X^3 + X + 1.
  static Poly from_string(const std::string& msb_first);
  std::string to_string() const;
};

Poly poly_add(Poly a, Poly b);
Poly poly_mul(Poly a, Poly b);
Poly poly_mod(Poly a, Poly p);
Poly poly_sqr(Poly a);
bool is_irreducible(Poly p);

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ParamsMismatch : public FieldError {
 public:
  ParamsMismatch() : FieldError("operands belong to different fields") {}
};
class WrongLength : public FieldError {
 public:
  WrongLength(std::size_t expected, std::size_t got);
};

struct FieldParams {
  std::size_t n = 0;
  Poly p;
  Term n_numeral;
  /// p_n ... p_0 followed by bot padding, 2n-1 trits in all.
  TritWord p_hat;

  /// Validates degree, end bits and irreducibility.
  static std::shared_ptr<const FieldParams> make(std::size_t n, const std::string& p_bits);
  /// Lines of the form `n=<k> p=<bits>`.
  static std::vector<std::shared_ptr<const FieldParams>> load(const std::string& path);
  static std::vector<std::shared_ptr<const FieldParams>> defaults();
};

using ParamsRef = std::shared_ptr<const FieldParams>;

class FieldElement {
 public:
  FieldElement(ParamsRef params, std::vector<bool> coeffs_lsb_first);
  static FieldElement from_poly(ParamsRef params, Poly a);
  /// msb first, {0,1} only, length n.
  static FieldElement from_string(ParamsRef params, const std::string& msb_first);
  static FieldElement from_word(ParamsRef params, const TritWord& w);

  const FieldParams& params() const { return *params_; }
  const ParamsRef& params_ref() const { return params_; }
  const std::vector<bool>& coeffs() const { return coeffs_; }
  Poly poly() const;
  TritWord word() const;
  std::string to_string() const;
  bool operator==(const FieldElement& o) const { return params_ == o.params_ && coeffs_ == o.coeffs_; }

 private:
  ParamsRef params_;
  std::vector<bool> coeffs_;
};

/// Decoded intermediate words of the Church path.
struct FieldTrace {
  std::optional<TritWord> unreduced;
  std::optional<TritWord> pre_drop;
  std::uint64_t steps = 0;
};

/// The field combinators with the parameters n and p-hat substituted.
class FieldTerms {
 public:
  explicit FieldTerms(ParamsRef params, const Library& lib = Library::standard());
  const FieldParams& params() const { return *params_; }

  const Term& bf_add() const { return add_; }
  const Term& w_mod() const { return mod_; }
  const Term& w_mod_pre_drop() const { return mod_pre_; }
  const Term& w_sqr() const { return sqr_word_; }
  const Term& bf_sqr() const { return sqr_; }
  const Term& w_mult() const { return mult_word_; }
  const Term& bf_mult() const { return mult_; }

  static const FieldTerms& cached(const ParamsRef& params);

 private:
  ParamsRef params_;
  Term add_, mod_, mod_pre_, sqr_word_, sqr_, mult_word_, mult_;
};

FieldElement bf_add(const FieldElement& a, const FieldElement& b, FieldTrace* trace = nullptr);
FieldElement bf_sqr(const FieldElement& a, FieldTrace* trace = nullptr);
FieldElement bf_mult(const FieldElement& a, const FieldElement& b, FieldTrace* trace = nullptr);
/// d of length exactly 2n; returns n bits.
TritWord w_mod(const ParamsRef& params, const TritWord& d, FieldTrace* trace = nullptr);

}  // namespace lightfield
