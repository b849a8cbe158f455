#pragma once

#include <vector>

#include "lightfield/field.hpp"

namespace testing {

// Independent bit-vector model: coefficient lists, index = power of X.
using Bits = std::vector<int>;

inline Bits bits_of(lightfield::Poly p) {
  Bits b;
  for (int i = 0; i <= p.degree(); ++i) b.push_back(static_cast<int>((p.bits >> i) & 1u));
  return b;
}

inline lightfield::Poly poly_of(const Bits& b) {
  lightfield::Poly p;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] & 1) p.bits |= std::uint64_t{1} << i;
  return p;
}

inline Bits school_mul(const Bits& a, const Bits& b) {
  if (a.empty() || b.empty()) return {};
  Bits r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  for (auto& x : r) x &= 1;
  return r;
}

inline Bits long_div_rem(Bits a, const Bits& p) {
  for (std::size_t top = a.size(); top-- >= p.size();) {
    if (a[top]) {
      for (std::size_t k = 0; k < p.size(); ++k) a[top - (p.size() - 1) + k] ^= p[k];
    }
    if (top == 0) break;
  }
  return a;
}

inline Bits xor_bits(Bits a, const Bits& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] ^= b[i];
  return a;
}

}  // namespace testing
