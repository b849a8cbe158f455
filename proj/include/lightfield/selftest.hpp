#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lightfield/field.hpp"

namespace lightfield {

/// Ground truth for the field differential checks.
struct FieldOracle {
  std::function<Poly(Poly, Poly)> add;
  std::function<Poly(Poly, Poly)> mul;
  /// remainder of the first argument by the modulus
  std::function<Poly(Poly, Poly)> mod;
};

FieldOracle native_oracle();

struct SelftestOptions {
  FieldOracle oracle = native_oracle();
  std::string data_dir;  // empty means Library::data_dir()
  std::size_t random_pairs = 100;
  std::uint32_t seed = 20261015;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult(const SelftestOptions&)> run;
};

/// The seven acceptance criteria, in order. Each run is deterministic for
/// fixed options; exceptions escaping a run count as a failure.
const std::vector<Criterion>& acceptance_criteria();

CriterionResult run_criterion(const Criterion& c, const SelftestOptions& opts);

/// Step counts of bf_mult on the all-ones operands for the given degrees.
std::vector<std::uint64_t> mult_step_counts(const std::vector<std::size_t>& degrees);

}  // namespace lightfield
