#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "lightfield/term.hpp"

namespace lightfield {

struct EvalBudget {
  static constexpr std::uint64_t kDefaultSteps = 100'000'000;
  std::uint64_t max_steps = kDefaultSteps;

  /// Default budget, overridden by the LIGHTFIELD_BUDGET environment variable.
  static EvalBudget from_env();
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExhausted : public EvalError {
 public:
  explicit BudgetExhausted(std::uint64_t steps);
};

class ArityMismatch : public EvalError {
 public:
  ArityMismatch(std::size_t destructor, std::size_t tuple);
};

/// A β-normal form: no β-redex and no destructor applied to a tuple.
class Value {
 public:
  const Term& term() const { return term_; }
  friend bool operator==(const Value& a, const Value& b) { return a.term_ == b.term_; }

 private:
  friend class Evaluator;
  friend Value as_value(const Term& t);
  explicit Value(Term t) : term_(std::move(t)) {}
  Term term_;
};

/// Wraps an already normal term; throws std::invalid_argument on a redex.
Value as_value(const Term& t);

/// True iff the term contains no redex.
bool is_normal(const Term& t);

struct EvalStats {
  std::uint64_t steps = 0;
};

/// Big-step normalization.
///
/// An application whose function part normalizes to \x. V continues with the
/// normal form of V[N/x]; that substitution is carried out hereditarily, so
/// only the redexes it creates are contracted again. The argument is
/// normalized once, and not at all when x does not occur in V. Every rule
/// firing (one per visited subterm plus one per contracted redex) counts
/// against the budget.
Value eval(const Term& term, EvalBudget budget = {}, EvalStats* stats = nullptr);

}  // namespace lightfield
