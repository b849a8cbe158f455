#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lightfield/combinators.hpp"

namespace lightfield {

enum class Pattern { Map, Fold, MapState, MapThread };

const char* pattern_name(Pattern p);
/// Holes each pattern expects: Map {F}; Fold {F, S, Cast0}; MapState {F, Cast0}; MapThread {F}.
std::vector<std::string> pattern_holes(Pattern p);

struct PatternInstance {
  Pattern pattern;
  std::map<std::string, Term> params;
};

class ParameterNotClosed : public std::invalid_argument {
 public:
  explicit ParameterNotClosed(const std::string& hole);
};

class MissingParameter : public std::invalid_argument {
 public:
  explicit MissingParameter(const std::string& hole);
};

/// Fills the holes of the pattern's template by in-line substitution.
Term instantiate(const PatternInstance& inst, const Library& lib = Library::standard());

enum class InputFamily { Words, PairLists };
enum class Alphabet { Bits, Trits };

struct EquivOptions {
  InputFamily family = InputFamily::Words;
  std::size_t max_size = 8;
  Alphabet alphabet = Alphabet::Trits;
  EvalBudget budget = EvalBudget::from_env();
  unsigned threads = 0;  // 0 picks hardware concurrency
};

struct Counterexample {
  std::string input;
  Term lhs;
  Term rhs;
};

struct EquivReport {
  bool pass = false;
  std::size_t cases = 0;
  std::optional<Counterexample> counterexample;
};

/// Evaluation failed on one generated input.
class EquivError : public std::runtime_error {
 public:
  EquivError(const std::string& input, const std::string& cause);
  const std::string& input() const { return input_; }

 private:
  std::string input_;
};

/// Every canonical input of the family with length 0..max_size, in
/// enumeration order: by length, then lexicographically (tt < ff < bot).
std::vector<std::pair<std::string, Term>> generate_inputs(InputFamily family, std::size_t max_size, Alphabet alphabet);

/// Extensional equivalence over the generated inputs; the reported
/// counterexample is the first in enumeration order.
EquivReport equiv_check(const Term& lhs, const Term& rhs, const EquivOptions& opts = {});

// The case studies of the pattern compiler.
Term tos_from_fold(const Library& lib = Library::standard());
Term proj_from_map(const Library& lib = Library::standard());
Term map_of(const Term& h, const Library& lib = Library::standard());
Term map_from_fold(const Term& h, const Library& lib = Library::standard());

}  // namespace lightfield
