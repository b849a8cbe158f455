#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lightfield/eval.hpp"
#include "lightfield/syntax.hpp"
#include "lightfield/term.hpp"

namespace lightfield {

enum class Trit { tt, ff, bot };

/// Most significant trit first.
struct TritWord {
  std::vector<Trit> trits;
  std::size_t size() const { return trits.size(); }
  bool operator==(const TritWord&) const = default;
};

/// Most significant trit first.
struct SeqValue {
  std::vector<Trit> trits;
  bool operator==(const SeqValue&) const = default;
};

using TritPair = std::pair<Trit, Trit>;

/// A list of trit pairs, most significant first.
using PairWord = std::vector<TritPair>;

/// A value is not in the canonical shape of the requested data type.
class NotCanonical : public std::runtime_error {
 public:
  NotCanonical(const std::string& what_type, const Term& offending);
  const Term& offending() const { return offending_; }

 private:
  Term offending_;
};

class NotAWord : public NotCanonical {
 public:
  explicit NotAWord(const Term& offending) : NotCanonical("word", offending) {}
};

char trit_char(Trit t);
/// '1' tt, '0' ff, '_' bot.
Trit trit_from_char(char c);
std::string to_string(const TritWord& w);
TritWord word_from_string(const std::string& s);

Term encode_trit(Trit t);
Trit decode_trit(const Term& v);
Term encode_trit_pair(TritPair p);
TritPair decode_trit_pair(const Term& v);
Term encode_word(const TritWord& w);
TritWord decode_word(const Value& v);
TritWord decode_word(const Term& v);
Term encode_pair_word(const PairWord& w);
PairWord decode_pair_word(const Term& v);
/// Words of t-tuples of words, as produced by wDup.
std::vector<TritWord> decode_word_tuple(const Term& v, std::size_t t);
Term encode_seq(const SeqValue& s);
SeqValue decode_seq(const Term& v);
Term encode_numeral(std::size_t n);
std::size_t decode_numeral(const Term& v);

/// The combinator library: `.lam` sources loaded once, plus the parametric
/// families built by generators.
class Library {
 public:
  /// Loads core, pattern and field sources from `dir`.
  explicit Library(const std::string& dir);
  /// Shared instance loaded from the data directory (LIGHTFIELD_DATA overrides).
  static const Library& standard();
  static std::string data_dir();

  const Term& get(const std::string& name) const { return env_.get(name); }
  bool contains(const std::string& name) const { return env_.contains(name); }
  Term resolve(const Term& t) const { return env_.resolve(t); }
  const Environment& environment() const { return env_; }
  /// Source text of a definition file per name, for round-trip checks.
  const std::vector<std::string>& source_files() const { return files_; }

  Term b_dup(std::size_t t) const;
  Term b_cast(std::size_t m) const;
  Term t_cast(std::size_t m) const;
  Term w_cast(std::size_t m) const;
  Term w_dup(std::size_t t, std::size_t m) const;

  /// Resolves a name, generated families included: bDup<t>, bCast<m>,
  /// tCast<m>, wCast<m>, wDup<t>_<m>.
  Term lookup(const std::string& name) const;

 private:
  Environment env_;
  std::vector<std::string> files_;
};

/// n nested paragraph-lift wrappers: lambda x. (M x), iterated.
Term lift_term(const Term& m, std::size_t n);

// Behavioural contracts, each evaluated through the Church encodings.
Trit bxor_apply(Trit a, Trit b);
Trit band_apply(Trit a, Trit b);
std::pair<Trit, SeqValue> split_seq(const SeqValue& s);

/// Applies a library combinator (generated families included) to encoded
/// arguments and normalizes.
Value word_op(const std::string& name, const std::vector<Term>& args, EvalBudget budget = EvalBudget::from_env());

TritWord w_rev(const TritWord& w);
TritWord w_drop_b(const TritWord& w);
SeqValue w_tos(const TritWord& w);
TritWord w_proj(const PairWord& w);
TritWord w_projb(const PairWord& w);
TritWord w_suc(Trit b, const TritWord& w);
Trit b_cast(std::size_t m, Trit b);
TritPair t_cast(std::size_t m, TritPair p);
TritWord w_cast(std::size_t m, const TritWord& w);
std::vector<Trit> b_dup(std::size_t t, Trit b);
std::vector<TritWord> w_dup(std::size_t t, std::size_t m, const TritWord& w);

}  // namespace lightfield
