#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lightfield/term.hpp"
#include "lightfield/types.hpp"

namespace lightfield {

using TypingMap = std::map<std::string, TypeExpr>;

/// Exponential part gamma and linear part delta.
struct TypingContext {
  TypingMap gamma;
  TypingMap delta;
};

struct Judgment {
  TypingContext ctx;
  Term subject;
  TypeExpr type;
};

enum class Rule {
  Ax,
  Weak,
  Contr,
  LinAbs,
  LinApp,
  BangAbs,
  BangApp,
  ParaIntro,
  ParaElim,
  ForAllIntro,
  ForAllElim,
  TupleIntro,
  TupleAbs,
  SeqFold,
  SeqUnfold,
  ParaLift,
  /// Appeals to an already certified constant or to a parameter axiom.
  Lemma,
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& s);

struct Witness {
  /// Ax/Lemma: the variable or constant; LinAbs/BangAbs/ParaElim: the bound
  /// variable; TupleAbs: the binders; Contr: the two merged variables.
  std::vector<std::string> vars;
  /// Contr: the merged name.
  std::optional<std::string> into;
  /// ForAllElim: the instantiation.
  std::optional<TypeExpr> inst;
  /// ForAllIntro: the eigenvariable.
  std::optional<std::string> alpha;
  /// Multiplicative rules: names of the conclusion's assumptions that each
  /// premise owns, in premise order.
  std::optional<std::vector<std::vector<std::string>>> split;
  /// ParaIntro: premise assumptions that become exponential.
  std::vector<std::string> to_gamma;
  /// ParaLift: number of nested lifts.
  std::optional<std::size_t> depth;
  /// BangApp: the minor premise's assumption is read as exponential, so
  /// several linear copies may be merged into `into`.
  bool minor_exp = false;
};

struct Derivation {
  Rule rule = Rule::Ax;
  std::optional<Judgment> concl;
  Witness witness;
  std::vector<Derivation> premises;
};

/// Arity, witness or conclusion missing.
class MalformedDerivation : public std::runtime_error {
 public:
  MalformedDerivation(const std::string& path, const std::string& msg);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Types of the constants a derivation may cite through Lemma.
struct LemmaInfo {
  TypeExpr type;
  bool flagged = false;
};
using LemmaTable = std::map<std::string, LemmaInfo>;

struct CheckReport {
  bool accepted = false;
  /// Premise indices from the root, e.g. "0.1"; "root" for the root.
  std::string node;
  std::string rule;
  std::string condition;
  /// Conditions the derivation relies on that are interpretations.
  std::set<std::string> flags;
  std::size_t nodes = 0;
};

/// Verifies every node against its rule.
CheckReport check(const Derivation& d, const LemmaTable& lemmas = {});

class NotClosed : public std::invalid_argument {
 public:
  NotClosed() : std::invalid_argument("paragraph lift needs a derivation with empty contexts") {}
};
class NotArrow : public std::invalid_argument {
 public:
  NotArrow() : std::invalid_argument("paragraph lift needs a linear arrow type") {}
};

/// From a derivation of |- M : A -o B builds one of |- lift^n(M) : $^n A -o $^n B.
Derivation lift(const Derivation& d, std::size_t n, const LemmaTable& lemmas = {});

std::string print_context(const TypingContext& c);
std::string print_judgment(const Judgment& j);
Judgment parse_judgment(const std::string& text, const TypeAliases* aliases = nullptr);

/// Renames a free variable throughout a derivation.
Derivation rename_var(const Derivation& d, const std::string& from, const std::string& to);

std::size_t count_nodes(const Derivation& d);

}  // namespace lightfield
