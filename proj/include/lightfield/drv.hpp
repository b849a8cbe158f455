#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lightfield/tfa.hpp"
#include "lightfield/types.hpp"

namespace lightfield {

struct SExpr {
  enum class Kind { Symbol, String, List };
  Kind kind = Kind::Symbol;
  std::string text;
  std::vector<SExpr> items;
  std::size_t line = 0;

  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
  bool is_list() const { return kind == Kind::List; }
  /// Head symbol of a list, empty otherwise.
  std::string head() const;
};

class SExprError : public std::runtime_error {
 public:
  SExprError(const std::string& msg, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// `;` starts a line comment; strings use `\"` and `\\` escapes.
std::vector<SExpr> parse_sexprs(std::string_view text);

/// A derivation file: `(alias NAME "TYPE")` forms followed by either
/// `(certificate NAME :type "TYPE" BODY)` or a bare BODY.
struct DrvFile {
  std::optional<std::string> name;
  std::optional<TypeExpr> claimed;
  TypeAliases aliases;
  SExpr body;
};

DrvFile parse_drv(std::string_view text);

/// True when the body is written with `(rule ...)` nodes only.
bool is_explicit(const SExpr& body);

/// Reads `(rule NAME :concl "..." witnesses... premises...)`.
Derivation read_explicit(const SExpr& body, const TypeAliases& aliases = {});
std::string print_derivation(const Derivation& d);

/// A script that does not describe a derivation.
class ElaborationError : public std::runtime_error {
 public:
  ElaborationError(std::size_t line, std::string form, std::string condition);
  std::size_t line() const { return line_; }
  const std::string& form() const { return form_; }
  const std::string& condition() const { return condition_; }

 private:
  std::size_t line_;
  std::string form_;
  std::string condition_;
};

/// Builds an explicit derivation of a closed judgment from a script.
/// Script forms:
///   x                      assumption or certified constant
///   (lam x P) (lam (x y) P)  abstraction, linear or ! by the expected type
///   (lam (x "A") P)        abstraction with a stated domain
///   (tlam (x y) P)         tuple abstraction
///   (ap F A ...)           application, linear or ! by the function type
///   (ap! F A)              ! application whose argument may use its
///                          exponential assumption several times
///   (inst F "T" ...)       instantiation
///   (gen a P)              generalization over a
///   (box P)                paragraph introduction
///   (cut x N P)            paragraph elimination, P[N/x]
///   (tup P ...)            tuple
///   (the "T" P)            expected type
///   (lift n P)             paragraph lift of a closed arrow
/// Weak, Contr, SeqFold, SeqUnfold and generalizations forced by the
/// expected type are inserted where needed.
Derivation elaborate(const SExpr& script, const LemmaTable& lemmas, const TypeAliases& aliases = {},
                     const std::optional<TypeExpr>& goal = std::nullopt);

/// Explicit bodies are read, scripts elaborated against the claimed type.
Derivation load_derivation(const DrvFile& file, const LemmaTable& lemmas);

/// Runs load_derivation and check, turning elaboration failures into
/// Reject reports that name the script line.
CheckReport check_file(const DrvFile& file, const LemmaTable& lemmas, Derivation* out = nullptr);

}  // namespace lightfield
