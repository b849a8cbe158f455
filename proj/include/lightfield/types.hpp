#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lightfield {

enum class TypeKind { Var, Lin, Bang, ForAll, Para, Seq };

namespace detail {
struct TypeNode;
}

/// A DLAL formula. `!` exists only as the left side of a Bang arrow, so
/// every value of this type is well formed with respect to polarity.
class TypeExpr {
 public:
  TypeExpr();

  static TypeExpr var(std::string name);
  static TypeExpr lin(TypeExpr a, TypeExpr b);
  /// !A -o B
  static TypeExpr bang(TypeExpr a, TypeExpr b);
  static TypeExpr forall(std::string name, TypeExpr body);
  static TypeExpr para(TypeExpr a, std::size_t times = 1);
  static TypeExpr seq();

  TypeKind kind() const;
  bool is(TypeKind k) const { return kind() == k; }
  const std::string& name() const;
  /// Argument of an arrow (without the `!`).
  const TypeExpr& left() const;
  const TypeExpr& right() const;
  /// Body of a ForAll or Para.
  const TypeExpr& body() const;
  bool is_arrow() const { return is(TypeKind::Lin) || is(TypeKind::Bang); }

  std::set<std::string> free_vars() const;
  bool same_node(const TypeExpr& o) const { return node_ == o.node_; }

 private:
  explicit TypeExpr(std::shared_ptr<const detail::TypeNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::TypeNode> node_;
};

namespace detail {
struct TypeNode {
  TypeKind kind = TypeKind::Var;
  std::string name;
  std::vector<TypeExpr> kids;
};
}  // namespace detail

class PolarityViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TypeSyntaxError : public std::invalid_argument {
 public:
  TypeSyntaxError(const std::string& msg, std::size_t column);
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Defined types.
struct TypeMacro {
  enum class Kind { Bool, Tuple, Nat, List, Word2, Seq };
  Kind kind;
  std::size_t n = 2;            // Bool
  std::vector<TypeExpr> args;   // Tuple components, List element
};

TypeExpr expand(const TypeMacro& m);
TypeExpr bool_type(std::size_t n);
TypeExpr tuple_type(const std::vector<TypeExpr>& parts);
TypeExpr nat_type();
TypeExpr list_type(const TypeExpr& elem);
TypeExpr word2_type();
/// Field elements: an alias of W2.
TypeExpr field_type();

/// The right-hand side of S = forall a. (B2 -o a) -o ((B2 * S) -o a) -o a.
TypeExpr seq_unfolding();
/// Replaces every occurrence of S by one unfolding.
TypeExpr unfold_seq(const TypeExpr& t);
/// Replaces every subformula alpha-equal to the unfolding of S by S.
TypeExpr fold_seq(const TypeExpr& t);

inline constexpr std::size_t kDefaultUnfoldBudget = 4;

/// Equality up to renaming of bound type variables and at most `budget`
/// unfoldings of S along each comparison path on each side.
bool type_eq(const TypeExpr& a, const TypeExpr& b, std::size_t budget = kDefaultUnfoldBudget);

/// Capture-avoiding substitution of b for the free occurrences of alpha.
TypeExpr subst_type(const TypeExpr& a, const std::string& alpha, const TypeExpr& b);

using TypeAliases = std::map<std::string, TypeExpr>;

/// Grammar: `a`, `A -o B`, `!A -o B`, `forall a b. A`, `$A`, `A * B`, `Seq`,
/// `B<n>`, `N`, `L(A)`, `W2`, `F`, parentheses. Unicode ⊸ § ∀ ⊗ accepted.
/// Names in `aliases` stand for the mapped types.
TypeExpr parse_type(std::string_view text, const TypeAliases* aliases = nullptr);
/// Folds recognizable macros back to their names.
std::string print_type(const TypeExpr& t);

std::string fresh_type_var(const std::string& base, const std::set<std::string>& avoid);

}  // namespace lightfield
