#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightfield {

enum class TermKind : std::uint8_t { Bound, Free, Abs, App, Tuple, Destr };

class Term;

namespace detail {
struct TermNode;
}

/// Immutable λ-term with tuples.
///
/// Bound variables are stored as de Bruijn indices, so two terms compare
/// equal exactly when they are α-equivalent. Binder names are kept only as
/// printing hints. Free variables are named. A tuple destructor
/// `\<x1, ..., xn>. M` binds xn at index 0 and x1 at index n-1.
class Term {
 public:
  Term();  // the free variable "_"

  static Term free(std::string name);
  static Term bound(std::uint32_t index);
  static Term app(Term fn, Term arg);
  static Term apps(Term fn, const std::vector<Term>& args);
  static Term tuple(std::vector<Term> items);

  /// Named abstraction: every free occurrence of `name` in `body` becomes bound.
  static Term abs(const std::string& name, const Term& body);
  /// Multi-binder shorthand for nested abstractions, outermost first.
  static Term abs(const std::vector<std::string>& names, const Term& body);
  static Term destr(const std::vector<std::string>& names, const Term& body);

  /// Nameless constructors: `body` already refers to the new binder(s) by index.
  static Term lam_raw(std::string hint, Term body);
  static Term destr_raw(std::vector<std::string> hints, Term body);

  TermKind kind() const;
  bool is(TermKind k) const { return kind() == k; }

  std::uint32_t index() const;                      // Bound
  const std::string& name() const;                  // Free name, Abs hint
  const std::vector<std::string>& binders() const;  // Destr hints
  std::size_t arity() const;                        // Tuple / Destr
  const Term& body() const;                         // Abs / Destr
  const Term& fn() const;                           // App
  const Term& arg() const;                          // App
  const std::vector<Term>& items() const;           // Tuple

  /// One past the largest dangling de Bruijn index (0 for index-closed terms).
  std::uint32_t fv_bound() const;
  std::size_t size() const;
  std::size_t hash() const;
  /// True when some free (named) variable occurs in the term.
  bool node_has_free() const;

  std::set<std::string> free_vars() const;
  bool has_free(const std::string& name) const;
  bool closed() const { return fv_bound() == 0 && !node_has_free(); }

  /// Replaces dangling indices 0..names.size()-1 by free variables;
  /// names[0] replaces index 0.
  Term open(const std::vector<std::string>& names) const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool alpha_eq(const Term& a, const Term& b);
  friend bool operator==(const Term& a, const Term& b) { return alpha_eq(a, b); }

 private:
  explicit Term(std::shared_ptr<const detail::TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::TermNode> node_;
};

namespace detail {
struct TermNode {
  TermKind kind = TermKind::Free;
  std::uint32_t index = 0;
  std::string name;
  std::vector<std::string> binders;
  std::vector<Term> kids;
  std::uint32_t fv_bound = 0;
  std::size_t size = 1;
  std::size_t hash = 0;
  bool has_free = false;
};
}  // namespace detail

/// Capture-avoiding substitution of `replacement` for the free variable `var`.
/// The replacement must not have dangling indices.
Term substitute(const Term& body, const std::string& var, const Term& replacement);

/// Replaces tuple constructors and destructors by their pure encodings:
/// <M1,...,Mn> becomes \x. x M1 ... Mn and \<x1,...,xn>. M becomes
/// \p. p (\x1. ... \xn. M).
Term desugar_tuples(const Term& term);

bool contains_tuples(const Term& term);

/// Adds `by` to every de Bruijn index at or above `cutoff`.
Term shift_indices(const Term& term, std::uint32_t by, std::uint32_t cutoff = 0);

/// Fresh variable name not occurring in `avoid`, derived from `base`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace lightfield
