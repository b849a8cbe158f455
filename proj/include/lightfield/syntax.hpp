#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lightfield/term.hpp"

namespace lightfield {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses a single term:
///   \x. M        abstraction (also written λx. M)
///   M N          application, left associative
///   <M1, ..., Mn>      tuple
///   \<x1, ..., xn>. M  tuple destructor
///   (M)          grouping
/// Line comments start with `--`.
Term parse_term(std::string_view text);

/// Canonical textual form. Binder names are primed where needed so that
/// parse_term(print_term(t)) is α-equal to t.
std::string print_term(const Term& term);

/// One library definition. A plain definition is `name = M;`. An instance
/// definition `instance name = Template [H1 := M1, ...];` fills the named
/// holes of a template by in-line substitution.
struct Definition {
  std::string name;
  Term term;
  std::vector<std::pair<std::string, Term>> holes;
  bool is_instance = false;
};

/// A `.lam` source: ordered definitions followed by an optional main term.
struct Program {
  std::vector<Definition> definitions;
  std::optional<Term> main;
};

Program parse_program(std::string_view text);

/// Substitutes definitions into a term, innermost references first, until
/// no defined name occurs free.
class Environment {
 public:
  /// Adds a definition; references to earlier definitions are resolved now.
  void define(const std::string& name, const Term& term);
  void define(const Definition& def);
  void load(const Program& program);

  bool contains(const std::string& name) const { return defs_.count(name) != 0; }
  const Term& get(const std::string& name) const;
  Term resolve(const Term& term) const;
  const std::vector<std::string>& order() const { return order_; }

 private:
  std::map<std::string, Term> defs_;
  std::vector<std::string> order_;
};

std::string read_file(const std::string& path);

}  // namespace lightfield
