#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lightfield/combinators.hpp"
#include "lightfield/drv.hpp"
#include "lightfield/tfa.hpp"

namespace lightfield {

/// One line of the catalogue: `name | source | type | cert | params`.
/// cert is a path relative to the data directory, `gen` for families built
/// in code, or `axiom` for the field parameters. params are `@K=text`
/// substitutions separated by `;`, applied to template certificates.
struct CatalogueEntry {
  std::string name;
  std::string source;
  std::string type_text;
  TypeExpr type;
  std::string cert;
  std::vector<std::pair<std::string, std::string>> params;
};

std::vector<CatalogueEntry> load_catalogue(const std::string& path);

/// Certificate script for a generated family member: bCast<m>, bDup<t>,
/// tCast<m>, wCast<m> (m > 0), wDup<t>_<m>.
std::string family_script(const std::string& name);

/// Certificate text of an entry after parameter substitution.
std::string certificate_text(const CatalogueEntry& e, const std::string& data_dir);

struct CertResult {
  std::string name;
  bool axiom = false;
  CheckReport report;
  std::size_t nodes = 0;
};

struct CertifyReport {
  std::vector<CertResult> results;
  bool all_accepted() const;
  const CertResult* find(const std::string& name) const;
};

/// Certifies the catalogue in order. Each certificate may cite entries
/// accepted before it. The root subject must be the library definition
/// and the root type the catalogue type.
CertifyReport certify_library(const Library& lib, const std::string& data_dir);

/// Catalogue types of all entries; used to check stand-alone derivations.
LemmaTable catalogue_lemmas(const std::vector<CatalogueEntry>& entries);

}  // namespace lightfield
