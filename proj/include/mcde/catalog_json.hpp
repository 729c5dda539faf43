#ifndef MCDE_CATALOG_JSON_HPP
#define MCDE_CATALOG_JSON_HPP

#include "mcde/search.hpp"

#include <string>

namespace mcde {

/// Serializes a catalog to the versioned JSON document described by
/// docs/catalog.schema.json. Keys are sorted and term order is
/// canonical, so equal catalogs produce byte-identical text.
std::string catalog_to_json(const RuleSet& rules, const Catalog& catalog);

void write_catalog(const RuleSet& rules, const Catalog& catalog, const std::string& path);

/// Reads a catalog document back; inverse of catalog_to_json.
Catalog read_catalog(const RuleSet& rules, const std::string& path);

} // namespace mcde

#endif
