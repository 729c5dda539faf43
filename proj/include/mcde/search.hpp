#ifndef MCDE_SEARCH_HPP
#define MCDE_SEARCH_HPP

#include "mcde/calculus.hpp"

#include <vector>

namespace mcde {

/// Finite window on the product space. Word length counts letters
/// (maximal runs) in the operator word.
struct SearchBounds {
    std::uint32_t max_distinct_factors = 1;
    std::uint32_t max_word_length = 1;
    std::uint32_t max_order_per_letter = 1;
    std::uint32_t max_multiplicity = 1;
    std::vector<AtomId> atoms;
    std::vector<LabelId> labels;
};

struct LabelVerdict {
    LabelId label = 0;
    bool closed = false;
    Expression witness;
};

struct CatalogEntry {
    Monomial monomial;
    std::vector<LabelVerdict> verdicts;

    std::vector<LabelId> closed_under() const {
        std::vector<LabelId> out;
        for (const auto& v : verdicts)
            if (v.closed)
                out.push_back(v.label);
        return out;
    }
};

struct Catalog {
    std::vector<CatalogEntry> entries;
    SearchBounds bounds;
    std::string ruleset_fingerprint;
    std::vector<LabelId> labels;
    ClosureMode mode = ClosureMode::Plain;
};

void validate_bounds(const RuleSet& rules, const SearchBounds& bounds);

/// Every nonvanishing monomial (coefficient 1) within bounds, in
/// canonical order, skipping factors whose words are annihilated by
/// declared maximal orders.
std::vector<Monomial> enumerate_candidates(const RuleSet& rules, const SearchBounds& bounds);

/// Runs is_closed for every candidate and label; candidates may be
/// partitioned across `workers` threads, output is identical for any
/// worker count. Only products closed under at least one label become
/// entries.
Catalog search_closed(const RuleSet& rules, const SearchBounds& bounds,
                      const std::vector<LabelId>& labels, ClosureMode mode,
                      unsigned workers = 1);

/// Merges entries equivalent under renaming atoms that share a base
/// index and identical applicable rules, keeping the canonical
/// representative.
Catalog dedup_by_symmetry(const RuleSet& rules, const Catalog& catalog);

} // namespace mcde

#endif
