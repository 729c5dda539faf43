#ifndef MCDE_ORACLE_HPP
#define MCDE_ORACLE_HPP

#include "mcde/rules.hpp"

#include <vector>

namespace mcde {

/// A product written out position by position, one factor per slot.
/// Deliberately a different data model from Monomial: the multiset
/// engine is validated against literal per-position expansion.
struct PositionedProduct {
    std::vector<Factor> slots;

    friend bool operator==(const PositionedProduct& a, const PositionedProduct& b) {
        return a.slots == b.slots;
    }
};

inline constexpr std::size_t kSlotCap = 8;

/// One expansion term: the word-normalization scalar for the hit slot
/// and the resulting arrangement. Plain rule sets always carry scale 1.
struct PositionedTerm {
    Scalar scale;
    PositionedProduct product;
};

/// Literal Leibniz sum: one term per slot with that slot differentiated;
/// slots whose factor dies by maximal order are dropped. Terms are not
/// collapsed. Throws SlotCapExceeded above kSlotCap slots.
std::vector<PositionedTerm> positional_expand(const RuleSet& rules, LabelId label,
                                              const PositionedProduct& p);

/// Maps each arrangement to its factor-multiset monomial, collects like
/// terms, and reduces.
Expression collapse(const RuleSet& rules, const std::vector<PositionedTerm>& terms);

/// Expands a monomial into one explicit arrangement (factors repeated by
/// multiplicity, in canonical order).
PositionedProduct arrange(const Monomial& m);

} // namespace mcde

#endif
