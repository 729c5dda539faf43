#ifndef MCDE_CALCULUS_HPP
#define MCDE_CALCULUS_HPP

#include "mcde/rules.hpp"

#include <optional>
#include <vector>

namespace mcde {

/// A derived relation asserting expression == 0, together with the seed
/// it came from, the labels applied in order, and the shared multi-index
/// of its monomials.
struct Identity {
    Expression expression;
    Monomial seed;
    std::vector<LabelId> applied;
    std::uint32_t depth = 1;
    MultiIndex index;

    friend bool operator==(const Identity& a, const Identity& b) {
        return a.expression == b.expression && a.seed == b.seed && a.applied == b.applied &&
               a.depth == b.depth && a.index == b.index;
    }
};

enum class ClosureMode { Plain, Transfer };

struct ClosureVerdict {
    bool closed = false;
    ClosureMode mode = ClosureMode::Plain;
    /// The reduced (and, in transfer mode, cancelled) expansion; zero
    /// exactly when closed.
    Expression witness;
};

/// Leibniz derivative: one summand per distinct factor, weighted by its
/// multiplicity, the differential prepended to that factor's word. New
/// words are merged, normalized, and checked against declared maximal
/// orders; the result is reduced.
Expression differentiate(const RuleSet& rules, LabelId label, const Expression& e);

/// Expands d(seed) formally for a vanishing seed; the surviving reduced
/// expression is an identity (== 0). Returns nullopt when every summand
/// dies. Throws SeedNotVanishing when the seed is not a zero product.
std::optional<Identity> derive_identity(const RuleSet& rules, LabelId label,
                                        const Monomial& seed);

/// Breadth-first tower of identities: level 1 derives from the seed,
/// deeper levels differentiate stored identities with every label.
/// Identities equal up to coefficient scaling are kept once. Stops at
/// `depth` or when every branch has died.
std::vector<Identity> hierarchy(const RuleSet& rules, const Monomial& seed,
                                const std::vector<LabelId>& labels, std::uint32_t depth);

/// Closure test for a nonvanishing product. Plain mode reduces the
/// Leibniz expansion; transfer mode additionally runs transfer_cancel.
/// Throws SeedVanishes for vanishing candidates.
ClosureVerdict is_closed(const RuleSet& rules, LabelId label, const Monomial& m,
                         ClosureMode mode);

/// Fixpoint cancellation using declared order-2 ideals:
///   - a front letter of a factor may move onto a partner factor when
///     the stripped factor and the partner form an I(2) pair (sign -1,
///     commutation scalars folded in); a move onto an annihilated target
///     eliminates the monomial outright;
///   - front letters of an I(2)-rooted factor pair may exchange when
///     either composition of the two labels is declared zero.
/// States already visited are never revisited.
Expression transfer_cancel(const RuleSet& rules, const Expression& e);

/// Drives every declared condition: differentiates the residual
/// lhs - rhs with each label up to `depth`, substituting conditions and
/// reducing after each step; collects the nontrivial relations.
std::vector<Identity> saturate_conditions(const RuleSet& rules, std::uint32_t depth);

} // namespace mcde

#endif
