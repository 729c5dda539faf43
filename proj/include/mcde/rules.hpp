#ifndef MCDE_RULES_HPP
#define MCDE_RULES_HPP

#include "mcde/terms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace mcde {

/// Matches a factor exactly or through wildcards. A missing atom matches
/// any atom; a missing word matches any word. Exact words (including the
/// empty word) match structurally.
struct FactorPattern {
    std::optional<AtomId> atom;
    std::optional<OperatorWord> word;

    static FactorPattern exact(const Factor& f) { return FactorPattern{f.atom, f.word}; }

    bool matches(const Factor& f) const {
        if (atom && *atom != f.atom)
            return false;
        if (word && *word != f.word)
            return false;
        return true;
    }

    /// exact atom+word (3) > exact atom (2) > exact word (1) > any (0)
    int specificity() const { return (atom ? 2 : 0) + (word ? 1 : 0); }

    friend bool operator==(const FactorPattern& a, const FactorPattern& b) {
        return a.atom == b.atom && a.word == b.word;
    }
};

struct MaxOrderRule {
    LabelId label = 0;
    FactorPattern inner;
    std::uint32_t bound = 1;

    friend bool operator==(const MaxOrderRule& a, const MaxOrderRule& b) {
        return a.label == b.label && a.inner == b.inner && a.bound == b.bound;
    }
};

struct MaxPowerRule {
    FactorPattern pattern;
    std::uint32_t bound = 1;

    friend bool operator==(const MaxPowerRule& a, const MaxPowerRule& b) {
        return a.pattern == b.pattern && a.bound == b.bound;
    }
};

/// A distributed vanishing ideal: any simultaneous match of all members
/// into a monomial's factors (respecting multiplicities) annihilates it.
struct Ideal {
    std::vector<std::pair<FactorPattern, std::uint32_t>> members;

    std::uint32_t arity() const {
        std::uint32_t a = 0;
        for (const auto& m : members)
            a += m.second;
        return a;
    }

    friend bool operator==(const Ideal& a, const Ideal& b) { return a.members == b.members; }
};

/// Declared rewrite rule: lhs factor equals rhs expression; an empty rhs
/// is an orthogonality condition (lhs vanishes).
struct Condition {
    Factor lhs;
    Expression rhs;

    bool orthogonality() const { return rhs.is_zero(); }

    friend bool operator==(const Condition& a, const Condition& b) {
        return a.lhs == b.lhs && a.rhs == b.rhs;
    }
};

struct RuleSet {
    Declarations decls;
    std::vector<MaxOrderRule> max_orders;
    std::vector<MaxPowerRule> max_powers;
    std::vector<Ideal> ideals;
    CommutationTable commutation;
    /// Explicit commute declarations in source order (derived inverses
    /// live only in the table); preserved for lossless rendering.
    std::vector<std::tuple<LabelId, LabelId, Scalar>> declared_commutes;
    std::vector<Condition> conditions;

    std::string fingerprint() const;
};

enum class VanishReason { None, MaxPower, Ideal, ZeroCoefficient };

struct VanishVerdict {
    bool vanishes = false;
    VanishReason reason = VanishReason::None;
    std::optional<Factor> factor;      // MaxPower: the saturated factor
    std::optional<std::size_t> ideal;  // Ideal: index into rules.ideals
};

/// Most specific matching bound for applying `label` to `inner`, or
/// nullopt when no declared entry constrains it.
std::optional<std::uint32_t> max_order_of(const RuleSet& rules, LabelId label,
                                          const Factor& inner);

std::optional<std::uint32_t> max_power_of(const RuleSet& rules, const Factor& f);

/// True when some run of the word meets or exceeds its declared maximal
/// order over the element beneath it; such a factor is the zero element.
bool word_is_annihilated(const RuleSet& rules, const OperatorWord& word, AtomId atom);
inline bool factor_is_annihilated(const RuleSet& rules, const Factor& f) {
    return word_is_annihilated(rules, f.word, f.atom);
}

bool ideal_matches(const Ideal& ideal, const Monomial& m);

VanishVerdict vanishes(const RuleSet& rules, const Monomial& m);

/// Drops vanishing monomials and collects like terms.
Expression reduce(const RuleSet& rules, const Expression& e);

/// Substitutes every occurrence of the condition's lhs (one multiplicity
/// at a time, distributing over sums) and reduces; orthogonality kills
/// carrying monomials.
Expression apply_condition(const RuleSet& rules, const Expression& e, const Condition& c);

std::string render_pattern(const Declarations& decls, const FactorPattern& p);
std::string render_ruleset(const RuleSet& rules);

} // namespace mcde

#endif
