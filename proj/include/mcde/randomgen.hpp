#ifndef MCDE_RANDOMGEN_HPP
#define MCDE_RANDOMGEN_HPP

#include "mcde/rules.hpp"

#include <cstdint>
#include <random>

namespace mcde {

/// Deterministic generator for rule systems and terms, used by the
/// built-in verification suite and the property tests. All draws go
/// through next()/pick() so results are identical across platforms.
class RandomGen {
public:
    explicit RandomGen(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t next() { return rng_(); }
    std::uint64_t pick(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    bool chance(unsigned percent) { return pick(100) < percent; }

    /// Random complex with 1-2 slots, 1-3 differentials, 1-3 atoms and
    /// randomized commutation constants, order/power bounds and ideals.
    RuleSet random_rules(bool with_conditions = false);

    /// Random monomial over the declared names with bounded shape; total
    /// slot count capped so the positional model stays applicable.
    Monomial random_monomial(const RuleSet& rules, std::uint32_t max_distinct,
                             std::uint32_t max_mult, std::uint32_t max_word_len,
                             std::uint32_t slot_cap);

    /// Random normalization-stable factor (word survives the commutation
    /// table unchanged).
    Factor random_factor(const RuleSet& rules, std::uint32_t max_word_len);

private:
    std::mt19937_64 rng_;
};

} // namespace mcde

#endif
