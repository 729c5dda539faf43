#include "mcde/randomgen.hpp"

#include <algorithm>

namespace mcde {

namespace {

const char* kAtomNames[] = {"phi", "psi", "chi"};
const char* kLabelNames[] = {"d", "e", "f"};

Scalar pick_commute_scalar(RandomGen& g) {
    switch (g.pick(6)) {
        case 0: return Scalar(0);
        case 1: return Scalar(1);
        case 2: return Scalar(-1);
        case 3: return Scalar(2);
        case 4: return Scalar(Rational(1, 2));
        default: return Scalar(Rational(0), Rational(1)); // i
    }
}

} // namespace

Factor RandomGen::random_factor(const RuleSet& rules, std::uint32_t max_word_len) {
    const auto& decls = rules.decls;
    for (int attempt = 0; attempt < 32; ++attempt) {
        Factor f;
        f.atom = static_cast<AtomId>(pick(decls.atoms.size()));
        std::uint32_t len = static_cast<std::uint32_t>(pick(max_word_len + 1));
        std::vector<Letter> letters;
        for (std::uint32_t i = 0; i < len; ++i) {
            LabelId l = static_cast<LabelId>(pick(decls.labels.size()));
            std::uint32_t order = 1 + static_cast<std::uint32_t>(pick(2));
            letters.push_back(Letter{l, order});
        }
        f.word = merge_letters(std::move(letters));
        auto [scale, word] = normalize_word(rules.commutation, f.word);
        if (scale.is_zero() || word != f.word)
            continue;
        return f;
    }
    // fall back to a bare atom, always stable
    return Factor{OperatorWord{}, static_cast<AtomId>(pick(decls.atoms.size()))};
}

RuleSet RandomGen::random_rules(bool with_conditions) {
    RuleSet rules;
    rules.decls.slot_count = 1 + static_cast<std::uint32_t>(pick(2));

    std::size_t nlabels = 1 + pick(3);
    for (std::size_t i = 0; i < nlabels; ++i) {
        DifferentialLabel l;
        l.name = kLabelNames[i];
        l.up_slot = 1 + static_cast<std::uint32_t>(pick(rules.decls.slot_count));
        l.down_slot = 1 + static_cast<std::uint32_t>(pick(rules.decls.slot_count));
        rules.decls.add_label(std::move(l));
    }
    std::size_t natoms = 1 + pick(3);
    for (std::size_t i = 0; i < natoms; ++i) {
        Atom a;
        a.name = kAtomNames[i];
        a.base_index = MultiIndex::zero(rules.decls.slot_count);
        for (auto& v : a.base_index.upper)
            v = static_cast<std::int64_t>(pick(5)) - 2;
        for (auto& v : a.base_index.lower)
            v = static_cast<std::int64_t>(pick(5)) - 2;
        rules.decls.add_atom(std::move(a));
    }

    for (LabelId a = 0; a < nlabels; ++a)
        for (LabelId b = a + 1; b < nlabels; ++b) {
            if (!chance(50))
                continue;
            LabelId x = a, y = b;
            if (chance(50))
                std::swap(x, y);
            Scalar value = pick_commute_scalar(*this);
            rules.commutation.declare(x, y, value);
            rules.declared_commutes.push_back({x, y, value});
        }

    auto random_pattern = [&]() {
        FactorPattern p;
        Factor f = random_factor(rules, 2);
        if (chance(80))
            p.atom = f.atom;
        if (chance(80))
            p.word = f.word;
        if (!p.atom && !p.word)
            p.atom = f.atom;
        return p;
    };

    std::size_t norders = pick(4);
    for (std::size_t i = 0; i < norders; ++i) {
        MaxOrderRule r;
        r.label = static_cast<LabelId>(pick(nlabels));
        r.inner = random_pattern();
        r.bound = 1 + static_cast<std::uint32_t>(pick(3));
        bool dup = false;
        for (const auto& e : rules.max_orders)
            if (e.label == r.label && e.inner == r.inner)
                dup = true;
        if (!dup)
            rules.max_orders.push_back(std::move(r));
    }
    std::size_t npowers = pick(4);
    for (std::size_t i = 0; i < npowers; ++i) {
        MaxPowerRule r;
        r.pattern = random_pattern();
        r.bound = 1 + static_cast<std::uint32_t>(pick(3));
        bool dup = false;
        for (const auto& e : rules.max_powers)
            if (e.pattern == r.pattern)
                dup = true;
        if (!dup)
            rules.max_powers.push_back(std::move(r));
    }
    std::size_t nideals = pick(3);
    for (std::size_t i = 0; i < nideals; ++i) {
        std::size_t arity = 2 + pick(2);
        std::vector<std::pair<FactorPattern, std::uint32_t>> members;
        for (std::size_t k = 0; k < arity; ++k) {
            FactorPattern p = FactorPattern::exact(random_factor(rules, 1));
            bool merged = false;
            for (auto& [pattern, count] : members)
                if (pattern == p) {
                    ++count;
                    merged = true;
                }
            if (!merged)
                members.push_back({p, 1});
        }
        Ideal ideal{std::move(members)};
        bool dup = false;
        for (const auto& e : rules.ideals)
            if (e == ideal)
                dup = true;
        if (!dup)
            rules.ideals.push_back(std::move(ideal));
    }

    if (with_conditions && chance(70)) {
        // orthogonality is always index-coherent; a rewrite condition
        // needs a right side matching the left side's index, arranged
        // here by minting a dedicated atom with exactly that index
        Factor lhs = random_factor(rules, 2);
        if (lhs.word.empty())
            lhs.word = merge_letters({Letter{0, 1}});
        auto [scale, word] = normalize_word(rules.commutation, lhs.word);
        if (!scale.is_zero()) {
            lhs.word = word;
            if (chance(50)) {
                rules.conditions.push_back(Condition{lhs, Expression::zero()});
            } else {
                Atom target;
                target.name = "rho";
                target.base_index = multi_index(rules.decls, lhs);
                AtomId tid = rules.decls.add_atom(std::move(target));
                Expression rhs = expr_scale(
                    scale.inverse(),
                    Expression::single(Monomial::make(
                        Scalar(1), {FactorPower{Factor{OperatorWord{}, tid}, 1}})));
                rules.conditions.push_back(Condition{lhs, std::move(rhs)});
            }
        }
    }
    return rules;
}

Monomial RandomGen::random_monomial(const RuleSet& rules, std::uint32_t max_distinct,
                                    std::uint32_t max_mult, std::uint32_t max_word_len,
                                    std::uint32_t slot_cap) {
    std::uint32_t distinct = 1 + static_cast<std::uint32_t>(pick(max_distinct));
    std::vector<FactorPower> factors;
    std::uint32_t total = 0;
    for (std::uint32_t i = 0; i < distinct && total < slot_cap; ++i) {
        Factor f = random_factor(rules, max_word_len);
        std::uint32_t mult = 1 + static_cast<std::uint32_t>(pick(max_mult));
        mult = std::min(mult, slot_cap - total);
        total += mult;
        factors.push_back(FactorPower{std::move(f), mult});
    }
    return Monomial::make(Scalar(1), std::move(factors));
}

} // namespace mcde
