#include "mcde/oracle.hpp"

namespace mcde {

std::vector<PositionedTerm> positional_expand(const RuleSet& rules, LabelId label,
                                              const PositionedProduct& p) {
    if (label >= rules.decls.labels.size())
        throw EngineError(Errc::UnknownLabel, "positional_expand: undeclared label");
    if (p.slots.size() > kSlotCap)
        throw EngineError(Errc::SlotCapExceeded, "positional product exceeds slot cap");

    std::vector<PositionedTerm> out;
    for (std::size_t i = 0; i < p.slots.size(); ++i) {
        const Factor& f = p.slots[i];

        std::uint32_t new_order = 1;
        Factor inner;
        inner.atom = f.atom;
        if (!f.word.letters.empty() && f.word.letters.front().label == label) {
            new_order = f.word.letters.front().order + 1;
            inner.word.letters.assign(f.word.letters.begin() + 1, f.word.letters.end());
        } else {
            inner.word = f.word;
        }
        auto bound = max_order_of(rules, label, inner);
        if (bound && new_order >= *bound)
            continue;

        std::vector<Letter> letters;
        letters.push_back(Letter{label, 1});
        letters.insert(letters.end(), f.word.letters.begin(), f.word.letters.end());
        auto [scale, word] = normalize_word(rules.commutation, merge_letters(std::move(letters)));
        if (scale.is_zero())
            continue;
        if (word_is_annihilated(rules, word, f.atom))
            continue;

        PositionedTerm term;
        term.scale = scale;
        term.product.slots = p.slots;
        term.product.slots[i] = Factor{std::move(word), f.atom};
        out.push_back(std::move(term));
    }
    return out;
}

Expression collapse(const RuleSet& rules, const std::vector<PositionedTerm>& terms) {
    std::vector<Monomial> monomials;
    monomials.reserve(terms.size());
    for (const auto& t : terms) {
        std::vector<FactorPower> factors;
        factors.reserve(t.product.slots.size());
        for (const auto& f : t.product.slots)
            factors.push_back(FactorPower{f, 1});
        monomials.push_back(Monomial::make(t.scale, std::move(factors)));
    }
    return reduce(rules, expr_collect(std::move(monomials)));
}

PositionedProduct arrange(const Monomial& m) {
    PositionedProduct p;
    for (const auto& fp : m.factors)
        for (std::uint32_t i = 0; i < fp.mult; ++i)
            p.slots.push_back(fp.factor);
    return p;
}

} // namespace mcde
