#include "mcde/calculus.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace mcde {

namespace {

/// Differentiates one factor once. Returns nullopt when the summand dies
/// (maximal order reached or the word annihilated); otherwise the
/// canonical new factor and the normalization scalar.
std::optional<std::pair<Scalar, Factor>> differentiate_factor(const RuleSet& rules,
                                                              LabelId label,
                                                              const Factor& f) {
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
        return std::nullopt;

    std::vector<Letter> letters;
    letters.reserve(f.word.letters.size() + 1);
    letters.push_back(Letter{label, 1});
    letters.insert(letters.end(), f.word.letters.begin(), f.word.letters.end());
    OperatorWord merged = merge_letters(std::move(letters));

    auto [scale, word] = normalize_word(rules.commutation, merged);
    if (scale.is_zero())
        return std::nullopt;
    if (word_is_annihilated(rules, word, f.atom))
        return std::nullopt;
    return std::make_pair(scale, Factor{std::move(word), f.atom});
}

std::vector<FactorPower> with_factor_removed(const std::vector<FactorPower>& factors,
                                             const Factor& f) {
    std::vector<FactorPower> out;
    out.reserve(factors.size());
    for (const auto& fp : factors) {
        if (fp.factor == f) {
            if (fp.mult > 1)
                out.push_back(FactorPower{fp.factor, fp.mult - 1});
        } else {
            out.push_back(fp);
        }
    }
    return out;
}

std::vector<FactorPower> with_factor_added(std::vector<FactorPower> factors,
                                           const Factor& f) {
    factors.push_back(FactorPower{f, 1});
    return factors;
}

} // namespace

Expression differentiate(const RuleSet& rules, LabelId label, const Expression& e) {
    if (label >= rules.decls.labels.size())
        throw EngineError(Errc::UnknownLabel, "differentiate: undeclared label");
    std::vector<Monomial> out;
    for (const auto& m : e.terms) {
        for (const auto& fp : m.factors) {
            auto derived = differentiate_factor(rules, label, fp.factor);
            if (!derived)
                continue;
            auto& [scale, dfactor] = *derived;
            Scalar coeff = m.coeff * Scalar(std::int64_t(fp.mult)) * scale;
            std::vector<FactorPower> factors =
                with_factor_added(with_factor_removed(m.factors, fp.factor), dfactor);
            out.push_back(Monomial::make(std::move(coeff), std::move(factors)));
        }
    }
    return reduce(rules, expr_collect(std::move(out)));
}

namespace {

MultiIndex uniform_index(const RuleSet& rules, const Expression& e) {
    MultiIndex mi = multi_index(rules.decls, e.terms.front());
    for (std::size_t i = 1; i < e.terms.size(); ++i)
        if (multi_index(rules.decls, e.terms[i]) != mi)
            throw EngineError(Errc::MixedComplex, "identity is not index-uniform");
    return mi;
}

/// Dedup key invariant under coefficient scaling: divide through by the
/// leading coefficient and render.
std::string scale_free_key(const RuleSet& rules, const Expression& e) {
    Expression scaled = expr_scale(e.terms.front().coeff.inverse(), e);
    return render_expression(rules.decls, scaled);
}

} // namespace

std::optional<Identity> derive_identity(const RuleSet& rules, LabelId label,
                                        const Monomial& seed) {
    if (!vanishes(rules, seed).vanishes)
        throw EngineError(Errc::SeedNotVanishing,
                          "seed is not a vanishing product: " +
                              render_monomial(rules.decls, seed));
    Expression ex = differentiate(rules, label, Expression::single(seed));
    if (ex.is_zero())
        return std::nullopt;
    Identity id;
    id.expression = ex;
    id.seed = seed;
    id.applied = {label};
    id.depth = 1;
    id.index = uniform_index(rules, ex);
    return id;
}

std::vector<Identity> hierarchy(const RuleSet& rules, const Monomial& seed,
                                const std::vector<LabelId>& labels, std::uint32_t depth) {
    if (!vanishes(rules, seed).vanishes)
        throw EngineError(Errc::SeedNotVanishing,
                          "seed is not a vanishing product: " +
                              render_monomial(rules.decls, seed));
    std::vector<Identity> out;
    std::set<std::string> seen;
    std::size_t frontier_begin = 0;

    for (LabelId label : labels) {
        auto id = derive_identity(rules, label, seed);
        if (!id)
            continue;
        std::string key = scale_free_key(rules, id->expression);
        if (seen.insert(key).second)
            out.push_back(std::move(*id));
    }

    for (std::uint32_t level = 2; level <= depth; ++level) {
        std::size_t frontier_end = out.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (LabelId label : labels) {
                Expression ex = differentiate(rules, label, out[i].expression);
                if (ex.is_zero())
                    continue;
                std::string key = scale_free_key(rules, ex);
                if (!seen.insert(key).second)
                    continue;
                Identity id;
                id.expression = std::move(ex);
                id.seed = seed;
                id.applied = out[i].applied;
                id.applied.push_back(label);
                id.depth = level;
                id.index = uniform_index(rules, id.expression);
                out.push_back(std::move(id));
            }
        }
        if (out.size() == frontier_end)
            break; // every branch died
        frontier_begin = frontier_end;
    }
    return out;
}

namespace {

struct Rewrite {
    Scalar coeff;        // coefficient of the rewritten monomial
    bool eliminated;     // the source monomial is itself zero
    Monomial replacement;
};

/// All single-step transfer rewrites of `m`, in deterministic order.
std::vector<Rewrite> transfer_moves(const RuleSet& rules, const Monomial& m) {
    std::vector<Rewrite> moves;

    auto arity2_pair_in_ideal = [&](const Factor& a, const Factor& b) {
        Monomial pair =
            a == b ? Monomial::make(Scalar::one(), {FactorPower{a, 2}})
                   : Monomial::make(Scalar::one(),
                                    {FactorPower{a, 1}, FactorPower{b, 1}});
        for (const auto& ideal : rules.ideals)
            if (ideal.arity() == 2 && ideal_matches(ideal, pair))
                return true;
        return false;
    };

    // rule 1: move one front letter from alpha onto beta when
    // {alpha-minus-letter, beta} lies in a declared I(2) ideal
    for (std::size_t ai = 0; ai < m.factors.size(); ++ai) {
        const Factor& alpha = m.factors[ai].factor;
        if (alpha.word.empty())
            continue;
        LabelId x = alpha.word.letters.front().label;
        Factor stripped;
        stripped.atom = alpha.atom;
        if (alpha.word.letters.front().order > 1) {
            stripped.word = alpha.word;
            stripped.word.letters.front().order -= 1;
        } else {
            stripped.word.letters.assign(alpha.word.letters.begin() + 1,
                                         alpha.word.letters.end());
        }
        for (std::size_t bi = 0; bi < m.factors.size(); ++bi) {
            const Factor& beta = m.factors[bi].factor;
            if (bi == ai && m.factors[ai].mult < 2)
                continue;
            if (!arity2_pair_in_ideal(stripped, beta))
                continue;

            std::vector<Letter> letters;
            letters.push_back(Letter{x, 1});
            letters.insert(letters.end(), beta.word.letters.begin(),
                           beta.word.letters.end());
            auto [scale, word] = normalize_word(rules.commutation,
                                                merge_letters(std::move(letters)));
            bool target_zero =
                scale.is_zero() || word_is_annihilated(rules, word, beta.atom);

            Rewrite rw;
            if (target_zero) {
                rw.eliminated = true;
                rw.coeff = Scalar::zero();
                rw.replacement = m;
            } else {
                Factor target{std::move(word), beta.atom};
                // remove one alpha and one beta, add stripped and target
                auto without = with_factor_removed(m.factors, alpha);
                without = with_factor_removed(without, beta);
                without.push_back(FactorPower{stripped, 1});
                without.push_back(FactorPower{target, 1});
                rw.eliminated = false;
                rw.coeff = -(m.coeff * scale);
                rw.replacement = Monomial::make(Scalar::one(), std::move(without));
                rw.replacement.coeff = rw.coeff;
            }
            moves.push_back(std::move(rw));
        }
    }

    // rule 2: exchange front letters of an I(2)-rooted pair when either
    // composition of the two labels is declared zero
    for (std::size_t ai = 0; ai < m.factors.size(); ++ai) {
        for (std::size_t bi = 0; bi < m.factors.size(); ++bi) {
            if (ai == bi)
                continue;
            const Factor& alpha = m.factors[ai].factor;
            const Factor& beta = m.factors[bi].factor;
            if (alpha.word.empty() || beta.word.empty())
                continue;
            LabelId x = alpha.word.letters.front().label;
            LabelId y = beta.word.letters.front().label;
            if (x == y)
                continue;
            const Scalar* axy = rules.commutation.lookup(x, y);
            const Scalar* ayx = rules.commutation.lookup(y, x);
            bool annihilated = (axy && axy->is_zero()) || (ayx && ayx->is_zero());
            if (!annihilated)
                continue;

            auto strip_front = [](const Factor& f) {
                Factor s;
                s.atom = f.atom;
                if (f.word.letters.front().order > 1) {
                    s.word = f.word;
                    s.word.letters.front().order -= 1;
                } else {
                    s.word.letters.assign(f.word.letters.begin() + 1, f.word.letters.end());
                }
                return s;
            };
            Factor gamma = strip_front(alpha);
            Factor delta = strip_front(beta);
            if (!arity2_pair_in_ideal(gamma, delta))
                continue;

            auto prepend = [&](LabelId l, const Factor& f)
                -> std::optional<std::pair<Scalar, Factor>> {
                std::vector<Letter> letters;
                letters.push_back(Letter{l, 1});
                letters.insert(letters.end(), f.word.letters.begin(), f.word.letters.end());
                auto [scale, word] = normalize_word(rules.commutation,
                                                    merge_letters(std::move(letters)));
                if (scale.is_zero() || word_is_annihilated(rules, word, f.atom))
                    return std::nullopt;
                return std::make_pair(scale, Factor{std::move(word), f.atom});
            };
            auto ty = prepend(y, gamma);
            auto tx = prepend(x, delta);

            Rewrite rw;
            if (!ty || !tx) {
                rw.eliminated = true;
                rw.coeff = Scalar::zero();
                rw.replacement = m;
            } else {
                auto without = with_factor_removed(m.factors, alpha);
                without = with_factor_removed(without, beta);
                without.push_back(FactorPower{ty->second, 1});
                without.push_back(FactorPower{tx->second, 1});
                rw.eliminated = false;
                rw.coeff = -(m.coeff * ty->first * tx->first);
                rw.replacement = Monomial::make(Scalar::one(), std::move(without));
                rw.replacement.coeff = rw.coeff;
            }
            moves.push_back(std::move(rw));
        }
    }
    return moves;
}

} // namespace

Expression transfer_cancel(const RuleSet& rules, const Expression& e) {
    Expression current = reduce(rules, e);
    if (current.is_zero())
        return current;
    std::set<std::string> seen;
    seen.insert(render_expression(rules.decls, current));

    for (int guard = 0; guard < 4096; ++guard) {
        struct Candidate {
            Expression expr;
            std::string key;
        };
        std::optional<Candidate> best;

        for (std::size_t ti = 0; ti < current.terms.size(); ++ti) {
            for (const Rewrite& rw : transfer_moves(rules, current.terms[ti])) {
                bool eliminated = rw.eliminated;
                if (!eliminated &&
                    same_factor_multiset(rw.replacement, current.terms[ti])) {
                    // self-partner: the move relates the monomial to a
                    // multiple of itself, M = lambda*M; informative only
                    // when lambda != 1, and then M is the zero product
                    if (rw.coeff == current.terms[ti].coeff)
                        continue;
                    eliminated = true;
                }
                std::vector<Monomial> terms;
                terms.reserve(current.terms.size() + 1);
                for (std::size_t i = 0; i < current.terms.size(); ++i)
                    if (i != ti)
                        terms.push_back(current.terms[i]);
                if (!eliminated)
                    terms.push_back(rw.replacement);
                Expression next = reduce(rules, expr_collect(std::move(terms)));
                if (next.is_zero())
                    return next;
                std::string key = render_expression(rules.decls, next);
                if (seen.count(key))
                    continue;
                if (!best || next.terms.size() < best->expr.terms.size() ||
                    (next.terms.size() == best->expr.terms.size() && key < best->key)) {
                    best = Candidate{std::move(next), std::move(key)};
                }
            }
        }
        if (!best)
            return current;
        seen.insert(best->key);
        current = std::move(best->expr);
    }
    return current;
}

ClosureVerdict is_closed(const RuleSet& rules, LabelId label, const Monomial& m,
                         ClosureMode mode) {
    if (vanishes(rules, m).vanishes)
        throw EngineError(Errc::SeedVanishes,
                          "closure candidates must be nonvanishing: " +
                              render_monomial(rules.decls, m));
    Expression expansion = differentiate(rules, label, Expression::single(m));
    if (mode == ClosureMode::Transfer)
        expansion = transfer_cancel(rules, expansion);
    ClosureVerdict v;
    v.closed = expansion.is_zero();
    v.mode = mode;
    v.witness = std::move(expansion);
    return v;
}

std::vector<Identity> saturate_conditions(const RuleSet& rules, std::uint32_t depth) {
    if (rules.conditions.empty())
        throw EngineError(Errc::NoConditions, "no conditions declared");

    std::vector<Identity> out;
    std::set<std::string> seen;

    std::vector<LabelId> labels(rules.decls.labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        labels[i] = static_cast<LabelId>(i);

    auto substitute_all = [&](Expression ex) {
        for (const auto& c : rules.conditions)
            ex = apply_condition(rules, ex, c);
        return ex;
    };

    for (const auto& condition : rules.conditions) {
        Monomial lhs_monomial = Monomial::make(Scalar::one(),
                                               {FactorPower{condition.lhs, 1}});
        // raw residual: the residual's own vanishing is never consulted,
        // only its derivatives are reduced
        Expression residual = expr_add(Expression::single(lhs_monomial),
                                       expr_scale(Scalar(-1), condition.rhs));

        struct Branch {
            Expression expr;
            std::vector<LabelId> applied;
        };
        std::vector<Branch> frontier{Branch{residual, {}}};

        for (std::uint32_t level = 1; level <= depth && !frontier.empty(); ++level) {
            std::vector<Branch> next;
            for (const auto& branch : frontier) {
                for (LabelId label : labels) {
                    Expression ex = differentiate(rules, label, branch.expr);
                    ex = reduce(rules, substitute_all(ex));
                    if (ex.is_zero())
                        continue;
                    std::vector<LabelId> applied = branch.applied;
                    applied.push_back(label);
                    std::string key = scale_free_key(rules, ex);
                    if (seen.insert(key).second) {
                        Identity id;
                        id.expression = ex;
                        id.seed = lhs_monomial;
                        id.applied = applied;
                        id.depth = level;
                        id.index = uniform_index(rules, ex);
                        out.push_back(id);
                    }
                    next.push_back(Branch{std::move(ex), std::move(applied)});
                }
            }
            frontier = std::move(next);
        }
    }
    return out;
}

} // namespace mcde
