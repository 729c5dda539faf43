#include "mcde/search.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>

namespace mcde {

void validate_bounds(const RuleSet& rules, const SearchBounds& bounds) {
    if (bounds.max_distinct_factors < 1 || bounds.max_word_length < 1 ||
        bounds.max_order_per_letter < 1 || bounds.max_multiplicity < 1)
        throw EngineError(Errc::InvalidBounds, "search bounds must be >= 1");
    if (bounds.atoms.empty() || bounds.labels.empty())
        throw EngineError(Errc::InvalidBounds, "atom and label subsets must be nonempty");
    for (AtomId a : bounds.atoms)
        if (a >= rules.decls.atoms.size())
            throw EngineError(Errc::UnknownAtom, "bounds reference undeclared atom");
    for (LabelId l : bounds.labels)
        if (l >= rules.decls.labels.size())
            throw EngineError(Errc::UnknownLabel, "bounds reference undeclared label");
}

namespace {

/// All words over the label subset with at most `max_len` letters, each
/// order at most `max_order`, no two adjacent letters sharing a label.
std::vector<OperatorWord> enumerate_words(const std::vector<LabelId>& labels,
                                          std::uint32_t max_len, std::uint32_t max_order) {
    std::vector<LabelId> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    std::vector<OperatorWord> out;
    OperatorWord current;
    std::function<void()> rec = [&]() {
        out.push_back(current);
        if (current.letters.size() >= max_len)
            return;
        for (LabelId l : sorted) {
            if (!current.letters.empty() && current.letters.back().label == l)
                continue;
            for (std::uint32_t o = 1; o <= max_order; ++o) {
                current.letters.push_back(Letter{l, o});
                rec();
                current.letters.pop_back();
            }
        }
    };
    rec();
    return out;
}

} // namespace

std::vector<Monomial> enumerate_candidates(const RuleSet& rules, const SearchBounds& bounds) {
    validate_bounds(rules, bounds);

    std::vector<AtomId> atoms = bounds.atoms;
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());

    std::vector<OperatorWord> words =
        enumerate_words(bounds.labels, bounds.max_word_length, bounds.max_order_per_letter);

    std::vector<Factor> factors;
    for (AtomId a : atoms)
        for (const auto& w : words) {
            Factor f{w, a};
            if (word_is_annihilated(rules, f.word, f.atom))
                continue;
            // keep only normalization-stable words: candidates must be
            // canonical elements, not scalar multiples of them
            auto [scale, norm] = normalize_word(rules.commutation, f.word);
            if (scale.is_zero() || norm != f.word)
                continue;
            factors.push_back(std::move(f));
        }
    std::sort(factors.begin(), factors.end(), factor_less);

    std::vector<Monomial> out;
    std::vector<FactorPower> current;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (!current.empty()) {
            Monomial m = Monomial::make(Scalar::one(), current);
            if (!vanishes(rules, m).vanishes)
                out.push_back(std::move(m));
        }
        if (current.size() >= bounds.max_distinct_factors)
            return;
        for (std::size_t i = from; i < factors.size(); ++i) {
            for (std::uint32_t mult = 1; mult <= bounds.max_multiplicity; ++mult) {
                current.push_back(FactorPower{factors[i], mult});
                rec(i + 1);
                current.pop_back();
            }
        }
    };
    rec(0);

    std::sort(out.begin(), out.end(), monomial_key_less);
    return out;
}

Catalog search_closed(const RuleSet& rules, const SearchBounds& bounds,
                      const std::vector<LabelId>& labels, ClosureMode mode,
                      unsigned workers) {
    std::vector<Monomial> candidates = enumerate_candidates(rules, bounds);

    std::vector<std::vector<LabelVerdict>> verdicts(candidates.size());
    unsigned n = std::max(1u, workers);
    n = std::min<unsigned>(n, candidates.empty() ? 1 : static_cast<unsigned>(candidates.size()));

    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        while (true) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= candidates.size())
                return;
            std::vector<LabelVerdict> vs;
            vs.reserve(labels.size());
            for (LabelId label : labels) {
                ClosureVerdict cv = is_closed(rules, label, candidates[i], mode);
                vs.push_back(LabelVerdict{label, cv.closed, std::move(cv.witness)});
            }
            verdicts[i] = std::move(vs);
        }
    };
    if (n <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n);
        for (unsigned t = 0; t < n; ++t)
            threads.emplace_back(work);
        for (auto& t : threads)
            t.join();
    }

    Catalog cat;
    cat.bounds = bounds;
    cat.ruleset_fingerprint = rules.fingerprint();
    cat.labels = labels;
    cat.mode = mode;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        bool any = std::any_of(verdicts[i].begin(), verdicts[i].end(),
                               [](const LabelVerdict& v) { return v.closed; });
        if (any)
            cat.entries.push_back(CatalogEntry{candidates[i], std::move(verdicts[i])});
    }
    return cat;
}

namespace {

using AtomPermutation = std::vector<AtomId>; // image by atom id

FactorPattern apply_perm(const AtomPermutation& perm, const FactorPattern& p) {
    FactorPattern out = p;
    if (out.atom)
        out.atom = perm[*out.atom];
    return out;
}

Factor apply_perm(const AtomPermutation& perm, const Factor& f) {
    return Factor{f.word, perm[f.atom]};
}

Monomial apply_perm(const AtomPermutation& perm, const Monomial& m) {
    std::vector<FactorPower> factors;
    factors.reserve(m.factors.size());
    for (const auto& fp : m.factors)
        factors.push_back(FactorPower{apply_perm(perm, fp.factor), fp.mult});
    return Monomial::make(m.coeff, std::move(factors));
}

/// The rule tables must be setwise invariant under the renaming.
bool rules_invariant(const RuleSet& rules, const AtomPermutation& perm) {
    auto pattern_key = [&](const FactorPattern& p) {
        std::string s = p.atom ? std::to_string(*p.atom) : "*";
        s += "|";
        if (p.word)
            for (const auto& l : p.word->letters)
                s += std::to_string(l.label) + "^" + std::to_string(l.order) + " ";
        else
            s += "*";
        return s;
    };

    {
        std::vector<std::string> a, b;
        for (const auto& r : rules.max_orders) {
            a.push_back(std::to_string(r.label) + ":" + pattern_key(r.inner) + "=" +
                        std::to_string(r.bound));
            b.push_back(std::to_string(r.label) + ":" + pattern_key(apply_perm(perm, r.inner)) +
                        "=" + std::to_string(r.bound));
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            return false;
    }
    {
        std::vector<std::string> a, b;
        for (const auto& r : rules.max_powers) {
            a.push_back(pattern_key(r.pattern) + "=" + std::to_string(r.bound));
            b.push_back(pattern_key(apply_perm(perm, r.pattern)) + "=" +
                        std::to_string(r.bound));
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            return false;
    }
    {
        auto ideal_key = [&](const Ideal& ideal, bool permuted) {
            std::vector<std::string> ms;
            for (const auto& [pattern, count] : ideal.members)
                ms.push_back(pattern_key(permuted ? apply_perm(perm, pattern) : pattern) + "x" +
                             std::to_string(count));
            std::sort(ms.begin(), ms.end());
            std::string s;
            for (const auto& m : ms)
                s += m + ";";
            return s;
        };
        std::vector<std::string> a, b;
        for (const auto& ideal : rules.ideals) {
            a.push_back(ideal_key(ideal, false));
            b.push_back(ideal_key(ideal, true));
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            return false;
    }
    {
        auto rhs_key = [&](const Expression& e, bool permuted) {
            std::vector<std::string> ts;
            for (const auto& t : e.terms) {
                Monomial m = permuted ? apply_perm(perm, t) : t;
                std::string s = render_scalar(m.coeff) + "*";
                std::vector<std::string> fs;
                for (const auto& fp : m.factors)
                    fs.push_back(pattern_key(FactorPattern::exact(fp.factor)) + "^" +
                                 std::to_string(fp.mult));
                std::sort(fs.begin(), fs.end());
                for (const auto& f : fs)
                    s += f + ",";
                ts.push_back(std::move(s));
            }
            std::sort(ts.begin(), ts.end());
            std::string s;
            for (const auto& t : ts)
                s += t + "|";
            return s;
        };
        std::vector<std::string> a, b;
        for (const auto& c : rules.conditions) {
            a.push_back(pattern_key(FactorPattern::exact(c.lhs)) + "=" +
                        rhs_key(c.rhs, false));
            b.push_back(pattern_key(FactorPattern::exact(apply_perm(perm, c.lhs))) + "=" +
                        rhs_key(c.rhs, true));
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            return false;
    }
    return true;
}

} // namespace

Catalog dedup_by_symmetry(const RuleSet& rules, const Catalog& catalog) {
    const std::size_t n = rules.decls.atoms.size();
    if (n > 8)
        return catalog; // renaming groups are only explored at desk scale

    // candidate permutations: products of permutations within classes of
    // atoms sharing a base index, filtered by rule invariance
    std::vector<AtomId> ids(n);
    for (std::size_t i = 0; i < n; ++i)
        ids[i] = static_cast<AtomId>(i);

    std::vector<AtomPermutation> perms;
    AtomPermutation perm(n);
    std::vector<bool> used(n, false);
    std::function<void(std::size_t)> build = [&](std::size_t pos) {
        if (pos == n) {
            perms.push_back(perm);
            return;
        }
        for (std::size_t img = 0; img < n; ++img) {
            if (used[img])
                continue;
            if (!(rules.decls.atoms[pos].base_index == rules.decls.atoms[img].base_index))
                continue;
            used[img] = true;
            perm[pos] = static_cast<AtomId>(img);
            build(pos + 1);
            used[img] = false;
        }
    };
    build(0);

    std::vector<AtomPermutation> valid;
    for (const auto& p : perms)
        if (rules_invariant(rules, p))
            valid.push_back(p);

    Catalog out;
    out.bounds = catalog.bounds;
    out.ruleset_fingerprint = catalog.ruleset_fingerprint;
    out.labels = catalog.labels;
    out.mode = catalog.mode;

    std::vector<std::string> kept_keys;
    for (const auto& entry : catalog.entries) {
        // canonical representative of the orbit
        Monomial best = entry.monomial;
        for (const auto& p : valid) {
            Monomial image = apply_perm(p, entry.monomial);
            if (monomial_key_less(image, best))
                best = image;
        }
        std::string key = render_monomial(rules.decls, best);
        if (std::find(kept_keys.begin(), kept_keys.end(), key) != kept_keys.end())
            continue;
        kept_keys.push_back(key);
        if (same_factor_multiset(best, entry.monomial)) {
            out.entries.push_back(entry);
            continue;
        }
        // keep the representative's own verdicts when it was cataloged;
        // bounds may exclude the renamed form, in which case this entry
        // stands for its orbit
        bool found = false;
        for (const auto& other : catalog.entries)
            if (same_factor_multiset(other.monomial, best)) {
                out.entries.push_back(other);
                found = true;
                break;
            }
        if (!found)
            out.entries.push_back(entry);
    }
    return out;
}

} // namespace mcde
