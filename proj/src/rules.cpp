#include "mcde/rules.hpp"

#include <algorithm>
#include <functional>

namespace mcde {

std::optional<std::uint32_t> max_order_of(const RuleSet& rules, LabelId label,
                                          const Factor& inner) {
    if (label >= rules.decls.labels.size())
        throw EngineError(Errc::UnknownLabel, "max_order_of: undeclared label");
    const MaxOrderRule* best = nullptr;
    for (const auto& r : rules.max_orders) {
        if (r.label != label || !r.inner.matches(inner))
            continue;
        if (!best || r.inner.specificity() > best->inner.specificity())
            best = &r;
    }
    if (!best)
        return std::nullopt;
    return best->bound;
}

std::optional<std::uint32_t> max_power_of(const RuleSet& rules, const Factor& f) {
    const MaxPowerRule* best = nullptr;
    for (const auto& r : rules.max_powers) {
        if (!r.pattern.matches(f))
            continue;
        if (!best || r.pattern.specificity() > best->pattern.specificity())
            best = &r;
    }
    if (!best)
        return std::nullopt;
    return best->bound;
}

bool word_is_annihilated(const RuleSet& rules, const OperatorWord& word, AtomId atom) {
    // check every run against the element it acts on, innermost first
    for (std::size_t j = word.letters.size(); j-- > 0;) {
        Factor inner;
        inner.atom = atom;
        inner.word.letters.assign(word.letters.begin() + j + 1, word.letters.end());
        auto bound = max_order_of(rules, word.letters[j].label, inner);
        if (bound && word.letters[j].order >= *bound)
            return true;
    }
    return false;
}

namespace {

bool match_members(const std::vector<std::pair<FactorPattern, std::uint32_t>>& members,
                   std::size_t k, std::vector<std::uint32_t>& remaining,
                   const Monomial& m) {
    if (k == members.size())
        return true;
    const auto& [pattern, count] = members[k];
    // choose factor slots for each of `count` copies of this pattern
    std::function<bool(std::uint32_t)> place = [&](std::uint32_t left) -> bool {
        if (left == 0)
            return match_members(members, k + 1, remaining, m);
        for (std::size_t i = 0; i < m.factors.size(); ++i) {
            if (remaining[i] == 0 || !pattern.matches(m.factors[i].factor))
                continue;
            std::uint32_t take = std::min(left, remaining[i]);
            remaining[i] -= take;
            if (place(left - take))
                return true;
            remaining[i] += take;
        }
        return false;
    };
    return place(count);
}

} // namespace

bool ideal_matches(const Ideal& ideal, const Monomial& m) {
    if (ideal.arity() > m.total_slots())
        return false;
    std::vector<std::uint32_t> remaining;
    remaining.reserve(m.factors.size());
    for (const auto& fp : m.factors)
        remaining.push_back(fp.mult);
    return match_members(ideal.members, 0, remaining, m);
}

VanishVerdict vanishes(const RuleSet& rules, const Monomial& m) {
    VanishVerdict v;
    if (m.coeff.is_zero()) {
        v.vanishes = true;
        v.reason = VanishReason::ZeroCoefficient;
        return v;
    }
    for (const auto& fp : m.factors) {
        auto bound = max_power_of(rules, fp.factor);
        if (bound && fp.mult >= *bound) {
            v.vanishes = true;
            v.reason = VanishReason::MaxPower;
            v.factor = fp.factor;
            return v;
        }
    }
    for (std::size_t i = 0; i < rules.ideals.size(); ++i) {
        if (ideal_matches(rules.ideals[i], m)) {
            v.vanishes = true;
            v.reason = VanishReason::Ideal;
            v.ideal = i;
            return v;
        }
    }
    return v;
}

Expression reduce(const RuleSet& rules, const Expression& e) {
    std::vector<Monomial> kept;
    kept.reserve(e.terms.size());
    for (const auto& t : e.terms)
        if (!vanishes(rules, t).vanishes)
            kept.push_back(t);
    return expr_collect(std::move(kept));
}

Expression apply_condition(const RuleSet& rules, const Expression& e, const Condition& c) {
    Expression out = e;
    for (int guard = 0; guard < 256; ++guard) {
        bool found = false;
        std::vector<Monomial> next;
        for (const auto& m : out.terms) {
            std::uint32_t mult = m.multiplicity_of(c.lhs);
            if (mult == 0) {
                next.push_back(m);
                continue;
            }
            found = true;
            if (c.orthogonality())
                continue; // monomial contains a vanishing element
            // remove one copy of lhs, splice each rhs term in
            std::vector<FactorPower> rest;
            for (const auto& fp : m.factors) {
                if (fp.factor == c.lhs) {
                    if (fp.mult > 1)
                        rest.push_back(FactorPower{fp.factor, fp.mult - 1});
                } else {
                    rest.push_back(fp);
                }
            }
            for (const auto& t : c.rhs.terms) {
                std::vector<FactorPower> combined = rest;
                combined.insert(combined.end(), t.factors.begin(), t.factors.end());
                next.push_back(Monomial::make(m.coeff * t.coeff, std::move(combined)));
            }
        }
        out = reduce(rules, expr_collect(std::move(next)));
        if (!found)
            return out;
    }
    throw EngineError(Errc::InvalidBounds, "condition substitution did not terminate");
}

std::string render_pattern(const Declarations& decls, const FactorPattern& p) {
    std::string out;
    if (p.word) {
        out += "[";
        bool first = true;
        for (const auto& l : p.word->letters) {
            if (!first)
                out += " ";
            first = false;
            out += decls.label(l.label).name;
            if (l.order > 1)
                out += "^" + std::to_string(l.order);
        }
        out += "]";
    } else {
        out += "[*]";
    }
    out += p.atom ? decls.atom(*p.atom).name : std::string("*");
    return out;
}

namespace {

// Bare atoms abbreviate exact-empty-word patterns in the surface syntax.
std::string render_pattern_short(const Declarations& decls, const FactorPattern& p) {
    if (p.atom && p.word && p.word->empty())
        return decls.atom(*p.atom).name;
    return render_pattern(decls, p);
}

} // namespace

std::string render_ruleset(const RuleSet& rules) {
    const Declarations& d = rules.decls;
    std::string out;
    out += "slots " + std::to_string(d.slot_count) + ";\n";
    for (const auto& l : d.labels)
        out += "diff " + l.name + " up " + std::to_string(l.up_slot) + " down " +
               std::to_string(l.down_slot) + ";\n";
    for (const auto& a : d.atoms)
        out += "atom " + a.name + " " + render_multi_index(a.base_index) + ";\n";
    for (const auto& r : rules.max_orders)
        out += "maxorder " + d.label(r.label).name + " on " +
               render_pattern_short(d, r.inner) + " = " + std::to_string(r.bound) + ";\n";
    for (const auto& r : rules.max_powers)
        out += "maxpower " + render_pattern_short(d, r.pattern) + " = " +
               std::to_string(r.bound) + ";\n";
    for (const auto& ideal : rules.ideals) {
        out += "ideal { ";
        bool first = true;
        for (const auto& [pattern, count] : ideal.members)
            for (std::uint32_t i = 0; i < count; ++i) {
                if (!first)
                    out += ", ";
                first = false;
                out += render_pattern_short(d, pattern);
            }
        out += " };\n";
    }
    for (const auto& [a, b, value] : rules.declared_commutes)
        out += "commute " + d.label(a).name + " " + d.label(b).name + " = " +
               render_scalar(value) + ";\n";
    for (const auto& c : rules.conditions)
        out += "condition " + render_factor(d, c.lhs) + " = " +
               render_expression(d, c.rhs) + ";\n";
    return out;
}

std::string RuleSet::fingerprint() const {
    // FNV-1a over the canonical rendering
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : render_ruleset(*this)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

} // namespace mcde
