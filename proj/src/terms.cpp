#include "mcde/terms.hpp"

#include <algorithm>

namespace mcde {

void MultiIndex::add(const MultiIndex& o, std::int64_t times) {
    for (std::size_t i = 0; i < upper.size(); ++i)
        upper[i] += o.upper[i] * times;
    for (std::size_t i = 0; i < lower.size(); ++i)
        lower[i] += o.lower[i] * times;
}

LabelId Declarations::add_label(DifferentialLabel l) {
    if (label_id(l.name) || atom_id(l.name))
        throw EngineError(Errc::MixedComplex, "duplicate name: " + l.name);
    if (l.up_slot < 1 || l.up_slot > slot_count || l.down_slot < 1 || l.down_slot > slot_count)
        throw EngineError(Errc::InvalidBounds, "slot index out of range for " + l.name);
    labels.push_back(std::move(l));
    return static_cast<LabelId>(labels.size() - 1);
}

AtomId Declarations::add_atom(Atom a) {
    if (atom_id(a.name) || label_id(a.name))
        throw EngineError(Errc::MixedComplex, "duplicate name: " + a.name);
    if (a.base_index.upper.size() != slot_count || a.base_index.lower.size() != slot_count)
        throw EngineError(Errc::InvalidBounds, "index length mismatch for " + a.name);
    atoms.push_back(std::move(a));
    return static_cast<AtomId>(atoms.size() - 1);
}

std::optional<LabelId> Declarations::label_id(const std::string& name) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i].name == name)
            return static_cast<LabelId>(i);
    return std::nullopt;
}

std::optional<AtomId> Declarations::atom_id(const std::string& name) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i].name == name)
            return static_cast<AtomId>(i);
    return std::nullopt;
}

const DifferentialLabel& Declarations::label(LabelId id) const {
    if (id >= labels.size())
        throw EngineError(Errc::UnknownLabel, "label id out of range");
    return labels[id];
}

const Atom& Declarations::atom(AtomId id) const {
    if (id >= atoms.size())
        throw EngineError(Errc::UnknownAtom, "atom id out of range");
    return atoms[id];
}

std::uint32_t OperatorWord::total_order() const {
    std::uint32_t t = 0;
    for (const auto& l : letters)
        t += l.order;
    return t;
}

bool word_less(const OperatorWord& a, const OperatorWord& b) {
    std::uint32_t ta = a.total_order(), tb = b.total_order();
    if (ta != tb)
        return ta > tb;
    const std::size_t n = std::min(a.letters.size(), b.letters.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.letters[i].label != b.letters[i].label)
            return a.letters[i].label < b.letters[i].label;
        if (a.letters[i].order != b.letters[i].order)
            return a.letters[i].order < b.letters[i].order;
    }
    return a.letters.size() < b.letters.size();
}

OperatorWord merge_letters(std::vector<Letter> letters) {
    OperatorWord w;
    for (const auto& l : letters) {
        if (!w.letters.empty() && w.letters.back().label == l.label)
            w.letters.back().order += l.order;
        else
            w.letters.push_back(l);
    }
    return w;
}

OperatorWord make_word(const Declarations& decls,
                       const std::vector<std::pair<LabelId, std::uint32_t>>& letters) {
    std::vector<Letter> ls;
    ls.reserve(letters.size());
    for (const auto& [label, order] : letters) {
        if (label >= decls.labels.size())
            throw EngineError(Errc::UnknownLabel, "undeclared label in word");
        if (order < 1)
            throw EngineError(Errc::NonPositiveOrder, "letter order must be >= 1");
        ls.push_back(Letter{label, order});
    }
    return merge_letters(std::move(ls));
}

void CommutationTable::declare(LabelId a, LabelId b, const Scalar& value) {
    entries[{a, b}] = value;
    if (!value.is_zero())
        entries[{b, a}] = value.inverse();
}

const Scalar* CommutationTable::lookup(LabelId a, LabelId b) const {
    auto it = entries.find({a, b});
    return it == entries.end() ? nullptr : &it->second;
}

namespace {

// True when some adjacent pair in reading order carries a declared zero.
bool has_zero_adjacent(const CommutationTable& table, const std::vector<Letter>& runs) {
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        const Scalar* a = table.lookup(runs[i].label, runs[i + 1].label);
        if (a && a->is_zero())
            return true;
    }
    return false;
}

} // namespace

std::pair<Scalar, OperatorWord> normalize_word(const CommutationTable& table,
                                               const OperatorWord& word) {
    if (has_zero_adjacent(table, word.letters))
        return {Scalar::zero(), OperatorWord{}};

    std::vector<Letter> runs = word.letters;
    Scalar scale = Scalar::one();
    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
            if (runs[i].label <= runs[i + 1].label)
                continue;
            const Scalar* a = table.lookup(runs[i].label, runs[i + 1].label);
            if (!a)
                return {Scalar::one(), word}; // free word
            scale = scale * a->pow(std::uint64_t(runs[i].order) * runs[i + 1].order);
            std::swap(runs[i], runs[i + 1]);
            // merge runs made adjacent by the swap
            runs = merge_letters(std::move(runs)).letters;
            if (scale.is_zero() || has_zero_adjacent(table, runs))
                return {Scalar::zero(), OperatorWord{}};
            moved = true;
            break;
        }
    }
    return {scale, OperatorWord{std::move(runs)}};
}

bool factor_less(const Factor& a, const Factor& b) {
    if (a.atom != b.atom)
        return a.atom < b.atom;
    return word_less(a.word, b.word);
}

Monomial Monomial::make(Scalar coeff, std::vector<FactorPower> factors) {
    if (factors.empty())
        throw EngineError(Errc::InvalidBounds, "monomial needs at least one factor");
    std::sort(factors.begin(), factors.end(),
              [](const FactorPower& x, const FactorPower& y) {
                  return factor_less(x.factor, y.factor);
              });
    std::vector<FactorPower> merged;
    for (auto& fp : factors) {
        if (fp.mult < 1)
            throw EngineError(Errc::InvalidBounds, "multiplicity must be >= 1");
        if (!merged.empty() && merged.back().factor == fp.factor)
            merged.back().mult += fp.mult;
        else
            merged.push_back(std::move(fp));
    }
    Monomial m;
    m.coeff = std::move(coeff);
    m.factors = std::move(merged);
    return m;
}

std::uint32_t Monomial::total_slots() const {
    std::uint32_t t = 0;
    for (const auto& fp : factors)
        t += fp.mult;
    return t;
}

std::uint32_t Monomial::multiplicity_of(const Factor& f) const {
    for (const auto& fp : factors)
        if (fp.factor == f)
            return fp.mult;
    return 0;
}

bool monomial_key_less(const Monomial& a, const Monomial& b) {
    const std::size_t n = std::min(a.factors.size(), b.factors.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.factors[i].factor != b.factors[i].factor)
            return factor_less(a.factors[i].factor, b.factors[i].factor);
        if (a.factors[i].mult != b.factors[i].mult)
            return a.factors[i].mult < b.factors[i].mult;
    }
    return a.factors.size() < b.factors.size();
}

bool same_factor_multiset(const Monomial& a, const Monomial& b) {
    return a.factors == b.factors;
}

Expression Expression::single(Monomial m) {
    Expression e;
    if (!m.coeff.is_zero())
        e.terms.push_back(std::move(m));
    return e;
}

Expression Expression::from_terms(std::vector<Monomial> terms) {
    return expr_collect(std::move(terms));
}

Expression expr_collect(std::vector<Monomial> terms) {
    std::sort(terms.begin(), terms.end(), monomial_key_less);
    Expression out;
    for (auto& t : terms) {
        if (!out.terms.empty() && same_factor_multiset(out.terms.back(), t)) {
            out.terms.back().coeff = out.terms.back().coeff + t.coeff;
        } else {
            out.terms.push_back(std::move(t));
        }
    }
    std::erase_if(out.terms, [](const Monomial& m) { return m.coeff.is_zero(); });
    return out;
}

Expression expr_add(const Expression& a, const Expression& b) {
    std::vector<Monomial> terms = a.terms;
    terms.insert(terms.end(), b.terms.begin(), b.terms.end());
    return expr_collect(std::move(terms));
}

Expression expr_scale(const Scalar& s, const Expression& e) {
    if (s.is_zero())
        return Expression::zero();
    Expression out = e;
    for (auto& t : out.terms)
        t.coeff = t.coeff * s;
    return out;
}

namespace {

void check_ids(const Declarations& decls, const Expression& e) {
    for (const auto& t : e.terms)
        for (const auto& fp : t.factors) {
            if (fp.factor.atom >= decls.atoms.size())
                throw EngineError(Errc::MixedComplex, "expression references unknown atom");
            for (const auto& l : fp.factor.word.letters)
                if (l.label >= decls.labels.size())
                    throw EngineError(Errc::MixedComplex, "expression references unknown label");
        }
}

} // namespace

Expression expr_add_checked(const Declarations& decls, const Expression& a,
                            const Expression& b) {
    check_ids(decls, a);
    check_ids(decls, b);
    return expr_add(a, b);
}

MultiIndex label_shift(const Declarations& decls, LabelId label) {
    const DifferentialLabel& l = decls.label(label);
    MultiIndex mi = MultiIndex::zero(decls.slot_count);
    mi.upper[l.up_slot - 1] += 1;
    mi.lower[l.down_slot - 1] -= 1;
    return mi;
}

MultiIndex multi_index(const Declarations& decls, const Factor& f) {
    MultiIndex mi = decls.atom(f.atom).base_index;
    for (const auto& letter : f.word.letters) {
        const DifferentialLabel& l = decls.label(letter.label);
        mi.upper[l.up_slot - 1] += letter.order;
        mi.lower[l.down_slot - 1] -= letter.order;
    }
    return mi;
}

MultiIndex multi_index(const Declarations& decls, const Monomial& m) {
    MultiIndex mi = MultiIndex::zero(decls.slot_count);
    for (const auto& fp : m.factors)
        mi.add(multi_index(decls, fp.factor), fp.mult);
    return mi;
}

std::string render_word(const Declarations& decls, const OperatorWord& w) {
    std::string out = "[";
    bool first = true;
    for (const auto& l : w.letters) {
        if (!first)
            out += " ";
        first = false;
        out += decls.label(l.label).name;
        if (l.order > 1)
            out += "^" + std::to_string(l.order);
    }
    out += "]";
    return out;
}

std::string render_factor(const Declarations& decls, const Factor& f) {
    std::string out;
    if (!f.word.empty())
        out += render_word(decls, f.word);
    out += decls.atom(f.atom).name;
    return out;
}

std::string render_factor_power(const Declarations& decls, const FactorPower& fp) {
    std::string out = render_factor(decls, fp.factor);
    if (fp.mult > 1)
        out += "^" + std::to_string(fp.mult);
    return out;
}

std::string render_monomial(const Declarations& decls, const Monomial& m) {
    std::string out;
    if (!m.coeff.is_one())
        out += render_scalar(m.coeff) + "*";
    out += "{";
    bool first = true;
    for (const auto& fp : m.factors) {
        if (!first)
            out += ", ";
        first = false;
        out += render_factor_power(decls, fp);
    }
    out += "}";
    return out;
}

std::string render_expression(const Declarations& decls, const Expression& e) {
    if (e.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& t : e.terms) {
        const bool negative_real = t.coeff.is_real() && t.coeff.re.negative();
        if (first) {
            if (negative_real) {
                Monomial flipped = t;
                flipped.coeff = -t.coeff;
                out += "-" + render_monomial(decls, flipped);
            } else {
                out += render_monomial(decls, t);
            }
            first = false;
            continue;
        }
        if (negative_real) {
            Monomial flipped = t;
            flipped.coeff = -t.coeff;
            out += " - " + render_monomial(decls, flipped);
        } else {
            out += " + " + render_monomial(decls, t);
        }
    }
    return out;
}

std::string render_multi_index(const MultiIndex& mi) {
    auto vec = [](const std::vector<std::int64_t>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                s += ",";
            s += std::to_string(v[i]);
        }
        return s + "]";
    };
    return "n " + vec(mi.upper) + " m " + vec(mi.lower);
}

} // namespace mcde
