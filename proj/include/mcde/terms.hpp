#ifndef MCDE_TERMS_HPP
#define MCDE_TERMS_HPP

#include "mcde/errors.hpp"
#include "mcde/scalar.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mcde {

using LabelId = std::uint32_t;
using AtomId = std::uint32_t;

/// One differential flavor. Slot indices are 1-based into the complex's
/// index vectors; applying the differential once raises upper[up_slot]
/// and lowers lower[down_slot] by one.
struct DifferentialLabel {
    std::string name;
    std::uint32_t up_slot = 1;
    std::uint32_t down_slot = 1;

    friend bool operator==(const DifferentialLabel& a, const DifferentialLabel& b) {
        return a.name == b.name && a.up_slot == b.up_slot && a.down_slot == b.down_slot;
    }
};

/// Upper/lower integer index vectors, one entry per declared slot.
struct MultiIndex {
    std::vector<std::int64_t> upper;
    std::vector<std::int64_t> lower;

    static MultiIndex zero(std::size_t slots) {
        return MultiIndex{std::vector<std::int64_t>(slots, 0),
                          std::vector<std::int64_t>(slots, 0)};
    }

    void add(const MultiIndex& o, std::int64_t times = 1);

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.upper == b.upper && a.lower == b.lower;
    }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }
};

struct Atom {
    std::string name;
    MultiIndex base_index;

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.name == b.name && a.base_index == b.base_index;
    }
};

/// The declared shape of a complex: slot count plus the label and atom
/// tables. Label declaration order is the canonical label order used by
/// word normalization.
struct Declarations {
    std::uint32_t slot_count = 1;
    std::vector<DifferentialLabel> labels;
    std::vector<Atom> atoms;

    LabelId add_label(DifferentialLabel l);
    AtomId add_atom(Atom a);

    std::optional<LabelId> label_id(const std::string& name) const;
    std::optional<AtomId> atom_id(const std::string& name) const;

    const DifferentialLabel& label(LabelId id) const;
    const Atom& atom(AtomId id) const;

    friend bool operator==(const Declarations& a, const Declarations& b) {
        return a.slot_count == b.slot_count && a.labels == b.labels && a.atoms == b.atoms;
    }
};

/// One maximal run d_a^r inside an operator word; order >= 1.
struct Letter {
    LabelId label = 0;
    std::uint32_t order = 1;

    friend bool operator==(const Letter& a, const Letter& b) {
        return a.label == b.label && a.order == b.order;
    }
};

/// A composition of differentials. Letters read left to right from the
/// outermost application; adjacent letters never share a label.
struct OperatorWord {
    std::vector<Letter> letters;

    bool empty() const { return letters.empty(); }
    std::uint32_t total_order() const;

    friend bool operator==(const OperatorWord& a, const OperatorWord& b) {
        return a.letters == b.letters;
    }
    friend bool operator!=(const OperatorWord& a, const OperatorWord& b) { return !(a == b); }
};

/// Strict weak order on words: higher total order first, then run
/// sequence lexicographically by (label, order).
bool word_less(const OperatorWord& a, const OperatorWord& b);

/// Canonical word constructor: validates labels and orders, merges
/// adjacent same-label letters.
OperatorWord make_word(const Declarations& decls,
                       const std::vector<std::pair<LabelId, std::uint32_t>>& letters);

/// Merge-only variant for engine-internal letter sequences already known
/// to reference declared labels.
OperatorWord merge_letters(std::vector<Letter> letters);

/// Directional commutation constants A with d_a d_b = A_{a,b} d_b d_a.
/// Declaring (a, b) = A also derives (b, a) = 1/A when A != 0; a zero
/// constant leaves the reverse direction undefined.
struct CommutationTable {
    std::map<std::pair<LabelId, LabelId>, Scalar> entries;

    void declare(LabelId a, LabelId b, const Scalar& value);
    const Scalar* lookup(LabelId a, LabelId b) const;
    bool has(LabelId a, LabelId b) const { return lookup(a, b) != nullptr; }

    friend bool operator==(const CommutationTable& a, const CommutationTable& b) {
        return a.entries == b.entries;
    }
};

/// Sort a word into canonical label order when the declared commutation
/// constants permit. Returns the accumulated scalar and the new word:
///   - any adjacent pair with a declared zero constant annihilates the
///     whole word: (0, empty);
///   - a needed swap with no declared constant leaves the word unchanged
///     with scalar 1 (free word);
///   - otherwise each elementary swap of d_a^r past d_b^s contributes
///     A_{a,b}^(r*s).
std::pair<Scalar, OperatorWord> normalize_word(const CommutationTable& table,
                                               const OperatorWord& word);

/// An operator word applied to an atom.
struct Factor {
    OperatorWord word;
    AtomId atom = 0;

    friend bool operator==(const Factor& a, const Factor& b) {
        return a.atom == b.atom && a.word == b.word;
    }
    friend bool operator!=(const Factor& a, const Factor& b) { return !(a == b); }
};

/// Canonical factor order: atom first, then word_less.
bool factor_less(const Factor& a, const Factor& b);

struct FactorPower {
    Factor factor;
    std::uint32_t mult = 1;

    friend bool operator==(const FactorPower& a, const FactorPower& b) {
        return a.mult == b.mult && a.factor == b.factor;
    }
};

/// Exact-coefficient multiset of factors. Stored canonically: factors
/// sorted by factor_less, multiplicities merged and >= 1, and at least
/// one factor present.
struct Monomial {
    Scalar coeff = Scalar::one();
    std::vector<FactorPower> factors;

    static Monomial make(Scalar coeff, std::vector<FactorPower> factors);

    std::uint32_t total_slots() const;
    std::uint32_t multiplicity_of(const Factor& f) const;

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.coeff == b.coeff && a.factors == b.factors;
    }
};

/// Orders monomials by their factor multisets, ignoring coefficients.
bool monomial_key_less(const Monomial& a, const Monomial& b);
bool same_factor_multiset(const Monomial& a, const Monomial& b);

/// Formal sum of monomials with distinct factor multisets, kept in
/// canonical term order. The zero expression has no terms.
struct Expression {
    std::vector<Monomial> terms;

    static Expression zero() { return Expression{}; }
    static Expression single(Monomial m);
    static Expression from_terms(std::vector<Monomial> terms);

    bool is_zero() const { return terms.empty(); }

    friend bool operator==(const Expression& a, const Expression& b) {
        return a.terms == b.terms;
    }
    friend bool operator!=(const Expression& a, const Expression& b) { return !(a == b); }
};

Expression expr_add(const Expression& a, const Expression& b);
Expression expr_scale(const Scalar& s, const Expression& e);
/// Re-canonicalizes an arbitrary term list (collects like terms, drops
/// zero coefficients).
Expression expr_collect(std::vector<Monomial> terms);

/// Checked addition: verifies both operands reference ids within decls.
Expression expr_add_checked(const Declarations& decls, const Expression& a,
                            const Expression& b);

MultiIndex multi_index(const Declarations& decls, const Factor& f);
MultiIndex multi_index(const Declarations& decls, const Monomial& m);
/// Index shift contributed by a single application of one label.
MultiIndex label_shift(const Declarations& decls, LabelId label);

std::string render_word(const Declarations& decls, const OperatorWord& w);
std::string render_factor(const Declarations& decls, const Factor& f);
std::string render_factor_power(const Declarations& decls, const FactorPower& fp);
std::string render_monomial(const Declarations& decls, const Monomial& m);
std::string render_expression(const Declarations& decls, const Expression& e);
std::string render_multi_index(const MultiIndex& mi);

} // namespace mcde

#endif
