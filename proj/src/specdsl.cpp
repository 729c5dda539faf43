#include "mcde/specdsl.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <vector>

namespace mcde {

namespace {

enum class Tok {
    Ident,
    Number,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Equals,
    Star,
    Plus,
    Minus,
    Slash,
    Caret,
    ImagUnit, // `i` suffix inside gaussian literals is lexed as Ident "i"
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { tokenize(); }

    const std::vector<Token>& tokens() const { return tokens_; }
    std::string line_snippet(int line) const {
        std::size_t start = 0;
        int cur = 1;
        while (cur < line && start < text_.size()) {
            if (text_[start] == '\n')
                ++cur;
            ++start;
        }
        std::size_t end = start;
        while (end < text_.size() && text_[end] != '\n')
            ++end;
        return text_.substr(start, end - start);
    }

private:
    void tokenize() {
        int line = 1, col = 1;
        std::size_t i = 0;
        auto push = [&](Tok k, std::string t, int l, int c) {
            tokens_.push_back(Token{k, std::move(t), l, c});
        };
        while (i < text_.size()) {
            char c = text_[i];
            if (c == '\n') {
                ++line;
                col = 1;
                ++i;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++col;
                ++i;
                continue;
            }
            if (c == '#') {
                while (i < text_.size() && text_[i] != '\n')
                    ++i;
                continue;
            }
            int tl = line, tc = col;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string ident;
                while (i < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_')) {
                    ident += text_[i];
                    ++i;
                    ++col;
                }
                push(Tok::Ident, ident, tl, tc);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string num;
                while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) {
                    num += text_[i];
                    ++i;
                    ++col;
                }
                push(Tok::Number, num, tl, tc);
                continue;
            }
            Tok k;
            switch (c) {
                case '{': k = Tok::LBrace; break;
                case '}': k = Tok::RBrace; break;
                case '[': k = Tok::LBracket; break;
                case ']': k = Tok::RBracket; break;
                case '(': k = Tok::LParen; break;
                case ')': k = Tok::RParen; break;
                case ',': k = Tok::Comma; break;
                case ';': k = Tok::Semi; break;
                case '=': k = Tok::Equals; break;
                case '*': k = Tok::Star; break;
                case '+': k = Tok::Plus; break;
                case '-': k = Tok::Minus; break;
                case '/': k = Tok::Slash; break;
                case '^': k = Tok::Caret; break;
                default:
                    throw ParseError(tl, tc, std::string("unexpected character '") + c + "'",
                                     line_snippet(tl));
            }
            push(k, std::string(1, c), tl, tc);
            ++i;
            ++col;
        }
        tokens_.push_back(Token{Tok::End, "", line, col});
    }

    const std::string& text_;
    std::vector<Token> tokens_;
};

class Parser {
public:
    Parser(const std::string& text) : lexer_(text), pos_(0) {}

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, lexer_.tokens().size() - 1);
        return lexer_.tokens()[i];
    }

    const Token& next() {
        const Token& t = peek();
        if (t.kind != Tok::End)
            ++pos_;
        return t;
    }

    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    const Token& expect(Tok k, const std::string& what) {
        if (peek().kind != k)
            fail("expected " + what);
        return lexer_.tokens()[pos_++];
    }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = peek();
        throw ParseError(t.line, t.column, message, lexer_.line_snippet(t.line));
    }

    [[noreturn]] void fail_semantic(const Token& at, const std::string& message) const {
        throw SemanticError(at.line, at.column, message, lexer_.line_snippet(at.line));
    }

    bool at_end() const { return peek().kind == Tok::End; }

    std::int64_t parse_uint(const std::string& what) {
        const Token& t = expect(Tok::Number, what);
        errno = 0;
        char* end = nullptr;
        long long v = std::strtoll(t.text.c_str(), &end, 10);
        if (errno != 0 || end == t.text.c_str() || *end != '\0')
            throw ParseError(t.line, t.column, "number out of range",
                             lexer_.line_snippet(t.line));
        return v;
    }

    /// For orders, powers, bounds and slot counts.
    std::uint32_t parse_count(const std::string& what) {
        const Token& t = peek();
        std::int64_t v = parse_uint(what);
        if (v > 1000000)
            throw SemanticError(t.line, t.column, what + " exceeds 1000000",
                                lexer_.line_snippet(t.line));
        return static_cast<std::uint32_t>(v);
    }

    Rational parse_rational() {
        bool neg = accept(Tok::Minus);
        std::int64_t n = parse_uint("number");
        std::int64_t d = 1;
        if (accept(Tok::Slash))
            d = parse_uint("denominator");
        if (d == 0)
            fail("zero denominator");
        return Rational(neg ? -n : n, d);
    }

    /// scalar := rational | `(` rational (`+`|`-`) rational? `i` `)`
    Scalar parse_scalar() {
        if (peek().kind != Tok::LParen)
            return Scalar(parse_rational());
        expect(Tok::LParen, "'('");
        Rational re = parse_rational();
        bool neg;
        if (accept(Tok::Plus))
            neg = false;
        else if (accept(Tok::Minus))
            neg = true;
        else {
            fail("expected '+' or '-' in gaussian scalar");
        }
        Rational im(1);
        if (peek().kind == Tok::Number)
            im = parse_rational_unsigned();
        const Token& unit = expect(Tok::Ident, "'i'");
        if (unit.text != "i")
            throw ParseError(unit.line, unit.column, "expected 'i'",
                             lexer_.line_snippet(unit.line));
        expect(Tok::RParen, "')'");
        return Scalar(re, neg ? -im : im);
    }

    Rational parse_rational_unsigned() {
        std::int64_t n = parse_uint("number");
        std::int64_t d = 1;
        if (accept(Tok::Slash))
            d = parse_uint("denominator");
        if (d == 0)
            fail("zero denominator");
        return Rational(n, d);
    }

    std::string snippet_at(const Token& t) const { return lexer_.line_snippet(t.line); }

private:
    Lexer lexer_;
    std::size_t pos_;
};

struct ParsedWord {
    OperatorWord word;
    bool wildcard = false; // `[*]`
};

/// word := `[` (`*` | (IDENT (`^` INT)?)*) `]`
ParsedWord parse_word_body(Parser& p, const Declarations& decls) {
    ParsedWord out;
    p.expect(Tok::LBracket, "'['");
    if (p.accept(Tok::Star)) {
        p.expect(Tok::RBracket, "']'");
        out.wildcard = true;
        return out;
    }
    std::vector<Letter> letters;
    while (p.peek().kind == Tok::Ident) {
        const Token& name = p.next();
        auto id = decls.label_id(name.text);
        if (!id)
            p.fail_semantic(name, "unknown differential '" + name.text + "'");
        std::uint32_t order = 1;
        if (p.accept(Tok::Caret)) {
            order = p.parse_count("order");
            if (order < 1)
                p.fail_semantic(name, "order must be >= 1");
        }
        letters.push_back(Letter{*id, order});
    }
    p.expect(Tok::RBracket, "']'");
    out.word = merge_letters(std::move(letters));
    return out;
}

/// factor := word? atom; pattern additionally allows `*` atoms and `[*]`
struct ParsedPattern {
    FactorPattern pattern;
    Token at;
};

ParsedPattern parse_pattern(Parser& p, const Declarations& decls) {
    ParsedPattern out;
    out.at = p.peek();
    bool saw_word = false;
    if (p.peek().kind == Tok::LBracket) {
        ParsedWord w = parse_word_body(p, decls);
        saw_word = true;
        if (!w.wildcard)
            out.pattern.word = w.word;
    }
    if (p.accept(Tok::Star)) {
        // wildcard atom
    } else {
        const Token& name = p.expect(Tok::Ident, "atom name or '*'");
        auto id = decls.atom_id(name.text);
        if (!id)
            p.fail_semantic(name, "unknown atom '" + name.text + "'");
        out.pattern.atom = id;
    }
    if (!saw_word)
        out.pattern.word = OperatorWord{}; // bare atom means exact empty word
    return out;
}

Factor parse_factor(Parser& p, const Declarations& decls) {
    const Token& at = p.peek();
    ParsedPattern pp = parse_pattern(p, decls);
    if (!pp.pattern.atom || !pp.pattern.word)
        p.fail_semantic(at, "wildcards are not allowed here");
    return Factor{*pp.pattern.word, *pp.pattern.atom};
}

/// term := scalar? `*`? `{` factor (`^` INT)? (`,` ...)* `}`
/// Factors are kept raw here; callers canonicalize against the final
/// commutation table through normalize_expression.
Monomial parse_term(Parser& p, const RuleSet& rules, bool negate) {
    Scalar coeff = Scalar::one();
    if (p.peek().kind == Tok::Number || p.peek().kind == Tok::LParen ||
        p.peek().kind == Tok::Minus) {
        coeff = p.parse_scalar();
        p.accept(Tok::Star);
    }
    if (negate)
        coeff = -coeff;
    p.expect(Tok::LBrace, "'{'");
    std::vector<FactorPower> factors;
    while (true) {
        const Token& at = p.peek();
        Factor f = parse_factor(p, rules.decls);
        std::uint32_t mult = 1;
        if (p.accept(Tok::Caret)) {
            mult = p.parse_count("power");
            if (mult < 1)
                p.fail_semantic(at, "power must be >= 1");
        }
        factors.push_back(FactorPower{std::move(f), mult});
        if (!p.accept(Tok::Comma))
            break;
    }
    p.expect(Tok::RBrace, "'}'");
    return Monomial::make(coeff, std::move(factors));
}

/// Folds commutation scalars into coefficients and rewrites factor words
/// into canonical label order; annihilated words kill their terms.
Expression normalize_expression(const RuleSet& rules, const Expression& e) {
    std::vector<Monomial> out;
    for (const auto& m : e.terms) {
        Scalar coeff = m.coeff;
        std::vector<FactorPower> factors;
        bool dead = false;
        for (const auto& fp : m.factors) {
            auto [scale, word] = normalize_word(rules.commutation, fp.factor.word);
            if (scale.is_zero()) {
                dead = true;
                break;
            }
            coeff = coeff * scale.pow(fp.mult);
            factors.push_back(FactorPower{Factor{std::move(word), fp.factor.atom}, fp.mult});
        }
        if (!dead && !coeff.is_zero())
            out.push_back(Monomial::make(std::move(coeff), std::move(factors)));
    }
    return expr_collect(std::move(out));
}

Expression parse_expression_body(Parser& p, const RuleSet& rules) {
    // `0` denotes the zero expression
    if (p.peek().kind == Tok::Number && p.peek().text == "0" &&
        p.peek(1).kind != Tok::Star && p.peek(1).kind != Tok::LBrace &&
        p.peek(1).kind != Tok::Slash) {
        p.next();
        return Expression::zero();
    }
    std::vector<Monomial> terms;
    bool negate = p.accept(Tok::Minus);
    Monomial first = parse_term(p, rules, negate);
    if (!first.coeff.is_zero())
        terms.push_back(std::move(first));
    while (true) {
        if (p.accept(Tok::Plus))
            negate = false;
        else if (p.accept(Tok::Minus))
            negate = true;
        else
            break;
        Monomial t = parse_term(p, rules, negate);
        if (!t.coeff.is_zero())
            terms.push_back(std::move(t));
    }
    return expr_collect(std::move(terms));
}

} // namespace

namespace {

RuleSet parse_spec_impl(const SpecSource& src) {
    Parser p(src.text);
    RuleSet rules;
    bool slots_seen = false;
    std::vector<Token> condition_at;

    auto keyword = [&](const Token& t) -> const std::string& { return t.text; };

    while (!p.at_end()) {
        const Token& head = p.expect(Tok::Ident, "statement keyword");
        const std::string& kw = keyword(head);
        if (kw == "slots") {
            if (slots_seen)
                p.fail_semantic(head, "duplicate slots declaration");
            if (!rules.decls.labels.empty() || !rules.decls.atoms.empty())
                p.fail_semantic(head, "slots must precede declarations");
            std::uint32_t n = p.parse_count("slot count");
            if (n < 1)
                p.fail_semantic(head, "slot count must be >= 1");
            rules.decls.slot_count = n;
            slots_seen = true;
        } else if (kw == "diff") {
            const Token& name = p.expect(Tok::Ident, "differential name");
            if (rules.decls.label_id(name.text) || rules.decls.atom_id(name.text))
                p.fail_semantic(name, "duplicate name '" + name.text + "'");
            const Token& up = p.expect(Tok::Ident, "'up'");
            if (up.text != "up")
                p.fail_semantic(up, "expected 'up'");
            std::int64_t us = p.parse_uint("slot index");
            const Token& down = p.expect(Tok::Ident, "'down'");
            if (down.text != "down")
                p.fail_semantic(down, "expected 'down'");
            std::int64_t ds = p.parse_uint("slot index");
            if (us < 1 || ds < 1 || us > rules.decls.slot_count || ds > rules.decls.slot_count)
                p.fail_semantic(name, "slot index out of range");
            rules.decls.add_label(DifferentialLabel{name.text,
                                                    static_cast<std::uint32_t>(us),
                                                    static_cast<std::uint32_t>(ds)});
        } else if (kw == "atom") {
            const Token& name = p.expect(Tok::Ident, "atom name");
            if (rules.decls.atom_id(name.text) || rules.decls.label_id(name.text))
                p.fail_semantic(name, "duplicate name '" + name.text + "'");
            auto parse_vec = [&](const char* tag) {
                const Token& t = p.expect(Tok::Ident, tag);
                if (t.text != tag)
                    p.fail_semantic(t, std::string("expected '") + tag + "'");
                p.expect(Tok::LBracket, "'['");
                std::vector<std::int64_t> v;
                if (p.peek().kind != Tok::RBracket) {
                    while (true) {
                        bool neg = p.accept(Tok::Minus);
                        std::int64_t x = p.parse_uint("index entry");
                        v.push_back(neg ? -x : x);
                        if (!p.accept(Tok::Comma))
                            break;
                    }
                }
                p.expect(Tok::RBracket, "']'");
                return v;
            };
            MultiIndex mi;
            mi.upper = parse_vec("n");
            mi.lower = parse_vec("m");
            if (mi.upper.size() != rules.decls.slot_count ||
                mi.lower.size() != rules.decls.slot_count)
                p.fail_semantic(name, "index length must equal slot count");
            rules.decls.add_atom(Atom{name.text, std::move(mi)});
        } else if (kw == "maxorder") {
            const Token& lname = p.expect(Tok::Ident, "differential name");
            auto lid = rules.decls.label_id(lname.text);
            if (!lid)
                p.fail_semantic(lname, "unknown differential '" + lname.text + "'");
            const Token& on = p.expect(Tok::Ident, "'on'");
            if (on.text != "on")
                p.fail_semantic(on, "expected 'on'");
            ParsedPattern pp = parse_pattern(p, rules.decls);
            p.expect(Tok::Equals, "'='");
            std::uint32_t bound = p.parse_count("bound");
            if (bound < 1)
                p.fail_semantic(lname, "bound must be >= 1");
            for (const auto& r : rules.max_orders)
                if (r.label == *lid && r.inner == pp.pattern)
                    p.fail_semantic(lname, "duplicate maxorder entry");
            rules.max_orders.push_back(MaxOrderRule{*lid, pp.pattern, bound});
        } else if (kw == "maxpower") {
            ParsedPattern pp = parse_pattern(p, rules.decls);
            p.expect(Tok::Equals, "'='");
            std::uint32_t bound = p.parse_count("bound");
            if (bound < 1)
                p.fail_semantic(pp.at, "bound must be >= 1");
            for (const auto& r : rules.max_powers)
                if (r.pattern == pp.pattern)
                    p.fail_semantic(pp.at, "duplicate maxpower entry");
            rules.max_powers.push_back(MaxPowerRule{pp.pattern, bound});
        } else if (kw == "ideal") {
            p.expect(Tok::LBrace, "'{'");
            std::vector<std::pair<FactorPattern, std::uint32_t>> members;
            while (true) {
                ParsedPattern pp = parse_pattern(p, rules.decls);
                bool found = false;
                for (auto& [pattern, count] : members)
                    if (pattern == pp.pattern) {
                        ++count;
                        found = true;
                        break;
                    }
                if (!found)
                    members.push_back({pp.pattern, 1});
                if (!p.accept(Tok::Comma))
                    break;
            }
            p.expect(Tok::RBrace, "'}'");
            Ideal ideal{std::move(members)};
            if (ideal.arity() < 2)
                p.fail_semantic(head, "ideal needs at least two members");
            for (const auto& existing : rules.ideals)
                if (existing == ideal)
                    p.fail_semantic(head, "duplicate ideal");
            rules.ideals.push_back(std::move(ideal));
        } else if (kw == "commute") {
            const Token& a = p.expect(Tok::Ident, "differential name");
            const Token& b = p.expect(Tok::Ident, "differential name");
            auto ida = rules.decls.label_id(a.text);
            auto idb = rules.decls.label_id(b.text);
            if (!ida)
                p.fail_semantic(a, "unknown differential '" + a.text + "'");
            if (!idb)
                p.fail_semantic(b, "unknown differential '" + b.text + "'");
            if (*ida == *idb)
                p.fail_semantic(a, "commutation pair must be distinct");
            p.expect(Tok::Equals, "'='");
            Scalar value = p.parse_scalar();
            if (rules.commutation.has(*ida, *idb))
                p.fail_semantic(a, "commutation already defined for this pair");
            rules.commutation.declare(*ida, *idb, value);
            rules.declared_commutes.push_back({*ida, *idb, value});
        } else if (kw == "condition") {
            Factor lhs = parse_factor(p, rules.decls);
            p.expect(Tok::Equals, "'='");
            Expression rhs = parse_expression_body(p, rules);
            // the two sides must agree in index
            if (!rhs.is_zero()) {
                MultiIndex want = multi_index(rules.decls, lhs);
                for (const auto& t : rhs.terms)
                    if (multi_index(rules.decls, t) != want)
                        p.fail_semantic(head, "condition sides differ in index");
            }
            rules.conditions.push_back(Condition{std::move(lhs), std::move(rhs)});
            condition_at.push_back(head);
        } else {
            p.fail("unknown statement '" + kw + "'");
        }
        p.expect(Tok::Semi, "';'");
    }

    // Canonicalize exact pattern words against the finished commutation
    // table. Bounds attach to elements up to a nonzero scalar, so the
    // normalization scalar is dropped; a zero scalar means the pattern
    // names the zero element.
    auto canonicalize_pattern = [&](FactorPattern& pat) -> bool {
        if (!pat.word || pat.word->empty())
            return true;
        auto [scale, word] = normalize_word(rules.commutation, *pat.word);
        if (scale.is_zero())
            return false;
        pat.word = std::move(word);
        return true;
    };
    for (auto& r : rules.max_orders)
        if (!canonicalize_pattern(r.inner))
            throw SemanticError(1, 1, "maxorder pattern names an annihilated word", "");
    for (auto& r : rules.max_powers)
        if (!canonicalize_pattern(r.pattern))
            throw SemanticError(1, 1, "maxpower pattern names an annihilated word", "");
    for (auto& ideal : rules.ideals)
        for (auto& [pattern, count] : ideal.members)
            if (!canonicalize_pattern(pattern))
                throw SemanticError(1, 1, "ideal member names an annihilated word", "");

    for (std::size_t i = 0; i < rules.conditions.size(); ++i) {
        Condition& c = rules.conditions[i];
        const Token& at = condition_at[i];
        auto [scale, word] = normalize_word(rules.commutation, c.lhs.word);
        if (scale.is_zero())
            p.fail_semantic(at, "condition left side is annihilated by commutation");
        c.lhs.word = std::move(word);
        c.rhs = expr_scale(scale.inverse(), normalize_expression(rules, c.rhs));
        for (const auto& t : c.rhs.terms)
            if (t.multiplicity_of(c.lhs) > 0)
                p.fail_semantic(at, "condition right side contains its left side");
        for (std::size_t j = 0; j < i; ++j)
            if (rules.conditions[j].lhs == c.lhs)
                p.fail_semantic(at, "duplicate condition for this element");
    }
    return rules;
}

} // namespace

RuleSet parse_spec(const SpecSource& src) {
    // engine-level arithmetic failures inside declared-value handling
    // (e.g. scalar power overflow during normalization) stay within the
    // parser's error contract
    try {
        return parse_spec_impl(src);
    } catch (const EngineError& e) {
        throw SemanticError(1, 1, e.what(), "");
    }
}

Expression parse_expr(const RuleSet& rules, const std::string& text) {
    try {
        Parser p(text);
        Expression e = parse_expression_body(p, rules);
        if (!p.at_end())
            p.fail("trailing input after expression");
        return normalize_expression(rules, e);
    } catch (const EngineError& e) {
        throw SemanticError(1, 1, e.what(), "");
    }
}

Monomial parse_monomial(const RuleSet& rules, const std::string& text) {
    Expression e = parse_expr(rules, text);
    if (e.terms.size() != 1)
        throw EngineError(Errc::InvalidBounds, "expected a single monomial");
    return e.terms[0];
}

} // namespace mcde
