#ifndef MCDE_SPECDSL_HPP
#define MCDE_SPECDSL_HPP

#include "mcde/rules.hpp"

#include <string>

namespace mcde {

struct SpecSource {
    std::string text;
    std::string origin = "<inline>";
};

/// Syntax failure with a 1-based source position and the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, std::string message, std::string snippet)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(std::move(message)),
          snippet_(std::move(snippet)) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }
    const std::string& snippet() const { return snippet_; }

private:
    int line_;
    int column_;
    std::string message_;
    std::string snippet_;
};

/// Well-formed syntax referencing unknown names, duplicates, bad slots
/// or bounds; carries the same position payload as ParseError.
class SemanticError : public std::runtime_error {
public:
    SemanticError(int line, int column, std::string message, std::string snippet)
        : std::runtime_error("semantic error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(std::move(message)),
          snippet_(std::move(snippet)) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }
    const std::string& snippet() const { return snippet_; }

private:
    int line_;
    int column_;
    std::string message_;
    std::string snippet_;
};

/// Parses a complex specification. Statements are `;`-terminated, `#`
/// starts a line comment. See docs/specdsl.ebnf for the grammar.
RuleSet parse_spec(const SpecSource& src);

/// Parses a term expression against declared names, normalizing factor
/// words through the rule set's commutation table. `0` is the zero
/// expression.
Expression parse_expr(const RuleSet& rules, const std::string& text);

/// Parses a single-monomial expression (for seeds and closure queries).
Monomial parse_monomial(const RuleSet& rules, const std::string& text);

} // namespace mcde

#endif
