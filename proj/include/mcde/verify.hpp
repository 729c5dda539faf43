#ifndef MCDE_VERIFY_HPP
#define MCDE_VERIFY_HPP

#include "mcde/calculus.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace mcde {

struct CaseResult {
    bool pass = false;
    std::string detail;
};

struct VerifyCase {
    std::string tag;
    std::function<CaseResult()> run;
};

/// The built-in worked-example suite: pinned identity derivations,
/// the closed-product closure table with single-rule mutation checks,
/// and the positional-oracle equivalence property.
const std::vector<VerifyCase>& verify_cases();

/// Runs every case, printing one PASS/FAIL line per tag. Returns true
/// when all pass.
bool run_verify_suite(std::ostream& out);

/// Exposed for the closure acceptance check: only the closed-product
/// cases (with their mutations).
bool run_closure_cases(std::ostream& out);

/// The closed products pinned by the suite, for reuse by integration
/// tests (e.g. catalog recovery under fitted bounds).
struct ClosureExample {
    std::string tag;
    std::string spec_text;
    std::string product;
    std::string label;
    ClosureMode mode;
};
std::vector<ClosureExample> closure_examples();

} // namespace mcde

#endif
