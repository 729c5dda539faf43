// Acceptance suite: one criterion per check, each printing a PASS/FAIL
// line with its runtime. Exits nonzero when any criterion fails.

#include "mcde/catalog_json.hpp"
#include "mcde/cli.hpp"
#include "mcde/oracle.hpp"
#include "mcde/randomgen.hpp"
#include "mcde/search.hpp"
#include "mcde/specdsl.hpp"
#include "mcde/verify.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace mcde;

namespace {

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<bool(std::string&)> run;
};

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// 1. the pair-ideal identity, exact text through the CLI path
bool criterion_transfer_identity(std::string& detail) {
    std::string spec = temp_path("mcde_acc_pair.mc");
    {
        std::ofstream out(spec);
        out << "slots 1;\ndiff d up 1 down 1;\n"
               "atom phi n [0] m [0];\natom psi n [0] m [0];\n"
               "ideal { phi, psi };\n";
    }
    std::ostringstream out, err;
    int code = cli::run({"identity", "--spec", spec, "--label", "d", "--seed", "{phi,psi}"},
                        out, err);
    std::remove(spec.c_str());
    if (code != 0) {
        detail = "exit code " + std::to_string(code);
        return false;
    }
    if (out.str() != "{[d]phi, psi} + {phi, [d]psi} = 0\n") {
        detail = "got: " + out.str();
        return false;
    }
    return true;
}

// 2. the cubed-power identity, its mixed second level, and the
// trivializing pair ideal
bool criterion_power_hierarchy(std::string& detail) {
    const std::string base =
        "slots 1; diff d up 1 down 1; diff e up 1 down 1;\n"
        "atom phi n [0] m [0]; maxpower phi = 3; commute e d = 0;\n";
    RuleSet rules = parse_spec(SpecSource{base});
    LabelId d = *rules.decls.label_id("d"), e = *rules.decls.label_id("e");

    auto first = derive_identity(rules, d, parse_monomial(rules, "{phi^3}"));
    if (!first || render_expression(rules.decls, first->expression) != "3*{[d]phi, phi^2}") {
        detail = "first level mismatch";
        return false;
    }

    auto ids = hierarchy(rules, parse_monomial(rules, "{phi^3}"), {d, e}, 2);
    Expression want = parse_expr(rules, "6*{[d]phi, [e]phi, phi}");
    bool found = false;
    for (const auto& id : ids)
        if (id.depth == 2 && id.expression == want)
            found = true;
    if (!found) {
        detail = "second level mismatch";
        return false;
    }

    RuleSet trivial = parse_spec(SpecSource{base + "ideal { [d]phi, [e]phi };\n"});
    Monomial mixed = parse_monomial(trivial, "{[d]phi, [e]phi, phi}");
    auto tids = hierarchy(trivial, parse_monomial(trivial, "{phi^3}"),
                          {*trivial.decls.label_id("d"), *trivial.decls.label_id("e")}, 2);
    for (const auto& id : tids)
        for (const auto& t : id.expression.terms)
            if (same_factor_multiset(t, mixed)) {
                detail = "pair ideal failed to trivialize the mixed identity";
                return false;
            }
    return true;
}

// 3. closed-product suite with single-rule mutation checks
bool criterion_closed_suite(std::string& detail) {
    std::ostringstream log;
    if (!run_closure_cases(log)) {
        detail = log.str();
        return false;
    }
    return true;
}

// 4. positional-oracle equivalence on 1000 randomized monomials
bool criterion_oracle_equivalence(std::string& detail) {
    RandomGen gen(424242);
    int done = 0;
    while (done < 1000) {
        RuleSet rules = gen.random_rules();
        for (int k = 0; k < 8 && done < 1000; ++k, ++done) {
            Monomial m = gen.random_monomial(rules, 4, 3, 2, kSlotCap);
            PositionedProduct p = arrange(m);
            for (LabelId label = 0; label < rules.decls.labels.size(); ++label) {
                Expression direct = differentiate(rules, label, Expression::single(m));
                Expression via = collapse(rules, positional_expand(rules, label, p));
                if (direct != via) {
                    detail = "divergence on " + render_monomial(rules.decls, m) + " under " +
                             rules.decls.label(label).name;
                    return false;
                }
            }
        }
    }
    return true;
}

// 5. every derived identity is index-uniform
bool criterion_index_uniformity(std::string& detail) {
    RandomGen gen(515151);
    int derived = 0, attempts = 0;
    while (derived < 1000 && attempts < 20000) {
        RuleSet rules = gen.random_rules();
        for (int k = 0; k < 8 && derived < 1000; ++k) {
            ++attempts;
            Monomial m = gen.random_monomial(rules, 4, 3, 2, 8);
            // force the seed to vanish through an exact power bound
            RuleSet seeded = rules;
            seeded.max_powers.push_back(
                MaxPowerRule{FactorPattern::exact(m.factors[0].factor), m.factors[0].mult});
            for (LabelId label = 0; label < seeded.decls.labels.size(); ++label) {
                std::optional<Identity> id;
                try {
                    id = derive_identity(seeded, label, m);
                } catch (const EngineError&) {
                    continue;
                }
                if (!id)
                    continue;
                ++derived;
                MultiIndex want = multi_index(seeded.decls, id->expression.terms[0]);
                if (!(id->index == want)) {
                    detail = "stored index differs from the term index";
                    return false;
                }
                for (const auto& t : id->expression.terms)
                    if (!(multi_index(seeded.decls, t) == want)) {
                        detail = "identity mixes indices: " +
                                 render_expression(seeded.decls, id->expression);
                        return false;
                    }
            }
        }
    }
    if (derived < 1000) {
        detail = "only derived " + std::to_string(derived) + " identities";
        return false;
    }
    return true;
}

// 6. bounded search recovery against an independent checker
bool criterion_search_recovery(std::string& detail) {
    RuleSet rules = parse_spec(SpecSource{
        "slots 1; diff d up 1 down 1; atom phi n [0] m [0];\n"
        "maxorder d on phi = 2; maxpower [d]phi = 3;\n"});
    LabelId d = *rules.decls.label_id("d");

    SearchBounds bounds;
    bounds.max_distinct_factors = 2; // the window admits two factor shapes
    bounds.max_word_length = 2;
    bounds.max_order_per_letter = 2;
    bounds.max_multiplicity = 3;
    bounds.atoms = {0};
    bounds.labels = {d};

    Catalog cat = search_closed(rules, bounds, {d}, ClosureMode::Plain);
    std::set<std::string> got;
    for (const auto& e : cat.entries)
        got.insert(render_monomial(rules.decls, e.monomial));

    // independent checker: hand-rolled enumeration of the window, with
    // closure decided by the positional oracle
    std::set<std::string> want;
    Factor bare{OperatorWord{}, 0};
    Factor first{merge_letters({Letter{d, 1}}), 0};
    for (std::uint32_t a = 0; a <= 3; ++a) {
        for (std::uint32_t b = 0; b <= 3; ++b) {
            if (a + b == 0)
                continue;
            std::vector<FactorPower> fps;
            if (a > 0)
                fps.push_back(FactorPower{bare, a});
            if (b > 0)
                fps.push_back(FactorPower{first, b});
            Monomial m = Monomial::make(Scalar(1), fps);
            if (vanishes(rules, m).vanishes)
                continue;
            Expression expansion = collapse(rules, positional_expand(rules, d, arrange(m)));
            if (expansion.is_zero())
                want.insert(render_monomial(rules.decls, m));
        }
    }
    if (got != want) {
        detail = "catalog/checker disagree: catalog has " + std::to_string(got.size()) +
                 " entries, checker expects " + std::to_string(want.size());
        return false;
    }
    // sanity: the expected family really is present
    for (const char* key :
         {"{[d]phi}", "{[d]phi^2}", "{[d]phi^2, phi}", "{[d]phi^2, phi^2}", "{[d]phi^2, phi^3}"})
        if (!got.count(key)) {
            detail = std::string("missing ") + key;
            return false;
        }
    return true;
}

// 7. byte-identical catalogs across runs and worker counts
bool criterion_determinism(std::string& detail) {
    RuleSet rules = parse_spec(SpecSource{
        "slots 1; diff d up 1 down 1; diff e up 1 down 1;\n"
        "atom phi n [0] m [0]; atom psi n [0] m [0];\n"
        "maxorder d on phi = 2; maxpower [d]phi = 2; ideal { phi, psi };\n"});
    SearchBounds bounds;
    bounds.max_distinct_factors = 2;
    bounds.max_word_length = 2;
    bounds.max_order_per_letter = 2;
    bounds.max_multiplicity = 2;
    bounds.atoms = {0, 1};
    bounds.labels = {0, 1};

    std::string paths[3] = {temp_path("mcde_acc_run1.json"), temp_path("mcde_acc_run2.json"),
                            temp_path("mcde_acc_run4.json")};
    write_catalog(rules, search_closed(rules, bounds, bounds.labels, ClosureMode::Plain, 1),
                  paths[0]);
    write_catalog(rules, search_closed(rules, bounds, bounds.labels, ClosureMode::Plain, 1),
                  paths[1]);
    write_catalog(rules, search_closed(rules, bounds, bounds.labels, ClosureMode::Plain, 4),
                  paths[2]);
    std::string a = slurp(paths[0]), b = slurp(paths[1]), c = slurp(paths[2]);
    for (const auto& p : paths)
        std::remove(p.c_str());
    if (a.empty() || a != b) {
        detail = "repeated runs differ";
        return false;
    }
    if (a != c) {
        detail = "worker counts 1 and 4 differ";
        return false;
    }
    return true;
}

// 8. specification round-trips and parser robustness under fuzzing
bool criterion_dsl_robustness(std::string& detail) {
    RandomGen gen(616161);
    std::mt19937_64 rng(626262);
    for (int trial = 0; trial < 500; ++trial) {
        RuleSet rules = gen.random_rules(true);
        std::string text = render_ruleset(rules);
        RuleSet back = parse_spec(SpecSource{text});
        if (render_ruleset(back) != text) {
            detail = "round trip failed:\n" + text;
            return false;
        }
        std::string mutated = text;
        std::size_t edits = 1 + rng() % 5;
        for (std::size_t k = 0; k < edits && !mutated.empty(); ++k) {
            std::size_t pos = rng() % mutated.size();
            switch (rng() % 3) {
                case 0: mutated[pos] = static_cast<char>(32 + rng() % 95); break;
                case 1: mutated.erase(pos, 1); break;
                default: mutated.insert(pos, 1, static_cast<char>(32 + rng() % 95)); break;
            }
        }
        try {
            parse_spec(SpecSource{mutated});
        } catch (const ParseError&) {
        } catch (const SemanticError&) {
        } catch (const std::exception& e) {
            detail = std::string("parser escaped its error contract: ") + e.what();
            return false;
        }
    }
    return true;
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"1 transfer identity", 1.0, criterion_transfer_identity},
        {"2 power identity hierarchy", 1.0, criterion_power_hierarchy},
        {"3 closed-product suite + mutations", 10.0, criterion_closed_suite},
        {"4 oracle equivalence x1000", 60.0, criterion_oracle_equivalence},
        {"5 index uniformity x1000", 60.0, criterion_index_uniformity},
        {"6 bounded search recovery", 60.0, criterion_search_recovery},
        {"7 catalog determinism", 60.0, criterion_determinism},
        {"8 dsl round-trip + fuzz x500", 60.0, criterion_dsl_robustness},
    };

    bool all = true;
    for (auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = c.run(detail);
        } catch (const std::exception& e) {
            detail = e.what();
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.budget_seconds) {
            pass = false;
            detail = "over budget: " + std::to_string(seconds) + "s";
        }
        std::printf("%s  %-36s (%.2fs)\n", pass ? "PASS" : "FAIL", c.name.c_str(), seconds);
        if (!pass && !detail.empty())
            std::printf("      %s\n", detail.c_str());
        all = all && pass;
    }
    return all ? 0 : 1;
}
