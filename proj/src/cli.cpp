#include "mcde/cli.hpp"

#include "mcde/catalog_json.hpp"
#include "mcde/search.hpp"
#include "mcde/specdsl.hpp"
#include "mcde/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mcde::cli {

namespace {

using nlohmann::json;

RuleSet load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw EngineError(Errc::Io, "cannot open spec file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(SpecSource{buf.str(), path});
}

LabelId resolve_label(const RuleSet& rules, const std::string& name) {
    auto id = rules.decls.label_id(name);
    if (!id)
        throw EngineError(Errc::UnknownLabel, "unknown differential '" + name + "'");
    return *id;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

unsigned worker_count(unsigned flag_value) {
    if (flag_value > 0)
        return flag_value;
    if (const char* env = std::getenv("MCDE_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(v);
    }
    return 1;
}

std::string label_names(const RuleSet& rules, const std::vector<LabelId>& labels) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i)
            out += ",";
        out += rules.decls.label(labels[i]).name;
    }
    return out;
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"mcde - symbolic engine for multi-index complexes"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string format = "text";
    unsigned workers_flag = 0;
    app.add_option("--spec", spec_path, "complex specification file");
    app.add_option("--format", format, "output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--workers", workers_flag, "worker thread count");

    std::string label_name, expr_text, seed_text, labels_csv, out_path;
    std::string atoms_csv, search_labels_csv;
    unsigned depth = 1;
    bool transfer = false, dedup = false;
    unsigned max_factors = 1, max_word = 1, max_order = 1, max_mult = 1;

    CLI::App* cmd_expand = app.add_subcommand("expand", "Leibniz expansion of an expression");
    cmd_expand->add_option("--label", label_name, "differential to apply")->required();
    cmd_expand->add_option("--expr", expr_text, "expression")->required();

    CLI::App* cmd_identity =
        app.add_subcommand("identity", "derive the identity of a vanishing product");
    cmd_identity->add_option("--label", label_name, "differential to apply")->required();
    cmd_identity->add_option("--seed", seed_text, "vanishing product")->required();

    CLI::App* cmd_hierarchy =
        app.add_subcommand("hierarchy", "derive the identity tower of a vanishing product");
    cmd_hierarchy->add_option("--seed", seed_text, "vanishing product")->required();
    cmd_hierarchy->add_option("--labels", labels_csv, "comma-separated differentials")
        ->required();
    cmd_hierarchy->add_option("--depth", depth, "maximal derivation depth")->required();

    CLI::App* cmd_closed = app.add_subcommand("closed", "closure test for a product");
    cmd_closed->add_option("--label", label_name, "differential to apply")->required();
    cmd_closed->add_option("--expr", expr_text, "candidate product")->required();
    cmd_closed->add_flag("--transfer", transfer, "allow transfer-assisted cancellation");

    CLI::App* cmd_search =
        app.add_subcommand("search", "catalog closed products within bounds");
    cmd_search->add_option("--max-factors", max_factors, "max distinct factors")->required();
    cmd_search->add_option("--max-word", max_word, "max word length")->required();
    cmd_search->add_option("--max-order", max_order, "max order per letter")->required();
    cmd_search->add_option("--max-mult", max_mult, "max multiplicity")->required();
    cmd_search->add_option("--atoms", atoms_csv, "atom subset (default: all)");
    cmd_search->add_option("--labels", search_labels_csv, "label subset (default: all)");
    cmd_search->add_flag("--transfer", transfer, "allow transfer-assisted cancellation");
    cmd_search->add_flag("--dedup", dedup, "merge entries equivalent under atom renaming");
    cmd_search->add_option("--out", out_path, "catalog output file")->required();

    CLI::App* cmd_saturate =
        app.add_subcommand("saturate", "drive declared conditions to derived relations");
    cmd_saturate->add_option("--depth", depth, "maximal derivation depth")->required();

    app.add_subcommand("verify-paper", "run the built-in worked-example suite");

    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (app.got_subcommand("verify-paper")) {
            bool pass = run_verify_suite(out);
            out << (pass ? "all checks passed" : "verification FAILED") << "\n";
            return pass ? 0 : 1;
        }

        if (spec_path.empty())
            throw EngineError(Errc::Io, "--spec is required for this subcommand");
        RuleSet rules = load_spec(spec_path);
        const bool as_json = format == "json";

        if (app.got_subcommand(cmd_expand)) {
            Expression e = parse_expr(rules, expr_text);
            Expression result = differentiate(rules, resolve_label(rules, label_name), e);
            if (as_json)
                out << json{{"expression", render_expression(rules.decls, result)}}.dump(2)
                    << "\n";
            else
                out << render_expression(rules.decls, result) << "\n";
            return 0;
        }
        if (app.got_subcommand(cmd_identity)) {
            Monomial seed = parse_monomial(rules, seed_text);
            auto id = derive_identity(rules, resolve_label(rules, label_name), seed);
            if (!id) {
                if (as_json)
                    out << json{{"identity", nullptr}}.dump(2) << "\n";
                else
                    out << "trivial (all summands vanish)\n";
                return 0;
            }
            if (as_json)
                out << json{{"identity", render_expression(rules.decls, id->expression)},
                            {"seed", render_monomial(rules.decls, id->seed)}}
                           .dump(2)
                    << "\n";
            else
                out << render_expression(rules.decls, id->expression) << " = 0\n";
            return 0;
        }
        if (app.got_subcommand(cmd_hierarchy)) {
            Monomial seed = parse_monomial(rules, seed_text);
            std::vector<LabelId> labels;
            for (const auto& name : split_commas(labels_csv))
                labels.push_back(resolve_label(rules, name));
            if (labels.empty())
                throw EngineError(Errc::InvalidBounds, "--labels must name a differential");
            auto ids = hierarchy(rules, seed, labels, depth);
            if (as_json) {
                json list = json::array();
                for (const auto& id : ids)
                    list.push_back(
                        {{"depth", id.depth},
                         {"labels", label_names(rules, id.applied)},
                         {"identity", render_expression(rules.decls, id.expression)}});
                out << list.dump(2) << "\n";
            } else {
                for (const auto& id : ids)
                    out << "depth " << id.depth << " via " << label_names(rules, id.applied)
                        << ": " << render_expression(rules.decls, id.expression) << " = 0\n";
                if (ids.empty())
                    out << "no identities within depth\n";
            }
            return 0;
        }
        if (app.got_subcommand(cmd_closed)) {
            Monomial m = parse_monomial(rules, expr_text);
            ClosureVerdict v =
                is_closed(rules, resolve_label(rules, label_name), m,
                          transfer ? ClosureMode::Transfer : ClosureMode::Plain);
            if (as_json) {
                out << json{{"closed", v.closed},
                            {"mode", transfer ? "transfer" : "plain"},
                            {"witness", render_expression(rules.decls, v.witness)}}
                           .dump(2)
                    << "\n";
            } else if (v.closed) {
                out << "CLOSED\n";
            } else {
                out << "NOT-CLOSED: " << render_expression(rules.decls, v.witness) << "\n";
            }
            return 0;
        }
        if (app.got_subcommand(cmd_search)) {
            SearchBounds bounds;
            bounds.max_distinct_factors = max_factors;
            bounds.max_word_length = max_word;
            bounds.max_order_per_letter = max_order;
            bounds.max_multiplicity = max_mult;
            if (atoms_csv.empty()) {
                for (AtomId a = 0; a < rules.decls.atoms.size(); ++a)
                    bounds.atoms.push_back(a);
            } else {
                for (const auto& name : split_commas(atoms_csv)) {
                    auto id = rules.decls.atom_id(name);
                    if (!id)
                        throw EngineError(Errc::UnknownAtom, "unknown atom '" + name + "'");
                    bounds.atoms.push_back(*id);
                }
            }
            std::vector<LabelId> labels;
            if (search_labels_csv.empty()) {
                for (LabelId l = 0; l < rules.decls.labels.size(); ++l)
                    labels.push_back(l);
            } else {
                for (const auto& name : split_commas(search_labels_csv))
                    labels.push_back(resolve_label(rules, name));
            }
            bounds.labels = labels;
            Catalog cat = search_closed(rules, bounds, labels,
                                        transfer ? ClosureMode::Transfer : ClosureMode::Plain,
                                        worker_count(workers_flag));
            if (dedup)
                cat = dedup_by_symmetry(rules, cat);
            write_catalog(rules, cat, out_path);
            if (as_json)
                out << json{{"entries", cat.entries.size()}, {"path", out_path}}.dump(2)
                    << "\n";
            else
                out << "wrote " << cat.entries.size() << " entries to " << out_path << "\n";
            return 0;
        }
        if (app.got_subcommand(cmd_saturate)) {
            auto ids = saturate_conditions(rules, depth);
            if (as_json) {
                json list = json::array();
                for (const auto& id : ids)
                    list.push_back(
                        {{"depth", id.depth},
                         {"labels", label_names(rules, id.applied)},
                         {"relation", render_expression(rules.decls, id.expression)},
                         {"index", render_multi_index(id.index)}});
                out << list.dump(2) << "\n";
            } else {
                for (const auto& id : ids)
                    out << "depth " << id.depth << " via " << label_names(rules, id.applied)
                        << ": " << render_expression(rules.decls, id.expression)
                        << " = 0   # " << render_multi_index(id.index) << "\n";
                if (ids.empty())
                    out << "no relations within depth\n";
            }
            return 0;
        }
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        if (!e.snippet().empty())
            err << "  | " << e.snippet() << "\n";
        return 2;
    } catch (const SemanticError& e) {
        err << e.what() << "\n";
        if (!e.snippet().empty())
            err << "  | " << e.snippet() << "\n";
        return 2;
    } catch (const EngineError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace mcde::cli
