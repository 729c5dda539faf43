#include "mcde/catalog_json.hpp"

#include "mcde/specdsl.hpp"

#include <json.hpp>

#include <fstream>

namespace mcde {

namespace {

using nlohmann::json;

json scalar_to_json(const Scalar& s) {
    if (s.is_real())
        return json::array({s.re.num, s.re.den});
    return json::array({json::array({s.re.num, s.re.den}),
                        json::array({s.im.num, s.im.den})});
}

Scalar scalar_from_json(const json& j) {
    if (j.size() == 2 && j[0].is_number())
        return Scalar(Rational(j[0].get<std::int64_t>(), j[1].get<std::int64_t>()));
    return Scalar(Rational(j[0][0].get<std::int64_t>(), j[0][1].get<std::int64_t>()),
                  Rational(j[1][0].get<std::int64_t>(), j[1][1].get<std::int64_t>()));
}

json word_to_json(const Declarations& decls, const OperatorWord& w) {
    json out = json::array();
    for (const auto& l : w.letters)
        out.push_back(json::array({decls.label(l.label).name, l.order}));
    return out;
}

OperatorWord word_from_json(const Declarations& decls, const json& j) {
    std::vector<std::pair<LabelId, std::uint32_t>> letters;
    for (const auto& entry : j) {
        auto id = decls.label_id(entry[0].get<std::string>());
        if (!id)
            throw EngineError(Errc::UnknownLabel, "catalog references unknown label");
        letters.push_back({*id, entry[1].get<std::uint32_t>()});
    }
    return make_word(decls, letters);
}

json monomial_to_json(const Declarations& decls, const Monomial& m) {
    json factors = json::array();
    for (const auto& fp : m.factors) {
        factors.push_back(json{{"atom", decls.atom(fp.factor.atom).name},
                               {"mult", fp.mult},
                               {"word", word_to_json(decls, fp.factor.word)}});
    }
    return json{{"coeff", scalar_to_json(m.coeff)}, {"factors", factors}};
}

Monomial monomial_from_json(const Declarations& decls, const json& j) {
    std::vector<FactorPower> factors;
    for (const auto& f : j.at("factors")) {
        auto atom = decls.atom_id(f.at("atom").get<std::string>());
        if (!atom)
            throw EngineError(Errc::UnknownAtom, "catalog references unknown atom");
        factors.push_back(FactorPower{
            Factor{word_from_json(decls, f.at("word")), *atom},
            f.at("mult").get<std::uint32_t>()});
    }
    return Monomial::make(scalar_from_json(j.at("coeff")), std::move(factors));
}

} // namespace

std::string catalog_to_json(const RuleSet& rules, const Catalog& catalog) {
    const Declarations& decls = rules.decls;
    json doc;
    doc["version"] = 1;
    doc["ruleset_fingerprint"] = catalog.ruleset_fingerprint;
    doc["mode"] = catalog.mode == ClosureMode::Transfer ? "transfer" : "plain";

    json bounds;
    bounds["max_distinct_factors"] = catalog.bounds.max_distinct_factors;
    bounds["max_word_length"] = catalog.bounds.max_word_length;
    bounds["max_order_per_letter"] = catalog.bounds.max_order_per_letter;
    bounds["max_multiplicity"] = catalog.bounds.max_multiplicity;
    json batoms = json::array();
    for (AtomId a : catalog.bounds.atoms)
        batoms.push_back(decls.atom(a).name);
    json blabels = json::array();
    for (LabelId l : catalog.bounds.labels)
        blabels.push_back(decls.label(l).name);
    bounds["atoms"] = batoms;
    bounds["labels"] = blabels;
    doc["bounds"] = bounds;

    json labels = json::array();
    for (LabelId l : catalog.labels)
        labels.push_back(decls.label(l).name);
    doc["labels"] = labels;

    json entries = json::array();
    for (const auto& e : catalog.entries) {
        json entry;
        entry["monomial"] = monomial_to_json(decls, e.monomial);
        json closed = json::array();
        json witness = json::object();
        for (const auto& v : e.verdicts) {
            const std::string name = decls.label(v.label).name;
            if (v.closed)
                closed.push_back(name);
            else
                witness[name] = render_expression(decls, v.witness);
        }
        entry["closed_under"] = closed;
        entry["witness"] = witness;
        entries.push_back(entry);
    }
    doc["entries"] = entries;
    return doc.dump(2) + "\n";
}

void write_catalog(const RuleSet& rules, const Catalog& catalog, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw EngineError(Errc::Io, "cannot open " + path + " for writing");
    out << catalog_to_json(rules, catalog);
    if (!out)
        throw EngineError(Errc::Io, "failed writing " + path);
}

Catalog read_catalog(const RuleSet& rules, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw EngineError(Errc::Io, "cannot open " + path);
    json doc = json::parse(in);

    Catalog cat;
    cat.ruleset_fingerprint = doc.at("ruleset_fingerprint").get<std::string>();
    if (cat.ruleset_fingerprint != rules.fingerprint())
        throw EngineError(Errc::MixedComplex,
                          "catalog was produced by a different rule system");
    cat.mode = doc.at("mode").get<std::string>() == "transfer" ? ClosureMode::Transfer
                                                               : ClosureMode::Plain;
    const json& bounds = doc.at("bounds");
    cat.bounds.max_distinct_factors = bounds.at("max_distinct_factors").get<std::uint32_t>();
    cat.bounds.max_word_length = bounds.at("max_word_length").get<std::uint32_t>();
    cat.bounds.max_order_per_letter = bounds.at("max_order_per_letter").get<std::uint32_t>();
    cat.bounds.max_multiplicity = bounds.at("max_multiplicity").get<std::uint32_t>();
    for (const auto& a : bounds.at("atoms")) {
        auto id = rules.decls.atom_id(a.get<std::string>());
        if (!id)
            throw EngineError(Errc::UnknownAtom, "catalog references unknown atom");
        cat.bounds.atoms.push_back(*id);
    }
    for (const auto& l : bounds.at("labels")) {
        auto id = rules.decls.label_id(l.get<std::string>());
        if (!id)
            throw EngineError(Errc::UnknownLabel, "catalog references unknown label");
        cat.bounds.labels.push_back(*id);
    }
    for (const auto& l : doc.at("labels")) {
        auto id = rules.decls.label_id(l.get<std::string>());
        if (!id)
            throw EngineError(Errc::UnknownLabel, "catalog references unknown label");
        cat.labels.push_back(*id);
    }
    for (const auto& e : doc.at("entries")) {
        CatalogEntry entry;
        entry.monomial = monomial_from_json(rules.decls, e.at("monomial"));
        const json& closed = e.at("closed_under");
        const json& witness = e.at("witness");
        for (LabelId l : cat.labels) {
            const std::string name = rules.decls.label(l).name;
            LabelVerdict v;
            v.label = l;
            v.closed = std::find(closed.begin(), closed.end(), json(name)) != closed.end();
            if (!v.closed && witness.contains(name))
                v.witness = parse_expr(rules, witness.at(name).get<std::string>());
            entry.verdicts.push_back(std::move(v));
        }
        cat.entries.push_back(std::move(entry));
    }
    return cat;
}

} // namespace mcde
