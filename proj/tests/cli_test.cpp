#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcde/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

std::string write_spec(const char* name, const std::string& text) {
    std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << text;
    return path;
}

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = mcde::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

const std::string kPairSpec =
    "slots 1;\n"
    "diff d up 1 down 1;\n"
    "atom phi n [0] m [0];\n"
    "atom psi n [0] m [0];\n"
    "ideal { phi, psi };\n";

const std::string kClosedSpec =
    "slots 1; diff d up 1 down 1; atom phi n [0] m [0];\n"
    "maxorder d on phi = 2; maxpower [d]phi = 3;\n";

} // namespace

TEST_CASE("identity subcommand prints the derived relation") {
    std::string spec = write_spec("mcde_cli_pair.mc", kPairSpec);
    RunResult r = run({"identity", "--spec", spec, "--label", "d", "--seed", "{phi,psi}"});
    CHECK(r.code == 0);
    CHECK(r.out == "{[d]phi, psi} + {phi, [d]psi} = 0\n");
    std::remove(spec.c_str());
}

TEST_CASE("closed subcommand reports verdicts") {
    std::string spec = write_spec("mcde_cli_closed.mc", kClosedSpec);
    RunResult closed =
        run({"closed", "--spec", spec, "--label", "d", "--expr", "{[d]phi^2, phi}"});
    CHECK(closed.code == 0);
    CHECK(closed.out == "CLOSED\n");

    RunResult open = run({"closed", "--spec", spec, "--label", "d", "--expr", "{phi}"});
    CHECK(open.code == 0);
    CHECK(open.out.rfind("NOT-CLOSED:", 0) == 0);
    std::remove(spec.c_str());
}

TEST_CASE("expand subcommand surfaces semantic errors as exit 2") {
    std::string spec = write_spec("mcde_cli_err.mc", kPairSpec);
    RunResult r = run({"expand", "--spec", spec, "--label", "d", "--expr", "{bogus}"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown atom") != std::string::npos);
    std::remove(spec.c_str());
}

TEST_CASE("usage errors exit with 2") {
    RunResult r = run({"expand", "--label", "d"});
    CHECK(r.code == 2);
    RunResult unknown = run({"frobnicate"});
    CHECK(unknown.code == 2);
}

TEST_CASE("hierarchy subcommand lists the identity tower") {
    std::string spec = write_spec(
        "mcde_cli_hier.mc",
        "slots 1; diff d up 1 down 1; diff e up 1 down 1;\n"
        "atom phi n [0] m [0]; maxpower phi = 3; commute e d = 0;\n");
    RunResult r = run({"hierarchy", "--spec", spec, "--seed", "{phi^3}", "--labels", "d,e",
                       "--depth", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("3*{[d]phi, phi^2} = 0") != std::string::npos);
    CHECK(r.out.find("6*{[d]phi, [e]phi, phi} = 0") != std::string::npos);
    std::remove(spec.c_str());
}

TEST_CASE("search subcommand writes a catalog file") {
    std::string spec = write_spec("mcde_cli_search.mc", kClosedSpec);
    std::string out_path =
        (std::filesystem::temp_directory_path() / "mcde_cli_cat.json").string();
    RunResult r = run({"search", "--spec", spec, "--max-factors", "2", "--max-word", "2",
                       "--max-order", "2", "--max-mult", "3", "--out", out_path});
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(out_path));
    std::remove(spec.c_str());
    std::remove(out_path.c_str());
}

TEST_CASE("saturate subcommand prints derived relations with index records") {
    std::string spec = write_spec(
        "mcde_cli_sat.mc",
        "slots 1; diff d up 1 down 1;\n"
        "atom phi n [0] m [0]; atom gamma n [-1] m [1];\n"
        "maxpower phi = 2; condition [d]gamma = {phi^2};\n");
    RunResult r = run({"saturate", "--spec", spec, "--depth", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("-2*{[d]phi, phi} + {[d^2]gamma} = 0") != std::string::npos);
    CHECK(r.out.find("n [1] m [-1]") != std::string::npos);
    std::remove(spec.c_str());
}

TEST_CASE("identity on a nonvanishing seed is a usage-level error") {
    std::string spec = write_spec("mcde_cli_nonvan.mc", kPairSpec);
    RunResult r = run({"identity", "--spec", spec, "--label", "d", "--seed", "{phi^2}"});
    CHECK(r.code == 2);
    CHECK(r.err.find("vanishing") != std::string::npos);
    std::remove(spec.c_str());
}

TEST_CASE("verify-paper runs the worked-example suite") {
    RunResult r = run({"verify-paper"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS identity/transfer-pair") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("json output format is parseable") {
    std::string spec = write_spec("mcde_cli_json.mc", kClosedSpec);
    RunResult r = run({"closed", "--spec", spec, "--format", "json", "--label", "d", "--expr",
                       "{[d]phi^2}"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"closed\": true") != std::string::npos);
    std::remove(spec.c_str());
}
