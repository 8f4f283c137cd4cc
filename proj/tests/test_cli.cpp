#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

// Runs the installed CLI through the shell and captures stdout+stderr.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const char* exe = std::getenv("CELLBIF_CLI");
    REQUIRE(exe != nullptr);
    const std::string cmd = env_prefix + "'" + std::string(exe) + "' " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    const int rc = pclose(pipe);
    res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return res;
}

// Extracts the value of a "key = value" line.
double text_value(const std::string& out, const std::string& key) {
    const std::string needle = key + " = ";
    const std::size_t pos = out.find(needle);
    REQUIRE(pos != std::string::npos);
    return std::stod(out.substr(pos + needle.size()));
}

std::string text_string(const std::string& out, const std::string& key) {
    const std::string needle = key + " = ";
    const std::size_t pos = out.find(needle);
    REQUIRE(pos != std::string::npos);
    const std::size_t end = out.find('\n', pos);
    return out.substr(pos + needle.size(), end - pos - needle.size());
}

bool close_rel(double got, double ref, double tol) {
    return std::abs(got - ref) <= tol * std::max(1.0, std::abs(ref));
}

} // namespace

TEST_CASE("steady subcommand prints the resting disc", "[cli]") {
    const RunResult res = run_cli("steady --p 0.1");
    REQUIRE(res.status == 0);
    REQUIRE(close_rel(text_value(res.out, "r0"), 0.531446922941694429, 1e-14));
    REQUIRE(close_rel(text_value(res.out, "m0"), 1.12701665379258311, 1e-14));
}

TEST_CASE("k2 subcommand classifies the vdW pitchfork", "[cli]") {
    const RunResult res = run_cli("k2 --dim 1 --vdw 10,0.63");
    REQUIRE(res.status == 0);
    REQUIRE(text_string(res.out, "verdict") == "inverse_pitchfork");
    REQUIRE(text_string(res.out, "policy") == "taylor");
    REQUIRE(close_rel(text_value(res.out, "k2"), -1.40100433824, 1e-6));
}

TEST_CASE("JSON output carries the same numbers as the text report", "[cli]") {
    const RunResult text = run_cli("k0 --p 0.1 --z 1.25 --gamma 0.05 --const-d 1");
    const RunResult json = run_cli("k0 --p 0.1 --z 1.25 --gamma 0.05 --const-d 1 --json -");
    REQUIRE(text.status == 0);
    REQUIRE(json.status == 0);
    const nlohmann::json j = nlohmann::json::parse(json.out);
    REQUIRE(j.at("k0_hat").get<double>() == text_value(text.out, "k0_hat"));
    REQUIRE(close_rel(j.at("k0_hat").get<double>(), 134.373452669471669, 1e-10));
    REQUIRE(j.at("r0").is_number());
}

TEST_CASE("exit codes separate domain failures from usage errors", "[cli]") {
    REQUIRE(run_cli("steady --p 0.26").status == 1);       // no resting disc
    REQUIRE(run_cli("k2 --vdw banana").status == 2);       // unparseable model
    REQUIRE(run_cli("frobnicate").status == 2);            // unknown subcommand
    REQUIRE(run_cli("sweep --axis e_a").status == 2);      // --lo/--hi required
    REQUIRE(run_cli("--help").status == 0);
    const RunResult bad = run_cli("steady --p 0.26");
    REQUIRE(bad.out.find("no_steady_state_error") != std::string::npos);
}

TEST_CASE("config files feed defaults and flags override them", "[cli]") {
    const std::string path = "/tmp/cellbif_cli_test.cfg";
    {
        std::ofstream cfg(path);
        cfg << "# reference tuple\np=0.15\nz=0.8\ngamma=0.05\n";
    }
    const RunResult from_file = run_cli("k0 --config " + path + " --const-d 1");
    REQUIRE(from_file.status == 0);
    REQUIRE(close_rel(text_value(from_file.out, "k0_hat"), 57.5206393424030182, 1e-10));

    const RunResult overridden =
        run_cli("k0 --config " + path + " --const-d 1 --p 0.1 --z 1.25");
    REQUIRE(overridden.status == 0);
    REQUIRE(close_rel(text_value(overridden.out, "k0_hat"), 134.373452669471669, 1e-10));
    std::remove(path.c_str());

    REQUIRE(run_cli("k0 --config /nonexistent.cfg").status == 2);
    {
        std::ofstream cfg("/tmp/cellbif_cli_bad.cfg");
        cfg << "gama=0.1\n"; // typo must be caught, not ignored
    }
    const RunResult typo = run_cli("k0 --config /tmp/cellbif_cli_bad.cfg");
    REQUIRE(typo.status == 2);
    REQUIRE(typo.out.find("unknown key") != std::string::npos);
    std::remove("/tmp/cellbif_cli_bad.cfg");
}

TEST_CASE("environment grid override keeps the pipeline alive", "[cli]") {
    const RunResult res = run_cli("k2 --p 0.1 --z 1.25 --gamma 0.05 --vdw 10,0.35",
                                  "MOTILITY_BIF_GRID=512 ");
    REQUIRE(res.status == 0);
    REQUIRE(text_string(res.out, "verdict") == "direct_pitchfork");
}

TEST_CASE("selftest passes end to end", "[cli]") {
    const RunResult res = run_cli("selftest");
    REQUIRE(res.status == 0);
    REQUIRE(res.out.find("selftest passed") != std::string::npos);
    REQUIRE(res.out.find("FAIL") == std::string::npos);
}
