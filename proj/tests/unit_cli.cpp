// unit_cli.cpp — End-to-end checks of the command-line tool via subprocesses

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef QMT_CLI_PATH
#error "QMT_CLI_PATH must point at the built CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QMT_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (fgets(buf, sizeof(buf), pipe)) out += buf;
    int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), out};
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/qmt_cli_test_") + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("validate: builtin thermal qubit passes with exit 0") {
    RunResult r = run_cli("validate --gen 'thermal_qubit(1.0)'");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("OK") != std::string::npos);
    CHECK(r.output.find("detailed balance") != std::string::npos);
}

TEST_CASE("validate: injected traceless defect exits 1 and names condition 2") {
    // write a generator file with a non-traceless mode
    const std::string path = tmp_path("bad_gen.json");
    std::ofstream out(path);
    out << R"({"dim": 2,
      "sigma": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]],
      "modes": [{"c": 1.0, "omega": 0.0,
                 "L": [[[1.0,0],[1.0,0]],[[1.0,0],[1.0,0]]]}]})";
    out.close();
    RunResult r = run_cli("validate --gen " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("condition 2") != std::string::npos);
}

TEST_CASE("validate: malformed JSON exits 2") {
    const std::string path = tmp_path("broken.json");
    std::ofstream out(path);
    out << "{not json";
    out.close();
    RunResult r = run_cli("validate --gen " + path);
    CHECK(r.exit_code == 2);
}

TEST_CASE("w2: coincident states give zero and an energy CSV") {
    const std::string csv = tmp_path("energy.csv");
    RunResult r = run_cli("w2 --gen 'depolarizing(2)' --rho maxmix --omega maxmix --energy-csv " +
                          csv);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("W2 = 0.0000") != std::string::npos);
    std::string content = slurp(csv);
    CHECK(content.rfind("iteration,energy", 0) == 0);
}

TEST_CASE("w2: pure states, path JSON, monotone energies") {
    const std::string csv = tmp_path("energy2.csv");
    const std::string pjson = tmp_path("path.json");
    RunResult r = run_cli("w2 --gen 'depolarizing(2)' --rho pure:0 --omega pure:1 --path-out " +
                          pjson + " --energy-csv " + csv);
    CHECK(r.exit_code == 0);
    // energies non-increasing
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line); // header
    double prev = 1e300;
    while (std::getline(in, line)) {
        auto comma = line.find(',');
        double e = std::stod(line.substr(comma + 1));
        CHECK(e <= prev + 1e-12);
        prev = e;
    }
    std::string pj = slurp(pjson);
    CHECK(pj.find("\"grid\"") != std::string::npos);
    CHECK(pj.find("\"energy\"") != std::string::npos);
}

TEST_CASE("suite: depolarizing passes, reports are seed-deterministic") {
    const std::string j1 = tmp_path("rep1.json");
    const std::string j2 = tmp_path("rep2.json");
    const std::string common =
        "suite --gen 'depolarizing(2)' --seed 7 --samples 6 --tol 1e-4 --json-out ";
    RunResult r1 = run_cli(common + j1);
    CHECK(r1.exit_code == 0);
    RunResult r2 = run_cli(common + j2);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(j1) == slurp(j2));
    CHECK_FALSE(slurp(j1).empty());
}

TEST_CASE("suite: non-primitive generator exits 1") {
    RunResult r = run_cli("suite --gen 'dephasing(2)' --samples 4");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("not primitive") != std::string::npos);
}

TEST_CASE("constants: prints the summary table and writes CSV") {
    const std::string csv = tmp_path("constants.csv");
    RunResult r = run_cli("constants --gen 'depolarizing(2)' --seed 3 --samples 6 --csv-out " +
                          csv);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("lambda_hat  1.000000000") != std::string::npos);
    CHECK(r.output.find("alpha1_hat") != std::string::npos);
    CHECK(r.output.find("kappa_hat") != std::string::npos);
    CHECK(slurp(csv).rfind("name,status", 0) == 0);
}

TEST_CASE("constants: low-sample warning appears") {
    RunResult r = run_cli("constants --gen 'depolarizing(2)' --samples 1 --seed 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("low-sample") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    RunResult missing = run_cli("constants");
    CHECK(missing.exit_code == 2);
    RunResult nofile = run_cli("validate --gen /does/not/exist.json");
    CHECK(nofile.exit_code == 2);
}
