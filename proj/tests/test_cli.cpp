// End-to-end checks that spawn the installed command-line binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
    const std::string cmd =
        std::string(PNNTRAIN_CLI_PATH) + " " + args + " 2>&1";
    std::FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        r.output.append(buf, n);
    }
    const int status = pclose(pipe);
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    return r;
}

const std::string kSmallMoons =
    "--n-per-class 12 --test-per-class 10 --labeled-per-class 3 "
    "--sigma 0.5 --seed 5 --repeats 1";

}  // namespace

TEST_CASE("help exits cleanly and lists the experiments") {
    const CliResult r = run_cli("--help");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("two-moons") != std::string::npos);
    CHECK(r.output.find("usps") != std::string::npos);
    CHECK(r.output.find("compare") != std::string::npos);
}

TEST_CASE("a subcommand is required") {
    const CliResult r = run_cli("");
    CHECK(r.exit_code == 2);
}

TEST_CASE("a single trial prints its full report plus the aggregate") {
    const CliResult r = run_cli("two-moons pnn-training " + kSmallMoons);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("method: pnn-training") != std::string::npos);
    CHECK(r.output.find("test error:") != std::string::npos);
    CHECK(r.output.find("pnn-training on two-moons: 1 trial(s)") !=
          std::string::npos);
}

TEST_CASE("multiple trials print only the aggregate line") {
    const CliResult r = run_cli(
        "two-moons supervised --n-per-class 12 --test-per-class 10 "
        "--labeled-per-class 3 --seed 5 --repeats 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("method: supervised") == std::string::npos);
    CHECK(r.output.find("supervised on two-moons: 2 trial(s)") !=
          std::string::npos);
}

TEST_CASE("bad arguments exit with code 2") {
    CHECK(run_cli("two-moons boosting " + kSmallMoons).exit_code == 2);
    CHECK(run_cli("two-moons pnn-training --c -1").exit_code == 2);
    CHECK(run_cli("two-moons pnn-training --no-such-flag").exit_code == 2);
    CHECK(run_cli("custom-file supervised").exit_code == 2);  // --train missing
    CHECK(run_cli("two-moons pnn-training " + kSmallMoons + " --plot")
              .exit_code == 2);
}

TEST_CASE("missing data files exit with code 3") {
    const CliResult custom = run_cli(
        "custom-file supervised --train /nonexistent/train.txt --repeats 1");
    CHECK(custom.exit_code == 3);
    CHECK(custom.output.find("error:") != std::string::npos);

    CHECK(run_cli("usps pnn-training --train /nonexistent/usps "
                  "--test /nonexistent/usps.t")
              .exit_code == 3);
}

TEST_CASE("strict mode exits with code 4 when the solver caps out") {
    const CliResult r = run_cli("two-moons supervised " + kSmallMoons +
                                " --strict --max-iter 1");
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("kkt gap") != std::string::npos);
}

TEST_CASE("output files land in the requested directory") {
    const std::string dir = "/tmp/pnntrain_test_cli_out";
    fs::remove_all(dir);
    const CliResult r = run_cli("two-moons pnn-training " + kSmallMoons +
                                " --out-dir " + dir + " --tag smoke");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("output written under") != std::string::npos);
    CHECK(fs::exists(dir + "/smoke-report.txt"));
    CHECK(fs::exists(dir + "/smoke-runs.csv"));
    CHECK(fs::exists(dir + "/smoke-summary.csv"));
}

TEST_CASE("options load from a spec file and flags take precedence") {
    const std::string spec_path = testutil::write_temp_file(
        "cli_spec.ini",
        "sigma=2.5\n"
        "n-per-class=12\n"
        "test-per-class=10\n"
        "labeled-per-class=3\n"
        "repeats=1\n"
        "seed=5\n");

    const CliResult from_file =
        run_cli("two-moons pnn-training --spec " + spec_path);
    CHECK(from_file.exit_code == 0);
    CHECK(from_file.output.find("sigma=2.5") != std::string::npos);

    const CliResult overridden = run_cli(
        "two-moons pnn-training --spec " + spec_path + " --sigma 0.75");
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.output.find("sigma=0.75") != std::string::npos);
}

TEST_CASE("compare tabulates the chosen methods with reference rows") {
    const CliResult r = run_cli(
        "compare two-moons --methods pnn-training,supervised " + kSmallMoons);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("two-moons comparison over 1 trial(s)") !=
          std::string::npos);
    CHECK(r.output.find("pnn-training") != std::string::npos);
    CHECK(r.output.find("supervised") != std::string::npos);
    CHECK(r.output.find("self-training") == std::string::npos);
    CHECK(r.output.find("branch-and-bound") != std::string::npos);
    CHECK(r.output.find("not recomputed") != std::string::npos);
}
