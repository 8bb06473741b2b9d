#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = SFP_CLI_PATH;
const std::string kData = SFP_TEST_DATA;

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "sfp_test_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Runs the CLI with stdout and stderr sent to log; returns the exit status.
int sfp(const std::string& args, const fs::path& log, const std::string& env = "") {
    const std::string cmd = env + " \"" + kCli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("run exit codes") {
    const fs::path dir = scratch("run");
    const fs::path log = dir / "log.txt";
    CHECK(sfp("run " + kData + "/configs/example_s4_table1.yaml --out " + dir.string(), log) == 0);
    CHECK(fs::exists(dir / "example_s4_table1.csv"));
    CHECK(fs::exists(dir / "example_s4_table1.svg"));
    CHECK(sfp("run " + kData + "/bad/max_iter_hit.yaml --out " + dir.string(), log) == 1);
    CHECK(sfp("run " + kData + "/bad/unknown_key.yaml --out " + dir.string(), log) == 2);
    CHECK(slurp(log).find("stepper.modee") != std::string::npos);
    CHECK(sfp("run " + kData + "/bad/dim_mismatch.yaml --out " + dir.string(), log) == 2);
    CHECK(sfp("run " + kData + "/bad/diverges.yaml --out " + dir.string(), log) == 3);
    CHECK(sfp("run " + kData + "/configs/no_such.yaml", log) == 2);
    CHECK(sfp("run " + kData + "/configs/example_s4_table1.yaml --out /dev/null/x", log) == 4);
    CHECK(sfp("frobnicate", log) == 2);
    CHECK(sfp("--help", log) == 0);
}

TEST_CASE("output directory from the environment") {
    const fs::path dir = scratch("env");
    const fs::path log = scratch("env_log") / "log.txt";
    CHECK(sfp("run " + kData + "/configs/explicit_halfspace.yaml", log, "SFP_OUTPUT_DIR=" + dir.string()) == 0);
    CHECK(fs::exists(dir / "explicit_halfspace.csv"));
}

TEST_CASE("example and reference comparison") {
    const fs::path dir = scratch("example");
    const fs::path log = dir / "log.txt";
    CHECK(sfp("example-s4 --preset table-1 --mode statement --csv run.csv --out " + dir.string(), log) == 0);
    CHECK(slurp(log).find("residual_met") != std::string::npos);
    CHECK(sfp("compare-table1 " + (dir / "run.csv").string(), log) == 0);
    CHECK(slurp(log).find("row 0 exact: yes") != std::string::npos);
    CHECK(sfp("compare-table1 " + (dir / "absent.csv").string(), log) == 4);
    CHECK(sfp("example-s4 --preset nope", log) == 2);
    CHECK(sfp("example-s4 --mode sideways", log) == 2);
}

TEST_CASE("schedule validation") {
    const fs::path log = scratch("schedule") / "log.txt";
    CHECK(sfp("validate-schedule " + kData + "/configs/explicit_halfspace.yaml --horizon 10000", log) == 0);
    CHECK(slurp(log).find("c5") != std::string::npos);
}

TEST_CASE("property suites") {
    const fs::path log = scratch("props") / "log.txt";
    CHECK(sfp("props --seed 3 --samples 200", log) == 0);
    CHECK(slurp(log).find("FAIL") == std::string::npos);
}

TEST_CASE("sweep reports the worst exit code") {
    const fs::path dir = scratch("sweep");
    const fs::path log = dir / "log.txt";
    CHECK(sfp("sweep " + kData + "/configs --out " + dir.string(), log) == 0);
    CHECK(fs::exists(dir / "random_box_cq.csv"));
    CHECK(sfp("sweep " + kData + "/bad --out " + dir.string(), log) == 3);
    CHECK(sfp("sweep " + kData + "/nowhere", log) == 4);
}
