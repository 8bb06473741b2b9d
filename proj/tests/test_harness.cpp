#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sfp/errors.hpp"
#include "sfp/harness/config.hpp"
#include "sfp/harness/experiment.hpp"
#include "sfp/harness/problems.hpp"
#include "sfp/harness/table1.hpp"
#include "support.hpp"

using namespace sfp;
using namespace sfp::harness;
using sfp::testing::Gen;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "sfp_test_harness" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string config_error_path(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<accepted>";
}

// The reference table rows come from x <- 0.3 x + 0.7 S x started at ones.
std::string six_decimals(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

TEST_CASE("the 5x5 example is consistent after the single-entry correction") {
    const SfpProblem p = build_example_s4();
    const Vector x_star = example_s4_solution();
    CHECK(max_abs_diff(apply(example_s4_matrix_a(), x_star), example_s4_b()) <= 1e-15);
    CHECK(max_abs_diff(apply(example_s4_matrix_s(), x_star), x_star) <= 1e-15);
    CHECK(membership_residual(p.c(), x_star) <= 1e-10);
    CHECK(p.known_solution().has_value());

    // The printed matrix misses b in row 3 by exactly 2.
    const Vector miss = apply(printed_matrix_a(), x_star) - example_s4_b();
    CHECK(max_abs_diff(miss, Vector{0.0, 0.0, 2.0, 0.0, 0.0}) <= 1e-15);
    const auto diff = printed_matrix_a().matrix() - example_s4_matrix_a().matrix();
    CHECK(diff.cwiseAbs().sum() == 4.0);
    CHECK(diff(2, 3) == 4.0);
}

TEST_CASE("random instances are deterministic and planted") {
    Gen gen(51);
    for (auto family : {SetFamily::box, SetFamily::ball, SetFamily::halfspace}) {
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t d1 = gen.size(1, 8), d2 = gen.size(1, 8);
            const auto seed = gen.seed();
            const SfpProblem a = generate_random_sfp(d1, d2, family, seed, {.with_mapping = trial % 2 == 0});
            const SfpProblem b = generate_random_sfp(d1, d2, family, seed, {.with_mapping = trial % 2 == 0});
            CHECK(a.a() == b.a());
            REQUIRE(a.known_solution().has_value());
            const Vector& x = *a.known_solution();
            CHECK(x == *b.known_solution());
            CHECK(membership_residual(a.c(), x) <= 1e-12);
            CHECK(membership_residual(a.q(), apply(a.a(), x)) <= 1e-12);
            if (a.s()) CHECK(fixed_point_residual(*a.s(), x) <= 1e-12);
        }
    }
    CHECK(set_family_from_string("ball") == SetFamily::ball);
    CHECK_FALSE(set_family_from_string("cube").has_value());
    CHECK_THROWS_AS(generate_random_sfp(0, 3, SetFamily::box, 1), InvalidInput);
}

TEST_CASE("embedded reference table matches its generating iteration") {
    const Eigen::MatrixXd s = example_s4_matrix_s().matrix();
    Eigen::VectorXd x = Eigen::VectorXd::Ones(5);
    std::size_t n = 0;
    for (const ReferenceRow& row : table1_rows()) {
        for (; n < row.n; ++n) x = 0.3 * x + 0.7 * s * x;
        CAPTURE(row.n);
        for (Eigen::Index i = 0; i < 5; ++i) {
            const std::string printed(row.entries[static_cast<std::size_t>(i)]);
            const std::string expected = printed == "1" ? "1.000000" : printed;
            CHECK(six_decimals(x(i)) == expected);
        }
    }
    CHECK(table1_rows().size() == 19);
    CHECK(table1_rows().back().n == 33);
}

TEST_CASE("reference comparison") {
    std::vector<Vector> exact(34, Vector::constant(5, 0.0));
    for (const ReferenceRow& row : table1_rows()) exact[row.n] = reference_values(row);
    const Table1Report self = compare_to_table1(exact);
    CHECK(self.row0_matches());
    CHECK(self.all_later_rows_match());
    CHECK(self.matched_count() == 19);
    for (const auto& r : self.rows) CHECK(r.max_deviation == 0.0);

    // The last row is the solution rounded to six places.
    const Vector last = reference_values(table1_rows().back());
    CHECK(max_abs_diff(last, example_s4_solution()) <= kTable1Tolerance);

    const std::vector<Vector> short_run{Vector::constant(5, 1.0), Vector::constant(5, 0.5)};
    const Table1Report partial = compare_to_table1(short_run);
    CHECK(partial.row0_matches());
    CHECK_FALSE(partial.all_later_rows_match());
    CHECK(partial.rows[2].present == false);
    CHECK(partial.rows[1].max_deviation == doctest::Approx(0.5));

    CHECK_THROWS_AS(compare_to_table1(std::vector<Vector>{}), InvalidInput);
    CHECK_THROWS_AS(compare_to_table1(std::vector<Vector>{Vector{1.0}}), InvalidInput);
}

TEST_CASE("config parsing of the sample files") {
    const ProblemConfig ex = load_config(SFP_TEST_DATA "/configs/example_s4_table1.yaml");
    CHECK(std::holds_alternative<BuiltinExampleS4>(ex.problem));
    CHECK(ex.schedule == preset_table1());
    CHECK(ex.stepper.mode == CompositionMode::statement_form);
    CHECK(ex.stepper.stopping.max_iter == 1000);
    CHECK(ex.output.csv == "example_s4_table1.csv");

    const ProblemConfig rnd = load_config(SFP_TEST_DATA "/configs/random_box_cq.yaml");
    const auto& spec = std::get<RandomProblemSpec>(rnd.problem);
    CHECK(spec.dim1 == 6);
    CHECK(spec.dim2 == 4);
    CHECK(spec.seed == 11);
    CHECK(rnd.stepper.variant == Variant::cq_adaptive);

    const ProblemConfig exp = load_config(SFP_TEST_DATA "/configs/explicit_halfspace.yaml");
    const auto& e = std::get<ExplicitProblemSpec>(exp.problem);
    CHECK(e.a == LinearMap({{1.0, 2.0}, {0.0, 1.0}}));
    CHECK(std::get<ConvexSet::Halfspace>(e.q.params()).offset == 0.5);
    CHECK(e.s == "contraction-scale:1/2");
    CHECK(exp.schedule == preset_paper_s4());
    CHECK(exp.x0 == Vector{3.0, -2.0});

    CHECK_THROWS_AS(load_config(SFP_TEST_DATA "/configs/missing.yaml"), ConfigError);
}

TEST_CASE("canonical serialization round-trips and fingerprints are stable") {
    for (const char* name : {"example_s4_table1", "random_box_cq", "explicit_halfspace"}) {
        CAPTURE(name);
        const ProblemConfig c = load_config(std::string(SFP_TEST_DATA "/configs/") + name + ".yaml");
        const std::string text = serialize_config(c);
        const ProblemConfig again = parse_config(text);
        CHECK(serialize_config(again) == text);
        CHECK(config_fingerprint(again) == config_fingerprint(c));
        CHECK(config_fingerprint(c).size() == 16);
    }
    const ProblemConfig a = example_s4_config("table-1", CompositionMode::statement_form);
    ProblemConfig b = a;
    b.stepper.stopping.max_iter += 1;
    CHECK(config_fingerprint(a) != config_fingerprint(b));
    CHECK(parse_config(serialize_config(example_s4_config("cq-adaptive", CompositionMode::explore))).stepper.variant ==
          Variant::cq_adaptive);
    CHECK_THROWS_AS(example_s4_config("fast", CompositionMode::proof_form), InvalidInput);
}

TEST_CASE("config errors name the offending field") {
    CHECK(config_error_path("problem: {builtin: example-s4}\nstepper: {modee: proof}\n") == "stepper.modee");
    CHECK(config_error_path("problem: {builtin: example-s4}\nstepper: {mode: sideways}\n") == "stepper.mode");
    CHECK(config_error_path("problem: {builtin: example-s4}\nschedule: {rho: abc}\n") == "schedule.rho");
    CHECK(config_error_path("problem: {builtin: example-s4}\nstepper: {max_iter: -3}\n") == "stepper.max_iter");
    CHECK(config_error_path("problem: {builtin: example-s4}\nstart: {x0: [1, 2]}\n") == "start.x0");
    CHECK(config_error_path("problem: {builtin: example-s4}\nschedule: {gamma: 0.3}\n") == "schedule");
    CHECK(config_error_path("problem: [unclosed\n") == "<document>");
    CHECK(config_error_path("problem: {builtin: example-s4}\n") == "<accepted>");
    // The problem section defaults to the built-in example.
    CHECK(std::holds_alternative<BuiltinExampleS4>(parse_config("schedule: {preset: table-1}\n").problem));
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(TerminationReason::residual_met) == ExitCode::residual_met);
    CHECK(exit_code_for(TerminationReason::max_iter) == ExitCode::max_iter);
    CHECK(exit_code_for(TerminationReason::grad_zero) == ExitCode::max_iter);
    CHECK(static_cast<int>(ExitCode::config_error) == 2);
    CHECK(static_cast<int>(ExitCode::divergence) == 3);
    CHECK(static_cast<int>(ExitCode::io_error) == 4);

    const ExperimentResult diverged = execute(load_config(SFP_TEST_DATA "/bad/diverges.yaml"));
    CHECK(diverged.diverged);
    CHECK(diverged.exit_code() == ExitCode::divergence);
    CHECK(execute(load_config(SFP_TEST_DATA "/bad/max_iter_hit.yaml")).exit_code() == ExitCode::max_iter);
}

TEST_CASE("experiment on the 5x5 example") {
    const ExperimentResult r = execute(example_s4_config("table-1", CompositionMode::statement_form));
    CHECK(r.exit_code() == ExitCode::residual_met);
    REQUIRE(r.final_error.has_value());
    CHECK(*r.final_error <= 1e-6);
    CHECK(r.rows.size() == r.iterations() + 1);
    CHECK(r.rows.front().front() == 1.0);  // x1 of the start point
    CHECK(std::abs(r.rows.back().front() - 0.0625) <= 1e-6);
    CHECK(r.fingerprint.size() == 16);
}

TEST_CASE("csv output is complete, reproducible and readable") {
    const fs::path dir = scratch("csv");
    ProblemConfig c = load_config(SFP_TEST_DATA "/configs/explicit_halfspace.yaml");
    c.output.csv = "a/run.csv";
    c.output.svg = "a/run.svg";
    const ExperimentResult r = run_experiment(c, dir);
    const std::string first = slurp(dir / "a/run.csv");
    run_experiment(c, dir);
    CHECK(slurp(dir / "a/run.csv") == first);
    CHECK(slurp(dir / "a/run.svg").find("<polyline") != std::string::npos);

    std::istringstream lines(first);
    std::string header;
    std::getline(lines, header);
    CHECK(header == csv_header(2));
    CHECK(header == "n,x1,x2,f,grad_norm,theta_n,tau_n,res_C,res_Q,res_fix,err_to_solution");
    std::size_t count = 0;
    for (std::string line; std::getline(lines, line);) ++count;
    CHECK(count == r.iterations() + 1);

    const std::vector<Vector> back = read_csv_iterates(dir / "a/run.csv");
    REQUIRE(back.size() == r.history.iterates.size());
    for (std::size_t k = 0; k < back.size(); ++k) CHECK(back[k] == r.history.iterates[k]);

    CHECK_THROWS_AS(read_csv_iterates(dir / "absent.csv"), IoError);
    std::ofstream(dir / "junk.csv") << "n,x1\n0,abc\n";
    CHECK_THROWS_AS(read_csv_iterates(dir / "junk.csv"), InvalidInput);
}

TEST_CASE("tabulate a run with no steps beyond the start") {
    const SfpProblem p = build_example_s4();
    RunHistory h;
    h.iterates.push_back(example_s4_solution());
    const auto rows = tabulate(p, preset_table1(), StepperConfig{}, h);
    REQUIRE(rows.size() == 1);
    // x1..x5, f, grad_norm, theta, tau, res_C, res_Q, res_fix, err
    CHECK(rows[0].size() == 5 + 8);
    CHECK(rows[0][0] == 0.0625);
    CHECK(rows[0][5] <= 1e-28);
    CHECK(rows[0][7] == 0.0);
}

TEST_CASE("csv leaves the error column empty without a known solution") {
    const fs::path dir = scratch("no_solution");
    ProblemConfig c;
    ExplicitProblemSpec e{LinearMap({{1.0}}), ConvexSet::ball(Vector{0.0}, 1.0), ConvexSet::ball(Vector{0.5}, 1.0),
                          std::nullopt, "zero", std::nullopt};
    c.problem = e;
    c.stepper.stopping.max_iter = 5;
    c.output.csv = "run.csv";
    run_experiment(c, dir);
    const std::string text = slurp(dir / "run.csv");
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line.back() == ',');
}
