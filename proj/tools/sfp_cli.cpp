// sfp: command-line front end for the split feasibility solver and its harness.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sfp/errors.hpp"
#include "sfp/harness/config.hpp"
#include "sfp/harness/experiment.hpp"
#include "sfp/harness/properties.hpp"
#include "sfp/harness/table1.hpp"
#include "sfp/numeric_text.hpp"

namespace fs = std::filesystem;
using namespace sfp;
using namespace sfp::harness;

namespace {

int code(ExitCode c) { return static_cast<int>(c); }

fs::path output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("SFP_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

void override_seed(ProblemConfig& config, std::optional<std::uint64_t> seed) {
    if (!seed) return;
    if (auto* r = std::get_if<RandomProblemSpec>(&config.problem)) r->seed = *seed;
}

std::string summary_line(const std::string& label, const ExperimentResult& r) {
    std::string s = fmt::format("{}: {} after {} iterations", label,
                                r.diverged ? "diverged" : std::string(to_string(r.history.termination)),
                                r.iterations());
    if (r.final_error) s += fmt::format(", error {:.3e}", *r.final_error);
    s += fmt::format(", {:.3f} s, fingerprint {}", r.wall_seconds, r.fingerprint);
    return s;
}

void print_warnings(const ExperimentResult& r) {
    for (const auto& w : r.history.warnings) std::cerr << "warning: " << w << "\n";
    if (r.diverged) std::cerr << "divergence: " << r.divergence_message << "\n";
}

void print_table1(const Table1Report& report, std::ostream& out) {
    out << fmt::format("{:>4}  {:>12}  {}\n", "n", "max_dev", "status");
    for (const auto& row : report.rows) {
        if (!row.present) {
            out << fmt::format("{:>4}  {:>12}  missing\n", row.n, "-");
            continue;
        }
        out << fmt::format("{:>4}  {:12.3e}  {}\n", row.n, row.max_deviation, row.matched ? "match" : "differs");
    }
    out << fmt::format("row 0 exact: {}; rows n >= 1 matched: {}\n", report.row0_matches() ? "yes" : "no",
                       report.all_later_rows_match() ? "achieved" : "not achieved");
}

// Runs one config and writes its outputs; the CSV defaults to <stem>.csv.
ExperimentResult run_one(ProblemConfig config, const fs::path& out_dir, const std::string& stem) {
    if (!config.output.csv) config.output.csv = stem + ".csv";
    return run_experiment(config, out_dir);
}

int cmd_run(const std::string& path, const std::string& out, std::optional<std::uint64_t> seed) {
    ProblemConfig config = load_config(path);
    override_seed(config, seed);
    const ExperimentResult r = run_one(config, output_dir(out), fs::path(path).stem().string());
    print_warnings(r);
    std::cout << summary_line(path, r) << "\n";
    return code(r.exit_code());
}

int cmd_validate(const std::string& path, std::size_t horizon) {
    const ProblemConfig config = load_config(path);
    const ScheduleReport report = validate_schedule(config.schedule, horizon);
    for (const auto& r : report.results)
        std::cout << fmt::format("{:<6} {:<5} {}\n", r.condition, to_string(r.status), r.detail);
    return report.any_failed() ? 1 : 0;
}

int cmd_example(const std::string& preset, const std::string& mode_name, std::size_t max_iter,
                const std::string& csv, const std::string& out) {
    const auto mode = mode_from_string(mode_name);
    if (!mode) throw InvalidInput("unknown mode '" + mode_name + "'");
    ProblemConfig config = example_s4_config(preset, *mode);
    config.stepper.stopping.max_iter = max_iter;
    if (!csv.empty()) config.output.csv = csv;
    const ExperimentResult r = run_experiment(config, output_dir(out));
    print_warnings(r);
    std::cout << summary_line(fmt::format("example-s4 [{} / {}]", preset, to_string(*mode)), r) << "\n";
    const Vector& x = r.history.last();
    std::cout << "final iterate:";
    for (std::size_t i = 0; i < x.dim(); ++i) std::cout << " " << format_real(x[i]);
    std::cout << "\n";
    print_table1(compare_to_table1(r.history.iterates), std::cout);
    return code(r.exit_code());
}

int cmd_compare(const std::string& path) {
    const Table1Report report = compare_to_table1(read_csv_iterates(path));
    print_table1(report, std::cout);
    return report.row0_matches() ? 0 : 1;
}

int cmd_props(std::uint64_t seed, std::size_t samples) {
    bool ok = true;
    for (const auto& row : projection_suite(samples, seed)) {
        ok = ok && row.passed();
        std::cout << fmt::format(
            "projection {:<16} samples {} idem {:.2e} nonexp {:.2e} firm {:.2e} char {:.2e} {:.3f}s {}\n",
            to_string(row.kind), row.samples, row.idempotence, row.nonexpansive, row.firmly_nonexpansive,
            row.characterization, row.seconds, row.passed() ? "PASS" : "FAIL");
    }
    const auto grad = gradient_suite(5, std::max<std::size_t>(samples / 10, 1), samples, seed);
    ok = ok && grad.passed();
    std::cout << fmt::format("gradient   {} instances, {} points, max rel err {:.2e}; {} pairs, lipschitz excess {:.2e} {}\n",
                             grad.instances, grad.points, grad.max_relative_error, grad.pairs,
                             grad.max_lipschitz_excess, grad.passed() ? "PASS" : "FAIL");
    const auto tax = taxonomy_suite();
    ok = ok && tax.passed();
    std::cout << fmt::format("taxonomy   k_hat {:.6f}, raw slack {:.6f} at x = {}, averaged({}) slack {:.2e} {}\n",
                             tax.modulus_estimate, tax.raw_slack,
                             tax.raw_witness ? format_real(*tax.raw_witness) : "-", tax.averaged_lambda,
                             tax.averaged_slack, tax.passed() ? "PASS" : "FAIL");
    const auto fejer = fejer_suite(20, 200, seed);
    ok = ok && fejer.passed();
    std::cout << fmt::format("fejer      {} instances, {} of {} steps monitored, y gap {:.2e}, v gap {:.2e} {}\n",
                             fejer.instances, fejer.monitored_steps, fejer.steps, fejer.max_y_gap, fejer.max_v_gap,
                             fejer.passed() ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

struct SweepOutcome {
    std::string name;
    int code = 0;
    std::string line;
};

SweepOutcome sweep_one(const fs::path& path, const fs::path& out_dir, std::optional<std::uint64_t> seed) {
    SweepOutcome o;
    o.name = path.filename().string();
    try {
        ProblemConfig config = load_config(path.string());
        override_seed(config, seed);
        const ExperimentResult r = run_one(config, out_dir, path.stem().string());
        o.code = code(r.exit_code());
        o.line = summary_line(o.name, r);
    } catch (const ConfigError& e) {
        o.code = code(ExitCode::config_error);
        o.line = o.name + ": config error: " + e.what();
    } catch (const IoError& e) {
        o.code = code(ExitCode::io_error);
        o.line = o.name + ": io error: " + e.what();
    } catch (const std::exception& e) {
        o.code = code(ExitCode::config_error);
        o.line = o.name + ": " + e.what();
    }
    return o;
}

int cmd_sweep(const std::string& dir, const std::string& out, std::optional<std::uint64_t> seed) {
    std::vector<fs::path> configs;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".yaml" || ext == ".yml")) configs.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list '" + dir + "': " + ec.message());
    std::sort(configs.begin(), configs.end());

    const fs::path out_dir = output_dir(out);
    std::vector<std::future<SweepOutcome>> jobs;
    for (const auto& p : configs) jobs.push_back(std::async(std::launch::async, sweep_one, p, out_dir, seed));

    int worst = 0;
    for (auto& j : jobs) {
        const SweepOutcome o = j.get();
        std::cout << o.line << "\n";
        worst = std::max(worst, o.code);
    }
    std::cout << fmt::format("{} configs\n", configs.size());
    return worst;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Split feasibility solver and benchmark harness"};
    app.require_subcommand(1);

    std::string config_path, out, csv_path, dir;
    std::optional<std::uint64_t> seed;
    std::uint64_t props_seed = 1;
    std::size_t horizon = 1000, samples = 1000, max_iter = 1000;
    std::string preset = "table-1", mode = "statement";

    auto* run = app.add_subcommand("run", "Run one experiment config");
    run->add_option("config", config_path, "YAML config")->required();
    run->add_option("--out", out, "Output directory (default $SFP_OUTPUT_DIR or .)");
    run->add_option("--seed", seed, "Override the random problem seed");

    auto* validate = app.add_subcommand("validate-schedule", "Check a config's schedule against the conditions");
    validate->add_option("config", config_path, "YAML config")->required();
    validate->add_option("--horizon", horizon, "Finite horizon N")->check(CLI::PositiveNumber);

    auto* example = app.add_subcommand("example-s4", "Run the 5x5 linear-system example and compare to the reference table");
    example->add_option("--preset", preset, "paper-s4 | table-1 | cq | cq-adaptive");
    example->add_option("--mode", mode, "proof | statement | explore");
    example->add_option("--max-iter", max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    example->add_option("--csv", csv_path, "Write the CSV here (relative to the output directory)");
    example->add_option("--out", out, "Output directory");

    auto* compare = app.add_subcommand("compare-table1", "Compare a run CSV against the reference rows");
    compare->add_option("csv", csv_path, "CSV written by run or example-s4")->required();

    auto* props = app.add_subcommand("props", "Run the property suites");
    props->add_option("--seed", props_seed, "Seed");
    props->add_option("--samples", samples, "Samples per set kind")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "Run every config in a directory concurrently");
    sweep->add_option("config-dir", dir, "Directory of YAML configs")->required();
    sweep->add_option("--out", out, "Output directory");
    sweep->add_option("--seed", seed, "Override random problem seeds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : code(ExitCode::config_error);
    }

    try {
        if (*run) return cmd_run(config_path, out, seed);
        if (*validate) return cmd_validate(config_path, horizon);
        if (*example) return cmd_example(preset, mode, max_iter, csv_path, out);
        if (*compare) return cmd_compare(csv_path);
        if (*props) return cmd_props(props_seed, samples);
        if (*sweep) return cmd_sweep(dir, out, seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return code(ExitCode::config_error);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return code(ExitCode::io_error);
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return code(ExitCode::config_error);
    }
    return 0;
}
