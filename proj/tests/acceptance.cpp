// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <fmt/core.h>

#include "sfp/harness/config.hpp"
#include "sfp/harness/experiment.hpp"
#include "sfp/harness/problems.hpp"
#include "sfp/harness/properties.hpp"
#include "sfp/harness/table1.hpp"
#include "sfp/solver.hpp"
#include "support.hpp"

using namespace sfp;
using namespace sfp::harness;
using sfp::testing::Gen;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const SetFamily kFamilies[] = {SetFamily::box, SetFamily::ball, SetFamily::halfspace};

Verdict convergence() {
    ProblemConfig c = example_s4_config("table-1", CompositionMode::statement_form);
    c.stepper.stopping.max_iter = 1000;
    const auto t0 = Clock::now();
    const ExperimentResult r = execute(c);
    const double secs = seconds_since(t0);
    const Vector x_star = example_s4_solution();
    // First iterate within 1e-6 of the solution.
    std::size_t first = 0;
    while (first < r.history.iterates.size() && max_abs_diff(r.history.iterates[first], x_star) > 1e-6) ++first;
    const bool reached = first < r.history.iterates.size() && first <= 1000;
    return {reached && secs < 1.0,
            fmt::format("table-1/statement: error <= 1e-6 at n = {}, final error {:.3e}, {} iterations, {:.3f} s", first,
                        r.final_error.value_or(NAN), r.iterations(), secs)};
}

Verdict table_report() {
    bool row0 = true;
    std::string detail;
    for (auto mode : {CompositionMode::proof_form, CompositionMode::statement_form, CompositionMode::explore}) {
        ProblemConfig c = example_s4_config("table-1", mode);
        c.stepper.stopping.max_iter = 40;
        const ExperimentResult r = execute(c);
        const Table1Report report = compare_to_table1(r.history.iterates);
        row0 = row0 && report.row0_matches() && report.rows.size() == table1_rows().size();
        detail += fmt::format("{}: {} of {} rows, later rows {}; ", to_string(mode), report.matched_count(),
                              report.rows.size(), report.all_later_rows_match() ? "achieved" : "not achieved");
    }
    detail += row0 ? "row 0 exact" : "row 0 differs";
    return {row0, detail};
}

Verdict projections() {
    const auto t0 = Clock::now();
    const auto rows = projection_suite(1000, 2024);
    const double secs = seconds_since(t0);
    bool ok = rows.size() == 7;
    double worst = 0.0;
    for (const auto& r : rows) {
        ok = ok && r.samples == 1000 && r.passed();
        worst = std::max(worst, r.worst());
    }
    return {ok && secs < 5.0, fmt::format("{} kinds x 1000 samples, worst violation {:.2e}, {:.3f} s", rows.size(),
                                          worst, secs)};
}

// Independent of the library's own gradient suite: spectral norm via SVD and
// a step scaled to the point.
Verdict gradient() {
    Gen gen(404);
    double worst_rel = 0.0;
    double worst_excess = -INFINITY;
    std::size_t pairs = 0;
    for (int inst = 0; inst < 5; ++inst) {
        const SfpProblem p = generate_random_sfp(gen.size(2, 8), gen.size(2, 8), kFamilies[inst % 3], gen.seed());
        const auto n = static_cast<Eigen::Index>(p.dim());
        for (int k = 0; k < 100; ++k) {
            const Vector x = gen.vector(p.dim(), 3.0);
            const double h = 1e-6 * (1.0 + norm(x));
            Eigen::VectorXd fd(n);
            for (Eigen::Index j = 0; j < n; ++j) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
                e(j) = h;
                fd(j) = (f_value(p, x + Vector::from_eigen(e)) - f_value(p, x - Vector::from_eigen(e))) / (2.0 * h);
            }
            const Vector g = grad_f(p, x);
            worst_rel = std::max(worst_rel, (fd - g.eigen()).norm() / std::max(norm(g), 1e-12));
        }
        const double op = p.a().matrix().jacobiSvd().singularValues()(0);
        for (int k = 0; k < 200; ++k, ++pairs) {
            const Vector x = gen.vector(p.dim(), 3.0), y = gen.vector(p.dim(), 3.0);
            const double excess = norm(grad_f(p, x) - grad_f(p, y)) - (op * op + 1e-8) * norm(x - y);
            worst_excess = std::max(worst_excess, excess);
        }
    }
    return {worst_rel <= 1e-6 && worst_excess <= 0.0,
            fmt::format("500 points, max relative error {:.2e}; {} pairs, max Lipschitz excess {:.2e}", worst_rel,
                        pairs, worst_excess)};
}

Verdict taxonomy() {
    const TaxonomyReport r = taxonomy_suite(1e-4, 0.25);
    const bool witness = r.raw_witness && *r.raw_witness == 1.0 && std::abs(r.raw_slack - 0.5) <= 1e-12;
    return {r.passed() && witness && std::abs(r.modulus_estimate - 2.0 / 3.0) <= 1e-3,
            fmt::format("k_hat {:.6f} on {} grid points; raw map not QNE (witness {}, slack {:.6f}); "
                        "lambda 0.25 slack {:.2e}",
                        r.modulus_estimate, r.grid_points, r.raw_witness.value_or(NAN), r.raw_slack,
                        r.averaged_slack)};
}

Verdict fejer() {
    const FejerSuiteReport r = fejer_suite(20, 200, 606);
    return {r.passed() && r.instances == 20,
            fmt::format("{} instances, {} of {} steps monitored, max y gap {:.2e}, max v gap {:.2e}", r.instances,
                        r.monitored_steps, r.steps, r.max_y_gap, r.max_v_gap)};
}

Verdict cq_equivalence() {
    Gen gen(707);
    double worst = 0.0;
    for (int inst = 0; inst < 5; ++inst) {
        const SfpProblem p = generate_random_sfp(gen.size(2, 8), gen.size(2, 8), kFamilies[inst % 3], gen.seed());
        const Eigen::MatrixXd a = p.a().matrix();
        const double op = a.jacobiSvd().singularValues()(0);
        const double step = 1.0 / (op * op);
        StepperConfig cfg;
        cfg.fixed_step = step;
        const Stepper stepper(p, preset_cq(), cfg);

        Vector x = gen.vector(p.dim(), 3.0);
        Vector prev = x;
        Eigen::VectorXd direct = x.eigen();
        for (std::size_t k = 1; k <= 100; ++k) {
            Vector next = stepper.step(k, x, prev).x_next;
            prev = x;
            x = next;
            // x <- P_C(x - step A^T (I - P_Q) A x)
            const Eigen::VectorXd ax = a * direct;
            const Eigen::VectorXd pq = p.q().project(Vector::from_eigen(ax)).eigen();
            direct = p.c().project(Vector::from_eigen(direct - step * a.transpose() * (ax - pq))).eigen();
            worst = std::max(worst, (direct - x.eigen()).cwiseAbs().maxCoeff());
        }
    }
    return {worst <= 1e-12, fmt::format("5 instances x 100 steps, max deviation {:.2e}", worst)};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + SFP_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Verdict determinism() {
    const fs::path root = fs::temp_directory_path() / "sfp_acceptance";
    fs::remove_all(root);
    std::size_t compared = 0;
    bool same = true;
    for (const char* name : {"example_s4_table1", "random_box_cq", "explicit_halfspace"}) {
        const std::string config = std::string(SFP_TEST_DATA "/configs/") + name + ".yaml";
        std::string outputs[2];
        for (int k = 0; k < 2; ++k) {
            const fs::path dir = root / std::to_string(k);
            const int code = run_cli("run " + config + " --seed 5 --out " + dir.string());
            if (code != 0 && code != 1) return {false, fmt::format("{} exited with {}", name, code)};
            outputs[k] = slurp(dir / (std::string(name) + ".csv"));
        }
        same = same && !outputs[0].empty() && outputs[0] == outputs[1];
        ++compared;
    }
    return {same, fmt::format("{} configs run twice through the CLI, CSVs {}", compared,
                              same ? "byte-identical" : "differ")};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"convergence on the 5x5 example", convergence},
        {"reference table report", table_report},
        {"projection properties", projections},
        {"gradient oracle", gradient},
        {"mapping taxonomy", taxonomy},
        {"Fejer monitors", fejer},
        {"CQ equivalence", cq_equivalence},
        {"determinism", determinism},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::cout << fmt::format("{} criterion {}: {} | {}\n", v.pass ? "PASS" : "FAIL", index++, name, v.detail);
    }
    return failures == 0 ? 0 : 1;
}
