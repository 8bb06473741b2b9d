#include "sfp/harness/properties.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "sfp/harness/problems.hpp"
#include "sfp/mapping.hpp"
#include "sfp/schedule.hpp"
#include "sfp/solver.hpp"

namespace sfp::harness {

namespace {

constexpr std::array<SetKind, 7> kAllKinds{SetKind::box,       SetKind::ball,      SetKind::halfspace,
                                           SetKind::hyperplane, SetKind::singleton, SetKind::affine_nullspace,
                                           SetKind::whole_space};
constexpr std::array<SetFamily, 3> kFamilies{SetFamily::box, SetFamily::ball, SetFamily::halfspace};

Vector gaussian_point(std::size_t dim, std::mt19937_64& rng, double spread) {
    std::normal_distribution<double> g(0.0, spread);
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g(rng);
    return Vector::from_eigen(std::move(v));
}

std::size_t draw_dim(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double neg_inf() { return -std::numeric_limits<double>::infinity(); }

} // namespace

double ProjectionSuiteRow::worst() const {
    return std::max({idempotence, nonexpansive, firmly_nonexpansive, characterization});
}

std::vector<ProjectionSuiteRow> projection_suite(std::size_t samples, std::uint64_t seed) {
    std::vector<ProjectionSuiteRow> rows;
    std::mt19937_64 rng(seed);
    for (SetKind kind : kAllKinds) {
        const auto start = std::chrono::steady_clock::now();
        ProjectionSuiteRow row{kind, samples, neg_inf(), neg_inf(), neg_inf(), neg_inf()};
        for (std::size_t i = 0; i < samples; ++i) {
            const std::size_t dim = draw_dim(rng, 1, 6);
            const ConvexSet set = random_convex_set(kind, dim, rng);
            const Vector x = gaussian_point(dim, rng, 3.0);
            const Vector y = gaussian_point(dim, rng, 3.0);
            const Vector px = set.project(x);
            const Vector py = set.project(y);

            row.idempotence = std::max(row.idempotence, max_abs_diff(set.project(px), px));
            row.nonexpansive = std::max(row.nonexpansive, norm(px - py) - norm(x - y));
            row.firmly_nonexpansive =
                std::max(row.firmly_nonexpansive, squared_norm(px - py) - inner_product(x - y, px - py));
            // py is a point of the set.
            row.characterization = std::max(row.characterization, inner_product(x - px, py - px));
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(row);
    }
    return rows;
}

GradientSuiteReport gradient_suite(std::size_t instances, std::size_t points, std::size_t pairs,
                                   std::uint64_t seed) {
    constexpr double h = 1e-6;
    GradientSuiteReport report;
    report.instances = instances;
    report.max_lipschitz_excess = neg_inf();
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < instances; ++k) {
        const std::size_t dim1 = draw_dim(rng, 2, 6);
        const std::size_t dim2 = draw_dim(rng, 2, 6);
        const SfpProblem problem = generate_random_sfp(dim1, dim2, kFamilies[k % kFamilies.size()], rng());

        for (std::size_t i = 0; i < points; ++i) {
            const Vector x = gaussian_point(dim1, rng, 3.0);
            const Vector g = grad_f(problem, x);
            Eigen::VectorXd fd(static_cast<Eigen::Index>(dim1));
            for (std::size_t j = 0; j < dim1; ++j) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim1));
                e(static_cast<Eigen::Index>(j)) = h;
                const Vector step = Vector::from_eigen(e);
                fd(static_cast<Eigen::Index>(j)) = (f_value(problem, x + step) - f_value(problem, x - step)) / (2 * h);
            }
            const double rel = (fd - g.eigen()).norm() / std::max(norm(g), 1e-12);
            report.max_relative_error = std::max(report.max_relative_error, rel);
            ++report.points;
        }

        const double lip = std::pow(operator_norm(problem.a()), 2) + 1e-8;
        const std::size_t share = pairs / instances + (k < pairs % instances ? 1 : 0);
        for (std::size_t i = 0; i < share; ++i) {
            const Vector x = gaussian_point(dim1, rng, 3.0);
            const Vector y = gaussian_point(dim1, rng, 3.0);
            const double excess = norm(grad_f(problem, x) - grad_f(problem, y)) - lip * norm(x - y);
            report.max_lipschitz_excess = std::max(report.max_lipschitz_excess, excess);
            ++report.pairs;
        }
    }
    return report;
}

bool TaxonomyReport::passed() const {
    return std::abs(modulus_estimate - 2.0 / 3.0) <= 1e-3 && raw_witness && *raw_witness == 1.0 &&
           std::abs(raw_slack - 0.5) <= 1e-12 && averaged_slack <= kPropertySlack;
}

TaxonomyReport taxonomy_suite(double spacing, double lambda) {
    const MappingSpec t = piecewise_demicontractive();
    const Vector p{7.0 / 8.0};
    TaxonomyReport report;
    report.grid_points = static_cast<std::size_t>(std::llround(1.0 / spacing)) + 1;
    report.averaged_lambda = lambda;
    const DomainSampler grid = grid_sampler_1d(0.0, 1.0, report.grid_points);

    report.modulus_estimate = estimate_demicontractive_modulus(t, p, grid, report.grid_points, 0);
    const auto raw = verify_quasi_nonexpansive(t, p, grid, report.grid_points, 0);
    report.raw_slack = raw.max_slack;
    if (raw.witness) report.raw_witness = (*raw.witness)[0];
    const auto avg = verify_quasi_nonexpansive(average(t, lambda).as_mapping(), p, grid, report.grid_points, 0);
    report.averaged_slack = avg.max_slack;
    return report;
}

FejerSuiteReport fejer_suite(std::size_t instances, std::size_t steps, std::uint64_t seed) {
    FejerSuiteReport report;
    report.instances = instances;
    report.max_y_gap = neg_inf();
    report.max_v_gap = neg_inf();
    std::mt19937_64 rng(seed);

    StepperConfig config;
    config.mode = CompositionMode::proof_form;
    config.stopping.max_iter = steps;
    const ParameterSchedule schedule = preset_paper_s4();

    for (std::size_t k = 0; k < instances; ++k) {
        const std::size_t dim1 = draw_dim(rng, 2, 6);
        const std::size_t dim2 = draw_dim(rng, 2, 6);
        const SfpProblem problem =
            generate_random_sfp(dim1, dim2, kFamilies[k % kFamilies.size()], rng(), {.with_mapping = true});
        const Vector x0 = gaussian_point(dim1, rng, 3.0);

        RunHistory history;
        try {
            history = run(problem, schedule, config, x0);
        } catch (const DivergenceError& e) {
            history = e.partial();
        }
        for (const StepRecord& r : history.records) {
            ++report.steps;
            if (!r.fejer_monitor_applies || !r.fejer_y_gap || !r.fejer_v_gap) continue;
            ++report.monitored_steps;
            report.max_y_gap = std::max(report.max_y_gap, *r.fejer_y_gap);
            report.max_v_gap = std::max(report.max_v_gap, *r.fejer_v_gap);
        }
    }
    return report;
}

} // namespace sfp::harness
