#include "sfp/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sfp/errors.hpp"
#include "sfp/numeric_text.hpp"

namespace sfp::harness {

namespace {

// Column offsets after n and x1..xN.
enum Column : std::size_t { kF, kGrad, kTheta, kTau, kResC, kResQ, kResFix, kErr, kTrailing };

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace

ExitCode exit_code_for(TerminationReason reason) {
    return reason == TerminationReason::residual_met ? ExitCode::residual_met : ExitCode::max_iter;
}

ExitCode ExperimentResult::exit_code() const {
    return diverged ? ExitCode::divergence : exit_code_for(history.termination);
}

std::vector<std::vector<double>> tabulate(const SfpProblem& problem, const ParameterSchedule& schedule,
                                          const StepperConfig& config, const RunHistory& history) {
    const std::size_t dim = problem.dim();
    std::vector<std::vector<double>> rows;
    rows.reserve(history.iterates.size());
    for (std::size_t k = 0; k < history.iterates.size(); ++k) {
        const Vector& x = history.iterates[k];
        std::vector<double> row(dim + kTrailing, 0.0);
        for (std::size_t i = 0; i < dim; ++i) row[i] = x[i];
        double* t = row.data() + dim;

        const Vector ax = apply(problem.a(), x);
        const Vector rq = ax - problem.q().project(ax);
        t[kF] = 0.5 * squared_norm(rq);
        t[kGrad] = norm(apply_adjoint(problem.a(), rq));
        if (k > 0) {
            t[kTheta] = history.records[k - 1].theta;
            t[kTau] = history.records[k - 1].tau;
        }
        t[kResC] = membership_residual(problem.c(), x);
        t[kResQ] = norm(rq);
        if (problem.s()) {
            const double lambda = effective_parameters(schedule, config, std::max<std::size_t>(k, 1)).lambda;
            const Vector sx = (1.0 - lambda) * x + lambda * (*problem.s())(x);
            t[kResFix] = norm(sx - x);
        }
        t[kErr] = problem.known_solution() ? max_abs_diff(x, *problem.known_solution()) : std::nan("");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_header(std::size_t dim) {
    std::string h = "n";
    for (std::size_t i = 1; i <= dim; ++i) h += ",x" + std::to_string(i);
    return h + ",f,grad_norm,theta_n,tau_n,res_C,res_Q,res_fix,err_to_solution";
}

ExperimentResult execute(const ProblemConfig& config) {
    const SfpProblem problem = build_problem(config);
    auto [x0, x1] = start_points(config, problem.dim());

    ExperimentResult result;
    result.fingerprint = config_fingerprint(config);
    result.known_solution = problem.known_solution();

    const auto start = std::chrono::steady_clock::now();
    try {
        result.history = run(problem, config.schedule, config.stepper, x0, x1);
    } catch (const DivergenceError& e) {
        result.history = e.partial();
        result.diverged = true;
        result.divergence_message = e.what();
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    result.rows = tabulate(problem, config.schedule, config.stepper, result.history);
    if (result.known_solution && result.history.last().all_finite())
        result.final_error = max_abs_diff(result.history.last(), *result.known_solution);
    return result;
}

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path) {
    if (result.rows.empty()) throw InvalidInput("emit_csv: result has no rows");
    const std::size_t dim = result.rows.front().size() - kTrailing;
    std::string text = csv_header(dim) + "\n";
    for (std::size_t k = 0; k < result.rows.size(); ++k) {
        const auto& row = result.rows[k];
        text += std::to_string(k);
        for (std::size_t i = 0; i + 1 < row.size(); ++i) text += "," + format_real(row[i]);
        text += ",";
        if (result.known_solution) text += format_real(row.back());
        text += "\n";
    }
    write_file(path, text);
}

void emit_svg(const ExperimentResult& result, const std::filesystem::path& path) {
    constexpr double kWidth = 640, kHeight = 400, kMargin = 40;
    if (result.rows.empty()) throw InvalidInput("emit_svg: result has no rows");
    const std::size_t dim = result.rows.front().size() - kTrailing;

    std::vector<double> logs;
    for (const auto& row : result.rows) {
        const double r = std::max({row[dim + kResC], row[dim + kResQ], row[dim + kResFix]});
        logs.push_back(std::isfinite(r) ? std::log10(std::max(r, 1e-300)) : 300.0);
    }
    double lo = *std::min_element(logs.begin(), logs.end());
    double hi = *std::max_element(logs.begin(), logs.end());
    if (hi - lo < 1e-9) hi = lo + 1.0;
    const double span_n = std::max<double>(1.0, static_cast<double>(logs.size() - 1));

    std::string points;
    for (std::size_t k = 0; k < logs.size(); ++k) {
        const double px = kMargin + (kWidth - 2 * kMargin) * static_cast<double>(k) / span_n;
        const double py = kMargin + (kHeight - 2 * kMargin) * (hi - logs[k]) / (hi - lo);
        points += fmt::format("{}{:.2f},{:.2f}", k ? " " : "", px, py);
    }
    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">log10 residual vs n "
        "({3} iterations)</text>\n"
        "<text x=\"4\" y=\"{2}\" font-family=\"sans-serif\" font-size=\"11\">{4:.1f}</text>\n"
        "<text x=\"4\" y=\"{5}\" font-family=\"sans-serif\" font-size=\"11\">{6:.1f}</text>\n"
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{7}\"/>\n"
        "</svg>\n",
        kWidth, kHeight, kMargin, logs.size() - 1, hi, kHeight - kMargin, lo, points);
    write_file(path, svg);
}

ExperimentResult run_experiment(const ProblemConfig& config, const std::filesystem::path& output_dir) {
    ExperimentResult result = execute(config);
    if (config.output.csv) emit_csv(result, output_dir / *config.output.csv);
    if (config.output.svg) emit_svg(result, output_dir / *config.output.svg);
    return result;
}

std::vector<Vector> read_csv_iterates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("csv '" + path.string() + "' is empty");
    const auto header = split(line, ',');
    std::size_t dim = 0;
    while (dim + 1 < header.size() && header[dim + 1] == "x" + std::to_string(dim + 1)) ++dim;
    if (header.empty() || header[0] != "n" || dim == 0) throw InvalidInput("csv header lacks n,x1.. columns");

    std::vector<Vector> iterates;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != header.size())
            throw InvalidInput(fmt::format("csv line {}: expected {} fields, got {}", line_no, header.size(),
                                           fields.size()));
        std::vector<double> x(dim);
        for (std::size_t i = 0; i < dim; ++i) x[i] = parse_real(fields[i + 1]);
        iterates.emplace_back(x);
    }
    return iterates;
}

} // namespace sfp::harness
