#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sfp/harness/config.hpp"
#include "sfp/solver.hpp"

namespace sfp::harness {

/// Process exit codes of the CLI.
enum class ExitCode : int { residual_met = 0, max_iter = 1, config_error = 2, divergence = 3, io_error = 4 };

/// residual_met -> 0; max_iter and grad_zero -> 1.
ExitCode exit_code_for(TerminationReason reason);

struct ExperimentResult {
    RunHistory history;
    std::optional<Vector> known_solution;
    /// Per-row values derived from the history; rows = iterates.
    std::vector<std::vector<double>> rows;
    std::optional<double> final_error;  // ||x_last - x*||_inf
    bool diverged = false;
    std::string divergence_message;
    double wall_seconds = 0.0;
    std::string fingerprint;

    std::size_t iterations() const noexcept { return history.steps(); }
    ExitCode exit_code() const;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs the configured experiment. A diverging run is caught and returned
/// with diverged = true and the partial history. Does not touch the filesystem.
ExperimentResult execute(const ProblemConfig& config);

/// One CSV data row per iterate; see emit_csv.
std::vector<std::vector<double>> tabulate(const SfpProblem& problem, const ParameterSchedule& schedule,
                                          const StepperConfig& config, const RunHistory& history);

/// Header line n,x1..xN,f,grad_norm,theta_n,tau_n,res_C,res_Q,res_fix,err_to_solution.
std::string csv_header(std::size_t dim);

/// Writes the CSV (17 significant digits). err_to_solution is empty without
/// a known solution. Throws IoError.
void emit_csv(const ExperimentResult& result, const std::filesystem::path& path);

/// Log10 of the combined residual per iterate as a polyline. Throws IoError.
void emit_svg(const ExperimentResult& result, const std::filesystem::path& path);

/// Executes the config, writing the CSV and SVG named in config.output
/// relative to output_dir. Divergence still writes the partial CSV.
/// Throws IoError when an output cannot be written.
ExperimentResult run_experiment(const ProblemConfig& config, const std::filesystem::path& output_dir);

/// The x1..xN columns of a CSV written by emit_csv. Throws IoError or InvalidInput.
std::vector<Vector> read_csv_iterates(const std::filesystem::path& path);

} // namespace sfp::harness
