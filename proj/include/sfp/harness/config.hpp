#pragma once

// Experiment configuration: a YAML document with sections problem, schedule,
// stepper, start, output. See README for the full key list.
//
// Canonical form: serialize_config writes every field in a fixed order with
// 17-significant-digit numbers, so equal configs give byte-identical text and
// config_fingerprint is stable across runs.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sfp/convex_set.hpp"
#include "sfp/harness/problems.hpp"
#include "sfp/hilbert.hpp"
#include "sfp/schedule.hpp"
#include "sfp/solver.hpp"

namespace sfp::harness {

/// Parse or validation failure, with the dotted path of the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct BuiltinExampleS4 {
    friend bool operator==(const BuiltinExampleS4&, const BuiltinExampleS4&) = default;
};

struct RandomProblemSpec {
    std::size_t dim1 = 5;
    std::size_t dim2 = 5;
    SetFamily family = SetFamily::box;
    std::uint64_t seed = 0;
    bool with_mapping = false;
    friend bool operator==(const RandomProblemSpec&, const RandomProblemSpec&) = default;
};

struct ExplicitProblemSpec {
    LinearMap a;
    ConvexSet c;
    ConvexSet q;
    std::optional<std::string> s;  // mapping name
    std::string g = "zero";
    std::optional<Vector> known_solution;
};

using ProblemSource = std::variant<BuiltinExampleS4, RandomProblemSpec, ExplicitProblemSpec>;

struct OutputSpec {
    std::optional<std::string> csv;
    std::optional<std::string> svg;
};

struct ProblemConfig {
    ProblemSource problem = BuiltinExampleS4{};
    ParameterSchedule schedule;
    StepperConfig stepper;
    std::optional<Vector> x0;  // defaults to all ones
    std::optional<Vector> x1;
    OutputSpec output;
};

/// Throws ConfigError (with field path) on malformed text or when the
/// described problem violates an SfpProblem invariant.
ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);

std::string serialize_config(const ProblemConfig& config);
/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_fingerprint(const ProblemConfig& config);

/// The 5x5 example with a named preset: "paper-s4", "table-1", "cq" or
/// "cq-adaptive" (the cq schedule with the self-adaptive step variant).
/// Throws InvalidInput for other names.
ProblemConfig example_s4_config(std::string_view preset, CompositionMode mode);

SfpProblem build_problem(const ProblemConfig& config);
/// x0 (default all ones) and x1 (default x0).
std::pair<Vector, std::optional<Vector>> start_points(const ProblemConfig& config, std::size_t dim);

} // namespace sfp::harness
