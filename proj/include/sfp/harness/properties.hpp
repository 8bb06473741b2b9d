#pragma once

// Seeded property suites run by `sfp props` and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfp/convex_set.hpp"
#include "sfp/hilbert.hpp"

namespace sfp::harness {

inline constexpr double kPropertySlack = 1e-10;

struct ProjectionSuiteRow {
    SetKind kind;
    std::size_t samples = 0;
    double idempotence = 0.0;          // max |P(Px) - Px|_inf
    double nonexpansive = 0.0;         // max ||Px - Py|| - ||x - y||
    double firmly_nonexpansive = 0.0;  // max ||Px - Py||^2 - <x - y, Px - Py>
    double characterization = 0.0;     // max <x - Px, c - Px> over c in the set
    double seconds = 0.0;

    double worst() const;
    bool passed(double slack = kPropertySlack) const { return worst() <= slack; }
};

/// Each sample draws a fresh set of the kind (dimension 1..6) and two
/// Gaussian points of spread 3.
std::vector<ProjectionSuiteRow> projection_suite(std::size_t samples, std::uint64_t seed);

struct GradientSuiteReport {
    std::size_t instances = 0;
    std::size_t points = 0;
    double max_relative_error = 0.0;   // ||grad_fd - grad|| / max(||grad||, 1e-12)
    std::size_t pairs = 0;
    double max_lipschitz_excess = 0.0;  // max ||grad x - grad y|| - (||A||^2 + 1e-8)||x - y||
    bool passed(double rel_tol = 1e-6) const { return max_relative_error <= rel_tol && max_lipschitz_excess <= 0.0; }
};

/// Central differences with step 1e-6 on random instances (families cycled
/// box, ball, halfspace), plus the Lipschitz bound on random pairs.
GradientSuiteReport gradient_suite(std::size_t instances, std::size_t points, std::size_t pairs,
                                   std::uint64_t seed);

struct TaxonomyReport {
    std::size_t grid_points = 0;
    double modulus_estimate = 0.0;
    double raw_slack = 0.0;
    std::optional<double> raw_witness;
    double averaged_lambda = 0.0;
    double averaged_slack = 0.0;

    bool passed() const;
};

/// The piecewise demicontractive map on a grid of [0,1] with the given spacing:
/// modulus estimate, raw quasi-nonexpansiveness, and the averaged map at lambda.
TaxonomyReport taxonomy_suite(double spacing = 1e-4, double lambda = 0.25);

struct FejerSuiteReport {
    std::size_t instances = 0;
    std::size_t steps = 0;
    std::size_t monitored_steps = 0;  // steps where the hypotheses held
    double max_y_gap = 0.0;           // max ||y - x*|| - ||u - x*|| over monitored steps
    double max_v_gap = 0.0;
    bool passed(double slack = kPropertySlack) const {
        return monitored_steps > 0 && max_y_gap <= slack && max_v_gap <= slack;
    }
};

/// Random instances with an attached planted mapping, default schedule,
/// proof form, `steps` iterations each.
FejerSuiteReport fejer_suite(std::size_t instances, std::size_t steps, std::uint64_t seed);

} // namespace sfp::harness
