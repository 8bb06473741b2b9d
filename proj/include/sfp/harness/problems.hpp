#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "sfp/convex_set.hpp"
#include "sfp/hilbert.hpp"
#include "sfp/solver.hpp"

namespace sfp::harness {

/// The 5x5 linear-system instance: C = Fix(S) realized as null(I - S),
/// Q = {b}, g = 0, known solution (1/16, 1/8, 1/4, 1/2, 1).
///
/// The published A has a 4 in row 3, column 4, which makes A x* differ from b
/// by 2 in that row. We use 0 there so that x* is a solution; the published
/// matrix is kept as printed_matrix_a().
SfpProblem build_example_s4();

LinearMap example_s4_matrix_s();
LinearMap example_s4_matrix_a();
LinearMap printed_matrix_a();
Vector example_s4_b();
Vector example_s4_solution();

enum class SetFamily { box, ball, halfspace };
std::string_view to_string(SetFamily f);
std::optional<SetFamily> set_family_from_string(std::string_view s);

struct RandomSfpOptions {
    /// Attach S(x) = p + c H (x - p) with p the planted point, H a random
    /// Householder reflection and c uniform in [-2, 1]. S is declared generic;
    /// whether S_lambda is quasi-nonexpansive along a run is checked per step.
    bool with_mapping = false;
};

/// A with standard normal entries; a planted point x̂ in C with A x̂ in Q by
/// construction. known_solution is x̂ (a feasible point, not necessarily the
/// limit of any particular run). g = 0.
SfpProblem generate_random_sfp(std::size_t dim1, std::size_t dim2, SetFamily family, std::uint64_t seed,
                               RandomSfpOptions options = {});

/// A random nonempty set of the given kind in R^dim, used by the property suites.
ConvexSet random_convex_set(SetKind kind, std::size_t dim, std::mt19937_64& rng);

} // namespace sfp::harness
