#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "sfp/hilbert.hpp"

namespace sfp {

enum class SetKind { box, ball, halfspace, hyperplane, singleton, affine_nullspace, whole_space };

std::string_view to_string(SetKind kind);
std::optional<SetKind> set_kind_from_string(std::string_view name);

/// A nonempty closed convex subset of R^n with an exact metric projection.
/// Immutable; the constructors below validate that the set is nonempty.
class ConvexSet {
public:
    struct Box {
        Vector lower;
        Vector upper;
    };
    struct Ball {
        Vector center;
        double radius;
    };
    /// {x : <normal, x> <= offset}
    struct Halfspace {
        Vector normal;
        double offset;
    };
    /// {x : <normal, x> = offset}
    struct Hyperplane {
        Vector normal;
        double offset;
    };
    struct Singleton {
        Vector point;
    };
    /// {x : M x = 0}. `basis` holds an orthonormal basis of null(M) as columns
    /// (possibly zero columns when the null space is trivial).
    struct AffineNullspace {
        LinearMap map;
        double rank_tol;
        Eigen::MatrixXd basis;
    };
    struct WholeSpace {};

    using Params = std::variant<Box, Ball, Halfspace, Hyperplane, Singleton, AffineNullspace, WholeSpace>;

    static ConvexSet box(Vector lower, Vector upper);
    static ConvexSet ball(Vector center, double radius);
    static ConvexSet halfspace(Vector normal, double offset);
    static ConvexSet hyperplane(Vector normal, double offset);
    static ConvexSet singleton(Vector point);
    /// rank_tol defaults to 1e-10 * ||M||. Singular values at or below it
    /// count as zero when extracting the null-space basis.
    static ConvexSet affine_nullspace(LinearMap m, std::optional<double> rank_tol = std::nullopt);
    static ConvexSet whole_space(std::size_t dim);

    SetKind kind() const noexcept;
    std::size_t dim() const noexcept { return dim_; }
    const Params& params() const noexcept { return params_; }

    Vector project(const Vector& x) const;

private:
    ConvexSet(Params p, std::size_t dim) : params_(std::move(p)), dim_(dim) {}
    Params params_;
    std::size_t dim_;
};

inline Vector project(const ConvexSet& set, const Vector& x) { return set.project(x); }

/// ||x - P(x)||; zero exactly when x belongs to the set.
double membership_residual(const ConvexSet& set, const Vector& x);

struct CharacterizationReport {
    /// max over samples y of <x - Px, y - Px>; nonpositive when the
    /// variational characterization of the projection holds.
    double max_violation = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool holds(double slack = 1e-10) const { return max_violation <= slack; }
};

/// Draws `samples` points of the set by projecting Gaussian ambient points
/// (centered at x, unit-free spread `scale`) and evaluates the variational
/// inequality at each.
CharacterizationReport check_projection_characterization(const ConvexSet& set, const Vector& x,
                                                         std::size_t samples, std::uint64_t seed,
                                                         double scale = 3.0);

} // namespace sfp
