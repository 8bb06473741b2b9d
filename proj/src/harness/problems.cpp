#include "sfp/harness/problems.hpp"

#include <cmath>
#include <string>

#include "sfp/errors.hpp"
#include "sfp/mapping.hpp"

namespace sfp::harness {

namespace {

Eigen::VectorXd gaussian(std::size_t n, std::mt19937_64& rng, double sd = 1.0) {
    std::normal_distribution<double> g(0.0, sd);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g(rng);
    return v;
}

Eigen::VectorXd unit_direction(std::size_t n, std::mt19937_64& rng) {
    Eigen::VectorXd v = gaussian(n, rng);
    while (v.norm() == 0.0) v = gaussian(n, rng);
    return v / v.norm();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Returns (C, point in C).
std::pair<ConvexSet, Eigen::VectorXd> planted_set(SetFamily family, std::size_t n, std::mt19937_64& rng) {
    switch (family) {
        case SetFamily::box: {
            Eigen::VectorXd lo(n), hi(n), x(n);
            for (std::size_t i = 0; i < n; ++i) {
                lo(i) = -1.0 - uniform(rng, 0.0, 1.0);
                hi(i) = 1.0 + uniform(rng, 0.0, 1.0);
                x(i) = uniform(rng, lo(i), hi(i));
            }
            return {ConvexSet::box(Vector::from_eigen(lo), Vector::from_eigen(hi)), x};
        }
        case SetFamily::ball: {
            const Eigen::VectorXd c = gaussian(n, rng);
            const double r = uniform(rng, 0.5, 2.0);
            const Eigen::VectorXd x = c + uniform(rng, 0.0, 1.0) * r * unit_direction(n, rng);
            return {ConvexSet::ball(Vector::from_eigen(c), r), x};
        }
        case SetFamily::halfspace: {
            const Eigen::VectorXd a = unit_direction(n, rng);
            const Eigen::VectorXd x = gaussian(n, rng);
            const double b = a.dot(x) + uniform(rng, 0.0, 1.0);
            return {ConvexSet::halfspace(Vector::from_eigen(a), b), x};
        }
    }
    throw InvalidInput("unknown set family");
}

// A set of the family containing the given point.
ConvexSet set_containing(SetFamily family, const Eigen::VectorXd& p, std::mt19937_64& rng) {
    const auto n = static_cast<std::size_t>(p.size());
    switch (family) {
        case SetFamily::box: {
            Eigen::VectorXd lo(n), hi(n);
            for (std::size_t i = 0; i < n; ++i) {
                lo(i) = p(i) - uniform(rng, 0.1, 1.0);
                hi(i) = p(i) + uniform(rng, 0.1, 1.0);
            }
            return ConvexSet::box(Vector::from_eigen(lo), Vector::from_eigen(hi));
        }
        case SetFamily::ball: {
            const double r = uniform(rng, 0.5, 2.0);
            const Eigen::VectorXd c = p + uniform(rng, 0.0, 0.9) * r * unit_direction(n, rng);
            return ConvexSet::ball(Vector::from_eigen(c), r);
        }
        case SetFamily::halfspace: {
            const Eigen::VectorXd a = unit_direction(n, rng);
            return ConvexSet::halfspace(Vector::from_eigen(a), a.dot(p) + uniform(rng, 0.0, 1.0));
        }
    }
    throw InvalidInput("unknown set family");
}

} // namespace

LinearMap example_s4_matrix_s() {
    constexpr double t = 1.0 / 3.0;
    return LinearMap({{t, t, 0, 0, 0}, {0, t, t, 0, 0}, {0, 0, t, t, 0}, {0, 0, 0, t, t}, {0, 0, 0, 0, 1}});
}

LinearMap printed_matrix_a() {
    return LinearMap({{1, 1, 2, 2, 1}, {0, 2, 1, 5, -1}, {1, 1, 0, 4, 1}, {2, 0, 3, 1, 5}, {2, 2, 3, 6, 1}});
}

LinearMap example_s4_matrix_a() {
    return LinearMap({{1, 1, 2, 2, 1}, {0, 2, 1, 5, -1}, {1, 1, 0, 0, 1}, {2, 0, 3, 1, 5}, {2, 2, 3, 6, 1}});
}

Vector example_s4_b() { return Vector{43.0 / 16.0, 2.0, 19.0 / 16.0, 51.0 / 8.0, 41.0 / 8.0}; }

Vector example_s4_solution() { return Vector{1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0, 1.0}; }

SfpProblem build_example_s4() {
    const LinearMap s = example_s4_matrix_s();
    const LinearMap fixed_points_of_s(Eigen::MatrixXd::Identity(5, 5) - s.matrix());
    return SfpProblem(example_s4_matrix_a(), ConvexSet::affine_nullspace(fixed_points_of_s),
                      ConvexSet::singleton(example_s4_b()), linear_mapping(s, {example_s4_solution()}),
                      zero_mapping(5), example_s4_solution());
}

std::string_view to_string(SetFamily f) {
    switch (f) {
        case SetFamily::box: return "box";
        case SetFamily::ball: return "ball";
        case SetFamily::halfspace: return "halfspace";
    }
    return "?";
}

std::optional<SetFamily> set_family_from_string(std::string_view s) {
    if (s == "box") return SetFamily::box;
    if (s == "ball") return SetFamily::ball;
    if (s == "halfspace") return SetFamily::halfspace;
    return std::nullopt;
}

SfpProblem generate_random_sfp(std::size_t dim1, std::size_t dim2, SetFamily family, std::uint64_t seed,
                               RandomSfpOptions options) {
    if (dim1 < 1 || dim2 < 1) throw InvalidInput("generate_random_sfp: dimensions must be >= 1");
    std::mt19937_64 rng(seed);

    Eigen::MatrixXd a(static_cast<Eigen::Index>(dim2), static_cast<Eigen::Index>(dim1));
    std::normal_distribution<double> g(0.0, 1.0);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = g(rng);

    auto [c, planted] = planted_set(family, dim1, rng);
    ConvexSet q = set_containing(family, a * planted, rng);

    std::optional<MappingSpec> s;
    if (options.with_mapping) {
        const Eigen::VectorXd w = unit_direction(dim1, rng);
        const Eigen::MatrixXd h =
            Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim1), static_cast<Eigen::Index>(dim1)) -
            2.0 * w * w.transpose();
        const double scale = uniform(rng, -2.0, 1.0);
        const Vector p = Vector::from_eigen(planted);
        const Eigen::MatrixXd r = scale * h;
        s = MappingSpec(
            "planted-reflection", dim1,
            [p, r](const Vector& x) { return p + Vector::from_eigen(r * (x - p).eigen()); },
            MappingClass::generic(), {p});
    }

    return SfpProblem(LinearMap(std::move(a)), std::move(c), std::move(q), std::move(s), zero_mapping(dim1),
                      Vector::from_eigen(planted));
}

ConvexSet random_convex_set(SetKind kind, std::size_t dim, std::mt19937_64& rng) {
    switch (kind) {
        case SetKind::box: return planted_set(SetFamily::box, dim, rng).first;
        case SetKind::ball: return planted_set(SetFamily::ball, dim, rng).first;
        case SetKind::halfspace: return planted_set(SetFamily::halfspace, dim, rng).first;
        case SetKind::hyperplane: {
            const Eigen::VectorXd a = gaussian(dim, rng);
            return ConvexSet::hyperplane(Vector::from_eigen(a), uniform(rng, -1.0, 1.0));
        }
        case SetKind::singleton: return ConvexSet::singleton(Vector::from_eigen(gaussian(dim, rng)));
        case SetKind::affine_nullspace: {
            // Rank-deficient M so the null space is nontrivial.
            const auto rows = std::max<std::size_t>(1, dim / 2);
            Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
            for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) = gaussian(dim, rng).transpose();
            return ConvexSet::affine_nullspace(LinearMap(std::move(m)));
        }
        case SetKind::whole_space: return ConvexSet::whole_space(dim);
    }
    throw InvalidInput("unknown set kind");
}

} // namespace sfp::harness
