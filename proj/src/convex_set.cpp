#include "sfp/convex_set.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "sfp/errors.hpp"

namespace sfp {

namespace {

constexpr std::array<std::pair<SetKind, std::string_view>, 7> kKindNames{{
    {SetKind::box, "box"},
    {SetKind::ball, "ball"},
    {SetKind::halfspace, "halfspace"},
    {SetKind::hyperplane, "hyperplane"},
    {SetKind::singleton, "singleton"},
    {SetKind::affine_nullspace, "affine_nullspace"},
    {SetKind::whole_space, "whole_space"},
}};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_nonzero_normal(const Vector& a, const char* who) {
    if (squared_norm(a) == 0.0) throw InvalidInput(std::string(who) + ": normal vector must be nonzero");
}

} // namespace

std::string_view to_string(SetKind kind) {
    for (auto [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<SetKind> set_kind_from_string(std::string_view name) {
    for (auto [k, n] : kKindNames)
        if (n == name) return k;
    return std::nullopt;
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
    if (lower.dim() != upper.dim()) throw InvalidInput("box: lower and upper differ in dimension");
    for (std::size_t i = 0; i < lower.dim(); ++i) {
        if (lower[i] > upper[i]) {
            throw InvalidInput("box: lower > upper in component " + std::to_string(i));
        }
    }
    const auto dim = lower.dim();
    return {Box{std::move(lower), std::move(upper)}, dim};
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball: radius must be positive");
    const auto dim = center.dim();
    return {Ball{std::move(center), radius}, dim};
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
    require_nonzero_normal(normal, "halfspace");
    if (!std::isfinite(offset)) throw InvalidInput("halfspace: offset must be finite");
    const auto dim = normal.dim();
    return {Halfspace{std::move(normal), offset}, dim};
}

ConvexSet ConvexSet::hyperplane(Vector normal, double offset) {
    require_nonzero_normal(normal, "hyperplane");
    if (!std::isfinite(offset)) throw InvalidInput("hyperplane: offset must be finite");
    const auto dim = normal.dim();
    return {Hyperplane{std::move(normal), offset}, dim};
}

ConvexSet ConvexSet::singleton(Vector point) {
    const auto dim = point.dim();
    return {Singleton{std::move(point)}, dim};
}

ConvexSet ConvexSet::affine_nullspace(LinearMap m, std::optional<double> rank_tol) {
    const auto& a = m.matrix();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double largest = sv.size() > 0 ? sv(0) : 0.0;
    const double tol = rank_tol.value_or(1e-10 * largest);
    if (!(tol >= 0.0)) throw InvalidInput("affine_nullspace: rank_tol must be nonnegative");

    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > tol) ++rank;
    const Eigen::Index n = a.cols();
    Eigen::MatrixXd basis = svd.matrixV().rightCols(n - rank);

    const auto dim = m.cols();
    return {AffineNullspace{std::move(m), tol, std::move(basis)}, dim};
}

ConvexSet ConvexSet::whole_space(std::size_t dim) {
    if (dim < 1) throw InvalidInput("whole_space: dimension must be at least 1");
    return {WholeSpace{}, dim};
}

SetKind ConvexSet::kind() const noexcept {
    return std::visit(overloaded{
                          [](const Box&) { return SetKind::box; },
                          [](const Ball&) { return SetKind::ball; },
                          [](const Halfspace&) { return SetKind::halfspace; },
                          [](const Hyperplane&) { return SetKind::hyperplane; },
                          [](const Singleton&) { return SetKind::singleton; },
                          [](const AffineNullspace&) { return SetKind::affine_nullspace; },
                          [](const WholeSpace&) { return SetKind::whole_space; },
                      },
                      params_);
}

Vector ConvexSet::project(const Vector& x) const {
    if (x.dim() != dim_) {
        throw InvalidInput("project: vector has dim " + std::to_string(x.dim()) + ", set has dim " +
                           std::to_string(dim_));
    }
    return std::visit(
        overloaded{
            [&](const Box& b) {
                return Vector::from_eigen(x.eigen().cwiseMax(b.lower.eigen()).cwiseMin(b.upper.eigen()));
            },
            [&](const Ball& b) {
                const Vector d = x - b.center;
                const double r = norm(d);
                if (r <= b.radius) return x;
                return b.center + (b.radius / r) * d;
            },
            [&](const Halfspace& h) {
                const double excess = inner_product(h.normal, x) - h.offset;
                if (excess <= 0.0) return x;
                return x - (excess / squared_norm(h.normal)) * h.normal;
            },
            [&](const Hyperplane& h) {
                const double excess = inner_product(h.normal, x) - h.offset;
                return x - (excess / squared_norm(h.normal)) * h.normal;
            },
            [&](const Singleton& s) { return s.point; },
            [&](const AffineNullspace& a) {
                if (a.basis.cols() == 0) return Vector::zeros(dim_);
                return Vector::from_eigen(a.basis * (a.basis.transpose() * x.eigen()));
            },
            [&](const WholeSpace&) { return x; },
        },
        params_);
}

double membership_residual(const ConvexSet& set, const Vector& x) { return norm(x - set.project(x)); }

CharacterizationReport check_projection_characterization(const ConvexSet& set, const Vector& x,
                                                         std::size_t samples, std::uint64_t seed,
                                                         double scale) {
    if (samples < 1) throw InvalidInput("check_projection_characterization: samples must be >= 1");
    const Vector z = set.project(x);
    const Vector r = x - z;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, scale);
    Eigen::VectorXd raw(static_cast<Eigen::Index>(set.dim()));

    CharacterizationReport report{-std::numeric_limits<double>::infinity(), samples, seed};
    for (std::size_t s = 0; s < samples; ++s) {
        for (Eigen::Index i = 0; i < raw.size(); ++i) raw(i) = x.eigen()(i) + gauss(rng);
        const Vector y = set.project(Vector::from_eigen(raw));
        report.max_violation = std::max(report.max_violation, inner_product(r, y - z));
    }
    return report;
}

} // namespace sfp
