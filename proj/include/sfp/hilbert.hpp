#pragma once

// Finite-dimensional real inner-product space primitives.
//
// Vector stands in for an element of H1 or H2, LinearMap for a bounded linear
// operator between them. Both are immutable value types backed by Eigen.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sfp {

class Vector {
public:
    /// Throws InvalidInput if `entries` is empty or holds a non-finite value.
    explicit Vector(std::span<const double> entries);
    Vector(std::initializer_list<double> entries);
    explicit Vector(const std::vector<double>& entries)
        : Vector(std::span<const double>(entries)) {}

    /// Wraps an Eigen vector produced by arithmetic. Only the dimension is
    /// checked; finiteness of intermediate results is the caller's concern.
    static Vector from_eigen(Eigen::VectorXd v);

    static Vector zeros(std::size_t dim);
    static Vector constant(std::size_t dim, double value);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
    double operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }
    const Eigen::VectorXd& eigen() const noexcept { return v_; }
    std::vector<double> to_std() const;
    bool all_finite() const noexcept { return v_.allFinite(); }

    friend Vector operator+(const Vector& a, const Vector& b);
    friend Vector operator-(const Vector& a, const Vector& b);
    friend Vector operator*(double s, const Vector& a);
    friend Vector operator*(const Vector& a, double s) { return s * a; }
    friend bool operator==(const Vector& a, const Vector& b) noexcept {
        return a.v_.size() == b.v_.size() && a.v_ == b.v_;
    }

private:
    Vector() = default;
    Eigen::VectorXd v_;
};

double inner_product(const Vector& x, const Vector& y);
double norm(const Vector& x);
double squared_norm(const Vector& x);
double max_abs_diff(const Vector& x, const Vector& y);

/// Dense real matrix with forward and adjoint application.
class LinearMap {
public:
    /// Row-major rows; all rows must have equal, positive length and finite entries.
    explicit LinearMap(const std::vector<std::vector<double>>& rows);
    explicit LinearMap(Eigen::MatrixXd matrix);
    LinearMap(std::initializer_list<std::initializer_list<double>> rows);

    static LinearMap identity(std::size_t dim);
    static LinearMap diagonal(const Vector& d);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(m_.cols()); }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }
    std::vector<std::vector<double>> to_rows() const;

    friend bool operator==(const LinearMap& a, const LinearMap& b) noexcept {
        return a.m_.rows() == b.m_.rows() && a.m_.cols() == b.m_.cols() && a.m_ == b.m_;
    }

private:
    Eigen::MatrixXd m_;
};

Vector apply(const LinearMap& m, const Vector& x);
Vector apply_adjoint(const LinearMap& m, const Vector& y);

/// Largest singular value by power iteration on M*M, started from the
/// normalized all-ones vector. Stops when successive estimates agree to
/// `tol` relative; throws NonConvergence with the last estimate otherwise.
double operator_norm(const LinearMap& m, double tol = 1e-12, int max_iter = 10000);

} // namespace sfp
