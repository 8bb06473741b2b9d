#include "sfp/hilbert.hpp"

#include <cmath>
#include <string>

#include "sfp/errors.hpp"

namespace sfp {

namespace {

void require_same_dim(const Vector& x, const Vector& y, const char* op) {
    if (x.dim() != y.dim()) {
        throw InvalidInput(std::string(op) + ": dimension mismatch (" + std::to_string(x.dim()) +
                           " vs " + std::to_string(y.dim()) + ")");
    }
}

} // namespace

Vector::Vector(std::span<const double> entries) {
    if (entries.empty()) throw InvalidInput("Vector: dimension must be at least 1");
    v_.resize(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!std::isfinite(entries[i])) {
            throw InvalidInput("Vector: entry " + std::to_string(i) + " is not finite");
        }
        v_(static_cast<Eigen::Index>(i)) = entries[i];
    }
}

Vector::Vector(std::initializer_list<double> entries)
    : Vector(std::span<const double>(entries.begin(), entries.size())) {}

Vector Vector::from_eigen(Eigen::VectorXd v) {
    if (v.size() < 1) throw InvalidInput("Vector: dimension must be at least 1");
    Vector out;
    out.v_ = std::move(v);
    return out;
}

Vector Vector::zeros(std::size_t dim) { return constant(dim, 0.0); }

Vector Vector::constant(std::size_t dim, double value) {
    return from_eigen(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), value));
}

std::vector<double> Vector::to_std() const { return {v_.data(), v_.data() + v_.size()}; }

Vector operator+(const Vector& a, const Vector& b) {
    require_same_dim(a, b, "operator+");
    return Vector::from_eigen(a.v_ + b.v_);
}

Vector operator-(const Vector& a, const Vector& b) {
    require_same_dim(a, b, "operator-");
    return Vector::from_eigen(a.v_ - b.v_);
}

Vector operator*(double s, const Vector& a) { return Vector::from_eigen(s * a.v_); }

double inner_product(const Vector& x, const Vector& y) {
    require_same_dim(x, y, "inner_product");
    return x.eigen().dot(y.eigen());
}

double squared_norm(const Vector& x) { return x.eigen().squaredNorm(); }

double norm(const Vector& x) { return std::sqrt(squared_norm(x)); }

double max_abs_diff(const Vector& x, const Vector& y) {
    require_same_dim(x, y, "max_abs_diff");
    return (x.eigen() - y.eigen()).cwiseAbs().maxCoeff();
}

LinearMap::LinearMap(std::initializer_list<std::initializer_list<double>> rows)
    : LinearMap(std::vector<std::vector<double>>(rows.begin(), rows.end())) {}

LinearMap::LinearMap(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw InvalidInput("LinearMap: needs at least one row and one column");
    }
    const auto ncols = rows.front().size();
    m_.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != ncols) {
            throw InvalidInput("LinearMap: row " + std::to_string(i) + " has " +
                               std::to_string(rows[i].size()) + " entries, expected " +
                               std::to_string(ncols));
        }
        for (std::size_t j = 0; j < ncols; ++j) {
            if (!std::isfinite(rows[i][j])) {
                throw InvalidInput("LinearMap: entry (" + std::to_string(i) + "," +
                                   std::to_string(j) + ") is not finite");
            }
            m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
}

LinearMap::LinearMap(Eigen::MatrixXd matrix) : m_(std::move(matrix)) {
    if (m_.rows() < 1 || m_.cols() < 1) throw InvalidInput("LinearMap: empty matrix");
    if (!m_.allFinite()) throw InvalidInput("LinearMap: non-finite entry");
}

LinearMap LinearMap::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return LinearMap(Eigen::MatrixXd::Identity(n, n));
}

LinearMap LinearMap::diagonal(const Vector& d) {
    return LinearMap(Eigen::MatrixXd(d.eigen().asDiagonal()));
}

std::vector<std::vector<double>> LinearMap::to_rows() const {
    std::vector<std::vector<double>> out(rows(), std::vector<double>(cols()));
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
        for (Eigen::Index j = 0; j < m_.cols(); ++j) out[i][j] = m_(i, j);
    return out;
}

Vector apply(const LinearMap& m, const Vector& x) {
    if (x.dim() != m.cols()) {
        throw InvalidInput("apply: vector has dim " + std::to_string(x.dim()) + ", map expects " +
                           std::to_string(m.cols()));
    }
    return Vector::from_eigen(m.matrix() * x.eigen());
}

Vector apply_adjoint(const LinearMap& m, const Vector& y) {
    if (y.dim() != m.rows()) {
        throw InvalidInput("apply_adjoint: vector has dim " + std::to_string(y.dim()) +
                           ", adjoint expects " + std::to_string(m.rows()));
    }
    return Vector::from_eigen(m.matrix().transpose() * y.eigen());
}

double operator_norm(const LinearMap& m, double tol, int max_iter) {
    if (!(tol > 0.0)) throw InvalidInput("operator_norm: tol must be positive");
    if (max_iter < 1) throw InvalidInput("operator_norm: max_iter must be >= 1");

    const auto& a = m.matrix();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
    double estimate = (a * v).norm();
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = a.transpose() * (a * v);
        const double wn = w.norm();
        if (wn == 0.0) {
            // v lies in the kernel; only the zero map ends up here from the ones start.
            return estimate;
        }
        v = w / wn;
        const double next = (a * v).norm();
        if (std::abs(next - estimate) <= tol * next) return next;
        estimate = next;
    }
    throw NonConvergence("operator_norm: power iteration did not converge within " +
                             std::to_string(max_iter) + " iterations",
                         estimate);
}

} // namespace sfp
