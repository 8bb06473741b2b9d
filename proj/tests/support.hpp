#pragma once

// Hand-rolled generators for the property tests. Everything is seeded so a
// failing case can be replayed by its seed.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sfp/hilbert.hpp"

namespace sfp::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal(double sd = 1.0) { return std::normal_distribution<double>(0.0, sd)(rng_); }
    std::size_t size(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    std::uint64_t seed() { return rng_(); }

    Vector vector(std::size_t n, double sd = 1.0) {
        std::vector<double> v(n);
        for (auto& e : v) e = normal(sd);
        return Vector(v);
    }
    Eigen::MatrixXd matrix(std::size_t rows, std::size_t cols) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal();
        return m;
    }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace sfp::testing
