#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sfp/hilbert.hpp"

namespace sfp {

/// Declared class of a self-map, from strongest to weakest:
/// contraction(c) ⊂ nonexpansive ⊂ quasi-nonexpansive ⊂ demicontractive(k).
/// Strict pseudocontractions sit alongside demicontractive maps.
struct MappingClass {
    enum class Kind {
        contraction,
        nonexpansive,
        quasi_nonexpansive,
        strictly_pseudocontractive,
        demicontractive,
        generic,
    };

    Kind kind = Kind::generic;
    double modulus = 0.0;  // c for contraction, k for the pseudocontractive kinds

    static MappingClass contraction(double c);
    static MappingClass demicontractive(double k);
    static MappingClass strictly_pseudocontractive(double k);
    static MappingClass nonexpansive() { return {Kind::nonexpansive, 0.0}; }
    static MappingClass quasi_nonexpansive() { return {Kind::quasi_nonexpansive, 0.0}; }
    static MappingClass generic() { return {Kind::generic, 0.0}; }

    bool has_modulus() const noexcept;
    std::string describe() const;
};

/// A self-map on R^dim with a declared class.
///
/// Demiclosedness of I - T at 0 is an analytic assumption the numerics cannot
/// observe; it is carried as a user-supplied flag and never checked.
class MappingSpec {
public:
    using Fn = std::function<Vector(const Vector&)>;

    /// Throws InvalidInput when the modulus is out of [0,1) or a listed fixed
    /// point has residual above 1e-10.
    MappingSpec(std::string name, std::size_t dim, Fn fn, MappingClass cls,
                std::vector<Vector> known_fixed_points = {}, bool demiclosed_assumed = true);

    const std::string& name() const noexcept { return name_; }
    std::size_t dim() const noexcept { return dim_; }
    const MappingClass& mapping_class() const noexcept { return class_; }
    const std::vector<Vector>& known_fixed_points() const noexcept { return fixed_points_; }
    bool demiclosed_assumed() const noexcept { return demiclosed_; }

    Vector operator()(const Vector& x) const;

private:
    std::string name_;
    std::size_t dim_;
    Fn fn_;
    MappingClass class_;
    std::vector<Vector> fixed_points_;
    bool demiclosed_;
};

inline Vector evaluate(const MappingSpec& t, const Vector& x) { return t(x); }

/// S_lambda = (1 - lambda) I + lambda S.
struct AveragedMapping {
    MappingSpec base;
    double lambda;

    Vector operator()(const Vector& x) const;
    /// The averaged map as a MappingSpec, tagged per the averaging rules in `average`.
    MappingSpec as_mapping() const;
};

/// lambda must lie in (0,1]. A demicontractive(k) base averaged with
/// lambda < 1 - k is tagged quasi-nonexpansive; with lambda >= 1 - k it stays
/// demicontractive with modulus (lambda + k - 1) / lambda.
AveragedMapping average(const MappingSpec& t, double lambda);

double fixed_point_residual(const MappingSpec& t, const Vector& x);
double fixed_point_residual(const AveragedMapping& t, const Vector& x);

/// Produces the i-th sample point. Grid samplers use the index, random ones the engine.
using DomainSampler = std::function<Vector(std::size_t index, std::mt19937_64& rng)>;

/// `count` evenly spaced points of [lo, hi] in R^1 (endpoints included).
DomainSampler grid_sampler_1d(double lo, double hi, std::size_t count);
/// Gaussian points around `center` with standard deviation `spread`.
DomainSampler gaussian_sampler(Vector center, double spread);

/// Smallest k >= 0 such that ||Tx - y||^2 <= ||x - y||^2 + k ||x - Tx||^2 on
/// every sampled x with ||x - Tx|| > 1e-12. Below 1 certifies demicontractivity
/// on the sample. Floored at 0; returns 0 if every sample is fixed.
double estimate_demicontractive_modulus(const MappingSpec& t, const Vector& fixed_point,
                                        const DomainSampler& sampler, std::size_t samples,
                                        std::uint64_t seed);

struct QuasiNonexpansiveReport {
    double max_slack = 0.0;  // max of ||Tx - y|| - ||x - y||
    std::optional<Vector> witness;  // sample attaining max_slack
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool certified(double tol = 1e-10) const { return max_slack <= tol; }
};

QuasiNonexpansiveReport verify_quasi_nonexpansive(const MappingSpec& t, const Vector& fixed_point,
                                                  const DomainSampler& sampler, std::size_t samples,
                                                  std::uint64_t seed);

// Built-in mappings.

MappingSpec identity_mapping(std::size_t dim);
/// g == 0, a contraction with modulus 0 whose only fixed point is the origin.
MappingSpec zero_mapping(std::size_t dim);
/// x -> c x with c in [0,1).
MappingSpec contraction_scale(std::size_t dim, double c);
/// x -> M x for square M. Declared generic; attach fixed points if known.
MappingSpec linear_mapping(const LinearMap& m, std::vector<Vector> known_fixed_points = {},
                           MappingClass cls = MappingClass::generic());
/// The piecewise map on [0,1]: T x = 7/8 for 0 <= x < 1, T 1 = 1/4.
/// Demicontractive with k = 2/3 and Fix(T) = {7/8}, but not quasi-nonexpansive.
/// Inputs outside [0,1] are rejected.
MappingSpec piecewise_demicontractive();

/// Resolves a config mapping name: "identity", "zero", "piecewise-demicontractive",
/// "contraction-scale:<c>", "linear:<r11>,<r12>;<r21>,<r22>" (rows split by ';',
/// entries may be decimals or p/q fractions).
MappingSpec mapping_from_name(const std::string& name, std::size_t dim);

} // namespace sfp
