#include "sfp/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sfp/errors.hpp"
#include "sfp/numeric_text.hpp"

namespace sfp {

namespace {

constexpr double kFixedPointTol = 1e-10;
constexpr double kMovedTol = 1e-12;

void check_modulus(double m, const char* what) {
    if (!(m >= 0.0 && m < 1.0)) {
        throw InvalidInput(std::string(what) + ": modulus must lie in [0,1), got " + format_real(m));
    }
}

void require_fixed(const MappingSpec& t, const Vector& p, const char* who) {
    if (p.dim() != t.dim()) throw InvalidInput(std::string(who) + ": fixed point has wrong dimension");
    const double r = fixed_point_residual(t, p);
    if (r > kFixedPointTol) {
        throw InvalidInput(std::string(who) + ": supplied point is not a fixed point (residual " +
                           format_real(r) + ")");
    }
}

} // namespace

MappingClass MappingClass::contraction(double c) {
    check_modulus(c, "contraction");
    return {Kind::contraction, c};
}

MappingClass MappingClass::demicontractive(double k) {
    check_modulus(k, "demicontractive");
    return {Kind::demicontractive, k};
}

MappingClass MappingClass::strictly_pseudocontractive(double k) {
    check_modulus(k, "strictly_pseudocontractive");
    return {Kind::strictly_pseudocontractive, k};
}

bool MappingClass::has_modulus() const noexcept {
    return kind == Kind::contraction || kind == Kind::demicontractive ||
           kind == Kind::strictly_pseudocontractive;
}

std::string MappingClass::describe() const {
    switch (kind) {
        case Kind::contraction: return "contraction(" + format_real(modulus) + ")";
        case Kind::nonexpansive: return "nonexpansive";
        case Kind::quasi_nonexpansive: return "quasi_nonexpansive";
        case Kind::strictly_pseudocontractive:
            return "strictly_pseudocontractive(" + format_real(modulus) + ")";
        case Kind::demicontractive: return "demicontractive(" + format_real(modulus) + ")";
        case Kind::generic: return "generic";
    }
    return "generic";
}

MappingSpec::MappingSpec(std::string name, std::size_t dim, Fn fn, MappingClass cls,
                         std::vector<Vector> known_fixed_points, bool demiclosed_assumed)
    : name_(std::move(name)),
      dim_(dim),
      fn_(std::move(fn)),
      class_(cls),
      fixed_points_(std::move(known_fixed_points)),
      demiclosed_(demiclosed_assumed) {
    if (dim_ < 1) throw InvalidInput("MappingSpec: dimension must be at least 1");
    if (!fn_) throw InvalidInput("MappingSpec: empty function");
    if (class_.has_modulus()) check_modulus(class_.modulus, "MappingSpec");
    for (const auto& p : fixed_points_) require_fixed(*this, p, "MappingSpec");
}

Vector MappingSpec::operator()(const Vector& x) const {
    if (x.dim() != dim_) {
        throw InvalidInput("mapping '" + name_ + "': vector has dim " + std::to_string(x.dim()) +
                           ", mapping acts on dim " + std::to_string(dim_));
    }
    return fn_(x);
}

Vector AveragedMapping::operator()(const Vector& x) const {
    return (1.0 - lambda) * x + lambda * base(x);
}

MappingSpec AveragedMapping::as_mapping() const {
    using K = MappingClass::Kind;
    const auto& bc = base.mapping_class();
    MappingClass cls = MappingClass::generic();
    switch (bc.kind) {
        case K::contraction:
            cls = MappingClass::contraction(1.0 - lambda * (1.0 - bc.modulus));
            break;
        case K::nonexpansive: cls = MappingClass::nonexpansive(); break;
        case K::quasi_nonexpansive: cls = MappingClass::quasi_nonexpansive(); break;
        case K::demicontractive:
            if (lambda < 1.0 - bc.modulus) {
                cls = MappingClass::quasi_nonexpansive();
            } else {
                cls = MappingClass::demicontractive((lambda + bc.modulus - 1.0) / lambda);
            }
            break;
        case K::strictly_pseudocontractive:
        case K::generic: break;
    }
    auto self = *this;
    return MappingSpec(
        "average(" + base.name() + "," + format_real(lambda) + ")", base.dim(),
        [self](const Vector& x) { return self(x); }, cls, base.known_fixed_points(),
        base.demiclosed_assumed());
}

AveragedMapping average(const MappingSpec& t, double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw InvalidInput("average: lambda must lie in (0,1], got " + format_real(lambda));
    }
    return AveragedMapping{t, lambda};
}

double fixed_point_residual(const MappingSpec& t, const Vector& x) { return norm(t(x) - x); }

double fixed_point_residual(const AveragedMapping& t, const Vector& x) { return norm(t(x) - x); }

DomainSampler grid_sampler_1d(double lo, double hi, std::size_t count) {
    if (count < 2 || !(hi > lo)) throw InvalidInput("grid_sampler_1d: need count >= 2 and hi > lo");
    return [lo, hi, count](std::size_t i, std::mt19937_64&) {
        // Pin the last point to hi exactly instead of relying on rounding.
        const double x = i + 1 >= count ? hi : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
        return Vector{x};
    };
}

DomainSampler gaussian_sampler(Vector center, double spread) {
    return [center = std::move(center), spread](std::size_t, std::mt19937_64& rng) {
        std::normal_distribution<double> gauss(0.0, spread);
        Eigen::VectorXd v = center.eigen();
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += gauss(rng);
        return Vector::from_eigen(std::move(v));
    };
}

double estimate_demicontractive_modulus(const MappingSpec& t, const Vector& fixed_point,
                                        const DomainSampler& sampler, std::size_t samples,
                                        std::uint64_t seed) {
    if (samples < 1) throw InvalidInput("estimate_demicontractive_modulus: samples must be >= 1");
    require_fixed(t, fixed_point, "estimate_demicontractive_modulus");

    std::mt19937_64 rng(seed);
    double k = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const Vector x = sampler(i, rng);
        const Vector tx = t(x);
        const double moved = squared_norm(x - tx);
        if (std::sqrt(moved) <= kMovedTol) continue;
        const double excess = squared_norm(tx - fixed_point) - squared_norm(x - fixed_point);
        k = std::max(k, excess / moved);
    }
    return k;
}

QuasiNonexpansiveReport verify_quasi_nonexpansive(const MappingSpec& t, const Vector& fixed_point,
                                                  const DomainSampler& sampler, std::size_t samples,
                                                  std::uint64_t seed) {
    if (samples < 1) throw InvalidInput("verify_quasi_nonexpansive: samples must be >= 1");
    require_fixed(t, fixed_point, "verify_quasi_nonexpansive");

    std::mt19937_64 rng(seed);
    QuasiNonexpansiveReport report;
    report.max_slack = -std::numeric_limits<double>::infinity();
    report.samples = samples;
    report.seed = seed;
    for (std::size_t i = 0; i < samples; ++i) {
        const Vector x = sampler(i, rng);
        const double slack = norm(t(x) - fixed_point) - norm(x - fixed_point);
        if (slack > report.max_slack) {
            report.max_slack = slack;
            report.witness = x;
        }
    }
    return report;
}

MappingSpec identity_mapping(std::size_t dim) {
    return MappingSpec("identity", dim, [](const Vector& x) { return x; },
                       MappingClass::nonexpansive());
}

MappingSpec zero_mapping(std::size_t dim) {
    return MappingSpec("zero", dim, [dim](const Vector&) { return Vector::zeros(dim); },
                       MappingClass::contraction(0.0), {Vector::zeros(dim)});
}

MappingSpec contraction_scale(std::size_t dim, double c) {
    return MappingSpec("contraction-scale:" + format_real(c), dim,
                       [c](const Vector& x) { return c * x; }, MappingClass::contraction(c),
                       {Vector::zeros(dim)});
}

MappingSpec linear_mapping(const LinearMap& m, std::vector<Vector> known_fixed_points, MappingClass cls) {
    if (m.rows() != m.cols()) throw InvalidInput("linear mapping: matrix must be square");
    std::ostringstream name;
    name << "linear:";
    const auto rows = m.to_rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) name << ';';
        for (std::size_t j = 0; j < rows[i].size(); ++j) name << (j ? "," : "") << format_real(rows[i][j]);
    }
    return MappingSpec(name.str(), m.cols(), [m](const Vector& x) { return apply(m, x); }, cls,
                       std::move(known_fixed_points));
}

MappingSpec piecewise_demicontractive() {
    auto fn = [](const Vector& x) {
        const double v = x[0];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InvalidInput("piecewise-demicontractive: argument " + format_real(v) + " outside [0,1]");
        }
        return Vector{v < 1.0 ? 7.0 / 8.0 : 1.0 / 4.0};
    };
    return MappingSpec("piecewise-demicontractive", 1, fn, MappingClass::demicontractive(2.0 / 3.0),
                       {Vector{7.0 / 8.0}});
}

MappingSpec mapping_from_name(const std::string& name, std::size_t dim) {
    if (name == "identity") return identity_mapping(dim);
    if (name == "zero") return zero_mapping(dim);
    if (name == "piecewise-demicontractive") {
        if (dim != 1) throw InvalidInput("piecewise-demicontractive acts on dimension 1, requested " + std::to_string(dim));
        return piecewise_demicontractive();
    }
    constexpr std::string_view kScale = "contraction-scale:";
    constexpr std::string_view kLinear = "linear:";
    if (name.starts_with(kScale)) {
        return contraction_scale(dim, parse_real(std::string_view(name).substr(kScale.size())));
    }
    if (name.starts_with(kLinear)) {
        std::vector<std::vector<double>> rows;
        std::string_view body = std::string_view(name).substr(kLinear.size());
        while (true) {
            const auto semi = body.find(';');
            std::string_view row = body.substr(0, semi);
            std::vector<double> entries;
            while (true) {
                const auto comma = row.find(',');
                entries.push_back(parse_real(row.substr(0, comma)));
                if (comma == std::string_view::npos) break;
                row.remove_prefix(comma + 1);
            }
            rows.push_back(std::move(entries));
            if (semi == std::string_view::npos) break;
            body.remove_prefix(semi + 1);
        }
        LinearMap m(rows);
        if (m.cols() != dim) {
            throw InvalidInput("mapping '" + name + "' acts on dim " + std::to_string(m.cols()) +
                               ", expected " + std::to_string(dim));
        }
        return linear_mapping(m);
    }
    throw InvalidInput("unknown mapping name '" + name + "'");
}

} // namespace sfp
