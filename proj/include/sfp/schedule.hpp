#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sfp {

/// A real sequence indexed by n >= 1, given by a closed-form rule or a list.
///
/// Rules that refer to alpha (or alpha and beta) are resolved by
/// ParameterSchedule::at, which evaluates alpha first.
struct Sequence {
    struct Constant {
        double value;
        friend bool operator==(const Constant&, const Constant&) = default;
    };
    /// scale / n^power
    struct Reciprocal {
        double scale;
        double power;
        friend bool operator==(const Reciprocal&, const Reciprocal&) = default;
    };
    /// factor * (1 - alpha_n)
    struct ComplementOfAlpha {
        double factor;
        friend bool operator==(const ComplementOfAlpha&, const ComplementOfAlpha&) = default;
    };
    /// 1 - alpha_n - beta_n (closes condition c5 by construction)
    struct Remainder {
        friend bool operator==(const Remainder&, const Remainder&) = default;
    };
    /// alpha_n * scale / n^power
    struct AlphaOverPower {
        double scale;
        double power;
        friend bool operator==(const AlphaOverPower&, const AlphaOverPower&) = default;
    };
    /// values[n-1]; n past the end holds the last value.
    struct List {
        std::vector<double> values;
        friend bool operator==(const List&, const List&) = default;
    };

    using Rule = std::variant<Constant, Reciprocal, ComplementOfAlpha, Remainder, AlphaOverPower, List>;
    Rule rule;

    static Sequence constant(double v) { return {Constant{v}}; }
    static Sequence reciprocal(double scale, double power = 1.0) { return {Reciprocal{scale, power}}; }
    static Sequence complement_of_alpha(double factor) { return {ComplementOfAlpha{factor}}; }
    static Sequence remainder() { return {Remainder{}}; }
    static Sequence alpha_over_power(double scale, double power) { return {AlphaOverPower{scale, power}}; }
    static Sequence list(std::vector<double> values);

    bool depends_on_alpha() const noexcept;
    bool depends_on_beta() const noexcept;
    /// Evaluates at n >= 1 given alpha_n and beta_n (ignored by rules that do not need them).
    double at(std::size_t n, double alpha_n = 0.0, double beta_n = 0.0) const;
    std::string describe() const;

    friend bool operator==(const Sequence&, const Sequence&) = default;
};

/// Parameter values of one step.
struct StepParameters {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 1.0;
    double delta = 0.0;
    double rho = 2.0;
    double epsilon = 0.0;
    double theta = 0.0;
    double lambda = 1.0;
};

/// Throws InvalidInput naming the first violated admissibility condition at n:
/// alpha, beta, gamma, delta in [0,1]; rho in (0,4); epsilon >= 0;
/// theta >= 0; lambda in (0,1]; alpha + beta + gamma = 1 within 1e-12.
void check_admissible(const StepParameters& p, std::size_t n);

/// Control sequences of the inertial self-adaptive iteration.
struct ParameterSchedule {
    Sequence alpha = Sequence::reciprocal(0.1);
    Sequence beta = Sequence::complement_of_alpha(0.5);
    Sequence gamma = Sequence::remainder();
    Sequence delta = Sequence::constant(0.5);
    Sequence rho = Sequence::constant(2.0);
    Sequence epsilon = Sequence::alpha_over_power(1.0, 1.0);
    double theta = 0.5;
    double lambda = 0.5;

    /// Evaluates every sequence at n >= 1. Throws InvalidInput on a malformed
    /// definition (alpha or beta referring to themselves, n = 0, empty list).
    StepParameters at(std::size_t n) const;

    void check_admissible(std::size_t n) const { sfp::check_admissible(at(n), n); }

    friend bool operator==(const ParameterSchedule&, const ParameterSchedule&) = default;
};

/// "paper-s4": alpha_n = 1/(10n), beta_n = gamma_n = (1 - alpha_n)/2, delta_n = 0.5,
/// rho_n = 2, epsilon_n = alpha_n/n, theta = 0.5, lambda = 0.5.
ParameterSchedule preset_paper_s4();
/// "table-1": alpha_n = 0, beta_n = 0, gamma_n = 1, delta_n = 1, rho_n = 2,
/// epsilon_n = 0, theta = 0, lambda = 0.5.
ParameterSchedule preset_table1();
/// Plain CQ: alpha = beta = delta = 0, gamma = 1, theta = 0, lambda = 1.
ParameterSchedule preset_cq();

/// Resolves "paper-s4", "table-1" or "cq". Throws InvalidInput otherwise.
ParameterSchedule schedule_preset(std::string_view name);

enum class ConditionStatus { pass, warn, fail };
std::string_view to_string(ConditionStatus s);

struct ConditionResult {
    std::string condition;  // "range", "c1" .. "c5"
    ConditionStatus status;
    std::string detail;
};

struct ScheduleReport {
    std::size_t horizon = 0;
    std::vector<ConditionResult> results;

    const ConditionResult& find(std::string_view condition) const;
    bool any_failed() const;
};

/// Finite-horizon proxies for the asymptotic conditions on the schedule.
/// c5 (sum to one) is exact and can fail; the others can only warn.
///   range: alpha, beta, gamma, delta in (0,1), rho in (0,4), epsilon >= 0
///   c1: max beta_n over [h/2, h] < 1 - 1e-6
///   c2: epsilon_n / alpha_n at h is below its value at 1 and below 1e-2
///   c3: alpha_h <= alpha_{h/2}, alpha_h < 1e-2, and h * alpha_h >= 1e-3
///       (the divergent-sum reading of the condition)
///   c4: delta_n over [h/2, h] stays inside [1e-6, 1 - 1e-6]
ScheduleReport validate_schedule(const ParameterSchedule& schedule, std::size_t horizon);

} // namespace sfp
