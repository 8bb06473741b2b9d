#pragma once

// Iteration engine for split feasibility problems with a fixed-point
// constraint: find x in C ∩ Fix(S) with A x in Q.
//
// One general stepper covers the fixed-step CQ method, the self-adaptive CQ
// method, the viscosity method, and the inertial hybrid method:
//
//   u_n     = x_n + theta_n (x_n - x_{n-1})
//   y_n     = P_C((1 - delta_n)(u_n - tau_n grad f(u_n)) + delta_n S_lambda u_n)   [proof form]
//   x_{n+1} = alpha_n g(x_n) + beta_n u_n + gamma_n y_n
//
// with f(x) = 1/2 ||(I - P_Q) A x||^2, tau_n = rho_n f(u_n) / ||grad f(u_n)||^2
// and S_lambda = (1 - lambda) I + lambda S.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sfp/convex_set.hpp"
#include "sfp/hilbert.hpp"
#include "sfp/mapping.hpp"
#include "sfp/schedule.hpp"

namespace sfp {

class SfpProblem {
public:
    /// Validates dimensions, that g is declared a contraction, and, when a
    /// known solution is given, that it lies in C, maps into Q, and is fixed
    /// by S (each residual <= 1e-8).
    SfpProblem(LinearMap a, ConvexSet c, ConvexSet q, std::optional<MappingSpec> s, MappingSpec g,
               std::optional<Vector> known_solution = std::nullopt);

    const LinearMap& a() const noexcept { return a_; }
    const ConvexSet& c() const noexcept { return c_; }
    const ConvexSet& q() const noexcept { return q_; }
    const std::optional<MappingSpec>& s() const noexcept { return s_; }
    const MappingSpec& g() const noexcept { return g_; }
    const std::optional<Vector>& known_solution() const noexcept { return known_solution_; }
    std::size_t dim() const noexcept { return a_.cols(); }

private:
    LinearMap a_;
    ConvexSet c_;
    ConvexSet q_;
    std::optional<MappingSpec> s_;
    MappingSpec g_;
    std::optional<Vector> known_solution_;
};

/// f(x) = 1/2 ||A x - P_Q(A x)||^2
double f_value(const SfpProblem& problem, const Vector& x);
/// grad f(x) = A^T (A x - P_Q(A x))
Vector grad_f(const SfpProblem& problem, const Vector& x);

/// rho f(u) / ||grad f(u)||^2, or 0 when ||grad f(u)||^2 <= guard.
double adaptive_tau(const SfpProblem& problem, const Vector& u, double rho, double guard = 1e-24);

/// min(theta, epsilon_n / ||x_n - x_prev||), or theta when x_n == x_prev.
double inertial_theta(double theta, double epsilon_n, const Vector& x_n, const Vector& x_prev);

enum class Variant { cq_fixed_step, cq_adaptive, viscosity, algorithm1 };

/// Where P_C and the (1 - delta_n) factor apply in y_n.
///   proof_form:     P_C((1-d)(u - tau grad) + d S_l u)
///   statement_form: P_C((1-d) u - tau grad) + d S_l u
///   explore:        P_C((1-d) u + d S_l u - tau grad)
enum class CompositionMode { proof_form, statement_form, explore };

/// Numerator of tau_n: f(u_n) (default) or f(x_n).
enum class TauNumerator { at_u, at_x };

std::string_view to_string(Variant v);
std::string_view to_string(CompositionMode m);
std::string_view to_string(TauNumerator t);
std::optional<Variant> variant_from_string(std::string_view s);
/// Accepts "proof", "statement", "explore" and the *_form spellings.
std::optional<CompositionMode> mode_from_string(std::string_view s);
std::optional<TauNumerator> tau_numerator_from_string(std::string_view s);

struct StoppingRule {
    double grad_tol = 1e-12;
    double residual_tol = 1e-9;
    std::size_t max_iter = 100000;

    friend bool operator==(const StoppingRule&, const StoppingRule&) = default;
};

struct StepperConfig {
    Variant variant = Variant::algorithm1;
    /// Constant step in place of the adaptive tau. Required by cq_fixed_step,
    /// optional otherwise; must lie in (0, 2/||A||^2).
    std::optional<double> fixed_step;
    CompositionMode mode = CompositionMode::proof_form;
    TauNumerator tau_numerator = TauNumerator::at_u;
    StoppingRule stopping;
    double divergence_threshold = 1e12;
    double gradient_guard = 1e-24;

    friend bool operator==(const StepperConfig&, const StepperConfig&) = default;
};

/// Schedule values at step n after the variant's overrides:
/// CQ variants force theta = alpha = beta = delta = 0, gamma = 1;
/// viscosity forces theta = 0, lambda = 1.
StepParameters effective_parameters(const ParameterSchedule& schedule, const StepperConfig& config,
                                    std::size_t n);

struct StepRecord {
    std::size_t n = 0;
    StepParameters params;
    double theta = 0.0;
    double tau = 0.0;
    double f_u = 0.0;
    double grad_norm_u = 0.0;
    double res_c_x = 0.0;  // ||x_n - P_C x_n||
    double res_q_u = 0.0;  // ||A u_n - P_Q A u_n||
    double inertial_step = 0.0;  // theta_n ||x_n - x_{n-1}||
    double psi = 0.0;
    /// |x_{n+1} - (alpha g(x_n) + (1-alpha) v_n)|_inf with v_n = (beta u + gamma y)/(1-alpha);
    /// absent when alpha_n = 1.
    std::optional<double> convex_combination_gap;
    /// Present only when the problem has a known solution x*.
    std::optional<double> fejer_y_gap;  // ||y_n - x*|| - ||u_n - x*||
    std::optional<double> fejer_v_gap;  // ||v_n - x*|| - ||u_n - x*||
    /// ||S_lambda u_n - x*|| <= ||u_n - x*|| + 1e-10 (known solution only).
    bool averaged_qne_at_u = false;
    /// The hypotheses under which y and v move no farther from x* than u:
    /// known solution, the check above, rho in (0,4), delta in (0,1), proof form.
    bool fejer_monitor_applies = false;
    /// max(res_C, res_Q, ||S_lambda x - x||) at x_{n+1}.
    double residual_next = 0.0;
};

struct StepResult {
    Vector u;
    Vector y;
    Vector x_next;
    StepRecord record;
};

/// Holds a validated problem/schedule/config triple and performs steps.
class Stepper {
public:
    /// Throws InvalidInput for an inadmissible fixed step or missing step for cq_fixed_step.
    Stepper(SfpProblem problem, ParameterSchedule schedule, StepperConfig config);

    /// One step at index n >= 1. Throws InvalidInput naming the violated condition
    /// when the effective parameters are inadmissible at n.
    StepResult step(std::size_t n, const Vector& x_n, const Vector& x_prev) const;

    /// S_lambda for the step's lambda (identity when the problem has no S).
    Vector averaged_s(const Vector& x, double lambda) const;
    double combined_residual(const Vector& x, double lambda) const;
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    SfpProblem problem_;
    ParameterSchedule schedule_;
    StepperConfig config_;
    std::vector<std::string> warnings_;
};

StepResult step_algorithm1(const SfpProblem& problem, const ParameterSchedule& schedule,
                           const StepperConfig& config, std::size_t n, const Vector& x_n,
                           const Vector& x_prev);

/// The three-term progress quantity Psi_n evaluated at u_n with T = S_lambda:
///   (1-d)(g/(1-a)) rho (4-rho) f(u)^2/||grad f(u)||^2
///   + d(1-d)(g/(1-a)) ||T u - u + tau grad f(u)||^2
///   + (g/(1-a)) ||(I - P_C)((1-d)(u - tau grad f(u)) + d T u)||^2
/// The first term is dropped when ||grad f(u)||^2 <= guard; the result is 0 when alpha = 1.
double psi_diagnostic(const SfpProblem& problem, const StepParameters& params, const Vector& u, double tau,
                      double guard = 1e-24);
double psi_diagnostic(const SfpProblem& problem, const ParameterSchedule& schedule, std::size_t n,
                      const Vector& u, double tau, double guard = 1e-24);

enum class TerminationReason { grad_zero, residual_met, max_iter };
std::string_view to_string(TerminationReason r);

struct RunHistory {
    /// iterates[0] is the start point; iterates[k] follows step k.
    std::vector<Vector> iterates;
    std::vector<StepRecord> records;
    TerminationReason termination = TerminationReason::max_iter;
    std::vector<std::string> warnings;

    std::size_t steps() const noexcept { return records.size(); }
    const Vector& last() const { return iterates.back(); }
};

/// Raised when an iterate's norm exceeds the divergence threshold or turns
/// non-finite. Carries the history up to the offending step.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, RunHistory partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const RunHistory& partial() const noexcept { return partial_; }

private:
    RunHistory partial_;
};

/// Iterates until ||grad f(u_n)|| <= grad_tol and the combined residual of
/// x_{n+1} is <= residual_tol, or max_iter steps. x0 doubles as x1 when x1
/// is omitted.
RunHistory run(const SfpProblem& problem, const ParameterSchedule& schedule, const StepperConfig& config,
               const Vector& x0, const std::optional<Vector>& x1 = std::nullopt);

} // namespace sfp
