#include "sfp/solver.hpp"

#include <array>
#include <cmath>

#include "sfp/errors.hpp"
#include "sfp/numeric_text.hpp"

namespace sfp {

namespace {

constexpr double kSolutionTol = 1e-8;
constexpr double kMonitorSlack = 1e-10;

template <class E, std::size_t N>
std::string_view lookup(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
    for (auto [e, name] : table)
        if (e == value) return name;
    return "?";
}

template <class E, std::size_t N>
std::optional<E> reverse_lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                                std::string_view name) {
    for (auto [e, n] : table)
        if (n == name) return e;
    return std::nullopt;
}

constexpr std::array<std::pair<Variant, std::string_view>, 4> kVariants{{
    {Variant::cq_fixed_step, "cq_fixed_step"},
    {Variant::cq_adaptive, "cq_adaptive"},
    {Variant::viscosity, "viscosity"},
    {Variant::algorithm1, "algorithm1"},
}};

constexpr std::array<std::pair<CompositionMode, std::string_view>, 3> kModes{{
    {CompositionMode::proof_form, "proof_form"},
    {CompositionMode::statement_form, "statement_form"},
    {CompositionMode::explore, "explore"},
}};

constexpr std::array<std::pair<TauNumerator, std::string_view>, 2> kNumerators{{
    {TauNumerator::at_u, "u"},
    {TauNumerator::at_x, "x"},
}};

constexpr std::array<std::pair<TerminationReason, std::string_view>, 3> kReasons{{
    {TerminationReason::grad_zero, "grad_zero"},
    {TerminationReason::residual_met, "residual_met"},
    {TerminationReason::max_iter, "max_iter"},
}};

Vector residual_in_q(const SfpProblem& p, const Vector& x) {
    const Vector ax = apply(p.a(), x);
    return ax - p.q().project(ax);
}

} // namespace

std::string_view to_string(Variant v) { return lookup(kVariants, v); }
std::string_view to_string(CompositionMode m) { return lookup(kModes, m); }
std::string_view to_string(TauNumerator t) { return lookup(kNumerators, t); }
std::string_view to_string(TerminationReason r) { return lookup(kReasons, r); }

std::optional<Variant> variant_from_string(std::string_view s) { return reverse_lookup(kVariants, s); }

std::optional<CompositionMode> mode_from_string(std::string_view s) {
    if (s == "proof") return CompositionMode::proof_form;
    if (s == "statement") return CompositionMode::statement_form;
    return reverse_lookup(kModes, s);
}

std::optional<TauNumerator> tau_numerator_from_string(std::string_view s) {
    return reverse_lookup(kNumerators, s);
}

SfpProblem::SfpProblem(LinearMap a, ConvexSet c, ConvexSet q, std::optional<MappingSpec> s, MappingSpec g,
                       std::optional<Vector> known_solution)
    : a_(std::move(a)),
      c_(std::move(c)),
      q_(std::move(q)),
      s_(std::move(s)),
      g_(std::move(g)),
      known_solution_(std::move(known_solution)) {
    const auto n = a_.cols();
    if (c_.dim() != n) {
        throw InvalidInput("problem: C has dim " + std::to_string(c_.dim()) + " but A has " +
                           std::to_string(n) + " columns");
    }
    if (q_.dim() != a_.rows()) {
        throw InvalidInput("problem: Q has dim " + std::to_string(q_.dim()) + " but A has " +
                           std::to_string(a_.rows()) + " rows");
    }
    if (s_ && s_->dim() != n) throw InvalidInput("problem: S acts on the wrong dimension");
    if (g_.dim() != n) throw InvalidInput("problem: g acts on the wrong dimension");
    if (g_.mapping_class().kind != MappingClass::Kind::contraction) {
        throw InvalidInput("problem: g must be declared a contraction, got " + g_.mapping_class().describe());
    }
    if (known_solution_) {
        const auto& xs = *known_solution_;
        if (xs.dim() != n) throw InvalidInput("problem: known solution has the wrong dimension");
        const double rc = membership_residual(c_, xs);
        const double rq = membership_residual(q_, apply(a_, xs));
        if (rc > kSolutionTol) throw InvalidInput("problem: known solution not in C (residual " + format_real(rc) + ")");
        if (rq > kSolutionTol) {
            throw InvalidInput("problem: A * known solution not in Q (residual " + format_real(rq) + ")");
        }
        if (s_) {
            const double rs = fixed_point_residual(*s_, xs);
            if (rs > kSolutionTol) {
                throw InvalidInput("problem: known solution not fixed by S (residual " + format_real(rs) + ")");
            }
        }
    }
}

double f_value(const SfpProblem& problem, const Vector& x) { return 0.5 * squared_norm(residual_in_q(problem, x)); }

Vector grad_f(const SfpProblem& problem, const Vector& x) {
    return apply_adjoint(problem.a(), residual_in_q(problem, x));
}

double adaptive_tau(const SfpProblem& problem, const Vector& u, double rho, double guard) {
    const double g2 = squared_norm(grad_f(problem, u));
    if (g2 <= guard) return 0.0;
    return rho * f_value(problem, u) / g2;
}

double inertial_theta(double theta, double epsilon_n, const Vector& x_n, const Vector& x_prev) {
    const double gap = norm(x_n - x_prev);
    if (gap > 0.0) return std::min(theta, epsilon_n / gap);
    return theta;
}

StepParameters effective_parameters(const ParameterSchedule& schedule, const StepperConfig& config,
                                    std::size_t n) {
    StepParameters p = schedule.at(n);
    switch (config.variant) {
        case Variant::cq_fixed_step:
        case Variant::cq_adaptive:
            p.theta = 0.0;
            p.alpha = 0.0;
            p.beta = 0.0;
            p.gamma = 1.0;
            p.delta = 0.0;
            break;
        case Variant::viscosity:
            p.theta = 0.0;
            p.lambda = 1.0;
            break;
        case Variant::algorithm1: break;
    }
    return p;
}

Stepper::Stepper(SfpProblem problem, ParameterSchedule schedule, StepperConfig config)
    : problem_(std::move(problem)), schedule_(std::move(schedule)), config_(std::move(config)) {
    if (config_.variant == Variant::cq_fixed_step && !config_.fixed_step) {
        throw InvalidInput("cq_fixed_step requires a fixed step size");
    }
    if (config_.fixed_step) {
        const double op = operator_norm(problem_.a());
        const double upper = 2.0 / (op * op);
        const double step = *config_.fixed_step;
        if (!(step > 0.0 && step < upper)) {
            throw InvalidInput("fixed step " + format_real(step) + " outside (0, 2/||A||^2) = (0, " +
                               format_real(upper) + ")");
        }
    }
    if (config_.variant == Variant::viscosity && config_.mode != CompositionMode::statement_form) {
        warnings_.push_back("viscosity variant is normally run in statement_form");
    }
    if (problem_.s()) {
        const auto& cls = problem_.s()->mapping_class();
        const double lambda = effective_parameters(schedule_, config_, 1).lambda;
        if (cls.kind == MappingClass::Kind::demicontractive && !(lambda < 1.0 - cls.modulus)) {
            warnings_.push_back("lambda = " + format_real(lambda) + " is not in (0, 1-k) for declared k = " +
                                format_real(cls.modulus) + "; S_lambda may fail to be quasi-nonexpansive");
        }
    }
}

Vector Stepper::averaged_s(const Vector& x, double lambda) const {
    if (!problem_.s()) return x;
    return (1.0 - lambda) * x + lambda * (*problem_.s())(x);
}

double Stepper::combined_residual(const Vector& x, double lambda) const {
    double r = std::max(membership_residual(problem_.c(), x), norm(residual_in_q(problem_, x)));
    if (problem_.s()) r = std::max(r, norm(averaged_s(x, lambda) - x));
    return r;
}

StepResult Stepper::step(std::size_t n, const Vector& x_n, const Vector& x_prev) const {
    if (x_n.dim() != problem_.dim() || x_prev.dim() != problem_.dim()) {
        throw InvalidInput("step: iterate dimension does not match the problem");
    }
    const StepParameters p = effective_parameters(schedule_, config_, n);

    check_admissible(p, n);

    StepRecord rec;
    rec.n = n;
    rec.params = p;
    rec.theta = inertial_theta(p.theta, p.epsilon, x_n, x_prev);
    rec.inertial_step = rec.theta * norm(x_n - x_prev);

    const Vector u = x_n + rec.theta * (x_n - x_prev);
    const Vector grad = grad_f(problem_, u);
    const double g2 = squared_norm(grad);
    rec.f_u = f_value(problem_, u);
    rec.grad_norm_u = std::sqrt(g2);
    rec.res_c_x = membership_residual(problem_.c(), x_n);
    rec.res_q_u = norm(residual_in_q(problem_, u));

    if (config_.fixed_step) {
        rec.tau = *config_.fixed_step;
    } else if (g2 > config_.gradient_guard) {
        const double numerator = config_.tau_numerator == TauNumerator::at_u ? rec.f_u : f_value(problem_, x_n);
        rec.tau = p.rho * numerator / g2;
    }

    const Vector tu = averaged_s(u, p.lambda);
    const double d = p.delta;
    Vector y = [&] {
        switch (config_.mode) {
            case CompositionMode::statement_form:
                return problem_.c().project((1.0 - d) * u - rec.tau * grad) + d * tu;
            case CompositionMode::explore:
                return problem_.c().project((1.0 - d) * u + d * tu - rec.tau * grad);
            case CompositionMode::proof_form:
            default:
                return problem_.c().project((1.0 - d) * (u - rec.tau * grad) + d * tu);
        }
    }();

    const Vector gx = problem_.g()(x_n);
    Vector x_next = p.alpha * gx + p.beta * u + p.gamma * y;

    std::optional<Vector> v;
    if (p.alpha < 1.0) {
        v = (1.0 / (1.0 - p.alpha)) * (p.beta * u + p.gamma * y);
        rec.convex_combination_gap = max_abs_diff(x_next, p.alpha * gx + (1.0 - p.alpha) * *v);
    }

    rec.psi = psi_diagnostic(problem_, p, u, rec.tau, config_.gradient_guard);

    if (const auto& xs = problem_.known_solution()) {
        const double du = norm(u - *xs);
        rec.fejer_y_gap = norm(y - *xs) - du;
        if (v) rec.fejer_v_gap = norm(*v - *xs) - du;
        rec.averaged_qne_at_u = norm(tu - *xs) <= du + kMonitorSlack;
        rec.fejer_monitor_applies = rec.averaged_qne_at_u && p.rho > 0.0 && p.rho < 4.0 && d > 0.0 &&
                                    d < 1.0 && config_.mode == CompositionMode::proof_form;
    }
    rec.residual_next = combined_residual(x_next, p.lambda);

    return StepResult{u, std::move(y), std::move(x_next), rec};
}

StepResult step_algorithm1(const SfpProblem& problem, const ParameterSchedule& schedule,
                           const StepperConfig& config, std::size_t n, const Vector& x_n,
                           const Vector& x_prev) {
    return Stepper(problem, schedule, config).step(n, x_n, x_prev);
}

double psi_diagnostic(const SfpProblem& problem, const StepParameters& p, const Vector& u, double tau,
                      double guard) {
    if (!(p.alpha < 1.0)) return 0.0;
    const double w = p.gamma / (1.0 - p.alpha);
    const double d = p.delta;
    const Vector grad = grad_f(problem, u);
    const double g2 = squared_norm(grad);
    const Vector tu = problem.s() ? (1.0 - p.lambda) * u + p.lambda * (*problem.s())(u) : u;

    double first = 0.0;
    if (g2 > guard) {
        const double f = f_value(problem, u);
        first = (1.0 - d) * w * p.rho * (4.0 - p.rho) * f * f / g2;
    }
    const double second = d * (1.0 - d) * w * squared_norm(tu - u + tau * grad);
    const Vector inner = (1.0 - d) * (u - tau * grad) + d * tu;
    const double third = w * squared_norm(inner - problem.c().project(inner));
    return first + second + third;
}

double psi_diagnostic(const SfpProblem& problem, const ParameterSchedule& schedule, std::size_t n,
                      const Vector& u, double tau, double guard) {
    return psi_diagnostic(problem, schedule.at(n), u, tau, guard);
}

RunHistory run(const SfpProblem& problem, const ParameterSchedule& schedule, const StepperConfig& config,
               const Vector& x0, const std::optional<Vector>& x1) {
    const auto& stop = config.stopping;
    if (!(stop.grad_tol > 0.0) || !(stop.residual_tol > 0.0) || stop.max_iter < 1) {
        throw InvalidInput("run: tolerances must be positive and max_iter >= 1");
    }
    if (x0.dim() != problem.dim() || (x1 && x1->dim() != problem.dim())) {
        throw InvalidInput("run: start vector dimension does not match the problem");
    }

    const Stepper stepper(problem, schedule, config);
    RunHistory history;
    history.warnings = stepper.warnings();
    history.iterates.reserve(std::min<std::size_t>(stop.max_iter, 100000) + 1);
    history.iterates.push_back(x1 ? *x1 : x0);
    Vector prev = x0;

    for (std::size_t n = 1; n <= stop.max_iter; ++n) {
        const Vector& current = history.iterates.back();
        StepResult r = stepper.step(n, current, prev);

        if (!r.x_next.all_finite() || norm(r.x_next) > config.divergence_threshold) {
            history.records.push_back(r.record);
            history.iterates.push_back(r.x_next);
            throw DivergenceError("iterate norm exceeded " + format_real(config.divergence_threshold) +
                                      " at step " + std::to_string(n),
                                  std::move(history));
        }

        const bool grad_small = r.record.grad_norm_u <= stop.grad_tol;
        const bool residual_small = r.record.residual_next <= stop.residual_tol;
        const bool stationary = r.x_next == current;
        prev = current;
        history.records.push_back(r.record);
        history.iterates.push_back(std::move(r.x_next));

        if (grad_small && residual_small) {
            history.termination = TerminationReason::residual_met;
            return history;
        }
        if (grad_small && stationary) {
            history.termination = TerminationReason::grad_zero;
            return history;
        }
    }
    history.termination = TerminationReason::max_iter;
    return history;
}

} // namespace sfp
