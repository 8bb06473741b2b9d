#include "sfp/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sfp/errors.hpp"
#include "sfp/numeric_text.hpp"

namespace sfp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kSumTol = 1e-12;

bool in_open(double v, double lo, double hi) { return v > lo && v < hi; }
bool in_closed(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string at_n(std::size_t n) { return " at n = " + std::to_string(n); }

} // namespace

Sequence Sequence::list(std::vector<double> values) {
    if (values.empty()) throw InvalidInput("sequence list must not be empty");
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidInput("sequence list holds a non-finite value");
    return {List{std::move(values)}};
}

bool Sequence::depends_on_alpha() const noexcept {
    return std::holds_alternative<ComplementOfAlpha>(rule) || std::holds_alternative<Remainder>(rule) ||
           std::holds_alternative<AlphaOverPower>(rule);
}

bool Sequence::depends_on_beta() const noexcept { return std::holds_alternative<Remainder>(rule); }

double Sequence::at(std::size_t n, double alpha_n, double beta_n) const {
    if (n < 1) throw InvalidInput("sequences are indexed from n = 1");
    const double nn = static_cast<double>(n);
    return std::visit(overloaded{
                          [](const Constant& c) { return c.value; },
                          [&](const Reciprocal& r) { return r.scale / std::pow(nn, r.power); },
                          [&](const ComplementOfAlpha& c) { return c.factor * (1.0 - alpha_n); },
                          [&](const Remainder&) { return 1.0 - alpha_n - beta_n; },
                          [&](const AlphaOverPower& a) { return alpha_n * a.scale / std::pow(nn, a.power); },
                          [&](const List& l) {
                              if (l.values.empty()) throw InvalidInput("empty sequence list");
                              return l.values[std::min(n, l.values.size()) - 1];
                          },
                      },
                      rule);
}

std::string Sequence::describe() const {
    return std::visit(
        overloaded{
            [](const Constant& c) { return "constant(" + format_real(c.value) + ")"; },
            [](const Reciprocal& r) {
                return format_real(r.scale) + "/n^" + format_real(r.power);
            },
            [](const ComplementOfAlpha& c) { return format_real(c.factor) + "*(1-alpha_n)"; },
            [](const Remainder&) { return std::string("1-alpha_n-beta_n"); },
            [](const AlphaOverPower& a) {
                return "alpha_n*" + format_real(a.scale) + "/n^" + format_real(a.power);
            },
            [](const List& l) { return "list[" + std::to_string(l.values.size()) + "]"; },
        },
        rule);
}

StepParameters ParameterSchedule::at(std::size_t n) const {
    if (alpha.depends_on_alpha()) throw InvalidInput("schedule: alpha cannot be defined in terms of alpha");
    if (beta.depends_on_beta()) throw InvalidInput("schedule: beta cannot be defined in terms of beta");
    StepParameters p;
    p.alpha = alpha.at(n);
    p.beta = beta.at(n, p.alpha);
    p.gamma = gamma.at(n, p.alpha, p.beta);
    p.delta = delta.at(n, p.alpha, p.beta);
    p.rho = rho.at(n, p.alpha, p.beta);
    p.epsilon = epsilon.at(n, p.alpha, p.beta);
    p.theta = theta;
    p.lambda = lambda;
    return p;
}

void check_admissible(const StepParameters& p, std::size_t n) {
    auto fail = [n](const std::string& what) { throw InvalidInput("schedule violation: " + what + at_n(n)); };
    if (!in_closed(p.alpha, 0, 1)) fail("alpha = " + format_real(p.alpha) + " outside [0,1]");
    if (!in_closed(p.beta, 0, 1)) fail("beta = " + format_real(p.beta) + " outside [0,1]");
    if (!in_closed(p.gamma, 0, 1)) fail("gamma = " + format_real(p.gamma) + " outside [0,1]");
    if (!in_closed(p.delta, 0, 1)) fail("delta = " + format_real(p.delta) + " outside [0,1]");
    if (!in_open(p.rho, 0, 4)) fail("rho = " + format_real(p.rho) + " outside (0,4)");
    if (!(p.epsilon >= 0)) fail("epsilon = " + format_real(p.epsilon) + " negative");
    if (!(p.theta >= 0)) fail("theta = " + format_real(p.theta) + " negative");
    if (!(p.lambda > 0 && p.lambda <= 1)) fail("lambda = " + format_real(p.lambda) + " outside (0,1]");
    if (std::abs(p.alpha + p.beta + p.gamma - 1.0) > kSumTol) {
        fail("c5: alpha + beta + gamma = " + format_real(p.alpha + p.beta + p.gamma) + " != 1");
    }
}

ParameterSchedule preset_paper_s4() { return ParameterSchedule{}; }

ParameterSchedule preset_table1() {
    ParameterSchedule s;
    s.alpha = Sequence::constant(0.0);
    s.beta = Sequence::constant(0.0);
    s.gamma = Sequence::remainder();
    s.delta = Sequence::constant(1.0);
    s.rho = Sequence::constant(2.0);
    s.epsilon = Sequence::constant(0.0);
    s.theta = 0.0;
    s.lambda = 0.5;
    return s;
}

ParameterSchedule preset_cq() {
    ParameterSchedule s = preset_table1();
    s.delta = Sequence::constant(0.0);
    s.lambda = 1.0;
    return s;
}

ParameterSchedule schedule_preset(std::string_view name) {
    if (name == "paper-s4") return preset_paper_s4();
    if (name == "table-1") return preset_table1();
    if (name == "cq") return preset_cq();
    throw InvalidInput("unknown schedule preset '" + std::string(name) + "'");
}

std::string_view to_string(ConditionStatus s) {
    switch (s) {
        case ConditionStatus::pass: return "pass";
        case ConditionStatus::warn: return "warn";
        case ConditionStatus::fail: return "fail";
    }
    return "?";
}

const ConditionResult& ScheduleReport::find(std::string_view condition) const {
    for (const auto& r : results)
        if (r.condition == condition) return r;
    throw InvalidInput("no condition named '" + std::string(condition) + "' in report");
}

bool ScheduleReport::any_failed() const {
    return std::any_of(results.begin(), results.end(),
                       [](const ConditionResult& r) { return r.status == ConditionStatus::fail; });
}

ScheduleReport validate_schedule(const ParameterSchedule& schedule, std::size_t horizon) {
    if (horizon < 1) throw InvalidInput("validate_schedule: horizon must be >= 1");

    std::vector<StepParameters> values;
    values.reserve(horizon);
    for (std::size_t n = 1; n <= horizon; ++n) values.push_back(schedule.at(n));
    auto p = [&](std::size_t n) -> const StepParameters& { return values[n - 1]; };
    const std::size_t tail_start = std::max<std::size_t>(1, horizon / 2);

    ScheduleReport report;
    report.horizon = horizon;
    auto add = [&](std::string cond, bool ok, ConditionStatus bad, std::string detail) {
        report.results.push_back({std::move(cond), ok ? ConditionStatus::pass : bad, std::move(detail)});
    };

    {
        std::string first_bad;
        for (std::size_t n = 1; n <= horizon && first_bad.empty(); ++n) {
            const auto& v = p(n);
            if (!in_open(v.alpha, 0, 1)) first_bad = "alpha = " + format_real(v.alpha) + " not in (0,1)" + at_n(n);
            else if (!in_open(v.beta, 0, 1)) first_bad = "beta = " + format_real(v.beta) + " not in (0,1)" + at_n(n);
            else if (!in_open(v.gamma, 0, 1)) first_bad = "gamma = " + format_real(v.gamma) + " not in (0,1)" + at_n(n);
            else if (!in_open(v.delta, 0, 1)) first_bad = "delta = " + format_real(v.delta) + " not in (0,1)" + at_n(n);
            else if (!in_open(v.rho, 0, 4)) first_bad = "rho = " + format_real(v.rho) + " not in (0,4)" + at_n(n);
            else if (!(v.epsilon >= 0)) first_bad = "epsilon = " + format_real(v.epsilon) + " negative" + at_n(n);
        }
        if (first_bad.empty() && !(schedule.theta >= 0)) first_bad = "theta negative";
        if (first_bad.empty() && !in_open(schedule.lambda, 0, 1)) {
            first_bad = "lambda = " + format_real(schedule.lambda) + " not in (0,1)";
        }
        add("range", first_bad.empty(), ConditionStatus::warn,
            first_bad.empty() ? "all sequences inside their open intervals" : first_bad);
    }

    {
        double worst = 0.0;
        for (std::size_t n = tail_start; n <= horizon; ++n) worst = std::max(worst, p(n).beta);
        add("c1", worst < 1.0 - 1e-6, ConditionStatus::warn,
            "max beta_n over tail = " + format_real(worst));
    }

    {
        auto ratio = [&](std::size_t n) {
            const auto& v = p(n);
            return v.alpha > 0 ? v.epsilon / v.alpha : std::numeric_limits<double>::infinity();
        };
        const double first = ratio(1);
        const double last = ratio(horizon);
        add("c2", std::isfinite(last) && last < first && last < 1e-2, ConditionStatus::warn,
            "epsilon_n/alpha_n: first = " + format_real(first) + ", final = " + format_real(last));
    }

    {
        const double a_h = p(horizon).alpha;
        const double a_mid = p(tail_start).alpha;
        const double mass = static_cast<double>(horizon) * a_h;
        add("c3", a_h <= a_mid && a_h < 1e-2 && mass >= 1e-3, ConditionStatus::warn,
            "alpha_h = " + format_real(a_h) + ", h*alpha_h = " + format_real(mass));
    }

    {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t n = tail_start; n <= horizon; ++n) {
            lo = std::min(lo, p(n).delta);
            hi = std::max(hi, p(n).delta);
        }
        add("c4", lo >= 1e-6 && hi <= 1.0 - 1e-6, ConditionStatus::warn,
            "delta_n over tail in [" + format_real(lo) + ", " + format_real(hi) + "]");
    }

    {
        std::string bad;
        for (std::size_t n = 1; n <= horizon && bad.empty(); ++n) {
            const auto& v = p(n);
            const double sum = v.alpha + v.beta + v.gamma;
            if (std::abs(sum - 1.0) > kSumTol) bad = "alpha + beta + gamma = " + format_real(sum) + at_n(n);
        }
        add("c5", bad.empty(), ConditionStatus::fail, bad.empty() ? "sums to one" : bad);
    }
    return report;
}

} // namespace sfp
