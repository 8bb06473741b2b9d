#include "sfp/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "sfp/errors.hpp"
#include "sfp/mapping.hpp"
#include "sfp/numeric_text.hpp"

namespace sfp::harness {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// A YAML node paired with its dotted path, so every error names its field.
class Field {
public:
    Field(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const YAML::Node& node() const { return node_; }
    [[noreturn]] void fail(const std::string& message) const { throw ConfigError(path_, message); }

    bool has(const std::string& key) const { return node_.IsMap() && node_[key].IsDefined(); }
    Field at(const std::string& key) const {
        if (!node_.IsMap()) fail("expected a mapping");
        YAML::Node child = node_[key];
        if (!child.IsDefined()) throw ConfigError(join(path_, key), "missing required key");
        return {child, join(path_, key)};
    }
    Field index(std::size_t i) const { return {node_[i], path_ + "[" + std::to_string(i) + "]"}; }

    void require_map() const {
        if (!node_.IsMap()) fail("expected a mapping");
    }
    void allow_keys(std::initializer_list<std::string_view> keys) const {
        require_map();
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            bool known = false;
            for (auto k : keys) known = known || k == key;
            if (!known) throw ConfigError(join(path_, key), "unknown key");
        }
    }

    std::string text() const {
        if (!node_.IsScalar()) fail("expected a scalar");
        return node_.Scalar();
    }
    double real() const {
        try {
            return parse_real(text());
        } catch (const InvalidInput& e) {
            fail(e.what());
        }
    }
    std::uint64_t count() const {
        const std::string s = text();
        std::uint64_t v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) fail("expected a nonnegative integer, got '" + s + "'");
        return v;
    }
    bool flag() const {
        const std::string s = text();
        if (s == "true") return true;
        if (s == "false") return false;
        fail("expected true or false, got '" + s + "'");
    }
    std::vector<double> reals() const {
        if (!node_.IsSequence()) fail("expected a sequence of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < node_.size(); ++i) out.push_back(index(i).real());
        return out;
    }
    Vector vector() const {
        auto v = reals();
        if (v.empty()) fail("vector must not be empty");
        return Vector(v);
    }
    LinearMap matrix() const {
        if (!node_.IsSequence() || node_.size() == 0) fail("expected a nonempty sequence of rows");
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < node_.size(); ++i) rows.push_back(index(i).reals());
        try {
            return LinearMap(rows);
        } catch (const InvalidInput& e) {
            fail(e.what());
        }
    }

private:
    YAML::Node node_;
    std::string path_;
};

// Runs f, rethrowing library validation errors as ConfigError at path.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InvalidInput& e) {
        throw ConfigError(path, e.what());
    }
}

ConvexSet parse_set(const Field& f) {
    const std::string kind_name = f.at("kind").text();
    const auto kind = set_kind_from_string(kind_name);
    if (!kind) throw ConfigError(join(f.path(), "kind"), "unknown set kind '" + kind_name + "'");
    return at_path(f.path(), [&]() -> ConvexSet {
        switch (*kind) {
            case SetKind::box:
                f.allow_keys({"kind", "lower", "upper"});
                return ConvexSet::box(f.at("lower").vector(), f.at("upper").vector());
            case SetKind::ball:
                f.allow_keys({"kind", "center", "radius"});
                return ConvexSet::ball(f.at("center").vector(), f.at("radius").real());
            case SetKind::halfspace:
                f.allow_keys({"kind", "normal", "offset"});
                return ConvexSet::halfspace(f.at("normal").vector(), f.at("offset").real());
            case SetKind::hyperplane:
                f.allow_keys({"kind", "normal", "offset"});
                return ConvexSet::hyperplane(f.at("normal").vector(), f.at("offset").real());
            case SetKind::singleton:
                f.allow_keys({"kind", "point"});
                return ConvexSet::singleton(f.at("point").vector());
            case SetKind::affine_nullspace: {
                f.allow_keys({"kind", "map", "rank_tol"});
                std::optional<double> tol;
                if (f.has("rank_tol")) tol = f.at("rank_tol").real();
                return ConvexSet::affine_nullspace(f.at("map").matrix(), tol);
            }
            case SetKind::whole_space:
                f.allow_keys({"kind", "dim"});
                return ConvexSet::whole_space(f.at("dim").count());
        }
        f.fail("unknown set kind");
    });
}

// "linear:r11,r12;r21,r22" from a matrix literal.
std::string linear_name(const LinearMap& m) {
    std::string s = "linear:";
    const auto& a = m.matrix();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (i > 0) s += ';';
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (j > 0) s += ',';
            s += format_real(a(i, j));
        }
    }
    return s;
}

ProblemSource parse_problem(const Field& f) {
    f.require_map();
    if (f.has("builtin")) {
        f.allow_keys({"builtin"});
        const std::string name = f.at("builtin").text();
        if (name != "example-s4") throw ConfigError(join(f.path(), "builtin"), "unknown builtin problem '" + name + "'");
        return BuiltinExampleS4{};
    }
    if (f.has("random")) {
        f.allow_keys({"random"});
        const Field r = f.at("random");
        r.allow_keys({"dim1", "dim2", "family", "seed", "with_mapping"});
        RandomProblemSpec spec;
        if (r.has("dim1")) spec.dim1 = r.at("dim1").count();
        if (r.has("dim2")) spec.dim2 = r.at("dim2").count();
        if (spec.dim1 < 1) throw ConfigError(join(r.path(), "dim1"), "must be >= 1");
        if (spec.dim2 < 1) throw ConfigError(join(r.path(), "dim2"), "must be >= 1");
        if (r.has("family")) {
            const std::string name = r.at("family").text();
            const auto fam = set_family_from_string(name);
            if (!fam) throw ConfigError(join(r.path(), "family"), "unknown family '" + name + "'");
            spec.family = *fam;
        }
        if (r.has("seed")) spec.seed = r.at("seed").count();
        if (r.has("with_mapping")) spec.with_mapping = r.at("with_mapping").flag();
        return spec;
    }
    f.allow_keys({"a", "c", "q", "s", "g", "known_solution"});
    ExplicitProblemSpec spec{f.at("a").matrix(), parse_set(f.at("c")), parse_set(f.at("q")), std::nullopt, "zero",
                             std::nullopt};
    if (f.has("s")) {
        const Field s = f.at("s");
        spec.s = s.node().IsSequence() ? linear_name(s.matrix()) : s.text();
    }
    if (f.has("g")) spec.g = f.at("g").text();
    if (f.has("known_solution")) spec.known_solution = f.at("known_solution").vector();
    return spec;
}

Sequence parse_sequence(const Field& f) {
    if (f.node().IsScalar()) return Sequence::constant(f.real());
    const std::string rule = f.at("rule").text();
    return at_path(f.path(), [&]() -> Sequence {
        if (rule == "constant") {
            f.allow_keys({"rule", "value"});
            return Sequence::constant(f.at("value").real());
        }
        if (rule == "reciprocal") {
            f.allow_keys({"rule", "scale", "power"});
            return Sequence::reciprocal(f.at("scale").real(), f.has("power") ? f.at("power").real() : 1.0);
        }
        if (rule == "complement_of_alpha") {
            f.allow_keys({"rule", "factor"});
            return Sequence::complement_of_alpha(f.at("factor").real());
        }
        if (rule == "remainder") {
            f.allow_keys({"rule"});
            return Sequence::remainder();
        }
        if (rule == "alpha_over_power") {
            f.allow_keys({"rule", "scale", "power"});
            return Sequence::alpha_over_power(f.at("scale").real(), f.at("power").real());
        }
        if (rule == "list") {
            f.allow_keys({"rule", "values"});
            return Sequence::list(f.at("values").reals());
        }
        throw ConfigError(join(f.path(), "rule"), "unknown sequence rule '" + rule + "'");
    });
}

ParameterSchedule parse_schedule(const Field& f) {
    f.allow_keys({"preset", "alpha", "beta", "gamma", "delta", "rho", "epsilon", "theta", "lambda"});
    ParameterSchedule s;
    if (f.has("preset")) {
        const Field p = f.at("preset");
        s = at_path(p.path(), [&] { return schedule_preset(p.text()); });
    }
    const std::pair<const char*, Sequence ParameterSchedule::*> seqs[] = {
        {"alpha", &ParameterSchedule::alpha}, {"beta", &ParameterSchedule::beta},
        {"gamma", &ParameterSchedule::gamma}, {"delta", &ParameterSchedule::delta},
        {"rho", &ParameterSchedule::rho},     {"epsilon", &ParameterSchedule::epsilon},
    };
    for (const auto& [key, member] : seqs)
        if (f.has(key)) s.*member = parse_sequence(f.at(key));
    if (f.has("theta")) s.theta = f.at("theta").real();
    if (f.has("lambda")) s.lambda = f.at("lambda").real();
    at_path(f.path(), [&] { return s.at(1); });
    return s;
}

StepperConfig parse_stepper(const Field& f) {
    f.allow_keys({"variant", "fixed_step", "mode", "tau_numerator", "grad_tol", "residual_tol", "max_iter",
                  "divergence_threshold", "gradient_guard"});
    StepperConfig c;
    if (f.has("variant")) {
        const std::string v = f.at("variant").text();
        const auto parsed = variant_from_string(v);
        if (!parsed) throw ConfigError(join(f.path(), "variant"), "unknown variant '" + v + "'");
        c.variant = *parsed;
    }
    if (f.has("fixed_step")) c.fixed_step = f.at("fixed_step").real();
    if (f.has("mode")) {
        const std::string m = f.at("mode").text();
        const auto parsed = mode_from_string(m);
        if (!parsed) throw ConfigError(join(f.path(), "mode"), "unknown composition mode '" + m + "'");
        c.mode = *parsed;
    }
    if (f.has("tau_numerator")) {
        const std::string t = f.at("tau_numerator").text();
        const auto parsed = tau_numerator_from_string(t);
        if (!parsed) throw ConfigError(join(f.path(), "tau_numerator"), "expected u or x, got '" + t + "'");
        c.tau_numerator = *parsed;
    }
    if (f.has("grad_tol")) c.stopping.grad_tol = f.at("grad_tol").real();
    if (f.has("residual_tol")) c.stopping.residual_tol = f.at("residual_tol").real();
    if (f.has("max_iter")) c.stopping.max_iter = f.at("max_iter").count();
    if (f.has("divergence_threshold")) c.divergence_threshold = f.at("divergence_threshold").real();
    if (f.has("gradient_guard")) c.gradient_guard = f.at("gradient_guard").real();

    if (!(c.stopping.grad_tol > 0.0)) throw ConfigError(join(f.path(), "grad_tol"), "must be > 0");
    if (!(c.stopping.residual_tol > 0.0)) throw ConfigError(join(f.path(), "residual_tol"), "must be > 0");
    if (c.stopping.max_iter < 1) throw ConfigError(join(f.path(), "max_iter"), "must be >= 1");
    if (!(c.divergence_threshold > 0.0)) throw ConfigError(join(f.path(), "divergence_threshold"), "must be > 0");
    if (!(c.gradient_guard >= 0.0)) throw ConfigError(join(f.path(), "gradient_guard"), "must be >= 0");
    return c;
}

// Cross-field checks that need the assembled problem.
void validate(const ProblemConfig& config) {
    const SfpProblem problem = build_problem(config);
    try {
        Stepper(problem, config.schedule, config.stepper);
    } catch (const InvalidInput& e) {
        throw ConfigError("stepper", e.what());
    }
    try {
        check_admissible(effective_parameters(config.schedule, config.stepper, 1), 1);
    } catch (const InvalidInput& e) {
        throw ConfigError("schedule", e.what());
    }
    if (config.x0 && config.x0->dim() != problem.dim())
        throw ConfigError("start.x0", fmt::format("dimension {} does not match problem dimension {}", config.x0->dim(),
                                                  problem.dim()));
    if (config.x1 && config.x1->dim() != problem.dim())
        throw ConfigError("start.x1", fmt::format("dimension {} does not match problem dimension {}", config.x1->dim(),
                                                  problem.dim()));
}

// Canonical emitter.

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

std::string flow(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_real(v[i]);
    return s + "]";
}

std::string flow(const Vector& v) { return flow(v.to_std()); }

std::string flow(const LinearMap& m) {
    std::string s = "[";
    const auto rows = m.to_rows();
    for (std::size_t i = 0; i < rows.size(); ++i) s += (i ? ", " : "") + flow(rows[i]);
    return s + "]";
}

std::string flow(const ConvexSet& set) {
    const std::string kind = "{kind: " + std::string(to_string(set.kind()));
    return std::visit(
        overloaded{
            [&](const ConvexSet::Box& b) { return kind + ", lower: " + flow(b.lower) + ", upper: " + flow(b.upper) + "}"; },
            [&](const ConvexSet::Ball& b) {
                return kind + ", center: " + flow(b.center) + ", radius: " + format_real(b.radius) + "}";
            },
            [&](const ConvexSet::Halfspace& h) {
                return kind + ", normal: " + flow(h.normal) + ", offset: " + format_real(h.offset) + "}";
            },
            [&](const ConvexSet::Hyperplane& h) {
                return kind + ", normal: " + flow(h.normal) + ", offset: " + format_real(h.offset) + "}";
            },
            [&](const ConvexSet::Singleton& s) { return kind + ", point: " + flow(s.point) + "}"; },
            [&](const ConvexSet::AffineNullspace& a) {
                return kind + ", map: " + flow(a.map) + ", rank_tol: " + format_real(a.rank_tol) + "}";
            },
            [&](const ConvexSet::WholeSpace&) { return kind + ", dim: " + std::to_string(set.dim()) + "}"; },
        },
        set.params());
}

std::string flow(const Sequence& s) {
    return std::visit(
        overloaded{
            [](const Sequence::Constant& c) { return "{rule: constant, value: " + format_real(c.value) + "}"; },
            [](const Sequence::Reciprocal& r) {
                return "{rule: reciprocal, scale: " + format_real(r.scale) + ", power: " + format_real(r.power) + "}";
            },
            [](const Sequence::ComplementOfAlpha& c) {
                return "{rule: complement_of_alpha, factor: " + format_real(c.factor) + "}";
            },
            [](const Sequence::Remainder&) { return std::string("{rule: remainder}"); },
            [](const Sequence::AlphaOverPower& a) {
                return "{rule: alpha_over_power, scale: " + format_real(a.scale) + ", power: " + format_real(a.power) +
                       "}";
            },
            [](const Sequence::List& l) { return "{rule: list, values: " + flow(l.values) + "}"; },
        },
        s.rule);
}

} // namespace

ProblemConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError("<document>", fmt::format("YAML syntax error at line {}: {}", e.mark.line + 1, e.msg));
    }
    if (!root.IsMap()) throw ConfigError("<document>", "expected a mapping at top level");
    const Field doc(root, "");
    doc.allow_keys({"problem", "schedule", "stepper", "start", "output"});

    ProblemConfig config;
    try {
        if (doc.has("problem")) config.problem = parse_problem(doc.at("problem"));
        if (doc.has("schedule")) config.schedule = parse_schedule(doc.at("schedule"));
        if (doc.has("stepper")) config.stepper = parse_stepper(doc.at("stepper"));
        if (doc.has("start")) {
            const Field s = doc.at("start");
            s.allow_keys({"x0", "x1"});
            if (s.has("x0")) config.x0 = s.at("x0").vector();
            if (s.has("x1")) config.x1 = s.at("x1").vector();
        }
        if (doc.has("output")) {
            const Field o = doc.at("output");
            o.allow_keys({"csv", "svg"});
            if (o.has("csv")) config.output.csv = o.at("csv").text();
            if (o.has("svg")) config.output.svg = o.at("svg").text();
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError("<document>", e.what());
    }
    validate(config);
    return config;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ProblemConfig& config) {
    std::string out = "problem:\n";
    std::visit(overloaded{
                   [&](const BuiltinExampleS4&) { out += "  builtin: example-s4\n"; },
                   [&](const RandomProblemSpec& r) {
                       out += fmt::format(
                           "  random: {{dim1: {}, dim2: {}, family: {}, seed: {}, with_mapping: {}}}\n", r.dim1,
                           r.dim2, to_string(r.family), r.seed, r.with_mapping ? "true" : "false");
                   },
                   [&](const ExplicitProblemSpec& e) {
                       out += "  a: " + flow(e.a) + "\n";
                       out += "  c: " + flow(e.c) + "\n";
                       out += "  q: " + flow(e.q) + "\n";
                       if (e.s) out += "  s: " + quoted(*e.s) + "\n";
                       out += "  g: " + quoted(e.g) + "\n";
                       if (e.known_solution) out += "  known_solution: " + flow(*e.known_solution) + "\n";
                   },
               },
               config.problem);

    const auto& s = config.schedule;
    out += "schedule:\n";
    out += "  alpha: " + flow(s.alpha) + "\n";
    out += "  beta: " + flow(s.beta) + "\n";
    out += "  gamma: " + flow(s.gamma) + "\n";
    out += "  delta: " + flow(s.delta) + "\n";
    out += "  rho: " + flow(s.rho) + "\n";
    out += "  epsilon: " + flow(s.epsilon) + "\n";
    out += "  theta: " + format_real(s.theta) + "\n";
    out += "  lambda: " + format_real(s.lambda) + "\n";

    const auto& c = config.stepper;
    out += "stepper:\n";
    out += "  variant: " + std::string(to_string(c.variant)) + "\n";
    if (c.fixed_step) out += "  fixed_step: " + format_real(*c.fixed_step) + "\n";
    out += "  mode: " + std::string(to_string(c.mode)) + "\n";
    out += "  tau_numerator: " + std::string(to_string(c.tau_numerator)) + "\n";
    out += "  grad_tol: " + format_real(c.stopping.grad_tol) + "\n";
    out += "  residual_tol: " + format_real(c.stopping.residual_tol) + "\n";
    out += "  max_iter: " + std::to_string(c.stopping.max_iter) + "\n";
    out += "  divergence_threshold: " + format_real(c.divergence_threshold) + "\n";
    out += "  gradient_guard: " + format_real(c.gradient_guard) + "\n";

    out += "start:";
    if (!config.x0 && !config.x1) out += " {}";
    out += "\n";
    if (config.x0) out += "  x0: " + flow(*config.x0) + "\n";
    if (config.x1) out += "  x1: " + flow(*config.x1) + "\n";

    out += "output:";
    if (!config.output.csv && !config.output.svg) out += " {}";
    out += "\n";
    if (config.output.csv) out += "  csv: " + quoted(*config.output.csv) + "\n";
    if (config.output.svg) out += "  svg: " + quoted(*config.output.svg) + "\n";
    return out;
}

std::string config_fingerprint(const ProblemConfig& config) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : serialize_config(config)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return fmt::format("{:016x}", h);
}

ProblemConfig example_s4_config(std::string_view preset, CompositionMode mode) {
    ProblemConfig config;
    config.stepper.mode = mode;
    if (preset == "cq-adaptive") {
        config.schedule = preset_cq();
        config.stepper.variant = Variant::cq_adaptive;
    } else {
        config.schedule = schedule_preset(preset);
    }
    return config;
}

SfpProblem build_problem(const ProblemConfig& config) {
    return std::visit(
        overloaded{
            [](const BuiltinExampleS4&) { return build_example_s4(); },
            [](const RandomProblemSpec& r) {
                return at_path("problem.random", [&] {
                    return generate_random_sfp(r.dim1, r.dim2, r.family, r.seed, {r.with_mapping});
                });
            },
            [](const ExplicitProblemSpec& e) {
                const std::size_t n = e.a.cols();
                std::optional<MappingSpec> s;
                if (e.s) s = at_path("problem.s", [&] { return mapping_from_name(*e.s, n); });
                MappingSpec g = at_path("problem.g", [&] { return mapping_from_name(e.g, n); });
                return at_path("problem", [&] { return SfpProblem(e.a, e.c, e.q, std::move(s), std::move(g), e.known_solution); });
            },
        },
        config.problem);
}

std::pair<Vector, std::optional<Vector>> start_points(const ProblemConfig& config, std::size_t dim) {
    Vector x0 = config.x0 ? *config.x0 : Vector::constant(dim, 1.0);
    return {std::move(x0), config.x1};
}

} // namespace sfp::harness
