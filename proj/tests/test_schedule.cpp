#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sfp/errors.hpp"
#include "sfp/schedule.hpp"
#include "support.hpp"

using namespace sfp;
using sfp::testing::Gen;

TEST_CASE("sequence rules") {
    CHECK(Sequence::constant(0.5).at(7) == 0.5);
    CHECK(Sequence::reciprocal(0.1).at(4) == doctest::Approx(0.025));
    CHECK(Sequence::reciprocal(1.0, 2.0).at(3) == doctest::Approx(1.0 / 9.0));
    CHECK(Sequence::complement_of_alpha(0.5).at(1, 0.2) == doctest::Approx(0.4));
    CHECK(Sequence::remainder().at(1, 0.2, 0.3) == doctest::Approx(0.5));
    CHECK(Sequence::alpha_over_power(1.0, 1.0).at(5, 0.02) == doctest::Approx(0.004));
    CHECK_THROWS_AS(Sequence::constant(1.0).at(0), InvalidInput);
    CHECK(Sequence::remainder().depends_on_alpha());
    CHECK(Sequence::remainder().depends_on_beta());
    CHECK_FALSE(Sequence::reciprocal(1.0).depends_on_alpha());
}

TEST_CASE("list sequences hold their last value") {
    const Sequence s = Sequence::list({0.3, 0.2, 0.1});
    CHECK(s.at(1) == 0.3);
    CHECK(s.at(3) == 0.1);
    CHECK(s.at(100) == 0.1);
    CHECK_THROWS_AS(Sequence::list({}), InvalidInput);
    CHECK_THROWS_AS(Sequence::list({0.1, std::nan("")}), InvalidInput);
}

TEST_CASE("default schedule values") {
    const ParameterSchedule s = preset_paper_s4();
    const StepParameters p = s.at(2);
    CHECK(p.alpha == doctest::Approx(0.05));
    CHECK(p.beta == doctest::Approx(0.475));
    CHECK(p.gamma == doctest::Approx(0.475));
    CHECK(p.delta == 0.5);
    CHECK(p.rho == 2.0);
    CHECK(p.epsilon == doctest::Approx(0.025));
    CHECK(p.theta == 0.5);
    CHECK(p.lambda == 0.5);
    CHECK(s == schedule_preset("paper-s4"));
}

TEST_CASE("presets") {
    const StepParameters t = preset_table1().at(5);
    CHECK(t.alpha == 0.0);
    CHECK(t.beta == 0.0);
    CHECK(t.gamma == 1.0);
    CHECK(t.delta == 1.0);
    CHECK(t.theta == 0.0);
    CHECK(t.lambda == 0.5);
    const StepParameters c = preset_cq().at(5);
    CHECK(c.delta == 0.0);
    CHECK(c.gamma == 1.0);
    CHECK(c.lambda == 1.0);
    CHECK_THROWS_AS(schedule_preset("fast"), InvalidInput);
}

TEST_CASE("self-referential definitions are rejected") {
    ParameterSchedule s;
    s.alpha = Sequence::complement_of_alpha(0.5);
    CHECK_THROWS_AS(s.at(1), InvalidInput);
    ParameterSchedule t;
    t.beta = Sequence::remainder();
    CHECK_THROWS_AS(t.at(1), InvalidInput);
}

TEST_CASE("admissibility names the violated condition") {
    StepParameters p;
    p.alpha = 0.2;
    p.beta = 0.3;
    p.gamma = 0.5;
    p.delta = 0.5;
    CHECK_NOTHROW(check_admissible(p, 3));

    auto message = [](StepParameters q) {
        try {
            check_admissible(q, 4);
        } catch (const InvalidInput& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    StepParameters bad = p;
    bad.gamma = 0.4;
    CHECK(message(bad).find("c5") != std::string::npos);
    CHECK(message(bad).find("n = 4") != std::string::npos);
    bad = p;
    bad.rho = 4.0;
    CHECK(message(bad).find("rho") != std::string::npos);
    bad = p;
    bad.lambda = 0.0;
    CHECK(message(bad).find("lambda") != std::string::npos);
    bad = p;
    bad.epsilon = -1.0;
    CHECK(message(bad).find("epsilon") != std::string::npos);
    bad = p;
    bad.delta = 1.5;
    CHECK(message(bad).find("delta") != std::string::npos);
}

TEST_CASE("validate_schedule on the reference choice passes every condition") {
    ParameterSchedule s;
    s.alpha = Sequence::reciprocal(0.1);
    s.beta = Sequence::complement_of_alpha(0.5);
    s.gamma = Sequence::remainder();
    s.delta = Sequence::constant(0.5);
    s.epsilon = Sequence::reciprocal(1.0, 2.0);
    const ScheduleReport r = validate_schedule(s, 10000);
    CHECK(r.horizon == 10000);
    for (const char* c : {"range", "c1", "c2", "c3", "c4", "c5"}) {
        CAPTURE(c);
        CHECK(r.find(c).status == ConditionStatus::pass);
    }
    CHECK_FALSE(r.any_failed());
    CHECK_THROWS_AS(r.find("c9"), InvalidInput);
}

TEST_CASE("validate_schedule warns on beta = 0 but c1 holds") {
    ParameterSchedule s;
    s.beta = Sequence::constant(0.0);
    s.gamma = Sequence::remainder();
    const ScheduleReport r = validate_schedule(s, 1000);
    CHECK(r.find("range").status == ConditionStatus::warn);
    CHECK(r.find("c1").status == ConditionStatus::pass);
    CHECK_FALSE(r.any_failed());
}

TEST_CASE("validate_schedule fails c5 when the weights do not sum to one") {
    ParameterSchedule s;
    s.alpha = Sequence::constant(0.1);
    s.beta = Sequence::constant(0.4);
    s.gamma = Sequence::list({0.5, 0.5, 0.4});
    const ScheduleReport r = validate_schedule(s, 10);
    CHECK(r.find("c5").status == ConditionStatus::fail);
    CHECK(r.find("c5").detail.find("n = 3") != std::string::npos);
    CHECK(r.any_failed());
    CHECK_THROWS_AS(validate_schedule(s, 0), InvalidInput);
}

TEST_CASE("validate_schedule warns on the table-1 preset") {
    const ScheduleReport r = validate_schedule(preset_table1(), 100);
    CHECK(r.find("range").status == ConditionStatus::warn);
    CHECK(r.find("c2").status == ConditionStatus::warn);  // alpha = 0
    CHECK(r.find("c3").status == ConditionStatus::warn);
    CHECK(r.find("c4").status == ConditionStatus::warn);  // delta = 1
    CHECK(r.find("c5").status == ConditionStatus::pass);
}

TEST_CASE("property: remainder rule closes c5 for random alpha and beta") {
    Gen gen(31);
    for (int trial = 0; trial < 200; ++trial) {
        ParameterSchedule s;
        s.alpha = Sequence::reciprocal(gen.uniform(0.0, 0.5), gen.uniform(0.5, 2.0));
        s.beta = Sequence::complement_of_alpha(gen.uniform(0.0, 1.0));
        s.gamma = Sequence::remainder();
        const std::size_t n = gen.size(1, 10000);
        const StepParameters p = s.at(n);
        CHECK(std::abs(p.alpha + p.beta + p.gamma - 1.0) <= 1e-12);
        CHECK_NOTHROW(s.check_admissible(n));
    }
}
