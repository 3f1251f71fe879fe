#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "pcns/errors.hpp"
#include "pcns/harness.hpp"
#include "pcns/schedule.hpp"

using namespace pcns;

namespace {

EnvelopeSchedule in_regime_schedule() { return envelope_schedule(std::ldexp(1.0, -17), 1.0, 1.0, 0.1); }

} // namespace

TEST(EnvelopeCheck, HalfEnvelopeHasMarginOneHalf) {
    const EnvelopeSchedule s = in_regime_schedule();
    std::vector<double> t, a;
    for (int i = 0; i <= 400; ++i) {
        t.push_back(2.0 * s.T0 * i / 400);
        a.push_back(0.5 * envelope_value(s, t.back()));
    }
    const EnvelopeCheck c = envelope_check(t, a, s);
    EXPECT_TRUE(c.in_regime);
    EXPECT_TRUE(c.passed);
    EXPECT_FALSE(c.violation_t);
    ASSERT_EQ(c.margins.size(), 4u);  // three intervals and the plateau
    for (const auto& m : c.margins) {
        EXPECT_NEAR(m.worst, 0.5, 1e-12) << m.interval;
        EXPECT_GT(m.samples, 0u);
    }
}

TEST(EnvelopeCheck, ExceedanceInRegimeFails) {
    const EnvelopeSchedule s = in_regime_schedule();
    std::vector<double> t, a;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(s.T0 * i / 100);
        a.push_back(0.9 * envelope_value(s, t.back()));
    }
    a[37] = 1.01 * envelope_value(s, t[37]);
    const EnvelopeCheck c = envelope_check(t, a, s);
    EXPECT_FALSE(c.passed);
    ASSERT_TRUE(c.violation_t);
    EXPECT_EQ(*c.violation_t, t[37]);
    EXPECT_NEAR(c.violation_value / c.violation_envelope, 1.01, 1e-12);
}

TEST(EnvelopeCheck, OutsideRegimeUsesReciprocalFit) {
    const EnvelopeSchedule s = envelope_schedule(0.125, 2.0, 1.0, 0.1);
    ASSERT_FALSE(s.in_regime);
    std::vector<double> t, a;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(0.001 * i);
        a.push_back(1.0 / (1.0 / 64 + 1.3 * t.back()));
    }
    EnvelopeCheck c = envelope_check(t, a, s);
    EXPECT_TRUE(c.passed);
    ASSERT_TRUE(c.fit);
    EXPECT_NEAR(c.fit->exponent, 1.3, 1e-9);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = 10.0 + (i % 2 ? 5.0 : 0.0);
    c = envelope_check(t, a, s);
    EXPECT_FALSE(c.passed);
}

TEST(EnvelopeCheck, InputValidation) {
    const EnvelopeSchedule s = in_regime_schedule();
    EXPECT_THROW(envelope_check({0.1, 0.2}, {1.0, 1.0}, s), InputError);
    EXPECT_THROW(envelope_check({0.0, 0.2, 0.2}, {1.0, 1.0, 1.0}, s), InputError);
    EXPECT_THROW(envelope_check({0.0, 0.1}, {1.0, std::numeric_limits<double>::quiet_NaN()}, s), InputError);
}

TEST(Thresholds, EquilibriumSeriesGivesZeros) {
    const EnvelopeSchedule s = envelope_schedule(0.125, 0.5, 1.0, 0.1);
    std::vector<double> t, z;
    for (int i = 0; i <= 1000; ++i) {
        t.push_back(0.5 * i);
        z.push_back(0.0);
    }
    const ThresholdsReport r = thresholds_report(s, t, z, z, z);
    ASSERT_EQ(r.rows.size(), 4u);
    EXPECT_EQ(r.rows[0].name, "T0");
    for (const auto& row : r.rows) {
        if (row.truncated) continue;
        EXPECT_EQ(row.a_inf, 0.0);
        EXPECT_EQ(row.a_l6, 0.0);
        EXPECT_EQ(row.a_l2, 0.0);
    }
    EXPECT_TRUE(r.rows[3].truncated);  // T2 = 100 * 8^{1.25} = 1345 lies past t = 500
    EXPECT_FALSE(r.text().empty());
}

TEST(Thresholds, LinearInterpolation) {
    const EnvelopeSchedule s = envelope_schedule(1.0, 0.5, 1.0, 0.05);  // T1 = 2 ln 20
    const std::vector<double> t{0.0, 10.0}, a{0.0, 10.0};
    const ThresholdsReport r = thresholds_report(s, t, a, a, a);
    for (const auto& row : r.rows)
        if (row.name == "T1") {
            EXPECT_NEAR(row.a_inf, 2 * std::log(20.0), 1e-12);
        }
}

TEST(ScheduleText, ListsIntervals) {
    const std::string text = schedule_text(in_regime_schedule());
    EXPECT_NE(text.find("N0"), std::string::npos);
    EXPECT_NE(text.find("T0"), std::string::npos);
}
