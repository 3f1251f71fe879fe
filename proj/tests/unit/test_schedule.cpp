#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pcns/errors.hpp"
#include "pcns/schedule.hpp"

using namespace pcns;

TEST(ToyModel, InitialValueAndClosedForm) {
    EXPECT_NEAR(toy_model(0.25, 1.0, 1.0, 0.0), 4.0, 1e-15);
    // delta^alpha = 0.1, gamma = 2, t = 0.45 gives 1 / (0.1 + 0.9).
    EXPECT_NEAR(toy_model(0.01, 0.5, 2.0, 0.45), 1.0, 1e-14);
    EXPECT_THROW(toy_model(0.1, 1.0, 1.0, -1.0), InputError);
    EXPECT_THROW(toy_model(0.0, 1.0, 1.0, 1.0), InputError);
}

TEST(ToyModel, DecreasingAndConvex) {
    const double d = 1.0 / 8, a = 0.5, g = 1.4;
    double prev = toy_model(d, a, g, 0.0), slope_prev = -INFINITY;
    for (double t = 0.01; t < 5.0; t += 0.01) {
        const double f = toy_model(d, a, g, t);
        EXPECT_LT(f, prev);
        const double slope = (f - prev) / 0.01;
        EXPECT_GT(slope, slope_prev);
        prev = f;
        slope_prev = slope;
    }
}

TEST(ToyModel, LongTimeLimit) {
    for (double g : {1.0, 2.0}) {
        const double d = 1.0 / 16, a = 0.7;
        const double t = 1e6 * std::pow(d, a);
        EXPECT_NEAR(g * t * toy_model(d, a, g, t), 1.0, 1e-4);
    }
}

TEST(ToyModel, OdeOracleAgrees) {
    std::vector<double> times;
    for (int i = 0; i < 100; ++i) times.push_back(1e-3 * std::pow(1e9, i / 99.0));
    const auto ode = toy_model_ode(1.0 / 8, 0.5, 1.0, times);
    ASSERT_EQ(ode.size(), times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double f = toy_model(1.0 / 8, 0.5, 1.0, times[i]);
        EXPECT_LE(std::abs(ode[i] - f) / f, 1e-10) << times[i];
    }
}

TEST(Schedule, N0FifteenArithmetic) {
    const EnvelopeSchedule s = envelope_schedule(std::ldexp(1.0, -15), 1.0, 1.0, 0.1);
    EXPECT_TRUE(s.in_regime);
    EXPECT_TRUE(s.warning.empty());
    EXPECT_EQ(s.N0, 15);
    EXPECT_EQ(s.intervals(), 1);
    EXPECT_NEAR(s.T0, 7 * std::ldexp(1.0, -18), 1e-18);
    EXPECT_NEAR(s.T0, 2.6703e-5, 1e-9);
    EXPECT_EQ(envelope_value(s, 0.0), 131076.0);
    EXPECT_EQ(envelope_interval(s, 0.0), 1);
}

TEST(Schedule, EnvelopeAtT0BelowNineTenths) {
    const EnvelopeSchedule s = envelope_schedule(std::ldexp(1.0, -15), 1.0, 1.0, 0.1);
    const double v = envelope_value(s, s.T0);
    EXPECT_NEAR(v, 1.0 / (0.25 / (1.0 + std::ldexp(1.0, 15)) + 0.875 * std::ldexp(1.0, -15)), 1e-9);
    EXPECT_LE(v, 0.9 * std::ldexp(1.0, 15));
    EXPECT_EQ(envelope_value(s, 1.5 * s.T0), 4e4);
}

TEST(Schedule, IntervalStartsAndMonotonicity) {
    for (double gamma : {1.0, 1.5}) {
        const EnvelopeSchedule s = envelope_schedule(std::ldexp(1.0, -20), 1.0, gamma, 0.1);
        ASSERT_EQ(s.intervals(), 6);
        for (int j = 1; j <= s.intervals(); ++j) {
            EXPECT_LT(s.t[j - 1], s.t[j]);
            EXPECT_NEAR(envelope_value(s, s.t[j - 1]), 4 * (1 + std::ldexp(1.0, s.N0 + 1 - j)), 1e-6) << j;
            const double h = (s.t[j] - s.t[j - 1]) / 50;
            for (int k = 1; k < 50; ++k)
                EXPECT_LT(envelope_value(s, s.t[j - 1] + k * h), envelope_value(s, s.t[j - 1] + (k - 1) * h));
        }
        EXPECT_NEAR(s.T0, 7.0 / (8.0 * gamma) * (std::ldexp(1.0, -14) - std::ldexp(1.0, -s.N0)), 1e-18);
    }
}

TEST(Schedule, T0BracketAboveFifteen) {
    for (int N0 = 16; N0 <= 40; ++N0) {
        for (double gamma : {1.0, 3.0}) {
            const EnvelopeSchedule s = envelope_schedule(std::ldexp(1.0, -N0), 1.0, gamma, 0.1);
            EXPECT_GT(s.T0, 7.0 / gamma * std::ldexp(1.0, -18));
            EXPECT_LT(s.T0, 7.0 / gamma * std::ldexp(1.0, -17));
        }
    }
}

TEST(Schedule, N0FromNonDyadicAmplitude) {
    // delta^{-alpha} = 3e5 lies in [2^18, 2^19).
    const EnvelopeSchedule s = envelope_schedule(1.0 / 3e5, 1.0, 1.0, 0.1);
    EXPECT_EQ(s.N0, 18);
}

TEST(Schedule, ThresholdTimes) {
    // delta = 1, eps = 0.1 makes eps delta^{1 - 3 alpha / 4} = 0.05.
    const EnvelopeSchedule s = envelope_schedule(1.0, 0.5, 1.0, 0.05);
    EXPECT_NEAR(s.T1, 2 * std::log(20.0), 1e-12);
    EXPECT_NEAR(s.T2, 400.0, 1e-9);
    EXPECT_NEAR(s.beta, 1 - 0.375 * 2, 1e-15);
    EXPECT_FALSE(small_amplitude_regime(s, s.T1 * 0.99));
    EXPECT_TRUE(small_amplitude_regime(s, s.T1));
    const EnvelopeSchedule r = envelope_schedule(0.125, 2.0 / 3.0, 1.0, 0.1);
    EXPECT_NEAR(r.l6_switch, 6 * (2 + 2.0 / 3.0) * std::log(8.0), 1e-12);
}

TEST(Schedule, OutsideRegimeWarns) {
    const EnvelopeSchedule s = envelope_schedule(0.125, 0.5, 1.0, 0.1);
    EXPECT_FALSE(s.in_regime);
    EXPECT_FALSE(s.warning.empty());
    EXPECT_EQ(s.intervals(), 0);
    EXPECT_EQ(s.T0, 0.0);
    EXPECT_EQ(envelope_value(s, 0.0), 4e4);
    EXPECT_EQ(envelope_interval(s, 1.0), 0);
}

TEST(Schedule, Rejections) {
    EXPECT_THROW(envelope_schedule(0.0, 1.0, 1.0, 0.1), InputError);
    EXPECT_THROW(envelope_schedule(1.5, 1.0, 1.0, 0.1), InputError);
    EXPECT_THROW(envelope_schedule(0.1, 0.0, 1.0, 0.1), InputError);
    const EnvelopeSchedule s = envelope_schedule(std::ldexp(1.0, -15), 1.0, 1.0, 0.1);
    EXPECT_THROW(envelope_value(s, -1.0), InputError);
    EXPECT_THROW(interval_budget(s, 2), InputError);
}

TEST(Schedule, BudgetsMatchClosedForm) {
    // Each interval integrates to log(1 + gamma dt / start) / gamma.
    for (double gamma : {1.0, 2.0}) {
        const EnvelopeSchedule s = envelope_schedule(std::ldexp(1.0, -25), 1.0, gamma, 0.1);
        double sum = 0.0;
        for (int j = 1; j <= s.intervals(); ++j) {
            const double start = 0.25 / (1.0 + std::ldexp(1.0, s.N0 + 1 - j));
            const double exact = std::log1p(gamma * (s.t[j] - s.t[j - 1]) / start) / gamma;
            EXPECT_NEAR(interval_budget(s, j), exact, 1e-12 * exact) << j;
            sum += exact;
        }
        EXPECT_NEAR(envelope_l1(s), sum, 1e-11 * sum);
        EXPECT_LE(sum, 2.0 / gamma * (s.N0 - 14));
        EXPECT_LE(envelope_l1(s), 3.0 / gamma * std::log(std::ldexp(1.0, 25)));
    }
}
