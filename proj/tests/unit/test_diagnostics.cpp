#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pcns/diagnostics.hpp"
#include "pcns/errors.hpp"
#include "pcns/norms.hpp"
#include "pcns/potential.hpp"
#include "pcns/pulse.hpp"
#include "pcns/spectral.hpp"

using namespace pcns;

namespace {

constexpr double kPi = std::numbers::pi;

State random_state(const Grid& g, std::uint64_t seed) {
    State s(g);
    const ScalarField r = random_band_limited(g, 5.0, seed);
    const double span = std::max(-r.min(), r.max());
    for (std::size_t i = 0; i < g.size(); ++i) s.rho[i] = 1.5 + 0.9 * r[i] / span;
    s.u = random_band_limited_vector(g, 5.0, seed + 1);
    return s;
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

TEST(EffectiveFlux, Equilibrium) {
    const Grid g(16, 1.0);
    EXPECT_EQ(max_abs(effective_flux(State(g), PulseParams{})), 0.0);
}

TEST(EffectiveFlux, UniformCompressedState) {
    const Grid g(16, 1.0);
    for (double gamma : {1.0, 1.4, 3.0}) {
        PulseParams p;
        p.gamma = gamma;
        State s(g);
        for (auto& v : s.rho.values) v = std::pow(2.0, 1.0 / gamma);
        const ScalarField F = effective_flux(s, p);
        for (double v : F.values) ASSERT_NEAR(v, -1.0, 1e-14);
    }
}

TEST(EffectiveFlux, GeneralViscosityScalesA) {
    const Grid g(8, 1.0);
    PulseParams p;
    p.mu = 1.5;
    p.lambda = 0.5;
    State s(g);
    for (auto& v : s.rho.values) v = 2.0;
    for (double v : effective_flux(s, p).values) ASSERT_NEAR(v, -0.5, 1e-14);
}

TEST(MaterialDerivative, Equilibrium) {
    const Grid g(16, 1.0);
    const VectorField ud = material_derivative(State(g), PulseParams{});
    for (int d = 0; d < 3; ++d) EXPECT_EQ(max_abs(ud[d]), 0.0);
}

TEST(MaterialDerivative, SingleMode) {
    const Grid g(32, 2.0);
    const double k = 2 * kPi / g.L, A = 0.7;
    for (double gamma : {1.0, 2.0}) {
        PulseParams p;
        p.gamma = gamma;
        State s(g);
        s.u[0] = ScalarField::sample(g, [&](double x, double, double) { return A * std::sin(k * x); });
        const VectorField ud = material_derivative(s, p);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(ud[0][i] + k * k * s.u[0][i]));
        EXPECT_LT(err, 1e-11);
        EXPECT_LT(max_abs(ud[1]) + max_abs(ud[2]), 1e-14);
    }
}

TEST(MaterialDerivative, RejectsNonpositiveDensity) {
    const Grid g(8, 1.0);
    State s(g);
    s.rho[3] = 0.0;
    EXPECT_THROW(material_derivative(s, PulseParams{}), InputError);
}

TEST(EllipticIdentity, EquilibriumIsZero) {
    const Grid g(16, 1.0);
    EXPECT_EQ(elliptic_identity_residual(State(g), PulseParams{}), 0.0);
}

TEST(EllipticIdentity, RandomStates) {
    const Grid g(32, 1.0);
    for (int k = 0; k < 3; ++k) {
        PulseParams p;
        p.gamma = 1.0 + 0.4 * k;
        const State s = random_state(g, 100 + k);
        const VectorField ud = material_derivative(s, p);
        EXPECT_LE(elliptic_residuals(s, p, ud).max(), 1e-10);
    }
}

TEST(EllipticIdentity, GeneralViscosity) {
    const Grid g(32, 1.0);
    PulseParams p;
    p.mu = 0.3;
    p.lambda = 0.8;
    p.gamma = 1.4;
    const State s = random_state(g, 7);
    EXPECT_LE(elliptic_residuals(s, p, material_derivative(s, p)).max(), 1e-10);
}

TEST(EllipticIdentity, DetectsPerturbedUdot) {
    const Grid g(32, 1.0);
    const PulseParams p;
    const State s = random_state(g, 55);
    VectorField ud = material_derivative(s, p);
    const VectorField noise = random_band_limited_vector(g, 5.0, 999);
    const double scale = 1e-3 * lp_norm(s.rho * ud, 2.0) / lp_norm(s.rho * noise, 2.0);
    ud = ud + scale * noise;
    const double r = elliptic_identity_residual(s, p, ud);
    EXPECT_GT(r, 1e-4);
    EXPECT_LT(r, 1e-2);
}

TEST(Energies, Equilibrium) {
    const Grid g(16, 1.0);
    const Energies e = energies(State(g), PulseParams{}, 1.0);
    EXPECT_EQ(e.E1, 0.0);
    EXPECT_EQ(e.E2, 0.0);
    EXPECT_EQ(e.E, 0.0);
    EXPECT_EQ(e.D, 0.0);
}

TEST(Energies, SingleShearMode) {
    const Grid g(32, 1.0);
    const double k = 2 * kPi, A = 0.3, V = 1.0;
    State s(g);
    s.u[0] = ScalarField::sample(g, [&](double, double y, double) { return A * std::sin(k * y); });
    const Energies e = energies(s, PulseParams{}, 1.0);
    const double expect = A * A * V / 2 + 0.5 * (A * A * k * k * V / 2);
    EXPECT_NEAR(e.E1, expect, 1e-10 * expect);
}

TEST(Energies, OrderingOnRandomState) {
    const Grid g(16, 1.0);
    const State s = random_state(g, 31);
    for (double c1 : {0.5, 1.0, 4.0}) {
        const Energies e = energies(s, PulseParams{}, c1);
        EXPECT_GE(e.E, e.E1);
        EXPECT_GE(e.D, 0.0);
        EXPECT_NEAR(e.E, e.E1 + e.E2 / (4 * c1), 1e-12 * e.E);
    }
}

TEST(BasicEnergy, KineticPlusPotential) {
    const Grid g(16, 1.0);
    State s(g);
    for (auto& v : s.rho.values) v = 2.0;
    for (auto& v : s.u[1].values) v = 0.5;
    EXPECT_NEAR(basic_energy(s, PulseParams{}), 0.5 * 2.0 * 0.25 + (2 * std::log(2.0) - 1), 1e-13);
    EXPECT_EQ(basic_dissipation(s, PulseParams{}), 0.0);
}

TEST(FreqSplit, Equilibrium) {
    const Grid g(16, 1.0);
    EXPECT_EQ(freq_split_low(State(g), PulseParams{}, 5.0), 0.0);
}

TEST(FreqSplit, AllModesIsParseval) {
    const Grid g(32, 1.0);
    PulseParams p;
    p.gamma = 1.4;
    const State s = random_state(g, 77);
    ScalarField varrho = s.rho;
    for (auto& v : varrho.values) v -= 1.0;
    const double direct = p.gamma * l2_squared(varrho) + l2_squared(s.rho * s.u);
    EXPECT_NEAR(freq_split_low(s, p, 1e12), direct, 1e-10 * direct);
}

TEST(FreqSplit, SingleLowMode) {
    const Grid g(32, 1.0);
    PulseParams p;
    p.gamma = 2.0;
    const double eps = 0.1;
    State s(g);
    s.rho = ScalarField::sample(g, [&](double x, double, double) { return 1.0 + eps * std::cos(2 * kPi * x); });
    EXPECT_NEAR(freq_split_low(s, p, 7.0), p.gamma * eps * eps / 2, 1e-14);
    EXPECT_NEAR(freq_split_low(s, p, 6.0), 0.0, 1e-30);
}

TEST(FreqSplit, MonotoneInRadius) {
    const Grid g(16, 1.0);
    State s = random_state(g, 3);
    s.t = 2.0;
    double prev = 0.0;
    for (double r = 1.0; r < 200.0; r *= 1.3) {
        const double v = freq_split_low(s, PulseParams{}, r);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(InequalityMonitor, UniformStateExample) {
    const Grid g(8, 1.0);
    State s(g);
    for (auto& v : s.rho.values) v = 2.0;
    const auto m = inequality_monitor(s, PulseParams{});
    ASSERT_EQ(m.size(), inequality_names().size());
    const auto& p3r2 = m[3];
    EXPECT_EQ(p3r2.name, "L3interp_p3_R2");
    EXPECT_NEAR(p3r2.lhs, 1.0, 1e-14);
    EXPECT_NEAR(p3r2.rhs, 16 * (2 * std::log(2.0) - 1) + 0.125, 1e-12);
    EXPECT_NEAR(p3r2.rhs, 6.306, 1e-3);
    EXPECT_FALSE(p3r2.violated());
}

TEST(InequalityMonitor, EquilibriumTrivial) {
    const Grid g(8, 1.0);
    for (const auto& m : inequality_monitor(State(g), PulseParams{})) {
        if (!m.hard) continue;
        EXPECT_EQ(m.lhs, 0.0) << m.name;
        EXPECT_FALSE(m.violated()) << m.name;
    }
}

TEST(InequalityMonitor, HardBoundsHoldOnPulseAndRandomStates) {
    const Grid g(32, 1.0);
    for (double gamma : {1.0, 1.4, 3.0}) {
        PulseParams p;
        p.gamma = gamma;
        for (const State& s : {build_pulse(p, g), random_state(g, 8)})
            for (const auto& m : inequality_monitor(s, p))
                if (m.hard) {
                    EXPECT_FALSE(m.violated()) << m.name << " gamma=" << gamma;
                }
    }
}

TEST(GradAEvolution, RejectsShortSeries) {
    const Grid g(8, 1.0);
    EXPECT_THROW(grad_a_evolution_residual({State(g), State(g)}, PulseParams{}, 2.0), InputError);
}

TEST(GradAEvolution, EquilibriumSeries) {
    const Grid g(16, 1.0);
    std::vector<State> series;
    for (int k = 0; k < 4; ++k) {
        State s(g);
        s.t = 0.1 * k;
        series.push_back(s);
    }
    for (double r : grad_a_evolution_residual(series, PulseParams{}, 2.0)) EXPECT_EQ(r, 0.0);
}

namespace {

/// rho(t, x) = rho0(x - c t - s(z) t) transported by the steady velocity
/// u = (c + s(z), 0, 0) with s(z) = 0.3 sin(2 pi z); div u = 0, so the mass
/// equation holds exactly and a(t) is known in closed form.
std::vector<State> transported_series(const Grid& g, double dt) {
    std::vector<State> out;
    for (int k = -1; k <= 1; ++k) {
        const double t = 0.2 + k * dt;
        State s(g);
        s.t = t;
        s.rho = ScalarField::sample(g, [&](double x, double, double z) {
            const double shift = (0.5 + 0.3 * std::sin(2 * kPi * z)) * t;
            return 1.0 + 0.3 * std::sin(2 * kPi * (x - shift)) + 0.1 * std::cos(2 * kPi * (x - shift));
        });
        s.u[0] = ScalarField::sample(g, [&](double, double, double z) { return 0.5 + 0.3 * std::sin(2 * kPi * z); });
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST(GradAEvolution, ManufacturedTransport) {
    const Grid g(32, 1.0);
    PulseParams p;
    p.gamma = 1.4;
    const double r1 = grad_a_evolution_residual(transported_series(g, 1e-4), p, 2.0).at(0);
    const double r2 = grad_a_evolution_residual(transported_series(g, 5e-5), p, 2.0).at(0);
    EXPECT_LE(r1, 1e-6);
    EXPECT_NEAR(r1 / r2, 4.0, 0.5);
}

TEST(ComputeRecord, ConsistentWithComponents) {
    const Grid g(32, 1.0);
    PulseParams p;
    p.gamma = 1.4;
    const State s = build_pulse(p, g);
    DiagnosticsOptions opt;
    const DiagnosticsRecord r = compute_record(s, p, opt);
    const Energies e = energies(s, p, opt.c1);
    EXPECT_NEAR(r.E, e.E, 1e-12 * e.E);
    EXPECT_NEAR(r.D, e.D, 1e-12 * e.D);
    EXPECT_NEAR(r.H_rho, potential_energy(s.rho, p.gamma), 1e-14);
    EXPECT_NEAR(r.mass, s.rho.integral(), 1e-14);
    EXPECT_LE(r.min_rho, r.max_rho);
    EXPECT_GT(r.besov_u_B12_21, 0.0);
    EXPECT_GT(r.besov_rho_B34_41, 0.0);
    EXPECT_TRUE(std::isnan(r.energy_balance_residual));
    EXPECT_LE(r.elliptic_residual, 1e-10);
    const auto values = record_values(r);
    EXPECT_EQ(values.size(), diagnostics_columns().size());
    for (std::size_t i = 0; i < values.size(); ++i)
        if (diagnostics_columns()[i] != "energy_balance_residual") {
            EXPECT_TRUE(std::isfinite(values[i])) << i;
        }
}

TEST(ComputeRecord, BesovSkippedWhenDisabled) {
    const Grid g(16, 1.0);
    DiagnosticsOptions opt;
    opt.besov_every = 0;
    const DiagnosticsRecord r = compute_record(build_pulse(PulseParams{}, g), PulseParams{}, opt);
    EXPECT_TRUE(std::isnan(r.besov_u_B12_21));
    EXPECT_TRUE(std::isnan(r.besov_rho_B34_41));
}

TEST(ComputeRecord, ColumnOrderFixed) {
    const auto cols = diagnostics_columns();
    ASSERT_GE(cols.size(), 28u);
    EXPECT_EQ(cols[0], "t");
    EXPECT_EQ(cols[5], "E");
    EXPECT_EQ(cols[8], "Linf_a");
    EXPECT_EQ(cols[27], "energy_balance_residual");
    EXPECT_EQ(cols[28], "ineq_L3interp_p2_R2_lhs");
}
