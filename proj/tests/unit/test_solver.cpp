#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "pcns/csv.hpp"
#include "pcns/errors.hpp"
#include "pcns/manufactured.hpp"
#include "pcns/norms.hpp"
#include "pcns/pulse.hpp"
#include "pcns/solver.hpp"
#include "pcns/spectral.hpp"

using namespace pcns;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

PulseParams unit_params(double gamma = 1.0, double mu = 1.0, double lambda = 0.0) {
    PulseParams p;
    p.gamma = gamma;
    p.mu = mu;
    p.lambda = lambda;
    return p;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("pcns_solver_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) { return lp_norm(a - b, kInf); }

} // namespace

TEST(SolverConfig, Validation) {
    SolverConfig c;
    EXPECT_NO_THROW(c.validate());
    c.dt_init = 0.0;
    EXPECT_THROW(c.validate(), InputError);
    c = SolverConfig{};
    c.cfl_safety = 1.5;
    EXPECT_THROW(c.validate(), InputError);
    c = SolverConfig{};
    c.t_end = -1.0;
    EXPECT_THROW(c.validate(), InputError);
    c = SolverConfig{};
    c.diagnostics_every = -1;
    EXPECT_THROW(c.validate(), InputError);
}

TEST(Cfl, EquilibriumUsesSoundSpeedAndViscosity) {
    const Grid g(16, 1.0);
    const SolverConfig cfg;
    const double dx = g.dx();
    EXPECT_NEAR(cfl_dt(State(g), unit_params(), cfg), 0.9 * std::min(dx, dx * dx / 6.0), 1e-15);
    EXPECT_NEAR(cfl_dt(State(g), unit_params(1.0, 1e-3), cfg), 0.9 * dx, 1e-15);
}

TEST(Cfl, AdvectiveBoundUsesMaxSpeed) {
    const Grid g(16, 1.0);
    const SolverConfig cfg;
    const PulseParams p = unit_params(1.0, 1e-4);
    for (double U : {1.0, 2.0, 10.0}) {
        State s(g);
        s.u[0] = ScalarField(g, U);
        EXPECT_NEAR(cfl_dt(s, p, cfg), 0.9 * g.dx() / (U + 1.0), 1e-15) << U;
    }
}

TEST(Cfl, ViscousBoundScalesWithDxSquared) {
    const SolverConfig cfg;
    const PulseParams p = unit_params();
    EXPECT_NEAR(cfl_dt(State(Grid(16, 1.0)), p, cfg) / cfl_dt(State(Grid(32, 1.0)), p, cfg), 4.0, 1e-12);
}

TEST(Rhs, EquilibriumIsStationary) {
    const Grid g(16, 1.0);
    for (double gamma : {1.0, 1.4}) {
        const Tendencies t = rhs(State(g), unit_params(gamma));
        EXPECT_EQ(lp_norm(t.drho, kInf), 0.0);
        for (int d = 0; d < 3; ++d) EXPECT_EQ(lp_norm(t.du[d], kInf), 0.0);
    }
}

TEST(Rhs, SingleModeGradientFlow) {
    // rho = 1, u = (A k cos kx, 0, 0): viscous decay plus the Burgers term.
    const Grid g(16, 1.0);
    const double A = 0.1, k = 2 * kPi, mu = 1.0, lambda = 0.5;
    State s(g);
    s.u[0] = ScalarField::sample(g, [&](double x, double, double) { return A * k * std::cos(k * x); });
    const Tendencies t = rhs(s, unit_params(1.0, mu, lambda));
    const auto drho = ScalarField::sample(g, [&](double x, double, double) { return A * k * k * std::sin(k * x); });
    const auto du = ScalarField::sample(g, [&](double x, double, double) {
        return -(mu + lambda) * k * k * A * k * std::cos(k * x) + A * A * k * k * k * std::sin(k * x) * std::cos(k * x);
    });
    EXPECT_LT(max_abs_diff(t.drho, drho), 1e-10);
    EXPECT_LT(max_abs_diff(t.du[0], du), 1e-9);
    EXPECT_LT(lp_norm(t.du[1], kInf) + lp_norm(t.du[2], kInf), 1e-12);
}

TEST(Rhs, ForcedManufacturedSolutionIsConsistent) {
    // rhs + forcing must equal the time derivative of the exact solution,
    // taken here by a fourth-order central difference. At 32^3 the division by
    // rho leaves a 6e-9 spatial truncation error, so the check runs at 64^3.
    const Grid g(64, 1.0);
    const PulseParams p = unit_params(2.0, 0.05, 0.02);
    const Manufactured m(p);
    const double h = 1e-3;
    const State e2m = m.exact(g, -2 * h), e1m = m.exact(g, -h), e1p = m.exact(g, h), e2p = m.exact(g, 2 * h);
    const Tendencies t = rhs(m.exact(g, 0.0), p, false);
    ScalarField s_rho(g);
    VectorField s_u(g);
    m.forcing(0.0, s_rho, s_u);
    auto fd = [&](const ScalarField& a2, const ScalarField& a1, const ScalarField& b1, const ScalarField& b2) {
        return (1.0 / (12 * h)) * (a2 - b2 + 8.0 * (b1 - a1));
    };
    double worst = max_abs_diff(t.drho + s_rho, fd(e2m.rho, e1m.rho, e1p.rho, e2p.rho));
    for (int d = 0; d < 3; ++d)
        worst = std::max(worst, max_abs_diff(t.du[d] + s_u[d], fd(e2m.u[d], e1m.u[d], e1p.u[d], e2p.u[d])));
    EXPECT_LT(worst, 1e-9);
}

TEST(Rhs, PositivityFloor) {
    const Grid g(8, 1.0);
    State s(g);
    s.rho = ScalarField::sample(g, [](double x, double, double) { return 1.0 + 1.2 * std::cos(2 * kPi * x); });
    EXPECT_THROW(rhs(s, unit_params()), PositivityError);
    s.rho = ScalarField::sample(g, [](double x, double, double) { return 1.0 + 0.5 * std::cos(2 * kPi * x); });
    EXPECT_NO_THROW(rhs(s, unit_params(), true, 0.49));
    EXPECT_THROW(rhs(s, unit_params(), true, 0.51), PositivityError);
}

TEST(Step, EquilibriumIsFixedPointOverManySteps) {
    const Grid g(8, 1.0);
    const PulseParams p = unit_params(1.4);
    SolverConfig cfg;
    Stepper st(State(g), p, cfg);
    for (int i = 0; i < 10000; ++i) {
        st.sample();
        st.advance(1e-3);
    }
    const State s = st.state();
    EXPECT_LT(max_abs_diff(s.rho, ScalarField(g, 1.0)), 1e-14);
    for (int d = 0; d < 3; ++d) EXPECT_LT(lp_norm(s.u[d], kInf), 1e-14);
    EXPECT_NEAR(st.time(), 10.0, 1e-9);
}

TEST(Step, AcousticWaveDispersion) {
    // Small density wave, u = 0: rho' solves rho'' = Lap rho' + nu Lap rho'.
    // Period and damping follow s^2 + nu k^2 s + k^2 = 0.
    const Grid g(16, 1.0);
    const double eps = 1e-6, k = 2 * kPi, nu = 0.01;
    const PulseParams p = unit_params(1.0, nu);
    State s0(g);
    s0.rho = ScalarField::sample(g, [&](double x, double, double) { return 1.0 + eps * std::cos(k * x); });
    SolverConfig cfg;
    Stepper st(s0, p, cfg);
    const double dt = 1e-3;
    std::vector<double> t{0.0}, v{eps};
    for (int i = 0; i < 2500; ++i) {
        st.sample();
        st.advance(dt);
        t.push_back(st.time());
        v.push_back(st.state().rho[0] - 1.0);
    }
    std::vector<double> up;  // upward zero crossings
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] < 0 && v[i] >= 0) up.push_back(t[i - 1] + (t[i] - t[i - 1]) * (-v[i - 1]) / (v[i] - v[i - 1]));
    ASSERT_GE(up.size(), 2u);
    const double omega = std::sqrt(k * k - nu * nu * k * k * k * k / 4);
    const double measured = 2 * kPi / (up[1] - up[0]);
    EXPECT_NEAR(measured / omega, 1.0, 0.02);
    EXPECT_NEAR(measured / k, 1.0, 0.02);  // sound speed sqrt(gamma) = 1
    const double beta = nu * k * k / 2, T = t.back();
    const double exact = eps * std::exp(-beta * T) * (std::cos(omega * T) + beta / omega * std::sin(omega * T));
    EXPECT_NEAR(v.back(), exact, 0.02 * eps * std::exp(-beta * T));
}

TEST(Step, StepFunctionMatchesStepper) {
    const Grid g(16, 1.0);
    PulseParams p = unit_params(1.0);
    p.delta = 1.0 / 8;
    const State s = build_pulse(p, g);
    SolverConfig cfg;
    const State a = step(s, 1e-4, p, cfg);
    Stepper st(s, p, cfg);
    st.sample();
    st.advance(1e-4);
    const State b = st.state();
    EXPECT_EQ(max_abs_diff(a.rho, b.rho), 0.0);
    EXPECT_NEAR(a.t, 1e-4, 1e-18);
}

TEST(Run, ZeroDurationEmitsOneRecord) {
    struct Count : RunObserver {
        int records = 0, energies = 0;
        void on_record(const DiagnosticsRecord&) override { ++records; }
        void on_energy(const EnergySample&) override { ++energies; }
    } count;
    SolverConfig cfg;
    cfg.t_end = 0.0;
    RunSinks sinks;
    sinks.observers.push_back(&count);
    const RunSummary sum = run(State(Grid(8, 1.0)), unit_params(), cfg, sinks);
    EXPECT_EQ(sum.steps, 0);
    EXPECT_EQ(count.records, 1);
    EXPECT_EQ(count.energies, 1);
    EXPECT_EQ(sum.t_final, 0.0);
}

TEST(Run, EquilibriumHasNoEnergy) {
    SolverConfig cfg;
    cfg.t_end = 0.02;
    const RunSummary sum = run(State(Grid(8, 1.0)), unit_params(1.4), cfg, RunSinks{});
    EXPECT_GT(sum.steps, 0);
    for (const auto& e : sum.energy) {
        EXPECT_LE(e.E, 1e-12);
        EXPECT_LE(e.D, 1e-12);
    }
    EXPECT_EQ(sum.max_mass_drift, 0.0);
}

TEST(Run, PulseConservesMassAndStaysPositive) {
    const Grid g(32, 1.0);
    PulseParams p;
    SolverConfig cfg;
    cfg.dt_init = 1e-4;
    cfg.t_end = 5e-3;
    const RunSummary sum = run(build_pulse(p, g), p, cfg, RunSinks{});
    EXPECT_LE(sum.max_mass_drift, 1e-12);
    EXPECT_GE(sum.min_rho, 1.0 - 1e-3);
    EXPECT_NEAR(sum.t_final, cfg.t_end, 1e-15);
    ASSERT_EQ(sum.energy.size(), std::size_t(sum.steps) + 1);
    for (std::size_t i = 1; i < sum.energy.size(); ++i) EXPECT_LE(sum.energy[i].E, sum.energy[i - 1].E * (1 + 1e-10));
}

TEST(Run, DeterministicRerun) {
    const Grid g(16, 1.0);
    const PulseParams p;
    SolverConfig cfg;
    cfg.t_end = 2e-3;
    const RunSummary a = run(build_pulse(p, g), p, cfg, RunSinks{});
    const RunSummary b = run(build_pulse(p, g), p, cfg, RunSinks{});
    ASSERT_EQ(a.energy.size(), b.energy.size());
    for (std::size_t i = 0; i < a.energy.size(); ++i) EXPECT_EQ(a.energy[i].E, b.energy[i].E);
}

TEST(Run, CheckpointCadence) {
    const fs::path dir = fresh_dir("cadence");
    SolverConfig cfg;
    cfg.dt_init = 0.01;
    cfg.t_end = 0.1;
    cfg.checkpoint_every = 4;
    RunSinks sinks;
    sinks.checkpoint_dir = dir;
    const RunSummary sum = run(State(Grid(8, 1.0)), unit_params(1.0, 0.01), cfg, sinks);
    EXPECT_EQ(sum.steps, 10);
    for (const char* name : {"checkpoint_00000004.pcns", "checkpoint_00000008.pcns", "checkpoint_00000010.pcns"})
        EXPECT_TRUE(fs::exists(dir / name)) << name;
    EXPECT_FALSE(fs::exists(dir / "checkpoint_00000000.pcns"));
    EXPECT_FALSE(fs::exists(dir / "abort_dump.pcns"));
}

TEST(Run, PositivityAbortDumpsLastState) {
    // Diverging flow out of a density trough pushes min rho below the floor.
    const fs::path dir = fresh_dir("abort");
    const Grid g(16, 1.0);
    State s(g);
    s.rho = ScalarField::sample(g, [](double x, double, double) { return 1.0 + 0.55 * std::cos(2 * kPi * x); });
    s.u[0] = ScalarField::sample(g, [](double x, double, double) { return -0.5 * std::sin(2 * kPi * x); });
    SolverConfig cfg;
    cfg.dt_init = 1e-3;
    cfg.t_end = 0.1;
    cfg.diagnostics_every = 1;
    cfg.positivity_floor = 0.44;
    RunSinks sinks;
    sinks.checkpoint_dir = dir;
    DiagnosticsCsv csv(dir / "diagnostics.csv");
    sinks.observers.push_back(&csv);
    EXPECT_THROW(run(s, unit_params(1.0, 0.01), cfg, sinks), PositivityError);
    ASSERT_TRUE(fs::exists(dir / "abort_dump.pcns"));
    EXPECT_GE(read_csv(dir / "diagnostics.csv").rows.size(), 1u);
}

TEST(Imex, AgreesWithExplicitScheme) {
    const Grid g(16, 1.0);
    PulseParams p;
    p.mu = 0.2;
    const State s0 = build_pulse(p, g);
    SolverConfig rk;
    rk.dt_init = 1e-4;
    rk.t_end = 4e-3;
    SolverConfig imex = rk;
    imex.scheme = Scheme::imex;
    const double e_rk = run(s0, p, rk, RunSinks{}).energy.back().E;
    const RunSummary im = run(s0, p, imex, RunSinks{});
    EXPECT_NEAR(im.energy.back().E / e_rk, 1.0, 1e-4);
    EXPECT_LE(im.max_mass_drift, 1e-12);
}

TEST(Imex, EquilibriumStep) {
    const Grid g(8, 1.0);
    SolverConfig cfg;
    cfg.scheme = Scheme::imex;
    const State s = step(State(g), 1e-2, unit_params(), cfg);
    EXPECT_LT(max_abs_diff(s.rho, ScalarField(g, 1.0)), 1e-15);
}

TEST(EnergyBalance, ThreePointDerivative) {
    // E = t^2, D = -2t makes dE/dt + D vanish; the estimate is exact for quadratics.
    std::vector<EnergySample> e;
    for (double t : {0.0, 0.1, 0.25, 0.3}) e.push_back({t, t * t, -2 * t, 1, 1, 1});
    for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(energy_balance_at(e, i), 0.0, 1e-14) << i;
    e.resize(2);
    EXPECT_TRUE(std::isnan(energy_balance_at(e, 0)));
}
