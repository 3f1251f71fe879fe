#include <gtest/gtest.h>

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "pcns/csv.hpp"
#include "pcns/errors.hpp"
#include "pcns/lagrangian.hpp"
#include "pcns/solver.hpp"
#include "pcns/spectral.hpp"

using namespace pcns;

namespace {

constexpr double kPi = std::numbers::pi;

/// Periodic distance on the unit box.
double box_distance(const Point& a, const Point& b) {
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        double d = std::remainder(a[i] - b[i], 1.0);
        d2 += d * d;
    }
    return std::sqrt(d2);
}

/// u = cos(t) (A sin 2 pi z, B sin 2 pi x, C sin 2 pi y), rho = 1.
Point flow(const Point& x, double t) {
    const double c = std::cos(t), w = 2 * kPi;
    return {0.3 * c * std::sin(w * x[2]), 0.2 * c * std::sin(w * x[0]), 0.25 * c * std::sin(w * x[1])};
}

std::vector<State> flow_snapshots(const Grid& g, double t_end, double dt) {
    std::vector<State> out;
    const int steps = static_cast<int>(std::lround(t_end / dt));
    for (int i = 0; i <= steps; ++i) {
        State s(g);
        s.t = i * dt;
        for (int d = 0; d < 3; ++d)
            s.u[d] = ScalarField::sample(g, [&](double x, double y, double z) { return flow({x, y, z}, s.t)[d]; });
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

TEST(TrigInterpolator, ReproducesGridAndBandLimitedValues) {
    const Grid g(16, 1.0);
    auto f = [](double x, double y, double z) {
        return std::cos(2 * kPi * 3 * x) * std::sin(2 * kPi * (y - 2 * z)) + 0.5 * std::cos(2 * kPi * 7 * z);
    };
    const TrigInterpolator I(ScalarField::sample(g, f));
    EXPECT_NEAR(I({g.node(3), g.node(5), g.node(11)}), f(g.node(3), g.node(5), g.node(11)), 1e-13);
    for (const Point& p : {Point{0.123, 0.456, 0.789}, Point{0.9, 0.01, 0.33}, Point{1.7, -0.2, 0.5}})
        EXPECT_NEAR(I(p), f(p[0], p[1], p[2]), 1e-13);
    EXPECT_NEAR(I(phases(g, {0.2, 0.3, 0.4})), f(0.2, 0.3, 0.4), 1e-13);
}

TEST(TrigInterpolator, NyquistModeOnGrid) {
    const Grid g(8, 1.0);
    const auto f = ScalarField::sample(g, [](double x, double, double) { return std::cos(2 * kPi * 4 * x); });
    const TrigInterpolator I(f);
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(I({g.node(i), 0.0, 0.0}), f.at(i, 0, 0), 1e-14);
}

TEST(Advect, ZeroVelocityKeepsParticlesAtRest) {
    const Grid g(8, 1.0);
    std::vector<State> snaps;
    for (int i = 0; i <= 6; ++i) {
        State s(g);
        s.t = 0.1 * i;
        snaps.push_back(s);
    }
    const auto tr = advect({{0.3, 0.4, 0.5}, {1.25, -0.5, 0.0}}, 0.0, snaps, PulseParams{});
    ASSERT_EQ(tr.size(), 2u);
    for (const auto& smp : tr[0].samples) {
        EXPECT_EQ(smp.x, (Point{0.3, 0.4, 0.5}));
        EXPECT_EQ(smp.rho, 1.0);
    }
    EXPECT_NEAR(box_distance(tr[1].samples.back().x, {0.25, 0.5, 0.0}), 0.0, 1e-15);
    EXPECT_EQ(density_formula_residual(tr[0]), 0.0);
    EXPECT_NEAR(tr[0].samples.back().t, 0.6, 1e-15);
}

TEST(Advect, UniformVelocityTranslates) {
    const Grid g(8, 1.0);
    std::vector<State> snaps;
    for (int i = 0; i <= 10; ++i) {
        State s(g);
        s.t = 0.5 + 0.05 * i;
        s.u[0] = ScalarField(g, 0.7);
        s.u[2] = ScalarField(g, -0.3);
        snaps.push_back(s);
    }
    const auto tr = advect({{0.9, 0.1, 0.1}}, 0.5, snaps, PulseParams{});
    for (const auto& smp : tr[0].samples) {
        const double dt = smp.t - 0.5;
        EXPECT_LT(box_distance(smp.x, {0.9 + 0.7 * dt, 0.1, 0.1 - 0.3 * dt}), 1e-14) << smp.t;
    }
    EXPECT_NEAR(tr[0].samples.back().t, 1.0, 1e-14);
}

TEST(Advect, MatchesAdaptiveOdeReference) {
    // Time-dependent band-limited flow; reference paths from Dormand-Prince.
    const Grid g(16, 1.0);
    const double dt = 0.01, t_end = 1.0;
    const std::vector<Point> seeds{{0.1, 0.2, 0.3}, {0.5, 0.5, 0.5}, {0.77, 0.05, 0.61}};
    const auto tr = advect(seeds, 0.0, flow_snapshots(g, t_end, dt), PulseParams{});
    namespace odeint = boost::numeric::odeint;
    using V = std::vector<double>;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        V x{seeds[k][0], seeds[k][1], seeds[k][2]};
        auto rhs = [](const V& y, V& dy, double t) {
            const Point v = flow({y[0], y[1], y[2]}, t);
            dy.assign(v.begin(), v.end());
        };
        odeint::integrate_adaptive(odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<V>()), rhs, x,
                                   0.0, t_end, 1e-3);
        ASSERT_NEAR(tr[k].samples.back().t, t_end, 1e-12);
        EXPECT_LT(box_distance(tr[k].samples.back().x, {x[0], x[1], x[2]}), 1e-6) << k;
    }
}

TEST(Advect, FourthOrderInTime) {
    const Grid g(16, 1.0);
    const std::vector<Point> seed{{0.1, 0.2, 0.3}};
    const Point ref = advect(seed, 0.0, flow_snapshots(g, 1.0, 0.0025), PulseParams{})[0].samples.back().x;
    // Even snapshot counts, so no trailing Heun interval.
    const double e1 = box_distance(advect(seed, 0.0, flow_snapshots(g, 1.0, 0.02), PulseParams{})[0].samples.back().x, ref);
    const double e2 = box_distance(advect(seed, 0.0, flow_snapshots(g, 1.0, 0.01), PulseParams{})[0].samples.back().x, ref);
    EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.3);
}

TEST(Advect, InputChecks) {
    const Grid g(8, 1.0);
    State a(g), b(g);
    b.t = 0.1;
    EXPECT_THROW(advect({{0, 0, 0}}, 0.05, {a, b}, PulseParams{}), InputError);
    EXPECT_THROW(advect({{0, 0, 0}}, 0.0, {b, a}, PulseParams{}), InputError);
    AdvectOptions opt;
    opt.max_gap = 0.05;
    EXPECT_THROW(advect({{0, 0, 0}}, 0.0, {a, b}, PulseParams{}, opt), InputError);
}

TEST(DensityFormula, ExactExponentialIsRecovered) {
    Trajectory tr;
    tr.nu = 2.0;
    // div u = a / nu + F = 0.5 constant, so rho = exp(-0.5 t).
    for (int i = 0; i <= 20; ++i) {
        const double t = 0.05 * i;
        tr.samples.push_back({t, {0, 0, 0}, std::exp(-0.5 * t), 0.6, 0.2});
    }
    EXPECT_LT(density_formula_residual(tr), 1e-14);
    tr.samples[7].rho *= 1.001;
    EXPECT_NEAR(density_formula_residual(tr), 1e-3, 1e-6);
    tr.samples.resize(1);
    EXPECT_EQ(density_formula_residual(tr), 0.0);
}

TEST(DensityFormula, ConvergesAlongSolverRun) {
    // The residual is set by the trapezoidal rule along the path, so it falls
    // at second order as the snapshot spacing shrinks.
    const Grid g(32, 1.0);
    PulseParams p;
    p.mu = 0.1;
    p.lambda = 0.05;
    State s(g);
    s.rho = ScalarField::sample(g, [](double x, double y, double z) {
        return 1.0 + 0.2 * std::cos(2 * kPi * x) * std::cos(2 * kPi * (y + z));
    });
    s.u[0] = ScalarField::sample(g, [](double, double y, double) { return 0.3 * std::sin(2 * kPi * y); });
    s.u[1] = ScalarField::sample(g, [](double x, double, double z) { return 0.2 * std::cos(2 * kPi * (x - z)); });
    std::vector<double> worst;
    for (double dt : {5e-4, 2.5e-4}) {
        ParticleTracker tracker({{0.1, 0.2, 0.3}, {0.6, 0.4, 0.9}}, 0.0, p, 1);
        SolverConfig cfg;
        cfg.dt_init = dt;
        cfg.t_end = 0.1;
        RunSinks sinks;
        sinks.observers.push_back(&tracker);
        sinks.diagnostics.besov_every = 0;
        run(s, p, cfg, sinks);
        ASSERT_EQ(tracker.trajectories().size(), 2u);
        double w = 0.0;
        for (const auto& tr : tracker.trajectories()) {
            EXPECT_NEAR(tr.samples.back().t, 0.1, 1e-12);
            EXPECT_DOUBLE_EQ(tr.nu, 0.15);
            w = std::max(w, density_formula_residual(tr));
        }
        worst.push_back(w);
    }
    EXPECT_LT(worst[0], 1e-5);
    EXPECT_GT(worst[0] / worst[1], 3.5);
}

TEST(DensityFormula, TransportByDivergenceFreeShear) {
    // u = (A sin 2 pi y, 0, 0) carries rho0 = 1 + b cos 2 pi x unchanged along paths.
    const Grid g(32, 1.0);
    const double A = 0.3, b = 0.2;
    PulseParams p;
    p.gamma = 1.4;
    std::vector<State> snaps;
    for (int i = 0; i <= 100; ++i) {
        State s(g);
        s.t = 0.01 * i;
        s.rho = ScalarField::sample(g, [&](double x, double y, double) {
            return 1.0 + b * std::cos(2 * kPi * (x - A * std::sin(2 * kPi * y) * s.t));
        });
        s.u[0] = ScalarField::sample(g, [&](double, double y, double) { return A * std::sin(2 * kPi * y); });
        snaps.push_back(std::move(s));
    }
    const std::vector<Point> seeds{{0.1, 0.2, 0.3}, {0.45, 0.8, 0.1}, {0.9, 0.33, 0.7}};
    const auto tr = advect(seeds, 0.0, snaps, p);
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        const double rho0 = 1.0 + b * std::cos(2 * kPi * seeds[k][0]);
        for (const auto& smp : tr[k].samples) EXPECT_NEAR(smp.rho, rho0, 1e-6) << smp.t;
        EXPECT_LT(density_formula_residual(tr[k]), 1e-6);
    }
}

TEST(Trajectory, CsvColumns) {
    Trajectory tr;
    tr.samples.push_back({0.5, {0.1, 0.2, 0.3}, 1.1, 0.1, -0.2});
    const auto f = std::filesystem::temp_directory_path() / "pcns_traj.csv";
    write_trajectory_csv(f, tr);
    const CsvTable t = read_csv(f);
    EXPECT_EQ(t.header, (std::vector<std::string>{"t", "x", "y", "z", "rho", "a", "F"}));
    EXPECT_EQ(t.rows.at(0), (std::vector<double>{0.5, 0.1, 0.2, 0.3, 1.1, 0.1, -0.2}));
}
