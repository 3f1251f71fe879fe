#include "pcns/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "pcns/csv.hpp"
#include "pcns/diagnostics.hpp"
#include "pcns/dyadic.hpp"
#include "pcns/errors.hpp"
#include "pcns/fit.hpp"
#include "pcns/harness.hpp"
#include "pcns/lagrangian.hpp"
#include "pcns/manufactured.hpp"
#include "pcns/norms.hpp"
#include "pcns/potential.hpp"
#include "pcns/pulse.hpp"
#include "pcns/schedule.hpp"
#include "pcns/solver.hpp"
#include "pcns/spectral.hpp"

namespace pcns {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

void say(const VerifyOptions& opt, const std::string& msg) {
    if (opt.log) *opt.log << msg << std::endl;
}

/// Times `body`, which fills in passed and detail.
CriterionResult timed(const std::string& id, const std::function<void(CriterionResult&)>& body) {
    CriterionResult r;
    r.id = id;
    const auto t0 = Clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = seconds_since(t0);
    return r;
}

/// Random band-limited state with rho in a safe positive range.
State random_state(const Grid& g, std::uint64_t seed) {
    State s(g);
    const ScalarField r = random_band_limited(g, 6.0, seed);
    const double span = std::max(-r.min(), r.max());
    for (std::size_t i = 0; i < g.size(); ++i) s.rho[i] = 1.5 + 0.9 * r[i] / span;
    s.u = random_band_limited_vector(g, 6.0, seed + 1000);
    return s;
}

// ---- identities -----------------------------------------------------------

CriterionResult identity_suite() {
    return timed("identity_suite", [](CriterionResult& r) {
        const Grid g(64, 1.0);
        const double gammas[] = {1.0, 1.4, 2.0};
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            PulseParams p;
            p.mu = 1.0;
            p.lambda = 0.0;
            p.gamma = gammas[k % 3];
            const State s = random_state(g, 17 + 31 * k);
            const VectorField udot = material_derivative(s, p);
            worst = std::max(worst, elliptic_residuals(s, p, udot).max());
        }
        r.passed = worst <= 1e-10;
        r.detail = "max relative L2 residual " + num(worst) + " over 10 states at 64^3 (limit 1e-10)";
    });
}

// ---- h_function -----------------------------------------------------------

CriterionResult h_dual_formula() {
    return timed("h_dual_formula", [](CriterionResult& r) {
        double worst = 0.0, at_rho = 0.0, at_gamma = 0.0;
        for (double gamma : {1.0, 1.4, 2.0, 3.0}) {
            for (int i = 0; i <= 1000; ++i) {
                const double rho = 0.5 * std::pow(200.0, i / 1000.0);
                const double direct = h_density(rho, gamma);
                if (direct == 0.0) continue;
                const double e = std::abs(h_density_quadrature(rho, gamma) - direct) / direct;
                if (e > worst) {
                    worst = e;
                    at_rho = rho;
                    at_gamma = gamma;
                }
            }
        }
        r.passed = worst <= 1e-8;
        r.detail = "max relative difference " + num(worst) + " at rho=" + num(at_rho) +
                   ", gamma=" + num(at_gamma) + " (limit 1e-8)";
    });
}

// ---- toy ------------------------------------------------------------------

CriterionResult toy_model_oracle() {
    return timed("toy_model_oracle", [](CriterionResult& r) {
        struct Set {
            double delta, alpha, gamma;
        };
        const Set sets[] = {{0.125, 0.5, 1.0}, {std::ldexp(1.0, -15), 1.0, 1.0}, {0.5, 1.0, 2.0}, {0.01, 0.7, 1.4}};
        double worst = 0.0;
        for (const auto& s : sets) {
            const double t0 = std::pow(s.delta, s.alpha);
            std::vector<double> times(100);
            for (int i = 0; i < 100; ++i) times[i] = t0 * std::pow(10.0, -3.0 + 9.0 * i / 99.0);
            const auto ode = toy_model_ode(s.delta, s.alpha, s.gamma, times);
            for (int i = 0; i < 100; ++i) {
                const double exact = toy_model(s.delta, s.alpha, s.gamma, times[i]);
                worst = std::max(worst, std::abs(ode[i] - exact) / exact);
            }
        }
        r.passed = worst <= 1e-10;
        r.detail = "max relative error " + num(worst) + " at 100 log-spaced times x 4 parameter sets (limit 1e-10)";
    });
}

// ---- schedule -------------------------------------------------------------

CriterionResult schedule_arithmetic() {
    return timed("schedule_arithmetic", [](CriterionResult& r) {
        std::ostringstream os;
        bool ok = true;
        const EnvelopeSchedule s = envelope_schedule(std::ldexp(1.0, -15), 1.0, 1.0, 0.1);
        const double t0_err = std::abs(s.T0 - 7.0 * std::ldexp(1.0, -18));
        ok = ok && s.N0 == 15 && t0_err <= 1e-15;
        os << "N0=" << s.N0 << " |T0-7*2^-18|=" << num(t0_err);
        // Both budgets over a range of N0 at gamma = 1 and 2.
        double worst_l1 = 0.0, worst_budget = 0.0;
        const double alpha = 1.0;
        for (double gamma : {1.0, 2.0}) {
            for (int N0 = 15; N0 <= 30; ++N0) {
                const double delta = std::ldexp(1.0, -N0);
                const EnvelopeSchedule e = envelope_schedule(delta, alpha, gamma, 0.1);
                const double l1 = envelope_l1(e);
                const double l1_bound = 3.0 * alpha / gamma * std::log(1.0 / delta);
                double budget = 0.0;
                for (int j = 1; j <= e.intervals(); ++j) budget += interval_budget(e, j);
                const double budget_bound = 2.0 / gamma * (e.N0 - 14);
                worst_l1 = std::max(worst_l1, l1 / l1_bound);
                worst_budget = std::max(worst_budget, budget / budget_bound);
                if (N0 == 15 && gamma == 1.0)
                    os << "; L1=" << num(l1) << " <= " << num(l1_bound) << "; budget sum=" << num(budget)
                       << " <= " << num(budget_bound);
            }
        }
        ok = ok && worst_l1 <= 1.0 && worst_budget <= 1.0;
        os << "; worst ratios over N0 in [15,30], gamma in {1,2}: L1 " << num(worst_l1) << ", budget "
           << num(worst_budget);
        r.passed = ok;
        r.detail = os.str();
    });
}

// ---- littlewood_paley -----------------------------------------------------

CriterionResult littlewood_paley() {
    return timed("littlewood_paley", [](CriterionResult& r) {
        const Grid g(64, 1.0);
        const DyadicBank bank = DyadicBank::make(g);
        const double unit = 2.0 * std::numbers::pi / g.L;
        const int kh = g.n / 2;
        double part = 0.0;
        for (int k2 = 0; k2 <= 3 * kh * kh; ++k2)
            part = std::max(part, std::abs(bank.partition_sum(unit * std::sqrt(double(k2))) - 1.0));

        ScalarField f = random_band_limited(g, 30.0, 4242);
        const double m = f.mean();
        for (auto& v : f.values) v -= m;
        ScalarField sum = low_block(f, bank);
        for (int j = bank.j_first(); j <= bank.j_max; ++j) sum = sum + dyadic_project(f, j, bank);
        const double recon = std::sqrt(l2_squared(sum - f) / l2_squared(f));

        const CbarResult c = cbar_star(bank, 32);
        const double change = std::abs(c.refined - c.value) / c.refined;
        r.passed = part <= 1e-12 && recon <= 1e-10 && c.converged;
        r.detail = "partition error " + num(part) + " (limit 1e-12); reconstruction " + num(recon) +
                   " (limit 1e-10); cbar*=" + num(c.refined) + " relative change " + num(change) +
                   " on doubling (limit 1e-2); blocks j=" + std::to_string(bank.j_first()) + ".." +
                   std::to_string(bank.j_max);
    });
}

// ---- freq_split -----------------------------------------------------------

CriterionResult freq_split_parseval() {
    return timed("freq_split_parseval", [](CriterionResult& r) {
        const Grid g(64, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 3; ++k) {
            PulseParams p;
            p.gamma = 1.0 + 0.5 * k;
            const State s = random_state(g, 900 + k);
            ScalarField varrho = s.rho;
            for (auto& v : varrho.values) v -= 1.0;
            const double direct = p.gamma * l2_squared(varrho) + l2_squared(s.rho * s.u);
            const double split = freq_split_low(s, p, 1e12);
            worst = std::max(worst, std::abs(split - direct) / direct);
        }
        r.passed = worst <= 1e-10;
        r.detail = "max relative difference " + num(worst) + " at r=1e12 over 3 states (limit 1e-10)";
    });
}

// ---- convergence ----------------------------------------------------------

double max_error(const State& a, const State& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.rho.size(); ++i) {
        e = std::max(e, std::abs(a.rho[i] - b.rho[i]));
        for (int d = 0; d < 3; ++d) e = std::max(e, std::abs(a.u[d][i] - b.u[d][i]));
    }
    return e;
}

State integrate_fixed(const Manufactured& m, const Grid& g, const PulseParams& p, double dt, double t_end) {
    SolverConfig cfg;
    cfg.dt_init = dt;
    cfg.t_end = t_end;
    Stepper st(m.exact(g, 0.0), p, cfg, m.as_forcing());
    const long steps = std::lround(t_end / dt);
    for (long k = 0; k < steps; ++k) st.advance(dt);
    return st.state();
}

std::vector<CriterionResult> convergence_suite(const VerifyOptions& opt) {
    PulseParams p;
    p.gamma = 1.4;
    p.mu = 0.01;
    p.lambda = 0.005;
    const Manufactured m(p);
    std::vector<CriterionResult> out;
    out.push_back(timed("manufactured_temporal_order", [&](CriterionResult& r) {
        const Grid g(32, 1.0);
        const double t_end = 0.4;
        std::vector<State> runs;
        for (double dt : {4e-3, 2e-3, 1e-3}) {
            say(opt, "  convergence: 32^3 dt=" + num(dt));
            runs.push_back(integrate_fixed(m, g, p, dt, t_end));
        }
        const double d1 = max_error(runs[0], runs[1]), d2 = max_error(runs[1], runs[2]);
        const double order = std::log2(d1 / d2);
        r.passed = order >= 3.8;
        r.detail = "RK4 order " + num(order) + " from dt=4e-3,2e-3,1e-3 to t=0.4 at 32^3 (limit 3.8); error vs exact " +
                   num(max_error(runs[2], m.exact(g, t_end)));
    }));
    out.push_back(timed("manufactured_spatial_convergence", [&](CriterionResult& r) {
        const double dt = 1e-3, t_end = 0.1;
        double err[2];
        int i = 0;
        for (int n : {32, 64}) {
            say(opt, "  convergence: " + std::to_string(n) + "^3 dt=" + num(dt));
            const Grid g(n, 1.0);
            err[i++] = max_error(integrate_fixed(m, g, p, dt, t_end), m.exact(g, t_end));
        }
        const double ratio = err[0] / err[1];
        r.passed = ratio >= 10.0;
        r.detail = "max error " + num(err[0]) + " at 32^3, " + num(err[1]) + " at 64^3, ratio " + num(ratio) +
                   " (limit 10)";
    }));
    return out;
}

// ---- collapse -------------------------------------------------------------

double a_inf_of(const EnergySample& e, double gamma) {
    return std::max(std::abs(pressure_excess(e.max_rho, gamma)), std::abs(pressure_excess(e.min_rho, gamma)));
}

CriterionResult collapse_property(const VerifyOptions& opt) {
    return timed("collapse_property", [&](CriterionResult& r) {
        PulseParams p;
        p.delta = 0.125;
        p.alpha = std::log(63.0) / std::log(8.0);
        p.gamma = 1.0;
        const Grid g(64, 1.0);
        SolverConfig cfg;
        cfg.dt_init = 1.0;
        cfg.t_end = 0.1;
        RunSinks sinks;
        sinks.diagnostics.besov_every = 0;
        say(opt, "  collapse: delta=1/8, ||a0||_inf=63, 64^3 to t=0.1");
        const RunSummary sum = run(build_pulse(p, g), p, cfg, sinks);
        std::vector<double> t, a;
        for (const auto& e : sum.energy) {
            t.push_back(e.t);
            a.push_back(a_inf_of(e, p.gamma));
        }
        const EnvelopeSchedule s = envelope_schedule(p.delta, p.alpha, p.gamma, p.epsilon);
        const EnvelopeCheck chk = envelope_check(t, a, s);
        const double c1 = chk.fit ? chk.fit->exponent : 0.0;
        const double c1_err = std::abs(c1 - p.gamma) / p.gamma;
        r.passed = !s.in_regime && chk.passed && c1_err <= 0.5 && a.front() >= 32.0;
        r.detail = "||a0||_inf=" + num(a.front()) + "; " + chk.summary + "; |c1-gamma|/gamma=" + num(c1_err) +
                   " (limits r^2 >= 0.95, 0.5); " + std::to_string(sum.steps) + " steps";
    });
}

// ---- benchmark ------------------------------------------------------------

class RecordCollector : public RunObserver {
public:
    void on_record(const DiagnosticsRecord& r) override { records.push_back(r); }
    std::vector<DiagnosticsRecord> records;
};

struct BenchmarkRun {
    RunSummary summary;
    std::vector<DiagnosticsRecord> records;
    std::vector<Trajectory> trajectories;
    double worst_balance = 0.0;  ///< max over steps of |dE/dt + D| / D
    double t_worst = 0.0;
};

/// Pulse delta = 1/8, alpha = 1/2, gamma = 1, 64^3 to t = 0.5 at a fixed dt
/// below the CFL limit.
BenchmarkRun benchmark_run(double dt, long diag_every, bool track, const VerifyOptions& opt,
                           const std::optional<std::filesystem::path>& dir) {
    PulseParams p;
    const Grid g(64, 1.0);
    SolverConfig cfg;
    cfg.dt_init = dt;
    cfg.t_end = 0.5;
    cfg.diagnostics_every = int(diag_every);
    RunSinks sinks;
    sinks.diagnostics.besov_every = 4;
    RecordCollector rec;
    sinks.observers.push_back(&rec);
    std::vector<Point> seeds;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) seeds.push_back({0.5 + 0.05 * (i - 1.5), 0.5 + 0.05 * (j - 1.5), 0.5});
    ParticleTracker tracker(seeds, 0.0, p, 4);
    if (track) sinks.observers.push_back(&tracker);
    std::optional<DiagnosticsCsv> diag_csv;
    std::optional<EnergyCsv> energy_csv;
    if (dir) {
        std::filesystem::create_directories(*dir);
        diag_csv.emplace(*dir / "diagnostics.csv");
        energy_csv.emplace(*dir / "energy.csv");
        sinks.observers.push_back(&*diag_csv);
        sinks.observers.push_back(&*energy_csv);
    }
    say(opt, "  benchmark: dt=" + num(dt) + " to t=0.5");
    BenchmarkRun b;
    b.summary = run(build_pulse(p, g), p, cfg, sinks);
    b.records = std::move(rec.records);
    if (track) b.trajectories = tracker.trajectories();
    const auto& e = b.summary.energy;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double q = std::abs(energy_balance_at(e, i)) / e[i].D;
        if (q > b.worst_balance) {
            b.worst_balance = q;
            b.t_worst = e[i].t;
        }
    }
    if (dir && track)
        for (std::size_t k = 0; k < b.trajectories.size(); ++k)
            write_trajectory_csv(*dir / ("trajectory_" + std::to_string(k) + ".csv"), b.trajectories[k]);
    return b;
}

std::vector<CriterionResult> benchmark_suite(const VerifyOptions& opt) {
    const double dt_a = 3.5e-5;
    std::vector<CriterionResult> out;
    std::optional<BenchmarkRun> A, B;
    std::string failure;
    const auto t0 = Clock::now();
    try {
        A = benchmark_run(dt_a, 250, true, opt, opt.output_dir);
        B = benchmark_run(0.5 * dt_a, 500, false, opt, std::nullopt);
    } catch (const std::exception& e) {
        failure = std::string("benchmark run failed: ") + e.what();
    }
    const double run_seconds = seconds_since(t0);
    const char* ids[] = {"energy_equality", "mass_conservation", "l3_interpolation_inequality",
                         "lagrangian_density_formula", "qualitative_decay"};
    if (!failure.empty()) {
        for (const char* id : ids) out.push_back({id, false, failure, run_seconds});
        return out;
    }
    const PulseParams p;

    out.push_back(timed(ids[0], [&](CriterionResult& r) {
        const double ratio = A->worst_balance / B->worst_balance;
        r.passed = A->worst_balance <= 1e-3 && ratio >= 3.5;
        r.detail = "max |dE/dt + D| / D = " + num(A->worst_balance) + " at dt=" + num(dt_a) + " (t=" +
                   num(A->t_worst) + "), " + num(B->worst_balance) + " at dt/2; ratio " + num(ratio) +
                   " (limits 1e-3, 3.5); runs took " + num(run_seconds) + " s";
    }));
    out.push_back(timed(ids[1], [&](CriterionResult& r) {
        const double drift = std::max(A->summary.max_mass_drift, B->summary.max_mass_drift);
        const double min_rho = std::min(A->summary.min_rho, B->summary.min_rho);
        const double floor = std::pow(2.0, -1.0 / p.gamma);
        r.passed = drift <= 1e-10 && min_rho >= floor;
        r.detail = "max relative mass drift " + num(drift) + " (limit 1e-10); min rho " + num(min_rho) +
                   " >= 2^(-1/gamma)=" + num(floor);
    }));
    out.push_back(timed(ids[2], [&](CriterionResult& r) {
        long checks = 0, violations = 0;
        double worst = kInf;
        for (const auto* run : {&*A, &*B})
            for (const auto& rec : run->records)
                for (const auto& m : rec.ineq_margins) {
                    if (m.name.rfind("L3interp", 0) != 0) continue;
                    ++checks;
                    if (m.violated()) ++violations;
                    if (m.rhs > 0) worst = std::min(worst, m.margin() / m.rhs);
                }
        r.passed = checks > 0 && violations == 0;
        r.detail = std::to_string(violations) + " violations in " + std::to_string(checks) +
                   " checks (R in {2,4,2 delta^-alpha}, p in {2,3}); smallest relative margin " + num(worst);
    }));
    out.push_back(timed(ids[3], [&](CriterionResult& r) {
        double worst = 0.0;
        std::size_t samples = 0;
        for (const auto& tr : A->trajectories) {
            worst = std::max(worst, density_formula_residual(tr));
            samples += tr.samples.size();
        }
        r.passed = A->trajectories.size() == 16 && worst <= 1e-3;
        r.detail = "max relative residual " + num(worst) + " over " + std::to_string(A->trajectories.size()) +
                   " particles, " + std::to_string(samples) + " samples (limit 1e-3)";
    }));
    out.push_back(timed(ids[4], [&](CriterionResult& r) {
        const EnvelopeSchedule s = envelope_schedule(p.delta, p.alpha, p.gamma, p.epsilon);
        const auto& recs = A->records;
        double worst_rise = 0.0, t_rise = 0.0;
        for (std::size_t i = 1; i < recs.size(); ++i) {
            if (recs[i - 1].t < s.T0) continue;
            const double rise = (recs[i].E - recs[i - 1].E) / recs[i - 1].E;
            if (rise > worst_rise) {
                worst_rise = rise;
                t_rise = recs[i].t;
            }
        }
        double integral = 0.0;
        for (std::size_t i = 1; i < recs.size(); ++i)
            integral += 0.5 * (recs[i].D + recs[i - 1].D) * (recs[i].t - recs[i - 1].t);
        r.passed = worst_rise <= 1e-8 && std::isfinite(integral);
        r.detail = "E(t) from " + num(recs.front().E) + " to " + num(recs.back().E) + " over " +
                   std::to_string(recs.size()) + " records after T0=" + num(s.T0) + "; largest relative rise " +
                   num(worst_rise) + (worst_rise > 0 ? " at t=" + num(t_rise) : "") +
                   " (limit 1e-8); int D dt = " + num(integral);
    }));
    return out;
}

} // namespace

std::vector<std::string> suite_names() {
    return {"identities", "h_function", "toy", "schedule", "littlewood_paley",
            "freq_split", "convergence", "collapse", "benchmark"};
}

std::vector<CriterionResult> run_suite(const std::string& name, const VerifyOptions& opt) {
    if (name == "all") {
        std::vector<CriterionResult> all;
        for (const auto& s : suite_names()) {
            auto part = run_suite(s, opt);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    say(opt, "suite " + name);
    if (name == "identities") return {identity_suite()};
    if (name == "h_function") return {h_dual_formula()};
    if (name == "toy") return {toy_model_oracle()};
    if (name == "schedule") return {schedule_arithmetic()};
    if (name == "littlewood_paley") return {littlewood_paley()};
    if (name == "freq_split") return {freq_split_parseval()};
    if (name == "convergence") return convergence_suite(opt);
    if (name == "collapse") return {collapse_property(opt)};
    if (name == "benchmark") return benchmark_suite(opt);
    throw InputError("unknown suite '" + name + "'");
}

std::string format_result(const CriterionResult& r) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
    return std::string(r.passed ? "PASS " : "FAIL ") + r.id + ": " + r.detail + " [" + secs + "s]";
}

} // namespace pcns
