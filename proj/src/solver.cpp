#include "pcns/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pcns/checkpoint.hpp"
#include "pcns/errors.hpp"
#include "pcns/fft.hpp"
#include "pcns/potential.hpp"
#include "pcns/spectral.hpp"

namespace pcns {

void SolverConfig::validate() const {
    if (!(dt_init > 0.0)) throw InputError("dt_init must be positive");
    if (!(t_end >= 0.0)) throw InputError("t_end must be >= 0");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw InputError("cfl_safety must lie in (0, 1]");
    if (checkpoint_every < 0 || diagnostics_every < 0) throw InputError("cadences must be >= 0");
    if (!(positivity_floor >= 0.0)) throw InputError("positivity floor must be >= 0");
}

namespace {

const cplx I(0.0, 1.0);

double viscous_weight(const SolverConfig& cfg, double inv_rho_max, double inv_rho_min) {
    if (cfg.scheme == Scheme::imex) return std::max(std::abs(inv_rho_max - 1.0), std::abs(1.0 - inv_rho_min));
    return inv_rho_max;
}

double cfl_formula(const Grid& g, const PulseParams& p, const SolverConfig& cfg, double umax, double cmax,
                   double inv_rho_max, double inv_rho_min) {
    const double dx = g.dx();
    const double adv = dx / (umax + cmax);
    const double mu_eff = p.nu() * viscous_weight(cfg, inv_rho_max, inv_rho_min);
    const double visc = mu_eff > 0.0 ? dx * dx / (6.0 * mu_eff) : std::numeric_limits<double>::infinity();
    return cfg.cfl_safety * std::min(adv, visc);
}

double sound_speed(double rho, double gamma) {
    return std::sqrt(gamma * std::pow(rho, gamma - 1.0));
}

} // namespace

struct Stepper::Impl {
    using Set = std::array<ComplexBuffer, 4>;

    /// A retained Fourier mode. Everything else is kept at zero.
    struct Mode {
        std::size_t idx;
        double x[3];
        double k2;
        double weight;  ///< Parseval weight of the half spectrum
    };

    Grid g;
    PulseParams p;
    SolverConfig cfg;
    const Fft& fft;
    std::vector<Mode> modes;
    std::vector<std::size_t> dropped;
    bool split;  // IMEX: leave the constant-coefficient viscous part out of the tendencies
    double t;
    Forcing forcing;
    ScalarField f_rho;
    VectorField f_u;

    Set y, stage, k, acc;
    bool k_valid = false;

    RealBuffer rho, u[3], W[3], om[3], prod;
    ComplexBuffer tmp, ph, spec[3];

    // statistics of the most recent evaluation at the current state
    EnergySample last;
    double umax = 0, cmax = 0, inv_rho_max = 0, inv_rho_min = 0;

    Impl(const State& s, const PulseParams& p_, const SolverConfig& c, bool split_, Forcing f = {})
        : g(s.grid()), p(p_), cfg(c), fft(Fft::get(s.grid())), split(split_), t(s.t), forcing(std::move(f)) {
        s.validate();
        if (forcing) {
            f_rho = ScalarField(g);
            f_u = VectorField(g);
        }
        const Wavenumbers& w = Wavenumbers::get(g);
        const std::vector<std::uint8_t> keep = cfg.dealias ? dealias_mask(g) : std::vector<std::uint8_t>{};
        for_each_mode(g, [&](std::size_t idx, int i, int j, int kk) {
            const bool on = cfg.dealias ? keep[idx] != 0 : (i != g.n / 2 && j != g.n / 2 && kk != g.n / 2);
            if (!on) {
                dropped.push_back(idx);
                return;
            }
            Mode m{idx, {w.xy[i], w.xy[j], w.z[kk]}, 0.0, half_weight(g, kk)};
            m.k2 = m.x[0] * m.x[0] + m.x[1] * m.x[1] + m.x[2] * m.x[2];
            modes.push_back(m);
        });
        const std::size_t nc = g.spectral_size(), nr = g.size();
        for (auto* set : {&y, &stage, &k, &acc})
            for (auto& b : *set) b.assign(nc, cplx(0.0, 0.0));
        rho.resize(nr);
        prod.resize(nr);
        for (int c = 0; c < 3; ++c) {
            u[c].resize(nr);
            W[c].resize(nr);
            om[c].resize(nr);
            spec[c].assign(nc, cplx(0.0, 0.0));
        }
        tmp.assign(nc, cplx(0.0, 0.0));
        ph.assign(nc, cplx(0.0, 0.0));
        fft.forward(s.rho.values.data(), y[0].data());
        for (int c = 0; c < 3; ++c) fft.forward(s.u[c].values.data(), y[c + 1].data());
        for (auto& b : y) clear_dropped(b);
    }

    void clear_dropped(ComplexBuffer& b) const {
        for (std::size_t i : dropped) b[i] = 0.0;
    }

    /// out = tendencies of in. Physical statistics are stored when `stats`.
    void eval(const Set& in, Set& out, double t_eval, bool stats) {
        const std::size_t nr = g.size();
        fft.inverse(in[0].data(), rho.data());
        for (int c = 0; c < 3; ++c) fft.inverse(in[c + 1].data(), u[c].data());

        double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin, check = 0.0;
        for (std::size_t i = 0; i < nr; ++i) {
            rmin = std::min(rmin, rho[i]);
            rmax = std::max(rmax, rho[i]);
            check += rho[i] + u[0][i] * u[0][i] + u[1][i] * u[1][i] + u[2][i] * u[2][i];
        }
        if (!std::isfinite(check)) throw NonFiniteError(t_eval);
        if (!(rmin > cfg.positivity_floor)) throw PositivityError(t_eval, rmin);

        if (stats) {
            const double dV = g.cell_volume();
            double mass = 0, ke = 0, H = 0, um = 0;
            for (std::size_t i = 0; i < nr; ++i) {
                const double u2 = u[0][i] * u[0][i] + u[1][i] * u[1][i] + u[2][i] * u[2][i];
                mass += rho[i];
                ke += rho[i] * u2;
                H += h_density(rho[i], p.gamma);
                um = std::max(um, u2);
            }
            last.t = t_eval;
            last.mass = mass * dV;
            last.E = (0.5 * ke + H) * dV;
            last.min_rho = rmin;
            last.max_rho = rmax;
            umax = std::sqrt(um);
            cmax = std::max(sound_speed(rmin, p.gamma), sound_speed(rmax, p.gamma));
            inv_rho_max = 1.0 / rmin;
            inv_rho_min = 1.0 / rmax;
            last.D = dissipation(in);
        }

        // pressure spectrum
        const cplx* phat = in[0].data();
        if (p.gamma != 1.0) {
            for (std::size_t i = 0; i < nr; ++i) prod[i] = std::pow(rho[i], p.gamma);
            fft.forward(prod.data(), ph.data());
            phat = ph.data();
        }

        // W = mu Lap u + lambda grad div u - grad p
        for (const Mode& m : modes) {
            const std::size_t i = m.idx;
            const cplx xu = m.x[0] * in[1][i] + m.x[1] * in[2][i] + m.x[2] * in[3][i];
            for (int c = 0; c < 3; ++c)
                spec[c][i] = -p.mu * m.k2 * in[c + 1][i] - p.lambda * m.x[c] * xu - I * m.x[c] * phat[i];
        }
        for (int c = 0; c < 3; ++c) fft.inverse(spec[c].data(), W[c].data());
        // vorticity
        for (const Mode& m : modes) {
            const std::size_t i = m.idx;
            for (int c = 0; c < 3; ++c) {
                const int a = (c + 1) % 3, b = (c + 2) % 3;
                spec[c][i] = I * (m.x[a] * in[b + 1][i] - m.x[b] * in[a + 1][i]);
            }
        }
        for (int c = 0; c < 3; ++c) fft.inverse(spec[c].data(), om[c].data());

        // mass flux
        for (int c = 0; c < 3; ++c) {
            for (std::size_t i = 0; i < nr; ++i) prod[i] = rho[i] * u[c][i];
            fft.forward(prod.data(), spec[c].data());
        }
        for (const Mode& m : modes) {
            const std::size_t i = m.idx;
            out[0][i] = -I * (m.x[0] * spec[0][i] + m.x[1] * spec[1][i] + m.x[2] * spec[2][i]);
        }

        // B = W / rho + u x omega, kinetic energy density
        for (std::size_t i = 0; i < nr; ++i) {
            const double ir = 1.0 / rho[i];
            const double b0 = u[1][i] * om[2][i] - u[2][i] * om[1][i];
            const double b1 = u[2][i] * om[0][i] - u[0][i] * om[2][i];
            const double b2 = u[0][i] * om[1][i] - u[1][i] * om[0][i];
            W[0][i] = W[0][i] * ir + b0;
            W[1][i] = W[1][i] * ir + b1;
            W[2][i] = W[2][i] * ir + b2;
            prod[i] = 0.5 * (u[0][i] * u[0][i] + u[1][i] * u[1][i] + u[2][i] * u[2][i]);
        }
        for (int c = 0; c < 3; ++c) fft.forward(W[c].data(), out[c + 1].data());
        fft.forward(prod.data(), tmp.data());

        for (const Mode& m : modes) {
            const std::size_t i = m.idx;
            for (int c = 0; c < 3; ++c) out[c + 1][i] -= I * m.x[c] * tmp[i];
            if (split) {
                const cplx xu = m.x[0] * in[1][i] + m.x[1] * in[2][i] + m.x[2] * in[3][i];
                for (int c = 0; c < 3; ++c) out[c + 1][i] += p.mu * m.k2 * in[c + 1][i] + p.lambda * m.x[c] * xu;
            }
        }
        if (forcing) {
            forcing(t_eval, f_rho, f_u);
            for (int c = 0; c < 4; ++c) {
                fft.forward(c == 0 ? f_rho.values.data() : f_u[c - 1].values.data(), tmp.data());
                for (const Mode& m : modes) out[c][m.idx] += tmp[m.idx];
            }
        }
        for (auto& b : out) clear_dropped(b);
    }

    double dissipation(const Set& in) const {
        double sum = 0.0;
        for (const Mode& m : modes) {
            const std::size_t i = m.idx;
            const cplx xu = m.x[0] * in[1][i] + m.x[1] * in[2][i] + m.x[2] * in[3][i];
            const double e = std::norm(in[1][i]) + std::norm(in[2][i]) + std::norm(in[3][i]);
            sum += m.weight * (p.mu * m.k2 * e + p.lambda * std::norm(xu));
        }
        return sum * g.volume();
    }

    void ensure_k() {
        if (!k_valid) {
            eval(y, k, t, true);
            k_valid = true;
        }
    }

    /// out = a + s b on the retained modes.
    void axpy(ComplexBuffer& out, const ComplexBuffer& a, double s, const ComplexBuffer& b) const {
        for (const Mode& m : modes) out[m.idx] = a[m.idx] + s * b[m.idx];
    }

    void advance_rk4(double dt) {
        ensure_k();
        for (int c = 0; c < 4; ++c) {
            axpy(acc[c], y[c], dt / 6.0, k[c]);
            axpy(stage[c], y[c], dt / 2.0, k[c]);
        }
        eval(stage, k, t + dt / 2.0, false);
        for (int c = 0; c < 4; ++c) {
            axpy(acc[c], acc[c], dt / 3.0, k[c]);
            axpy(stage[c], y[c], dt / 2.0, k[c]);
        }
        eval(stage, k, t + dt / 2.0, false);
        for (int c = 0; c < 4; ++c) {
            axpy(acc[c], acc[c], dt / 3.0, k[c]);
            axpy(stage[c], y[c], dt, k[c]);
        }
        eval(stage, k, t + dt, false);
        for (int c = 0; c < 4; ++c) axpy(y[c], acc[c], dt / 6.0, k[c]);
        t += dt;
        k_valid = false;
    }

    /// out_u = (I - h L)^{-1} [(I + h L) base_u + s N], mode by mode, where
    /// L u = mu Lap u + lambda grad div u splits into transverse and longitudinal parts.
    void implicit_velocity(Set& out, const Set& base, double h, double s, const ComplexBuffer* N1,
                           const ComplexBuffer* N2) const {
        for (const Mode& m : modes) {
            const std::size_t i = m.idx;
            cplx v[3], rhs[3];
            for (int c = 0; c < 3; ++c) v[c] = base[c + 1][i];
            const cplx xv = m.x[0] * v[0] + m.x[1] * v[1] + m.x[2] * v[2];
            for (int c = 0; c < 3; ++c) {
                const cplx n = N2 ? N1[c + 1][i] + N2[c + 1][i] : N1[c + 1][i];
                rhs[c] = v[c] + h * (-p.mu * m.k2 * v[c] - p.lambda * m.x[c] * xv) + s * n;
            }
            if (m.k2 == 0.0) {
                for (int c = 0; c < 3; ++c) out[c + 1][i] = rhs[c];
                continue;
            }
            const cplx xr = (m.x[0] * rhs[0] + m.x[1] * rhs[1] + m.x[2] * rhs[2]) / m.k2;
            const double d_perp = 1.0 + h * p.mu * m.k2;
            const double d_par = 1.0 + h * (p.mu + p.lambda) * m.k2;
            for (int c = 0; c < 3; ++c) {
                const cplx par = m.x[c] * xr;
                out[c + 1][i] = (rhs[c] - par) / d_perp + par / d_par;
            }
        }
    }

    void advance_imex(double dt) {
        ensure_k();  // k = N(y^n)
        axpy(stage[0], y[0], dt, k[0]);
        implicit_velocity(stage, y, 0.5 * dt, dt, k.data(), nullptr);
        eval(stage, acc, t + dt, false);  // acc = N(y*)
        for (const Mode& m : modes) y[0][m.idx] += 0.5 * dt * (k[0][m.idx] + acc[0][m.idx]);
        implicit_velocity(y, y, 0.5 * dt, 0.5 * dt, k.data(), acc.data());
        t += dt;
        k_valid = false;
    }

    State physical() const {
        State s(g);
        s.t = t;
        fft.inverse(y[0].data(), s.rho.values.data());
        for (int c = 0; c < 3; ++c) fft.inverse(y[c + 1].data(), s.u[c].values.data());
        return s;
    }
};

Stepper::Stepper(const State& initial, const PulseParams& p, const SolverConfig& cfg, Forcing forcing)
    : impl_(std::make_unique<Impl>(initial, p, cfg, cfg.scheme == Scheme::imex, std::move(forcing))) {
    cfg.validate();
}

Stepper::~Stepper() = default;

EnergySample Stepper::sample() {
    impl_->ensure_k();
    return impl_->last;
}

double Stepper::cfl_limit() {
    impl_->ensure_k();
    return cfl_formula(impl_->g, impl_->p, impl_->cfg, impl_->umax, impl_->cmax, impl_->inv_rho_max,
                       impl_->inv_rho_min);
}

void Stepper::advance(double dt) {
    if (!(dt > 0.0)) throw InputError("time step must be positive");
    if (impl_->cfg.scheme == Scheme::imex) impl_->advance_imex(dt);
    else impl_->advance_rk4(dt);
}

double Stepper::time() const { return impl_->t; }

State Stepper::state() const { return impl_->physical(); }

Tendencies rhs(const State& s, const PulseParams& p, bool dealias, double floor) {
    SolverConfig cfg;
    cfg.dealias = dealias;
    cfg.positivity_floor = floor;
    Stepper::Impl impl(s, p, cfg, false);
    impl.eval(impl.y, impl.k, s.t, false);
    Tendencies out{ScalarField(s.grid()), VectorField(s.grid())};
    impl.fft.inverse(impl.k[0].data(), out.drho.values.data());
    for (int c = 0; c < 3; ++c) impl.fft.inverse(impl.k[c + 1].data(), out.du[c].values.data());
    return out;
}

double cfl_dt(const State& s, const PulseParams& p, const SolverConfig& cfg) {
    s.validate();
    double umax = 0.0, rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        umax = std::max(umax, s.u[0][i] * s.u[0][i] + s.u[1][i] * s.u[1][i] + s.u[2][i] * s.u[2][i]);
        rmin = std::min(rmin, s.rho[i]);
        rmax = std::max(rmax, s.rho[i]);
    }
    if (!(rmin > 0.0)) throw InputError("cfl_dt needs positive density");
    const double cmax = std::max(sound_speed(rmin, p.gamma), sound_speed(rmax, p.gamma));
    return cfl_formula(s.grid(), p, cfg, std::sqrt(umax), cmax, 1.0 / rmin, 1.0 / rmax);
}

State step(const State& s, double dt, const PulseParams& p, const SolverConfig& cfg) {
    Stepper st(s, p, cfg);
    st.advance(dt);
    return st.state();
}

double energy_balance_at(const std::vector<EnergySample>& e, std::size_t i) {
    const std::size_t n = e.size();
    if (n < 3 || i >= n) return std::numeric_limits<double>::quiet_NaN();
    double dEdt;
    if (i > 0 && i + 1 < n) {
        const double h1 = e[i].t - e[i - 1].t, h2 = e[i + 1].t - e[i].t;
        dEdt = -h2 / (h1 * (h1 + h2)) * e[i - 1].E + (h2 - h1) / (h1 * h2) * e[i].E +
               h1 / (h2 * (h1 + h2)) * e[i + 1].E;
    } else if (i == 0) {
        const double h1 = e[1].t - e[0].t, h2 = e[2].t - e[1].t;
        dEdt = -(2 * h1 + h2) / (h1 * (h1 + h2)) * e[0].E + (h1 + h2) / (h1 * h2) * e[1].E -
               h1 / (h2 * (h1 + h2)) * e[2].E;
    } else {
        const double h1 = e[n - 2].t - e[n - 3].t, h2 = e[n - 1].t - e[n - 2].t;
        dEdt = h2 / (h1 * (h1 + h2)) * e[n - 3].E - (h1 + h2) / (h1 * h2) * e[n - 2].E +
               (2 * h2 + h1) / (h2 * (h1 + h2)) * e[n - 1].E;
    }
    return dEdt + e[i].D;
}

RunSummary run(const State& initial, const PulseParams& p, const SolverConfig& cfg, const RunSinks& sinks) {
    cfg.validate();
    p.validate();
    const auto wall0 = std::chrono::steady_clock::now();
    Stepper st(initial, p, cfg);
    RunSummary sum;
    sum.dt_min = std::numeric_limits<double>::infinity();
    sum.dt_max = 0.0;

    struct Pending {
        std::size_t energy_index;
        DiagnosticsRecord rec;
    };
    std::vector<Pending> pending;
    auto emit_ready = [&](bool final) {
        std::size_t keep = 0;
        for (auto& pr : pending) {
            const bool ready = final || pr.energy_index + 1 < sum.energy.size();
            if (ready) {
                pr.rec.energy_balance_residual = energy_balance_at(sum.energy, pr.energy_index);
                for (auto* o : sinks.observers) o->on_record(pr.rec);
            } else {
                pending[keep++] = std::move(pr);
            }
        }
        pending.resize(keep);
    };
    auto write_ck = [&](const State& s, long n) {
        if (!sinks.checkpoint_dir) return;
        char name[64];
        std::snprintf(name, sizeof name, "checkpoint_%08ld.pcns", n);
        write_checkpoint(*sinks.checkpoint_dir / name, s, p);
    };

    const double tol = 1e-12 * std::max(1.0, cfg.t_end);
    long n = 0;
    long records = 0;
    try {
        for (;;) {
            const EnergySample es = st.sample();
            if (n == 0) {
                sum.mass_initial = es.mass;
                sum.min_rho = es.min_rho;
                sum.max_rho = es.max_rho;
            }
            sum.min_rho = std::min(sum.min_rho, es.min_rho);
            sum.max_rho = std::max(sum.max_rho, es.max_rho);
            sum.max_mass_drift =
                std::max(sum.max_mass_drift, std::abs(es.mass - sum.mass_initial) / std::abs(sum.mass_initial));
            sum.energy.push_back(es);
            for (auto* o : sinks.observers) o->on_energy(es);
            emit_ready(false);

            const bool done = cfg.t_end - st.time() <= tol;
            const bool want_rec = n == 0 || done || (cfg.diagnostics_every > 0 && n % cfg.diagnostics_every == 0);
            bool want_state = done;
            for (auto* o : sinks.observers)
                if (o->state_every() > 0 && n % o->state_every() == 0) want_state = true;
            const bool want_ck = cfg.checkpoint_every > 0 && n > 0 && (done || n % cfg.checkpoint_every == 0);
            if (want_rec || want_state || want_ck) {
                const State s = st.state();
                if (want_rec) {
                    DiagnosticsOptions opt = sinks.diagnostics;
                    if (opt.besov_every > 0 && records % opt.besov_every != 0) opt.besov_every = 0;
                    pending.push_back({sum.energy.size() - 1, compute_record(s, p, opt)});
                    ++records;
                }
                for (auto* o : sinks.observers)
                    if (done || (o->state_every() > 0 && n % o->state_every() == 0)) o->on_state(s, n);
                if (want_ck) write_ck(s, n);
            }
            if (done) break;

            const double remaining = cfg.t_end - st.time();
            double dt = std::min(cfg.dt_init, st.cfl_limit());
            if (remaining <= dt * (1.0 + 1e-6)) dt = remaining;
            st.advance(dt);
            sum.dt_min = std::min(sum.dt_min, dt);
            sum.dt_max = std::max(sum.dt_max, dt);
            ++n;
        }
    } catch (...) {
        emit_ready(true);
        for (auto* o : sinks.observers) o->flush();
        if (sinks.checkpoint_dir) {
            try {
                write_checkpoint(*sinks.checkpoint_dir / "abort_dump.pcns", st.state(), p);
            } catch (const std::exception&) {
                // the original error is the one worth reporting
            }
        }
        throw;
    }
    emit_ready(true);
    for (auto* o : sinks.observers) o->flush();
    sum.steps = n;
    sum.t_final = st.time();
    if (n == 0) sum.dt_min = 0.0;
    sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return sum;
}

} // namespace pcns
