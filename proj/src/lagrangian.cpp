#include "pcns/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "pcns/csv.hpp"
#include "pcns/diagnostics.hpp"
#include "pcns/errors.hpp"
#include "pcns/fft.hpp"
#include "pcns/potential.hpp"
#include "pcns/spectral.hpp"

namespace pcns {

namespace {

double wrap(double x, double L) {
    double r = std::fmod(x, L);
    if (r < 0.0) r += L;
    return r >= L ? 0.0 : r;
}

Point wrap(const Point& p, double L) { return {wrap(p[0], L), wrap(p[1], L), wrap(p[2], L)}; }

Point axpy(const Point& x, double h, const Point& k) { return {x[0] + h * k[0], x[1] + h * k[1], x[2] + h * k[2]}; }

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

} // namespace

Phases phases(const Grid& g, const Point& p) {
    Phases ph;
    const int n = g.n, nh = g.nz_half();
    ph.x.resize(n);
    ph.y.resize(n);
    ph.z.resize(nh);
    for (int i = 0; i < n; ++i) {
        // Nyquist index uses +n/2
        const int k = i <= n / 2 ? i : i - n;
        ph.x[i] = std::polar(1.0, g.xi(k) * p[0]);
        ph.y[i] = std::polar(1.0, g.xi(k) * p[1]);
    }
    for (int k = 0; k < nh; ++k) ph.z[k] = std::polar(1.0, g.xi(k) * p[2]);
    return ph;
}

TrigInterpolator::TrigInterpolator(const ScalarField& f) : grid_(f.grid), weighted_(f.grid.spectral_size()) {
    require_finite(f, "interpolated field");
    Fft::get(grid_).forward(f.values.data(), weighted_.data());
    for_each_mode(grid_, [&](std::size_t idx, int, int, int k) { weighted_[idx] *= half_weight(grid_, k); });
}

double TrigInterpolator::operator()(const Point& p) const { return (*this)(phases(grid_, p)); }

double TrigInterpolator::operator()(const Phases& ph) const {
    const int n = grid_.n, nh = grid_.nz_half();
    cplx sum(0.0, 0.0);
    const cplx* w = weighted_.data();
    for (int i = 0; i < n; ++i) {
        cplx sx(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            cplx sz(0.0, 0.0);
            for (int k = 0; k < nh; ++k) sz += w[k] * ph.z[k];
            sx += ph.y[j] * sz;
            w += nh;
        }
        sum += ph.x[i] * sx;
    }
    return sum.real();
}

struct ParticleTracker::Snapshot {
    double t;
    TrigInterpolator u[3];
    TrigInterpolator rho, a, F;

    Point velocity(const Phases& ph) const { return {u[0](ph), u[1](ph), u[2](ph)}; }
    Point velocity(const Point& x) const { return velocity(phases(rho.grid(), x)); }
};

ParticleTracker::ParticleTracker(std::vector<Point> seeds, double tau, const PulseParams& p, long every,
                                 AdvectOptions opt)
    : p_(p), every_(every), opt_(opt), tau_(tau), pos_(std::move(seeds)) {
    if (every_ < 1) throw InputError("tracking cadence must be >= 1");
    if (!(opt_.max_gap > 0.0)) throw InputError("max_gap must be positive");
    for (const auto& s : pos_)
        for (double c : s)
            if (!std::isfinite(c)) throw InputError("seed positions must be finite");
    traj_.resize(pos_.size());
    for (std::size_t i = 0; i < pos_.size(); ++i) {
        traj_[i].seed = pos_[i];
        traj_[i].tau = tau;
        traj_[i].nu = p.nu();
    }
}

ParticleTracker::~ParticleTracker() = default;

std::unique_ptr<ParticleTracker::Snapshot> ParticleTracker::make_snapshot(const State& s) const {
    return std::unique_ptr<Snapshot>(new Snapshot{s.t,
                                                  {TrigInterpolator(s.u[0]), TrigInterpolator(s.u[1]),
                                                   TrigInterpolator(s.u[2])},
                                                  TrigInterpolator(s.rho),
                                                  TrigInterpolator(pressure_excess(s.rho, p_.gamma)),
                                                  TrigInterpolator(effective_flux(s, p_))});
}

void ParticleTracker::record(const Snapshot& s) {
    const Grid& g = s.rho.grid();
    for (std::size_t i = 0; i < pos_.size(); ++i) {
        pos_[i] = wrap(pos_[i], g.L);
        const Phases ph = phases(g, pos_[i]);
        traj_[i].samples.push_back({s.t, pos_[i], s.rho(ph), s.a(ph), s.F(ph)});
    }
}

void ParticleTracker::step_two(const Snapshot& s0, const Snapshot& s1, const Snapshot& s2) {
    const double h = s2.t - s0.t;
    const double theta = (s1.t - s0.t) / h;
    for (auto& x : pos_) {
        const Point k1 = s0.velocity(x);
        if (std::abs(theta - 0.5) <= 1e-12) {
            const Point k2 = s1.velocity(axpy(x, 0.5 * h, k1));
            const Point k3 = s1.velocity(axpy(x, 0.5 * h, k2));
            const Point k4 = s2.velocity(axpy(x, h, k3));
            for (int c = 0; c < 3; ++c) x[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        } else if (theta > 0.2 && theta < 0.6) {
            // third-order Kutta family with nodes (0, theta, 1)
            const double b2 = 1.0 / (6.0 * theta * (1.0 - theta));
            const double b3 = (2.0 - 3.0 * theta) / (6.0 * (1.0 - theta));
            const double b1 = 1.0 - b2 - b3;
            const double a32 = (1.0 - theta) / (theta * (2.0 - 3.0 * theta));
            const double a31 = 1.0 - a32;
            const Point k2 = s1.velocity(axpy(x, theta * h, k1));
            Point y = axpy(x, a31 * h, k1);
            y = axpy(y, a32 * h, k2);
            const Point k3 = s2.velocity(y);
            for (int c = 0; c < 3; ++c) x[c] += h * (b1 * k1[c] + b2 * k2[c] + b3 * k3[c]);
        } else {
            // strongly uneven spacing: Heun on each interval
            const double h1 = s1.t - s0.t, h2 = s2.t - s1.t;
            const Point y1 = axpy(x, h1, k1);
            const Point k2 = s1.velocity(y1);
            for (int c = 0; c < 3; ++c) x[c] += 0.5 * h1 * (k1[c] + k2[c]);
            const Point l1 = s1.velocity(x);
            const Point l2 = s2.velocity(axpy(x, h2, l1));
            for (int c = 0; c < 3; ++c) x[c] += 0.5 * h2 * (l1[c] + l2[c]);
        }
    }
}

void ParticleTracker::step_one(const Snapshot& s0, const Snapshot& s1) {
    const double h = s1.t - s0.t;
    for (auto& x : pos_) {
        const Point k1 = s0.velocity(x);
        const Point k2 = s1.velocity(axpy(x, h, k1));
        for (int c = 0; c < 3; ++c) x[c] += 0.5 * h * (k1[c] + k2[c]);
    }
}

void ParticleTracker::push(const State& s) {
    s.validate();
    if (!(s.t > last_t_)) throw InputError("snapshots must be strictly increasing in time");
    if (std::isfinite(last_t_) && s.t - last_t_ > opt_.max_gap * (1.0 + 1e-12))
        throw InputError("snapshot gap " + std::to_string(s.t - last_t_) + " exceeds the admitted maximum");
    if (base_ && !(s.grid() == base_->rho.grid())) throw InputError("snapshots must share one grid");
    last_t_ = s.t;
    if (!started_) {
        if (same_time(s.t, tau_)) {
            started_ = true;
            base_ = make_snapshot(s);
            record(*base_);
        } else if (s.t > tau_) {
            throw InputError("no snapshot at the release time tau=" + std::to_string(tau_));
        }
        return;
    }
    if (!mid_) {
        mid_ = make_snapshot(s);
        return;
    }
    auto next = make_snapshot(s);
    step_two(*base_, *mid_, *next);
    base_ = std::move(next);
    mid_.reset();
    record(*base_);
}

void ParticleTracker::finish() {
    if (!mid_) return;
    step_one(*base_, *mid_);
    base_ = std::move(mid_);
    record(*base_);
}

std::vector<Trajectory> advect(const std::vector<Point>& seeds, double tau, const std::vector<State>& snapshots,
                               const PulseParams& p, AdvectOptions opt) {
    if (snapshots.empty()) throw InputError("advect needs snapshots");
    if (tau < snapshots.front().t - 1e-12 * std::max(1.0, std::abs(tau)) || tau > snapshots.back().t)
        throw InputError("snapshots do not bracket the release time");
    ParticleTracker tr(seeds, tau, p, 1, opt);
    for (const auto& s : snapshots) {
        if (s.t < tau && !same_time(s.t, tau)) continue;
        tr.push(s);
    }
    tr.finish();
    return tr.trajectories();
}

double density_formula_residual(const Trajectory& tr) {
    const auto& s = tr.samples;
    if (s.size() < 2) return 0.0;
    const double inv_nu = 1.0 / tr.nu;
    double C = 0.0;
    double D = std::log(s[0].rho);
    double dmin = D, dmax = D, worst = 0.0;
    for (std::size_t m = 1; m < s.size(); ++m) {
        const double h = s[m].t - s[m - 1].t;
        C += 0.5 * h * (s[m - 1].a * inv_nu + s[m - 1].F + s[m].a * inv_nu + s[m].F);
        D = std::log(s[m].rho) + C;
        worst = std::max({worst, std::abs(std::expm1(D - dmin)), std::abs(std::expm1(D - dmax))});
        dmin = std::min(dmin, D);
        dmax = std::max(dmax, D);
    }
    return worst;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
    CsvWriter out(path, {"t", "x", "y", "z", "rho", "a", "F"});
    for (const auto& s : tr.samples) out.row({s.t, s.x[0], s.x[1], s.x[2], s.rho, s.a, s.F});
    out.flush();
}

} // namespace pcns
