#include "pcns/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace pcns {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Value, time derivative, gradient and Hessian at one point.
struct Jet {
    double v = 0, dt = 0, d[3] = {0, 0, 0}, dd[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
};

/// Per-axis tables of cos and sin of 2 pi k x / L + phase for one wave.
struct WaveTables {
    double amp_t, damp_t, K[3];
    std::vector<double> c[3], s[3];
};

WaveTables tables(const Manufactured::Wave& w, const Grid& g, double t) {
    WaveTables T;
    T.amp_t = w.amp * std::cos(w.omega * t + w.psi);
    T.damp_t = -w.amp * w.omega * std::sin(w.omega * t + w.psi);
    for (int d = 0; d < 3; ++d) {
        T.K[d] = g.xi(w.k[d]);
        T.c[d].resize(g.n);
        T.s[d].resize(g.n);
        for (int i = 0; i < g.n; ++i) {
            const double th = T.K[d] * g.node(i) + w.phase[d];
            T.c[d][i] = std::cos(th);
            T.s[d][i] = std::sin(th);
        }
    }
    return T;
}

void accumulate(const WaveTables& T, int i, int j, int k, Jet& J, bool derivatives) {
    const int ix[3] = {i, j, k};
    double f[3], f1[3], f2[3];
    for (int d = 0; d < 3; ++d) {
        f[d] = T.c[d][ix[d]];
        f1[d] = -T.K[d] * T.s[d][ix[d]];
        f2[d] = -T.K[d] * T.K[d] * f[d];
    }
    const double prod = f[0] * f[1] * f[2];
    J.v += T.amp_t * prod;
    if (!derivatives) return;
    J.dt += T.damp_t * prod;
    for (int a = 0; a < 3; ++a) {
        double g1 = T.amp_t;
        for (int d = 0; d < 3; ++d) g1 *= d == a ? f1[d] : f[d];
        J.d[a] += g1;
        for (int b = a; b < 3; ++b) {
            double h = T.amp_t;
            for (int d = 0; d < 3; ++d) h *= (d == a && d == b) ? f2[d] : (d == a || d == b) ? f1[d] : f[d];
            J.dd[a][b] += h;
            if (b != a) J.dd[b][a] += h;
        }
    }
}

} // namespace

Manufactured::Manufactured(const PulseParams& p) : p_(p) {
    rho_ = {{0.25, 1.0, 0.3, {1, 0, 1}, {0.0, 0.0, 0.0}}, {0.15, 2.0, 0.0, {0, 2, 1}, {0.0, 0.0, -kHalfPi}}};
    u_[0] = {{0.4, 1.5, 0.1, {0, 1, 0}, {0.0, 0.0, 0.0}}, {0.2, 0.7, 0.5, {1, 1, 2}, {-kHalfPi, 0.0, 0.0}}};
    u_[1] = {{0.3, 1.2, 0.0, {1, 0, 1}, {0.0, 0.0, -kHalfPi}}, {0.1, 2.5, 1.0, {3, 0, 0}, {0.0, 0.0, 0.0}}};
    u_[2] = {{0.35, 0.9, 0.2, {2, 1, 0}, {-kHalfPi, 0.0, 0.0}}};
}

Manufactured::Manufactured(const PulseParams& p, std::vector<Wave> rho, std::vector<Wave> u[3])
    : p_(p), rho_(std::move(rho)) {
    for (int c = 0; c < 3; ++c) u_[c] = std::move(u[c]);
}

State Manufactured::exact(const Grid& g, double t) const {
    State s(g);
    s.t = t;
    std::vector<WaveTables> tr, tu[3];
    for (const auto& w : rho_) tr.push_back(tables(w, g, t));
    for (int c = 0; c < 3; ++c)
        for (const auto& w : u_[c]) tu[c].push_back(tables(w, g, t));
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                const std::size_t idx = g.index(i, j, k);
                Jet r;
                for (const auto& T : tr) accumulate(T, i, j, k, r, false);
                s.rho[idx] = 1.0 + r.v;
                for (int c = 0; c < 3; ++c) {
                    Jet u;
                    for (const auto& T : tu[c]) accumulate(T, i, j, k, u, false);
                    s.u[c][idx] = u.v;
                }
            }
    return s;
}

void Manufactured::forcing(double t, ScalarField& s_rho, VectorField& s_u) const {
    const Grid& g = s_rho.grid;
    std::vector<WaveTables> tr, tu[3];
    for (const auto& w : rho_) tr.push_back(tables(w, g, t));
    for (int c = 0; c < 3; ++c)
        for (const auto& w : u_[c]) tu[c].push_back(tables(w, g, t));
    const double mu = p_.mu, lambda = p_.lambda, gamma = p_.gamma;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                const std::size_t idx = g.index(i, j, k);
                Jet r, u[3];
                for (const auto& T : tr) accumulate(T, i, j, k, r, true);
                for (int c = 0; c < 3; ++c)
                    for (const auto& T : tu[c]) accumulate(T, i, j, k, u[c], true);
                const double rho = 1.0 + r.v;
                const double div = u[0].d[0] + u[1].d[1] + u[2].d[2];
                s_rho[idx] = r.dt + u[0].v * r.d[0] + u[1].v * r.d[1] + u[2].v * r.d[2] + rho * div;
                const double dp = gamma * std::pow(rho, gamma - 1.0);
                for (int c = 0; c < 3; ++c) {
                    const double adv = u[0].v * u[c].d[0] + u[1].v * u[c].d[1] + u[2].v * u[c].d[2];
                    const double lap = u[c].dd[0][0] + u[c].dd[1][1] + u[c].dd[2][2];
                    const double grad_div = u[0].dd[c][0] + u[1].dd[c][1] + u[2].dd[c][2];
                    s_u[c][idx] = u[c].dt + adv - (mu * lap + lambda * grad_div - dp * r.d[c]) / rho;
                }
            }
}

Forcing Manufactured::as_forcing() const {
    return [self = *this](double t, ScalarField& s_rho, VectorField& s_u) { self.forcing(t, s_rho, s_u); };
}

} // namespace pcns
