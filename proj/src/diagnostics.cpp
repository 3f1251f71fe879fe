#include "pcns/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "pcns/errors.hpp"
#include "pcns/fft.hpp"
#include "pcns/norms.hpp"
#include "pcns/potential.hpp"
#include "pcns/spectral.hpp"

namespace pcns {

namespace {

const cplx I(0.0, 1.0);

double axis_xi(const Wavenumbers& w, int axis, int i, int j, int k) {
    return axis == 0 ? w.xy[i] : axis == 1 ? w.xy[j] : w.z[k];
}

/// Inverse transform of the spectrum multiplied by mult(i, j, k).
template <class Mult>
ScalarField synth(const Spectrum& s, Mult mult) {
    Spectrum d(s.grid);
    for_each_mode(s.grid, [&](std::size_t idx, int i, int j, int k) { d[idx] = mult(i, j, k) * s[idx]; });
    return inverse(d);
}

ScalarField deriv(const Spectrum& s, int axis) {
    const auto& w = Wavenumbers::get(s.grid);
    return synth(s, [&](int i, int j, int k) { return I * axis_xi(w, axis, i, j, k); });
}

ScalarField deriv2(const Spectrum& s, int a, int b) {
    const auto& w = Wavenumbers::get(s.grid);
    return synth(s, [&](int i, int j, int k) {
        return cplx(-axis_xi(w, a, i, j, k) * axis_xi(w, b, i, j, k), 0.0);
    });
}

struct VecSpec {
    Spectrum c[3];
    explicit VecSpec(const VectorField& v) : c{forward(v[0]), forward(v[1]), forward(v[2])} {}
};

/// ||grad f||^2 summed over components, by Parseval with the resolved wavenumbers.
double grad_sq(const VecSpec& s) {
    const Grid& g = s.c[0].grid;
    const auto& w = Wavenumbers::get(g);
    double sum = 0.0;
    for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
        const double k2 = w.xy[i] * w.xy[i] + w.xy[j] * w.xy[j] + w.z[k] * w.z[k];
        double e = 0.0;
        for (int c = 0; c < 3; ++c) e += std::norm(s.c[c][idx]);
        sum += half_weight(g, k) * k2 * e;
    });
    return sum * g.volume();
}

double spectral_norm(const Spectrum& s) { return std::sqrt(std::max(0.0, spectral_inner(s, s))); }

/// rho udot = mu Lap u + lambda grad div u - grad a, assembled spectrally.
VectorField momentum_force(const VecSpec& uh, const Spectrum& ah, const PulseParams& p) {
    const Grid& g = ah.grid;
    const auto& w = Wavenumbers::get(g);
    VectorField out(g);
    for (int c = 0; c < 3; ++c) {
        Spectrum d(g);
        for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
            const double x[3] = {w.xy[i], w.xy[j], w.z[k]};
            const double k2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            const cplx xu = x[0] * uh.c[0][idx] + x[1] * uh.c[1][idx] + x[2] * uh.c[2][idx];
            d[idx] = -p.mu * k2 * uh.c[c][idx] - p.lambda * x[c] * xu - I * x[c] * ah[idx];
        });
        out[c] = inverse(d);
    }
    return out;
}

double weighted_sq(const ScalarField& rho, const VectorField& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i)
        s += rho[i] * (v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i]);
    return s * rho.grid.cell_volume();
}

double pow_sum(const ScalarField& f, double p) {
    double s = 0.0;
    for (double v : f.values) s += std::pow(std::abs(v), p);
    return s * f.grid.cell_volume();
}

double relative(double num, double den) {
    if (den > 0.0) return num / den;
    return num;
}

void require_positive_density(const State& s) {
    if (!(s.rho.min() > 0.0)) throw InputError("density must be positive");
}

} // namespace

ScalarField effective_flux(const State& s, const PulseParams& p) {
    const ScalarField dv = div(s.u);
    ScalarField F(s.grid());
    const double inv_nu = 1.0 / p.nu();
    for (std::size_t i = 0; i < F.size(); ++i) F[i] = dv[i] - pressure_excess(s.rho[i], p.gamma) * inv_nu;
    return F;
}

VectorField material_derivative(const State& s, const PulseParams& p) {
    s.validate();
    require_positive_density(s);
    const VecSpec uh(s.u);
    const Spectrum ah = forward(pressure_excess(s.rho, p.gamma));
    VectorField m = momentum_force(uh, ah, p);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < s.rho.size(); ++i) m[c][i] /= s.rho[i];
    return m;
}

double EllipticResiduals::max() const { return std::max({flux, vorticity, momentum}); }

EllipticResiduals elliptic_residuals(const State& s, const PulseParams& p, const VectorField& udot) {
    s.validate();
    const Grid& g = s.grid();
    const auto& w = Wavenumbers::get(g);
    const VecSpec uh(s.u);
    const VecSpec mh(s.rho * udot);
    const Spectrum Fh = forward(effective_flux(s, p));
    const double nu = p.nu();

    Spectrum r_flux(g), d_flux(g), r_mom[3] = {Spectrum(g), Spectrum(g), Spectrum(g)};
    Spectrum r_vort[3] = {Spectrum(g), Spectrum(g), Spectrum(g)};
    Spectrum d_vort[3] = {Spectrum(g), Spectrum(g), Spectrum(g)};
    for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
        const double x[3] = {w.xy[i], w.xy[j], w.z[k]};
        const double k2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        const cplx u[3] = {uh.c[0][idx], uh.c[1][idx], uh.c[2][idx]};
        const cplx m[3] = {mh.c[0][idx], mh.c[1][idx], mh.c[2][idx]};
        const cplx divm = I * (x[0] * m[0] + x[1] * m[1] + x[2] * m[2]);
        r_flux[idx] = -nu * k2 * Fh[idx] - divm;
        d_flux[idx] = divm;
        // curl of u and of m
        const cplx cu[3] = {I * (x[1] * u[2] - x[2] * u[1]), I * (x[2] * u[0] - x[0] * u[2]),
                            I * (x[0] * u[1] - x[1] * u[0])};
        const cplx cm[3] = {I * (x[1] * m[2] - x[2] * m[1]), I * (x[2] * m[0] - x[0] * m[2]),
                            I * (x[0] * m[1] - x[1] * m[0])};
        const cplx ccu[3] = {I * (x[1] * cu[2] - x[2] * cu[1]), I * (x[2] * cu[0] - x[0] * cu[2]),
                             I * (x[0] * cu[1] - x[1] * cu[0])};
        for (int c = 0; c < 3; ++c) {
            r_vort[c][idx] = -p.mu * k2 * cu[c] - cm[c];
            d_vort[c][idx] = cm[c];
            r_mom[c][idx] = -p.mu * ccu[c] + nu * I * x[c] * Fh[idx] - m[c];
        }
    });
    auto vec_norm = [](const Spectrum* v) {
        return std::sqrt(std::max(0.0, spectral_inner(v[0], v[0]) + spectral_inner(v[1], v[1]) +
                                           spectral_inner(v[2], v[2])));
    };
    EllipticResiduals r;
    r.flux = relative(spectral_norm(r_flux), spectral_norm(d_flux));
    r.vorticity = relative(vec_norm(r_vort), vec_norm(d_vort));
    r.momentum = relative(vec_norm(r_mom), vec_norm(mh.c));
    return r;
}

double elliptic_identity_residual(const State& s, const PulseParams& p, const VectorField& udot) {
    const EllipticResiduals r = elliptic_residuals(s, p, udot);
    return std::max(r.flux, r.vorticity);
}

double elliptic_identity_residual(const State& s, const PulseParams& p) {
    return elliptic_identity_residual(s, p, material_derivative(s, p));
}

Energies energies(const State& s, const PulseParams& p, double c1) {
    if (!(c1 > 0.0)) throw InputError("c1 must be positive");
    s.validate();
    require_positive_density(s);
    const ScalarField a = pressure_excess(s.rho, p.gamma);
    const VecSpec uh(s.u);
    const Spectrum ah = forward(a);
    VectorField m = momentum_force(uh, ah, p);
    VectorField udot = m;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < s.rho.size(); ++i) udot[c][i] /= s.rho[i];
    const VecSpec udh(udot);

    const double ke = weighted_sq(s.rho, s.u);
    const double H = potential_energy(s.rho, p.gamma);
    const double curl2 = l2_squared(curl(s.u));
    const ScalarField dv = div(s.u);
    const double div2 = l2_squared(dv);
    ScalarField F(s.grid());
    for (std::size_t i = 0; i < F.size(); ++i) F[i] = dv[i] - a[i] / p.nu();
    const double F2 = l2_squared(F);
    const double acc = weighted_sq(s.rho, udot);
    const double a6 = lp_norm(a, 6.0);

    Energies e;
    e.E1 = p.gamma * ke + p.gamma * H + 0.5 * curl2 + 0.5 * F2;
    e.E2 = acc + p.gamma * div2 + 12.0 * a6 * a6;
    e.E = e.E1 + e.E2 / (4.0 * c1);
    e.D = 0.25 * p.gamma * grad_sq(uh) + 0.25 * acc + (grad_sq(udh) + a6 * a6) / (4.0 * c1);
    return e;
}

double basic_energy(const State& s, const PulseParams& p) {
    return 0.5 * weighted_sq(s.rho, s.u) + potential_energy(s.rho, p.gamma);
}

double basic_dissipation(const State& s, const PulseParams& p) {
    const VecSpec uh(s.u);
    const Grid& g = s.grid();
    const auto& w = Wavenumbers::get(g);
    double sum = 0.0;
    for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
        const double x[3] = {w.xy[i], w.xy[j], w.z[k]};
        const double k2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        double e = 0.0;
        cplx xu = 0.0;
        for (int c = 0; c < 3; ++c) {
            e += std::norm(uh.c[c][idx]);
            xu += x[c] * uh.c[c][idx];
        }
        sum += half_weight(g, k) * (p.mu * k2 * e + p.lambda * std::norm(xu));
    });
    return sum * g.volume();
}

double freq_split_low(const State& s, const PulseParams& p, double r) {
    if (!(r > 0.0)) throw InputError("frequency radius must be positive");
    const Grid& g = s.grid();
    ScalarField varrho(g);
    for (std::size_t i = 0; i < varrho.size(); ++i) varrho[i] = s.rho[i] - 1.0;
    const Spectrum vh = forward(varrho);
    const VecSpec mh(s.rho * s.u);
    const double cut = r / std::sqrt(std::sqrt(1.0 + s.t * s.t));
    const double cut2 = cut * cut;
    const double unit = g.xi(1);
    double sum = 0.0;
    for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
        const int kx = g.freq(i), ky = g.freq(j);
        const double xi2 = unit * unit * double(kx * kx + ky * ky + k * k);
        if (xi2 > cut2) return;
        const double e = p.gamma * std::norm(vh[idx]) + std::norm(mh.c[0][idx]) + std::norm(mh.c[1][idx]) +
                         std::norm(mh.c[2][idx]);
        sum += half_weight(g, k) * e;
    });
    return sum * g.volume();
}

bool InequalityMargin::violated() const {
    if (!hard) return false;
    return lhs > rhs * (1.0 + 1e-12);
}

std::vector<std::string> inequality_names() {
    return {"L3interp_p2_R2", "L3interp_p2_R4", "L3interp_p2_R2dinv",
            "L3interp_p3_R2", "L3interp_p3_R4", "L3interp_p3_R2dinv",
            "varrho_le_a",    "log_interp",     "elliptic_grad_p2",
            "elliptic_grad_p6"};
}

std::vector<InequalityMargin> inequality_monitor(const State& s, const PulseParams& p, double q) {
    s.validate();
    require_positive_density(s);
    const Grid& g = s.grid();
    const ScalarField a = pressure_excess(s.rho, p.gamma);
    const double H = potential_energy(s.rho, p.gamma);
    const double a6_6 = pow_sum(a, 6.0);
    const auto names = inequality_names();
    std::vector<InequalityMargin> out;

    const double Rs[3] = {2.0, 4.0, 2.0 * std::pow(p.delta, -p.alpha)};
    int n = 0;
    for (double pp : {2.0, 3.0}) {
        const double lhs = pow_sum(a, pp);
        for (double R : Rs) {
            InequalityMargin m;
            m.name = names[n++];
            m.lhs = lhs;
            m.rhs = 4.0 * p.gamma * std::pow(R, pp - 1.0) * H + std::pow(R, pp - 6.0) * a6_6;
            m.hard = true;
            out.push_back(m);
        }
    }

    InequalityMargin vr;
    vr.name = names[n++];
    vr.hard = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(s.rho[i] - 1.0) - std::abs(a[i]));
    vr.lhs = std::max(worst, 0.0);
    vr.rhs = 0.0;
    out.push_back(vr);

    // velocity gradient tensor and second derivatives
    const VecSpec uh(s.u);
    ScalarField gradmag(g), hessmag(g);
    VectorField G[3];
    for (int c = 0; c < 3; ++c) {
        G[c] = VectorField(deriv(uh.c[c], 0), deriv(uh.c[c], 1), deriv(uh.c[c], 2));
        for (std::size_t i = 0; i < g.size(); ++i)
            gradmag[i] += G[c][0][i] * G[c][0][i] + G[c][1][i] * G[c][1][i] + G[c][2][i] * G[c][2][i];
        for (int d = 0; d < 3; ++d)
            for (int e = d; e < 3; ++e) {
                const ScalarField h = deriv2(uh.c[c], d, e);
                const double mult = d == e ? 1.0 : 2.0;
                for (std::size_t i = 0; i < g.size(); ++i) hessmag[i] += mult * h[i] * h[i];
            }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        gradmag[i] = std::sqrt(gradmag[i]);
        hessmag[i] = std::sqrt(hessmag[i]);
    }
    ScalarField dv(g);
    for (std::size_t i = 0; i < g.size(); ++i) dv[i] = G[0][0][i] + G[1][1][i] + G[2][2][i];
    VectorField w(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        w[0][i] = G[2][1][i] - G[1][2][i];
        w[1][i] = G[0][2][i] - G[2][0][i];
        w[2][i] = G[1][0][i] - G[0][1][i];
    }

    InequalityMargin li;
    li.name = names[n++];
    li.lhs = lp_norm(gradmag, kInf);
    const double hfrak = lp_norm(w, kInf) + lp_norm(dv, kInf);
    li.rhs = lp_norm(gradmag, 2.0);
    if (hfrak > 0.0)
        li.rhs += q / (q - 3.0) * hfrak * std::log2(2.0 + lp_norm(hessmag, q) / hfrak);
    out.push_back(li);

    ScalarField F(g);
    for (std::size_t i = 0; i < g.size(); ++i) F[i] = dv[i] - a[i] / p.nu();
    for (double pp : {2.0, 6.0}) {
        InequalityMargin e;
        e.name = names[n++];
        e.lhs = lp_norm(gradmag, pp);
        e.rhs = lp_norm(w, pp) + lp_norm(F, pp) + lp_norm(a, pp);
        out.push_back(e);
    }
    return out;
}

std::vector<double> grad_a_evolution_residual(const std::vector<State>& series, const PulseParams& p,
                                              double norm_p) {
    if (series.size() < 3) throw InputError("grad a residual needs at least three snapshots");
    const Grid& g = series.front().grid();
    const double gam = p.gamma;
    auto grad_a = [&](const State& s) { return grad(pressure_excess(s.rho, gam)); };

    std::vector<double> out;
    VectorField prev = grad_a(series[0]);
    VectorField cur = grad_a(series[1]);
    for (std::size_t n = 1; n + 1 < series.size(); ++n) {
        const State& s = series[n];
        require_same_grid(s.grid(), g);
        const VectorField next = grad_a(series[n + 1]);
        const double h1 = s.t - series[n - 1].t, h2 = series[n + 1].t - s.t;
        if (!(h1 > 0.0 && h2 > 0.0)) throw InputError("snapshot times must increase strictly");
        const double cm = -h2 / (h1 * (h1 + h2)), c0 = (h2 - h1) / (h1 * h2), cp = h1 / (h2 * (h1 + h2));

        const ScalarField a = pressure_excess(s.rho, gam);
        const Spectrum ah = forward(a);
        const VecSpec uh(s.u);
        ScalarField Gu[3][3];  // Gu[c][d] = d_d u_c
        for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d) Gu[c][d] = deriv(uh.c[c], d);
        ScalarField Ha[3][3];
        for (int d = 0; d < 3; ++d)
            for (int e = d; e < 3; ++e) {
                Ha[d][e] = deriv2(ah, d, e);
                if (e != d) Ha[e][d] = Ha[d][e];
            }
        ScalarField dv(g);
        for (std::size_t i = 0; i < g.size(); ++i) dv[i] = Gu[0][0][i] + Gu[1][1][i] + Gu[2][2][i];
        const Spectrum dvh = forward(dv);
        ScalarField F(g);
        for (std::size_t i = 0; i < g.size(); ++i) F[i] = dv[i] - a[i];
        const Spectrum Fh = forward(F);

        VectorField res(g);
        for (int c = 0; c < 3; ++c) {
            const ScalarField gdiv = deriv(dvh, c);
            const ScalarField gF = deriv(Fh, c);
            for (std::size_t i = 0; i < g.size(); ++i) {
                double r = cm * prev[c][i] + c0 * cur[c][i] + cp * next[c][i];
                for (int d = 0; d < 3; ++d) r += s.u[d][i] * Ha[d][c][i];
                r += gam * cur[c][i];
                r += gam * gF[i] + gam * cur[c][i] * dv[i] + gam * a[i] * gdiv[i];
                for (int d = 0; d < 3; ++d) r += Gu[d][c][i] * cur[d][i];
                res[c][i] = r;
            }
        }
        out.push_back(lp_norm(res, norm_p));
        prev = std::move(cur);
        cur = next;
    }
    return out;
}

std::vector<std::string> diagnostics_columns() {
    std::vector<std::string> cols = {
        "t",         "mass",        "H_rho",     "E1",          "E2",          "E",
        "D",         "L2_sq_rho_u", "Linf_a",    "L1_a",        "L2_a",        "L6_a",
        "L3_a",      "L2_F",        "Linf_F",    "L2_curl_u",   "L2_div_u",    "L2_grad_u",
        "L2_rho_udot", "L2_grad_udot", "min_rho", "max_rho",    "Lq_grad_a",   "besov_u_B12_21",
        "besov_rho_B34_41", "freq_split_low", "elliptic_residual", "energy_balance_residual"};
    for (const auto& n : inequality_names()) {
        cols.push_back("ineq_" + n + "_lhs");
        cols.push_back("ineq_" + n + "_rhs");
    }
    return cols;
}

std::vector<double> record_values(const DiagnosticsRecord& r) {
    std::vector<double> v = {r.t,
                             r.mass,
                             r.H_rho,
                             r.E1,
                             r.E2,
                             r.E,
                             r.D,
                             r.L2_sq_rho_u,
                             r.Linf_a,
                             r.L1_a,
                             r.L2_a,
                             r.L6_a,
                             r.L3_a,
                             r.L2_F,
                             r.Linf_F,
                             r.L2_curl_u,
                             r.L2_div_u,
                             r.L2_grad_u,
                             r.L2_rho_udot,
                             r.L2_grad_udot,
                             r.min_rho,
                             r.max_rho,
                             r.Lq_grad_a,
                             r.besov_u_B12_21,
                             r.besov_rho_B34_41,
                             r.freq_split_low,
                             r.elliptic_residual,
                             r.energy_balance_residual};
    const auto names = inequality_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i < r.ineq_margins.size()) {
            v.push_back(r.ineq_margins[i].lhs);
            v.push_back(r.ineq_margins[i].rhs);
        } else {
            v.push_back(std::numeric_limits<double>::quiet_NaN());
            v.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    return v;
}

DiagnosticsRecord compute_record(const State& s, const PulseParams& p, const DiagnosticsOptions& opt) {
    s.validate();
    require_positive_density(s);
    const Grid& g = s.grid();
    DiagnosticsRecord r;
    r.t = s.t;
    r.mass = s.rho.integral();
    r.min_rho = s.rho.min();
    r.max_rho = s.rho.max();

    const ScalarField a = pressure_excess(s.rho, p.gamma);
    const Spectrum ah = forward(a);
    const VecSpec uh(s.u);
    const VectorField m = momentum_force(uh, ah, p);
    VectorField udot = m;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) udot[c][i] /= s.rho[i];
    const VecSpec udh(udot);

    const ScalarField dv = div(s.u);
    ScalarField F(g);
    for (std::size_t i = 0; i < g.size(); ++i) F[i] = dv[i] - a[i] / p.nu();

    r.H_rho = potential_energy(s.rho, p.gamma);
    r.L2_sq_rho_u = weighted_sq(s.rho, s.u);
    r.Linf_a = lp_norm(a, kInf);
    r.L1_a = lp_norm(a, 1.0);
    r.L2_a = lp_norm(a, 2.0);
    r.L3_a = lp_norm(a, 3.0);
    r.L6_a = lp_norm(a, 6.0);
    r.L2_F = lp_norm(F, 2.0);
    r.Linf_F = lp_norm(F, kInf);
    const double curl2 = l2_squared(curl(s.u));
    r.L2_curl_u = std::sqrt(curl2);
    r.L2_div_u = lp_norm(dv, 2.0);
    const double gu2 = grad_sq(uh);
    r.L2_grad_u = std::sqrt(gu2);
    const double acc = weighted_sq(s.rho, udot);
    r.L2_rho_udot = std::sqrt(acc);
    const double gud2 = grad_sq(udh);
    r.L2_grad_udot = std::sqrt(gud2);
    r.Lq_grad_a = lp_norm(VectorField(deriv(ah, 0), deriv(ah, 1), deriv(ah, 2)), opt.q);

    r.E1 = p.gamma * r.L2_sq_rho_u + p.gamma * r.H_rho + 0.5 * curl2 + 0.5 * r.L2_F * r.L2_F;
    r.E2 = acc + p.gamma * r.L2_div_u * r.L2_div_u + 12.0 * r.L6_a * r.L6_a;
    r.E = r.E1 + r.E2 / (4.0 * opt.c1);
    r.D = 0.25 * p.gamma * gu2 + 0.25 * acc + (gud2 + r.L6_a * r.L6_a) / (4.0 * opt.c1);

    if (opt.besov_every > 0) {
        const DyadicBank bank = DyadicBank::make(g);
        r.besov_u_B12_21 = besov_norm(s.u, 0.5, 2.0, 1.0, bank);
        ScalarField varrho(g);
        for (std::size_t i = 0; i < g.size(); ++i) varrho[i] = s.rho[i] - 1.0;
        r.besov_rho_B34_41 = besov_norm(varrho, 0.75, 4.0, 1.0, bank);
    } else {
        r.besov_u_B12_21 = std::numeric_limits<double>::quiet_NaN();
        r.besov_rho_B34_41 = std::numeric_limits<double>::quiet_NaN();
    }
    r.freq_split_low = freq_split_low(s, p, opt.r);
    r.elliptic_residual = elliptic_identity_residual(s, p, udot);
    r.energy_balance_residual = std::numeric_limits<double>::quiet_NaN();
    r.ineq_margins = inequality_monitor(s, p, opt.q);
    return r;
}

} // namespace pcns
