#include "pcns/dyadic.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "pcns/errors.hpp"
#include "pcns/fft.hpp"
#include "pcns/norms.hpp"
#include "pcns/spectral.hpp"

namespace pcns {

namespace {

double bump(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

double bump_primitive(double x) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) x = 1.0;
    return GK::integrate(bump, -1.0, x, 12, 1e-15);
}

/// Normalized smooth step: 0 at x <= -1, 1 at x >= 1.
double smooth_step(double x) {
    static const double total = bump_primitive(1.0);
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // Integrate from the nearer endpoint to keep the tails accurate.
    if (x > 0.0) return 1.0 - bump_primitive(-x) / total;
    return bump_primitive(x) / total;
}

/// Multiplier table indexed by the integer |k|^2 of a grid mode.
std::vector<double> radial_table(const Grid& g, const std::function<double(double)>& m) {
    const int kh = g.n / 2;
    const int kmax2 = 3 * kh * kh;
    std::vector<double> t(kmax2 + 1);
    const double unit = 2.0 * std::numbers::pi / g.L;
    for (int k2 = 0; k2 <= kmax2; ++k2) t[k2] = m(unit * std::sqrt(double(k2)));
    return t;
}

int mode_k2(const Grid& g, int i, int j, int k) {
    const int kx = g.freq(i), ky = g.freq(j);
    return kx * kx + ky * ky + k * k;
}

ScalarField apply_radial(const Spectrum& s, const std::vector<double>& table) {
    const Grid& g = s.grid;
    Spectrum out(g);
    for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
        out[idx] = s[idx] * table[mode_k2(g, i, j, k)];
    });
    return inverse(out);
}

std::vector<double> block_table(const DyadicBank& bank, int j) {
    return radial_table(bank.grid, [&](double xi) { return bank.phi(std::ldexp(xi, -j)); });
}

void check_block(const DyadicBank& bank, int j) {
    if (j < bank.j_min || j > bank.j_max)
        throw InputError("dyadic block " + std::to_string(j) + " outside resolvable range [" +
                         std::to_string(bank.j_min) + ", " + std::to_string(bank.j_max) + "]");
}

double lr_combine(const std::vector<double>& terms, double r) {
    if (std::isinf(r)) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    double s = 0.0;
    for (double t : terms) s += std::pow(t, r);
    return std::pow(s, 1.0 / r);
}

} // namespace

DyadicBank DyadicBank::make(const Grid& g, double lo, double hi) {
    if (!(lo >= 0.75 && hi <= 4.0 / 3.0 && lo < hi))
        throw InputError("cutoff transition must satisfy 3/4 <= lo < hi <= 4/3");
    DyadicBank b;
    b.grid = g;
    b.lo = lo;
    b.hi = hi;
    // Block j is nonzero on 2^j lo < |xi| < 2^{j+1} hi.
    const double xi_min = 2.0 * std::numbers::pi / g.L;
    const double xi_max = std::sqrt(3.0) * g.xi_nyquist();
    int j = -64;
    while (std::ldexp(hi, j + 1) <= xi_min) ++j;
    b.j_min = j;
    while (std::ldexp(lo, j + 1) < xi_max) ++j;
    b.j_max = j;
    return b;
}

double DyadicBank::chi(double tau) const {
    if (tau <= lo) return 1.0;
    if (tau >= hi) return 0.0;
    const double c = 0.5 * (lo + hi), w = 0.5 * (hi - lo);
    return 1.0 - smooth_step((tau - c) / w);
}

double DyadicBank::phi(double tau) const { return chi(0.5 * tau) - chi(tau); }

double DyadicBank::partition_sum(double tau) const {
    double s = chi(tau);
    for (int j = j_first(); j <= j_max; ++j) s += phi(std::ldexp(tau, -j));
    return s;
}

ScalarField dyadic_project(const ScalarField& f, int j, const DyadicBank& bank) {
    require_same_grid(f.grid, bank.grid);
    check_block(bank, j);
    require_finite(f, "dyadic_project operand");
    return apply_radial(forward(f), block_table(bank, j));
}

ScalarField low_block(const ScalarField& f, const DyadicBank& bank) {
    require_same_grid(f.grid, bank.grid);
    require_finite(f, "low_block operand");
    return apply_radial(forward(f), radial_table(bank.grid, [&](double xi) { return bank.chi(xi); }));
}

double besov_norm(const ScalarField& f, double s, double p, double r, const DyadicBank& bank) {
    if (!(p >= 1.0) || !(r >= 1.0)) throw InputError("Besov indices need p, r >= 1");
    require_same_grid(f.grid, bank.grid);
    require_finite(f, "besov_norm operand");
    const Spectrum fh = forward(f);
    std::vector<double> terms;
    for (int j = bank.j_min; j <= bank.j_max; ++j)
        terms.push_back(std::pow(2.0, j * s) *
                        lp_norm(apply_radial(fh, block_table(bank, j)), p));
    return lr_combine(terms, r);
}

double besov_norm(const VectorField& v, double s, double p, double r, const DyadicBank& bank) {
    if (!(p >= 1.0) || !(r >= 1.0)) throw InputError("Besov indices need p, r >= 1");
    require_same_grid(v.grid(), bank.grid);
    require_finite(v, "besov_norm operand");
    const Spectrum h0 = forward(v[0]), h1 = forward(v[1]), h2 = forward(v[2]);
    std::vector<double> terms;
    for (int j = bank.j_min; j <= bank.j_max; ++j) {
        const auto t = block_table(bank, j);
        const VectorField b(apply_radial(h0, t), apply_radial(h1, t), apply_radial(h2, t));
        terms.push_back(std::pow(2.0, j * s) * lp_norm(b, p));
    }
    return lr_combine(terms, r);
}

double kernel_l1_norm(const DyadicBank& bank, int quad_n, KernelSymbol symbol) {
    if (quad_n < 1) throw InputError("quad_n must be positive");
    using GL = boost::math::quadrature::gauss<double, 8>;
    const double pi = std::numbers::pi;
    const double rho_lo = bank.lo, rho_hi = 2.0 * bank.hi;
    // The kernel decays on the scale 1/w of the cutoff transition.
    const double w = 0.5 * (bank.hi - bank.lo);
    const double r_max = 60.0 / w;
    const double osc = r_max / (2.0 * pi);
    const int rho_panels = int(std::ceil(osc * (rho_hi - rho_lo) * quad_n / 16.0));
    const int r_panels = int(std::ceil(osc * rho_hi * quad_n / 16.0));

    auto nodes = [](double a, double b, int panels, std::vector<double>& x, std::vector<double>& wt) {
        const auto& ab = GL::abscissa();
        const auto& we = GL::weights();
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double c = a + (p + 0.5) * h;
            for (std::size_t q = 0; q < ab.size(); ++q) {
                // the rule stores nonnegative abscissae; mirror the nonzero ones
                x.push_back(c + 0.5 * h * ab[q]);
                wt.push_back(0.5 * h * we[q]);
                if (ab[q] != 0.0) {
                    x.push_back(c - 0.5 * h * ab[q]);
                    wt.push_back(0.5 * h * we[q]);
                }
            }
        }
    };

    std::vector<double> rho, wr;
    nodes(rho_lo, rho_hi, rho_panels, rho, wr);
    std::vector<double> g(rho.size());
    for (std::size_t q = 0; q < rho.size(); ++q) g[q] = wr[q] * bank.phi(rho[q]) * rho[q] * rho[q];

    std::vector<double> r, wrr;
    nodes(0.0, r_max, r_panels, r, wrr);

    double total = 0.0;
    for (std::size_t m = 0; m < r.size(); ++m) {
        double A = 0.0, AB = 0.0, P = 0.0;
        for (std::size_t q = 0; q < rho.size(); ++q) {
            const double z = rho[q] * r[m];
            double j0, j1z;
            if (z < 1e-2) {
                const double z2 = z * z;
                j0 = 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
                j1z = 1.0 / 3.0 - z2 / 30.0 + z2 * z2 / 840.0;
            } else {
                const double s = std::sin(z), c = std::cos(z);
                j0 = s / z;
                j1z = (s - z * c) / (z * z * z);
            }
            P += g[q] * j0;
            A += g[q] * j1z;
            AB += g[q] * (j0 - 2.0 * j1z);
        }
        const double norm = symbol == KernelSymbol::identity ? std::abs(P)
                                                             : std::max(std::abs(A), std::abs(AB));
        total += wrr[m] * r[m] * r[m] * norm;
    }
    return 4.0 * pi * total / (2.0 * pi * pi);
}

CbarResult cbar_star(const DyadicBank& bank, int quad_n, KernelSymbol symbol) {
    CbarResult res;
    res.value = kernel_l1_norm(bank, quad_n, symbol);
    res.refined = kernel_l1_norm(bank, 2 * quad_n, symbol);
    res.converged = std::abs(res.refined - res.value) <= 0.01 * std::abs(res.refined);
    return res;
}

} // namespace pcns
