#include "pcns/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>

#include "pcns/fft.hpp"

namespace pcns {

namespace {

template <class T, class Make>
const T& cached(const Grid& g, Make make) {
    static std::mutex m;
    static std::map<std::pair<int, double>, std::unique_ptr<T>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto key = std::make_pair(g.n, g.L);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<T>(make(g))).first;
    return *it->second;
}

const cplx I(0.0, 1.0);

/// Applies mult(i, j, k) -> complex to the spectrum of f.
template <class Mult>
ScalarField apply_multiplier(const ScalarField& f, Mult mult) {
    require_finite(f, "spectral operand");
    Spectrum s = forward(f);
    for_each_mode(f.grid, [&](std::size_t idx, int i, int j, int k) { s[idx] *= mult(i, j, k); });
    return inverse(s);
}

} // namespace

const Wavenumbers& Wavenumbers::get(const Grid& g) {
    return cached<Wavenumbers>(g, [](const Grid& grid) {
        Wavenumbers w;
        const int n = grid.n;
        w.xy.resize(n);
        w.kxy.resize(n);
        for (int i = 0; i < n; ++i) {
            w.kxy[i] = grid.freq(i);
            w.xy[i] = (i == n / 2) ? 0.0 : grid.xi(w.kxy[i]);
        }
        w.z.resize(grid.nz_half());
        w.kz.resize(grid.nz_half());
        for (int k = 0; k < grid.nz_half(); ++k) {
            w.kz[k] = k;
            w.z[k] = (k == n / 2) ? 0.0 : grid.xi(k);
        }
        return w;
    });
}

double spectral_inner(const Spectrum& a, const Spectrum& b) {
    require_same_grid(a.grid, b.grid);
    const Grid& g = a.grid;
    double s = 0.0;
    for_each_mode(g, [&](std::size_t idx, int, int, int k) {
        s += half_weight(g, k) * (a[idx].real() * b[idx].real() + a[idx].imag() * b[idx].imag());
    });
    return s * g.volume();
}

const std::vector<std::uint8_t>& dealias_mask(const Grid& g) {
    return cached<std::vector<std::uint8_t>>(g, [](const Grid& grid) {
        std::vector<std::uint8_t> m(grid.spectral_size());
        const int n = grid.n;
        const double kmax = n / 3.0;
        const double kmax2 = kmax * kmax;
        for_each_mode(grid, [&](std::size_t idx, int i, int j, int k) {
            const int kx = grid.freq(i), ky = grid.freq(j);
            const bool nyq = (i == n / 2) || (j == n / 2) || (k == n / 2);
            m[idx] = (!nyq && double(kx * kx + ky * ky + k * k) <= kmax2) ? 1 : 0;
        });
        return m;
    });
}

void dealias(Spectrum& s) {
    const auto& m = dealias_mask(s.grid);
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!m[i]) s[i] = 0.0;
}

ScalarField dealiased(const ScalarField& f) {
    Spectrum s = forward(f);
    dealias(s);
    return inverse(s);
}

void drop_nyquist(Spectrum& s) {
    const int n = s.grid.n;
    for_each_mode(s.grid, [&](std::size_t idx, int i, int j, int k) {
        if (i == n / 2 || j == n / 2 || k == n / 2) s[idx] = 0.0;
    });
}

ScalarField derivative(const ScalarField& f, int axis) {
    const auto& w = Wavenumbers::get(f.grid);
    return apply_multiplier(f, [&](int i, int j, int k) {
        const double xi = axis == 0 ? w.xy[i] : axis == 1 ? w.xy[j] : w.z[k];
        return I * xi;
    });
}

VectorField grad(const ScalarField& f) {
    require_finite(f, "grad operand");
    const auto& w = Wavenumbers::get(f.grid);
    const Spectrum s = forward(f);
    VectorField out(f.grid);
    Spectrum d(f.grid);
    for (int a = 0; a < 3; ++a) {
        for_each_mode(f.grid, [&](std::size_t idx, int i, int j, int k) {
            const double xi = a == 0 ? w.xy[i] : a == 1 ? w.xy[j] : w.z[k];
            d[idx] = I * xi * s[idx];
        });
        out[a] = inverse(d);
    }
    return out;
}

ScalarField div(const VectorField& v) {
    require_finite(v, "div operand");
    const Grid& g = v.grid();
    const auto& w = Wavenumbers::get(g);
    const Spectrum sx = forward(v[0]), sy = forward(v[1]), sz = forward(v[2]);
    Spectrum d(g);
    for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
        d[idx] = I * (w.xy[i] * sx[idx] + w.xy[j] * sy[idx] + w.z[k] * sz[idx]);
    });
    return inverse(d);
}

VectorField curl(const VectorField& v) {
    require_finite(v, "curl operand");
    const Grid& g = v.grid();
    const auto& w = Wavenumbers::get(g);
    const Spectrum sx = forward(v[0]), sy = forward(v[1]), sz = forward(v[2]);
    VectorField out(g);
    Spectrum d(g);
    for (int a = 0; a < 3; ++a) {
        for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
            const double x = w.xy[i], y = w.xy[j], z = w.z[k];
            cplx c;
            if (a == 0) c = y * sz[idx] - z * sy[idx];
            else if (a == 1) c = z * sx[idx] - x * sz[idx];
            else c = x * sy[idx] - y * sx[idx];
            d[idx] = I * c;
        });
        out[a] = inverse(d);
    }
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    const auto& w = Wavenumbers::get(f.grid);
    return apply_multiplier(f, [&](int i, int j, int k) {
        return cplx(-(w.xy[i] * w.xy[i] + w.xy[j] * w.xy[j] + w.z[k] * w.z[k]), 0.0);
    });
}

VectorField laplacian(const VectorField& v) {
    return VectorField(laplacian(v[0]), laplacian(v[1]), laplacian(v[2]));
}

ScalarField inv_laplacian(const ScalarField& f) {
    const auto& w = Wavenumbers::get(f.grid);
    return apply_multiplier(f, [&](int i, int j, int k) {
        const double k2 = w.xy[i] * w.xy[i] + w.xy[j] * w.xy[j] + w.z[k] * w.z[k];
        return cplx(k2 > 0.0 ? 1.0 / k2 : 0.0, 0.0);
    });
}

VectorField grad_inv_laplacian(const ScalarField& f) {
    require_finite(f, "grad_inv_laplacian operand");
    const auto& w = Wavenumbers::get(f.grid);
    const Spectrum s = forward(f);
    VectorField out(f.grid);
    Spectrum d(f.grid);
    for (int a = 0; a < 3; ++a) {
        for_each_mode(f.grid, [&](std::size_t idx, int i, int j, int k) {
            const double k2 = w.xy[i] * w.xy[i] + w.xy[j] * w.xy[j] + w.z[k] * w.z[k];
            const double xi = a == 0 ? w.xy[i] : a == 1 ? w.xy[j] : w.z[k];
            d[idx] = k2 > 0.0 ? I * (xi / k2) * s[idx] : cplx(0.0, 0.0);
        });
        out[a] = inverse(d);
    }
    return out;
}

ScalarField random_band_limited(const Grid& g, double kmax, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ScalarField noise(g);
    for (auto& v : noise.values) v = normal(rng);
    Spectrum s = forward(noise);
    const double k2max = kmax * kmax;
    for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
        const int kx = g.freq(i), ky = g.freq(j);
        const bool nyq = (i == g.n / 2) || (j == g.n / 2) || (k == g.n / 2);
        if (nyq || double(kx * kx + ky * ky + k * k) > k2max) s[idx] = 0.0;
    });
    s[0] = 0.0;
    const double rms = std::sqrt(spectral_inner(s, s) / g.volume());
    if (rms > 0.0)
        for (auto& c : s.coeffs) c /= rms;
    return inverse(s);
}

VectorField random_band_limited_vector(const Grid& g, double kmax, std::uint64_t seed) {
    return VectorField(random_band_limited(g, kmax, seed * 3 + 0),
                       random_band_limited(g, kmax, seed * 3 + 1),
                       random_band_limited(g, kmax, seed * 3 + 2));
}

} // namespace pcns
