#pragma once

#include <cstdint>
#include <vector>

#include "pcns/field.hpp"

namespace pcns {

/// Per-axis physical wavenumbers used by derivative multipliers.
///
/// The Nyquist index carries no odd derivative on an even grid, so its
/// resolved wavenumber is set to zero. Every operator (including the
/// Laplacian) uses these values, which keeps vector identities such as
/// div curl = 0 and Laplacian = grad div - curl curl exact in arithmetic.
struct Wavenumbers {
    std::vector<double> xy;   ///< length n, index -> xi for the x and y axes
    std::vector<double> z;    ///< length n/2+1, index -> xi for the z axis
    std::vector<int> kxy;     ///< signed integer frequency, x and y axes
    std::vector<int> kz;      ///< integer frequency, z axis

    static const Wavenumbers& get(const Grid& g);
};

/// Calls fn(idx, i, j, k) for every stored mode, where i, j, k are the storage
/// indices of the r2c half layout.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    const int n = g.n, nh = g.nz_half();
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < nh; ++k, ++idx) fn(idx, i, j, k);
}

/// Multiplicity of a half-layout mode in the full spectrum (1 on the kz=0 and
/// kz=n/2 planes, 2 elsewhere).
inline double half_weight(const Grid& g, int k) {
    return (k == 0 || k == g.n / 2) ? 1.0 : 2.0;
}

/// Parseval: integral of f*g over the box computed from spectra.
double spectral_inner(const Spectrum& a, const Spectrum& b);

/// Mask of the 2/3-rule spherical truncation: keeps |k| <= n/3 (integer
/// frequencies) and drops the Nyquist planes.
const std::vector<std::uint8_t>& dealias_mask(const Grid& g);
/// Zeroes the modes removed by the 2/3 rule.
void dealias(Spectrum& s);
ScalarField dealiased(const ScalarField& f);
/// Zeroes the Nyquist planes only.
void drop_nyquist(Spectrum& s);

ScalarField derivative(const ScalarField& f, int axis);
VectorField grad(const ScalarField& f);
ScalarField div(const VectorField& v);
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);
/// (-Laplacian)^{-1} on the mean-free part; the result has zero mean.
ScalarField inv_laplacian(const ScalarField& f);
/// grad (-Laplacian)^{-1} f.
VectorField grad_inv_laplacian(const ScalarField& f);

/// Real band-limited random field with integer frequencies |k| <= kmax and
/// unit RMS, reproducible from seed.
ScalarField random_band_limited(const Grid& g, double kmax, std::uint64_t seed);
VectorField random_band_limited_vector(const Grid& g, double kmax, std::uint64_t seed);

} // namespace pcns
