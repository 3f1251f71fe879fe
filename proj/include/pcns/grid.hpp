#pragma once

#include <cstddef>

namespace pcns {

/// Uniform periodic grid on [0, L)^3 with n points per axis.
///
/// Real samples are stored row-major with z fastest. Spectra use the r2c
/// half layout: n x n x (n/2+1), again with the last index fastest.
struct Grid {
    int n = 0;
    double L = 1.0;

    Grid() = default;
    /// Throws InputError unless n >= 8 is a power of two and L > 0.
    Grid(int n, double L);

    double dx() const { return L / n; }
    double cell_volume() const { return dx() * dx() * dx(); }
    double volume() const { return L * L * L; }
    int nz_half() const { return n / 2 + 1; }
    std::size_t size() const { return std::size_t(n) * n * n; }
    std::size_t spectral_size() const { return std::size_t(n) * n * nz_half(); }

    /// Signed integer frequency of index i along x or y: [-n/2, n/2).
    int freq(int i) const { return i < n / 2 ? i : i - n; }
    /// Physical wavenumber 2*pi*k/L.
    double xi(int k) const;
    /// Nyquist physical frequency pi*n/L.
    double xi_nyquist() const;
    /// x coordinate of node i.
    double node(int i) const { return i * dx(); }

    std::size_t index(int i, int j, int k) const {
        return (std::size_t(i) * n + j) * n + k;
    }
    std::size_t spectral_index(int i, int j, int k) const {
        return (std::size_t(i) * n + j) * nz_half() + k;
    }

    bool operator==(const Grid& o) const { return n == o.n && L == o.L; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

} // namespace pcns
