#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <new>
#include <vector>

#include "pcns/grid.hpp"

namespace pcns {

/// Allocator backed by fftw_malloc so buffers satisfy FFTW's SIMD alignment.
template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) {}
    T* allocate(std::size_t n);
    void deallocate(T* p, std::size_t) noexcept;
    template <class U>
    bool operator==(const FftwAllocator<U>&) const { return true; }
    template <class U>
    bool operator!=(const FftwAllocator<U>&) const { return false; }
};

void* fftw_alloc_bytes(std::size_t bytes);
void fftw_free_bytes(void* p) noexcept;

template <class T>
T* FftwAllocator<T>::allocate(std::size_t n) {
    void* p = fftw_alloc_bytes(n * sizeof(T));
    if (!p && n) throw std::bad_alloc();
    return static_cast<T*>(p);
}

template <class T>
void FftwAllocator<T>::deallocate(T* p, std::size_t) noexcept {
    fftw_free_bytes(p);
}

using cplx = std::complex<double>;
using RealBuffer = std::vector<double, FftwAllocator<double>>;
using ComplexBuffer = std::vector<cplx, FftwAllocator<cplx>>;

/// Real samples at the grid nodes.
struct ScalarField {
    Grid grid;
    RealBuffer values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

    /// Samples f(x, y, z) at every node.
    static ScalarField sample(const Grid& g, const std::function<double(double, double, double)>& f);

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    double& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
    double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
    std::size_t size() const { return values.size(); }

    double min() const;
    double max() const;
    /// Grid quadrature of the field, sum(f) dx^3.
    double integral() const;
    double mean() const;
};

/// Three scalar components on a shared grid.
struct VectorField {
    std::array<ScalarField, 3> c;

    VectorField() = default;
    explicit VectorField(const Grid& g) : c{ScalarField(g), ScalarField(g), ScalarField(g)} {}
    VectorField(ScalarField x, ScalarField y, ScalarField z);

    const Grid& grid() const { return c[0].grid; }
    ScalarField& operator[](int d) { return c[d]; }
    const ScalarField& operator[](int d) const { return c[d]; }
};

/// Fourier coefficients in the r2c half layout, normalized so that
/// f(x) = sum_k fhat_k exp(i xi.x).
struct Spectrum {
    Grid grid;
    ComplexBuffer coeffs;

    Spectrum() = default;
    explicit Spectrum(const Grid& g) : grid(g), coeffs(g.spectral_size(), cplx(0.0, 0.0)) {}

    cplx& operator[](std::size_t i) { return coeffs[i]; }
    const cplx& operator[](std::size_t i) const { return coeffs[i]; }
};

/// Throws InputError naming `what` if any sample is NaN or infinite.
void require_finite(const ScalarField& f, const char* what);
void require_finite(const VectorField& v, const char* what);
/// Throws InputError if the grids differ.
void require_same_grid(const Grid& a, const Grid& b);

// Pointwise helpers used by several modules.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);
/// Pointwise product of a scalar and a vector field.
VectorField operator*(const ScalarField& s, const VectorField& v);
/// Pointwise magnitude |v|.
ScalarField magnitude(const VectorField& v);
/// Pointwise dot product.
ScalarField dot(const VectorField& a, const VectorField& b);

} // namespace pcns
