#pragma once

#include "pcns/field.hpp"

namespace pcns {

/// Littlewood-Paley bank built by telescoping a smooth cutoff.
///
/// chi(tau) = 1 for tau <= lo, 0 for tau >= hi, and in between
/// 1 - S((tau - c)/w) where S is the normalized primitive of exp(-1/(1-x^2))
/// on [-1, 1], c = (lo+hi)/2 and w = (hi-lo)/2. The block profile is
/// phi(tau) = chi(tau/2) - chi(tau), so sum_j phi(2^-j tau) telescopes to 1.
/// The default transition [3/4, 4/3] gives supp phi = [3/4, 8/3].
struct DyadicBank {
    Grid grid;
    double lo = 0.75;
    double hi = 4.0 / 3.0;
    int j_min = 0;  ///< lowest homogeneous block touching a nonzero grid mode
    int j_max = 0;  ///< highest block touching a grid mode (corner included)

    /// Requires 3/4 <= lo < hi <= 4/3 so the supports stay inside the canonical ones.
    static DyadicBank make(const Grid& g, double lo = 0.75, double hi = 4.0 / 3.0);

    double chi(double tau) const;
    double phi(double tau) const;
    /// First block of the inhomogeneous decomposition chi + sum_{j>=0} phi_j.
    int j_first() const { return j_min > 0 ? j_min : 0; }
    /// chi(tau) + sum_{j=j_first}^{j_max} phi(2^-j tau).
    double partition_sum(double tau) const;
};

/// Homogeneous block with multiplier phi(2^-j |xi|). Throws InputError if j is
/// outside [j_min, j_max].
ScalarField dyadic_project(const ScalarField& f, int j, const DyadicBank& bank);
/// Low-frequency block with multiplier chi(|xi|).
ScalarField low_block(const ScalarField& f, const DyadicBank& bank);

/// l^r over j in [j_min, j_max] of 2^{js} ||block_j f||_{L^p}. r may be kInf.
double besov_norm(const ScalarField& f, double s, double p, double r, const DyadicBank& bank);
double besov_norm(const VectorField& v, double s, double p, double r, const DyadicBank& bank);

enum class KernelSymbol {
    projector,  ///< (xi (x) xi / |xi|^2) phi(|xi|), matrix operator norm pointwise
    identity,   ///< phi(|xi|)
};

struct CbarResult {
    double value = 0.0;    ///< at quad_n
    double refined = 0.0;  ///< at 2 quad_n
    bool converged = false;  ///< relative change below 1%
};

/// L^1 norm over R^3 of the inverse Fourier transform of the symbol, by radial
/// reduction: the kernel is A(r) I + B(r) xhat xhat^T with A, B given by 1D
/// integrals of phi against spherical Bessel functions.
double kernel_l1_norm(const DyadicBank& bank, int quad_n, KernelSymbol symbol);
CbarResult cbar_star(const DyadicBank& bank, int quad_n = 32,
                     KernelSymbol symbol = KernelSymbol::projector);

} // namespace pcns
