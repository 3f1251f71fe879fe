#pragma once

#include <vector>

#include "pcns/solver.hpp"

namespace pcns {

/// Smooth periodic solution built from separable waves
///   A cos(omega t + psi) prod_d cos(2 pi k_d x_d / L + phi_d),
/// with rho = 1 + sum of waves and each velocity component a sum of waves.
/// forcing() returns the sources that make it an exact solution of the forced
/// system, from closed-form derivatives.
class Manufactured {
public:
    struct Wave {
        double amp, omega, psi;
        int k[3];
        double phase[3];
    };

    /// Default waves: wavenumbers up to 3, rho within [0.6, 1.4], |u| < 1.
    explicit Manufactured(const PulseParams& p);
    Manufactured(const PulseParams& p, std::vector<Wave> rho, std::vector<Wave> u[3]);

    State exact(const Grid& g, double t) const;
    void forcing(double t, ScalarField& s_rho, VectorField& s_u) const;
    Forcing as_forcing() const;

private:
    PulseParams p_;
    std::vector<Wave> rho_;
    std::vector<Wave> u_[3];
};

} // namespace pcns
