#pragma once

#include "pcns/grid.hpp"
#include "pcns/state.hpp"

namespace pcns {

/// Parameters of the short-pulse data family and of the fluid.
struct PulseParams {
    double delta = 0.125;
    double alpha = 0.5;
    double gamma = 1.0;
    double mu = 1.0;
    double lambda = 0.0;
    double epsilon = 0.1;
    double phi_amp = 1.0;  ///< amplitude of phi(y) = phi_amp exp(-|y|^2)
    double v_amp = 1.0;    ///< amplitude of v(y) = v_amp (exp(-|y|^2), 0, 0)

    /// Throws InputError unless 0 < delta <= 1, alpha > 0, gamma >= 1, mu > 0,
    /// lambda >= 0, epsilon > 0 and both amplitudes are >= 0.
    void validate() const;
    /// alpha <= 2 gamma / (1 + 2 gamma), the range covered by the global theory.
    bool paper_regime() const { return alpha <= 2.0 * gamma / (1.0 + 2.0 * gamma); }
    double nu() const { return mu + lambda; }
};

/// Norms of the initial data and the weighted initial functional.
struct InitDiagnostics {
    double a0_Linf = 0, a0_L1 = 0, a0_L2 = 0, a0_L6 = 0;
    double F0_L2 = 0, curl_u0_L2 = 0, div_u0_L2 = 0;
    double H_rho0 = 0;
    double rho_udot0_L2 = 0;  ///< ||sqrt(rho0) udot0||_{L^2}
    double E0_scaled = 0;
    double grad_a0_L2 = 0, grad_a0_L6 = 0;
};

/// Largest value of the primary pulse image on the box faces, the overlap
/// with neighbouring periodic images.
double pulse_boundary_tail(const PulseParams& params, const Grid& grid);

/// rho0 = (1 + delta^-alpha phi(x/delta))^{1/gamma},
/// u0 = delta^{1-alpha} (grad Lap^-1 phi)(x/delta) + delta^{1-alpha/2} v(x/delta),
/// with Gaussian profiles centred at the box centre and summed over periodic
/// images. The potential part is computed spectrally from the mean-free profile.
/// Throws InputError when delta > L/8, reporting the boundary tail.
State build_pulse(const PulseParams& params, const Grid& grid);

/// Sampled phi(x/delta) including periodic images.
ScalarField pulse_profile(const PulseParams& params, const Grid& grid);

/// Norms of a0, F0, curl u0, div u0, sqrt(rho0) udot0, H(rho0) and the
/// weighted initial functional. Throws InputError if min rho <= 0.
InitDiagnostics derived_initials(const State& state, const PulseParams& params);

} // namespace pcns
