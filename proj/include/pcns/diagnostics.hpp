#pragma once

#include <string>
#include <vector>

#include "pcns/dyadic.hpp"
#include "pcns/pulse.hpp"
#include "pcns/state.hpp"

namespace pcns {

/// F = div u - a / nu with a = rho^gamma - 1 and nu = mu + lambda.
ScalarField effective_flux(const State& s, const PulseParams& p);

/// udot = (mu Lap u + lambda grad div u - grad a) / rho.
/// Throws InputError if min rho <= 0.
VectorField material_derivative(const State& s, const PulseParams& p);

/// Relative L^2 residuals of the elliptic system
///   nu Lap F = div(rho udot),  mu Lap curl u = curl(rho udot),
///   -mu curl curl u + nu grad F = rho udot.
/// With mu = 1, lambda = 0 these are the unit-viscosity identities.
struct EllipticResiduals {
    double flux = 0.0;
    double vorticity = 0.0;
    double momentum = 0.0;
    double max() const;
};
EllipticResiduals elliptic_residuals(const State& s, const PulseParams& p, const VectorField& udot);
/// Max of the flux and vorticity residuals with udot from material_derivative.
double elliptic_identity_residual(const State& s, const PulseParams& p);
double elliptic_identity_residual(const State& s, const PulseParams& p, const VectorField& udot);

struct Energies {
    double E1 = 0, E2 = 0, E = 0, D = 0;
};
/// E1 = gamma||sqrt(rho)u||^2 + gamma H + ||curl u||^2/2 + ||F||^2/2,
/// E2 = ||sqrt(rho)udot||^2 + gamma||div u||^2 + 12||a||_6^2, E = E1 + E2/(4 c1),
/// D = (gamma/4)||grad u||^2 + ||sqrt(rho)udot||^2/4 + (||grad udot||^2 + ||a||_6^2)/(4 c1).
Energies energies(const State& s, const PulseParams& p, double c1);

/// (1/2) int rho |u|^2 + H(rho).
double basic_energy(const State& s, const PulseParams& p);
/// mu ||grad u||^2 + lambda ||div u||^2, by Parseval.
double basic_dissipation(const State& s, const PulseParams& p);

/// Sum over modes with |xi| <= r <t>^{-1/2} of gamma |varrho^|^2 + |(rho u)^|^2,
/// scaled so that r -> infinity gives gamma||rho-1||^2 + ||rho u||^2.
double freq_split_low(const State& s, const PulseParams& p, double r);

struct InequalityMargin {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool hard = false;  ///< explicit constants: lhs > rhs is an implementation bug
    double margin() const { return rhs - lhs; }
    bool violated() const;
};

/// Monitored inequalities, in a fixed order:
///   L3interp_p{2,3}_R{2,4,2dinv}  (hard) ||a||_p^p <= 4 gamma R^{p-1} H + R^{p-6} ||a||_6^6
///   varrho_le_a                   (hard) max(|rho-1| - |a|) <= 0
///   log_interp                    ratio only, ||grad u||_inf vs the log-interpolation right side with C = 1
///   elliptic_grad_p2, _p6         ratio only, ||grad u||_p vs ||curl u||_p + ||F||_p + ||a||_p
std::vector<InequalityMargin> inequality_monitor(const State& s, const PulseParams& p, double q = 10.0 / 3.0);
/// Names in the order inequality_monitor returns them.
std::vector<std::string> inequality_names();

/// L^p norm of the residual of
///   d_t grad a + u.grad(grad a) + gamma grad a
///     = -gamma grad F - gamma grad a div u - gamma a grad div u - (grad u)^T grad a
/// (F = div u - a) at each interior snapshot, with centred time differences.
/// Throws InputError for fewer than three snapshots.
std::vector<double> grad_a_evolution_residual(const std::vector<State>& series, const PulseParams& p,
                                              double norm_p);

struct DiagnosticsOptions {
    double c1 = 1.0;
    double q = 10.0 / 3.0;  ///< exponent for ||grad a||_{L^q}
    double r = 10.0;        ///< radius for freq_split_low
    int besov_every = 1;    ///< Besov norms (the costliest entries) on every k-th record of a run, 0 never
};

/// One time sample of every monitored functional.
struct DiagnosticsRecord {
    double t = 0, mass = 0, H_rho = 0, E1 = 0, E2 = 0, E = 0, D = 0;
    double L2_sq_rho_u = 0;
    double Linf_a = 0, L1_a = 0, L2_a = 0, L6_a = 0, L3_a = 0;
    double L2_F = 0, Linf_F = 0;
    double L2_curl_u = 0, L2_div_u = 0, L2_grad_u = 0;
    double L2_rho_udot = 0;  ///< ||sqrt(rho) udot||_{L^2}
    double L2_grad_udot = 0;
    double min_rho = 0, max_rho = 0;
    double Lq_grad_a = 0;
    double besov_u_B12_21 = 0;    ///< ||u|| in the homogeneous B^{1/2}_{2,1}, NaN when skipped
    double besov_rho_B34_41 = 0;  ///< ||rho - 1|| in the homogeneous B^{3/4}_{4,1}, NaN when skipped
    double freq_split_low = 0;
    double elliptic_residual = 0;
    double energy_balance_residual = 0;  ///< NaN unless filled in by a run
    std::vector<InequalityMargin> ineq_margins;
};

DiagnosticsRecord compute_record(const State& s, const PulseParams& p, const DiagnosticsOptions& opt);

/// Fixed column order of the diagnostics CSV.
std::vector<std::string> diagnostics_columns();
/// Values in column order.
std::vector<double> record_values(const DiagnosticsRecord& r);

} // namespace pcns
