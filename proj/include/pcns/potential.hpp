#pragma once

#include "pcns/field.hpp"

namespace pcns {

/// Potential energy density h(rho) relative to the reference state rho = 1:
///   gamma > 1: ((rho^gamma - 1) - gamma (rho - 1)) / (gamma - 1)
///   gamma = 1: rho ln rho - (rho - 1)
/// Near rho = 1 the cancellation is avoided with the Taylor series in rho - 1.
double h_density(double rho, double gamma);

/// The same quantity from the integral form of Taylor's remainder,
/// gamma (rho-1)^2 int_0^1 (1-theta) [theta rho + 1 - theta]^{gamma-2} dtheta,
/// by 32-point Gauss-Legendre in s = log(theta rho + 1 - theta).
double h_density_quadrature(double rho, double gamma);

/// H(rho) = int h(rho) dx. Throws InputError if min rho <= 0.
double potential_energy(const ScalarField& rho, double gamma);

/// Pointwise a = rho^gamma - 1, computed as expm1(gamma log1p(rho - 1)).
double pressure_excess(double rho, double gamma);
ScalarField pressure_excess(const ScalarField& rho, double gamma);

} // namespace pcns
