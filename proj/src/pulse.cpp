#include "pcns/pulse.hpp"

#include <cmath>
#include <sstream>

#include "pcns/diagnostics.hpp"
#include "pcns/errors.hpp"
#include "pcns/norms.hpp"
#include "pcns/potential.hpp"
#include "pcns/spectral.hpp"

namespace pcns {

void State::validate() const {
    require_same_grid(rho.grid, u.grid());
    require_finite(rho, "density");
    require_finite(u, "velocity");
}

void PulseParams::validate() const {
    auto fail = [](const char* m) { throw InputError(m); };
    if (!(delta > 0.0 && delta <= 1.0)) fail("delta must lie in (0, 1]");
    if (!(alpha > 0.0)) fail("alpha must be positive");
    if (!(gamma >= 1.0)) fail("gamma must be >= 1");
    if (!(mu > 0.0)) fail("mu must be positive");
    if (!(lambda >= 0.0)) fail("lambda must be >= 0");
    if (!(epsilon > 0.0)) fail("epsilon must be positive");
    if (!(phi_amp >= 0.0) || !(v_amp >= 0.0)) fail("profile amplitudes must be >= 0");
}

namespace {

/// exp(-((x - x0)/delta)^2) summed over the periodic images along one axis.
std::vector<double> periodic_gaussian(const Grid& g, double delta) {
    std::vector<double> out(g.n);
    const double x0 = 0.5 * g.L;
    for (int i = 0; i < g.n; ++i) {
        double s = 0.0;
        for (int m = -2; m <= 2; ++m) {
            const double d = (g.node(i) - x0 - m * g.L) / delta;
            s += std::exp(-d * d);
        }
        out[i] = s;
    }
    return out;
}

ScalarField separable_gaussian(const Grid& g, double delta, double amp) {
    const auto gx = periodic_gaussian(g, delta);
    ScalarField f(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) f.at(i, j, k) = amp * gx[i] * gx[j] * gx[k];
    return f;
}

} // namespace

double pulse_boundary_tail(const PulseParams& params, const Grid& grid) {
    const double d = 0.5 * grid.L / params.delta;
    return params.phi_amp * std::exp(-d * d);
}

ScalarField pulse_profile(const PulseParams& params, const Grid& grid) {
    return separable_gaussian(grid, params.delta, params.phi_amp);
}

State build_pulse(const PulseParams& params, const Grid& grid) {
    params.validate();
    if (params.delta > grid.L / 8.0) {
        std::ostringstream msg;
        msg << "pulse too wide for the box: delta=" << params.delta << " > L/8, boundary tail "
            << pulse_boundary_tail(params, grid);
        throw InputError(msg.str());
    }
    const double amp = std::pow(params.delta, -params.alpha);
    const ScalarField phi = pulse_profile(params, grid);

    State s(grid);
    for (std::size_t i = 0; i < s.rho.size(); ++i)
        s.rho[i] = std::pow(1.0 + amp * phi[i], 1.0 / params.gamma);

    // delta^{1-alpha} (grad Lap^-1 phi)(x/delta) = -delta^{-alpha} grad (-Lap_x)^{-1} [phi(x/delta)]
    const VectorField pot = grad_inv_laplacian(phi);
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < s.rho.size(); ++i) s.u[d][i] = -amp * pot[d][i];

    if (params.v_amp != 0.0) {
        const double vscale = std::pow(params.delta, 1.0 - 0.5 * params.alpha);
        const ScalarField v = separable_gaussian(grid, params.delta, params.v_amp);
        for (std::size_t i = 0; i < s.rho.size(); ++i) s.u[0][i] += vscale * v[i];
    }
    return s;
}

InitDiagnostics derived_initials(const State& state, const PulseParams& params) {
    state.validate();
    if (!(state.rho.min() > 0.0)) throw InputError("initial density must be positive");
    const ScalarField a = pressure_excess(state.rho, params.gamma);
    const ScalarField F = effective_flux(state, params);
    const VectorField w = curl(state.u);
    const ScalarField dv = div(state.u);
    const VectorField udot = material_derivative(state, params);
    const VectorField ga = grad(a);

    InitDiagnostics d;
    d.a0_Linf = lp_norm(a, kInf);
    d.a0_L1 = lp_norm(a, 1.0);
    d.a0_L2 = lp_norm(a, 2.0);
    d.a0_L6 = lp_norm(a, 6.0);
    d.F0_L2 = lp_norm(F, 2.0);
    d.curl_u0_L2 = lp_norm(w, 2.0);
    d.div_u0_L2 = lp_norm(dv, 2.0);
    d.H_rho0 = potential_energy(state.rho, params.gamma);
    double ke2 = 0.0, acc2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = state.rho[i];
        for (int c = 0; c < 3; ++c) {
            ke2 += r * state.u[c][i] * state.u[c][i];
            acc2 += r * udot[c][i] * udot[c][i];
        }
    }
    const double dV = state.grid().cell_volume();
    ke2 *= dV;
    acc2 *= dV;
    d.rho_udot0_L2 = std::sqrt(acc2);
    d.grad_a0_L2 = lp_norm(ga, 2.0);
    d.grad_a0_L6 = lp_norm(ga, 6.0);

    const double lo = std::pow(params.delta, params.alpha - 3.0);
    const double hi = std::pow(params.delta, 2.0 * params.alpha - 1.0);
    d.E0_scaled = lo * (ke2 + d.curl_u0_L2 * d.curl_u0_L2 + d.F0_L2 * d.F0_L2 + d.H_rho0) +
                  hi * (acc2 + d.div_u0_L2 * d.div_u0_L2 + d.a0_L6 * d.a0_L6);
    return d;
}

} // namespace pcns
