#include "pcns/potential.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "pcns/errors.hpp"

namespace pcns {

namespace {

/// Sum_{m>=2} c_m x^m with c_m = gamma (gamma-2)(gamma-3)...(gamma-m+1) / m!,
/// valid for every gamma >= 1 including the logarithmic case.
double h_series(double x, double gamma) {
    double c = gamma / 2.0;  // m = 2
    double xm = x * x;
    double s = c * xm;
    for (int m = 3; m < 40; ++m) {
        c *= (gamma - m + 1) / m;
        xm *= x;
        const double term = c * xm;
        s += term;
        if (std::abs(term) <= 1e-18 * std::abs(s)) break;
    }
    return s;
}

} // namespace

double pressure_excess(double rho, double gamma) {
    if (gamma == 1.0) return rho - 1.0;
    return std::expm1(gamma * std::log1p(rho - 1.0));
}

ScalarField pressure_excess(const ScalarField& rho, double gamma) {
    ScalarField a(rho.grid);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = pressure_excess(rho[i], gamma);
    return a;
}

double h_density(double rho, double gamma) {
    const double x = rho - 1.0;
    if (std::abs(x) < 1e-3) return h_series(x, gamma);
    if (gamma == 1.0) return rho * std::log1p(x) - x;
    return (pressure_excess(rho, gamma) - gamma * x) / (gamma - 1.0);
}

double h_density_quadrature(double rho, double gamma) {
    using Rule = boost::math::quadrature::gauss<double, 32>;
    if (!(rho > 0.0)) throw InputError("h needs rho > 0");
    const double x = rho - 1.0;
    if (x == 0.0) return 0.0;
    // with w = theta rho + 1 - theta = e^s the remainder integral becomes
    // int_0^{log rho} (rho - e^s) e^{(gamma-1) s} ds / x^2, smooth in s for all rho
    const double top = std::log1p(x);
    auto integrand = [&](double s) { return (x - std::expm1(s)) * std::exp((gamma - 1.0) * s); };
    return gamma * Rule::integrate(integrand, 0.0, top);
}

double potential_energy(const ScalarField& rho, double gamma) {
    double s = 0.0;
    for (double r : rho.values) {
        if (!(r > 0.0)) throw InputError("potential energy needs rho > 0");
        s += h_density(r, gamma);
    }
    return s * rho.grid.cell_volume();
}

} // namespace pcns
