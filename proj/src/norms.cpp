#include "pcns/norms.hpp"

#include <cmath>
#include <string>

#include "pcns/errors.hpp"

namespace pcns {

namespace {

/// Scaled accumulation keeps large p from overflowing.
template <class Mag>
double lp_impl(const Grid& g, std::size_t count, double p, Mag mag) {
    if (!(p >= 1.0)) throw InputError("L^p norm needs p >= 1, got " + std::to_string(p));
    double m = 0.0;
    for (std::size_t i = 0; i < count; ++i) m = std::max(m, mag(i));
    if (std::isinf(p) || m == 0.0) return m;
    double s = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < count; ++i) {
            const double r = mag(i) / m;
            s += r * r;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) s += std::pow(mag(i) / m, p);
    }
    return m * std::pow(s * g.cell_volume(), 1.0 / p);
}

} // namespace

double lp_norm(const ScalarField& f, double p) {
    return lp_impl(f.grid, f.size(), p, [&](std::size_t i) { return std::abs(f[i]); });
}

double lp_norm(const VectorField& v, double p) {
    return lp_impl(v.grid(), v[0].size(), p, [&](std::size_t i) {
        return std::sqrt(v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i]);
    });
}

double l2_squared(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values) s += x * x;
    return s * f.grid.cell_volume();
}

double l2_squared(const VectorField& v) {
    return l2_squared(v[0]) + l2_squared(v[1]) + l2_squared(v[2]);
}

} // namespace pcns
