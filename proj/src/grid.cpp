#include "pcns/grid.hpp"

#include <numbers>
#include <string>

#include "pcns/errors.hpp"

namespace pcns {

Grid::Grid(int n_, double L_) : n(n_), L(L_) {
    if (n < 8 || (n & (n - 1)) != 0)
        throw InputError("grid size must be a power of two >= 8, got " + std::to_string(n));
    if (!(L > 0.0))
        throw InputError("box length must be positive");
}

double Grid::xi(int k) const { return 2.0 * std::numbers::pi * k / L; }

double Grid::xi_nyquist() const { return std::numbers::pi * n / L; }

} // namespace pcns
