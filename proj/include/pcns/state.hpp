#pragma once

#include "pcns/field.hpp"

namespace pcns {

/// Density and velocity at one time instant.
struct State {
    double t = 0.0;
    ScalarField rho;
    VectorField u;

    State() = default;
    explicit State(const Grid& g) : rho(g, 1.0), u(g) {}
    State(double t_, ScalarField r, VectorField v) : t(t_), rho(std::move(r)), u(std::move(v)) {}

    const Grid& grid() const { return rho.grid; }
    /// Throws InputError on grid mismatch or non-finite samples.
    void validate() const;
};

} // namespace pcns
