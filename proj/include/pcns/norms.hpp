#pragma once

#include <limits>

#include "pcns/field.hpp"

namespace pcns {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Grid L^p norm (sum |f|^p dx^3)^{1/p}; p = kInf gives max |f|.
/// Throws InputError for p < 1.
double lp_norm(const ScalarField& f, double p);
/// Same, with the pointwise Euclidean magnitude of v.
double lp_norm(const VectorField& v, double p);
/// Sum of f^2 dx^3.
double l2_squared(const ScalarField& f);
double l2_squared(const VectorField& v);

} // namespace pcns
