#include "pcns/field.hpp"

#include <algorithm>
#include <cmath>

#include "pcns/errors.hpp"

namespace pcns {

ScalarField ScalarField::sample(const Grid& g, const std::function<double(double, double, double)>& f) {
    ScalarField out(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k)
                out.at(i, j, k) = f(g.node(i), g.node(j), g.node(k));
    return out;
}

double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }

double ScalarField::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.cell_volume();
}

double ScalarField::mean() const { return integral() / grid.volume(); }

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z)
    : c{std::move(x), std::move(y), std::move(z)} {
    require_same_grid(c[0].grid, c[1].grid);
    require_same_grid(c[0].grid, c[2].grid);
}

void require_finite(const ScalarField& f, const char* what) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw InputError(std::string("non-finite sample in ") + what);
}

void require_finite(const VectorField& v, const char* what) {
    for (int d = 0; d < 3; ++d) require_finite(v[d], what);
}

void require_same_grid(const Grid& a, const Grid& b) {
    if (a != b) throw InputError("fields live on different grids");
}

namespace {
template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
    require_same_grid(a.grid, b.grid);
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
    return out;
}
} // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x - y; });
}
ScalarField operator*(double s, const ScalarField& a) {
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}
VectorField operator+(const VectorField& a, const VectorField& b) {
    return VectorField(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
}
VectorField operator-(const VectorField& a, const VectorField& b) {
    return VectorField(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}
VectorField operator*(double s, const VectorField& a) {
    return VectorField(s * a[0], s * a[1], s * a[2]);
}
VectorField operator*(const ScalarField& s, const VectorField& v) {
    auto mul = [](double x, double y) { return x * y; };
    return VectorField(zip(s, v[0], mul), zip(s, v[1], mul), zip(s, v[2], mul));
}

ScalarField magnitude(const VectorField& v) {
    ScalarField out(v.grid());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::sqrt(v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i]);
    return out;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a[0][i] * b[0][i] + a[1][i] * b[1][i] + a[2][i] * b[2][i];
    return out;
}

} // namespace pcns
