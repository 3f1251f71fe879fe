#include "pcns/fit.hpp"

#include <algorithm>
#include <cmath>

#include "pcns/errors.hpp"

namespace pcns {

FitResult fit_decay(const std::vector<double>& t, const std::vector<double>& v, double t_a, double t_b,
                    DecayModel model, TimeAxis axis) {
    if (t.size() != v.size()) throw InputError("fit_decay: time and value series differ in length");
    if (!(t_a < t_b)) throw InputError("fit_decay: degenerate window");
    std::vector<double> X, Y;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_a || t[i] > t_b) continue;
        if (!(v[i] > 0.0) || !std::isfinite(v[i]))
            throw InputError("fit_decay: nonpositive value at t=" + std::to_string(t[i]));
        double x = t[i], y = 0.0;
        switch (model) {
        case DecayModel::power:
            if (axis == TimeAxis::raw) {
                if (!(t[i] > 0.0)) throw InputError("fit_decay: raw power axis needs t > 0");
                x = std::log(t[i]);
            } else {
                x = 0.5 * std::log1p(t[i] * t[i]);
            }
            y = std::log(v[i]);
            break;
        case DecayModel::exponential:
            y = std::log(v[i]);
            break;
        case DecayModel::reciprocal:
            y = 1.0 / v[i];
            break;
        }
        X.push_back(x);
        Y.push_back(y);
    }
    const std::size_t n = X.size();
    if (n < 8) throw InputError("fit_decay: fewer than 8 samples in the window");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += X[i];
        my += Y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (X[i] - mx) * (X[i] - mx);
        sxy += (X[i] - mx) * (Y[i] - my);
        syy += (Y[i] - my) * (Y[i] - my);
    }
    if (!(sxx > 0.0)) throw InputError("fit_decay: no time spread in the window");
    FitResult r;
    r.model = model;
    r.exponent = sxy / sxx;
    r.intercept = my - r.exponent * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = Y[i] - (r.intercept + r.exponent * X[i]);
        ss_res += e * e;
    }
    r.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    r.t_a = t_a;
    r.t_b = t_b;
    r.samples = n;
    return r;
}

DecayModel parse_decay_model(const std::string& s) {
    if (s == "power") return DecayModel::power;
    if (s == "exponential") return DecayModel::exponential;
    if (s == "reciprocal") return DecayModel::reciprocal;
    throw InputError("unknown decay model '" + s + "'");
}

std::string to_string(DecayModel m) {
    switch (m) {
    case DecayModel::power: return "power";
    case DecayModel::exponential: return "exponential";
    case DecayModel::reciprocal: return "reciprocal";
    }
    return "?";
}

} // namespace pcns
