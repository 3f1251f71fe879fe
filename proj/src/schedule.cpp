#include "pcns/schedule.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "pcns/errors.hpp"

namespace pcns {

double toy_model(double delta, double alpha, double gamma, double t) {
    if (!(delta > 0.0 && alpha > 0.0 && gamma > 0.0)) throw InputError("toy model needs positive parameters");
    if (!(t >= 0.0)) throw InputError("toy model needs t >= 0");
    return 1.0 / (std::pow(delta, alpha) + gamma * t);
}

std::vector<double> toy_model_ode(double delta, double alpha, double gamma, const std::vector<double>& times,
                                  double rel_tol) {
    namespace odeint = boost::numeric::odeint;
    if (!(delta > 0.0 && alpha > 0.0 && gamma > 0.0)) throw InputError("toy model needs positive parameters");
    // g = log f obeys g' = -gamma exp(g), which keeps the relative error controlled
    auto sys = [gamma](const double& g, double& dg, double) { dg = -gamma * std::exp(g); };
    auto stepper = odeint::make_dense_output(rel_tol, rel_tol, odeint::runge_kutta_dopri5<double>());
    double g = -alpha * std::log(delta);
    double t = 0.0;
    std::vector<double> out;
    out.reserve(times.size());
    for (double target : times) {
        if (!(target >= t)) throw InputError("toy_model_ode needs nondecreasing times >= 0");
        if (target > t) {
            const double dt0 = std::min(target - t, 1e-3 * std::exp(-g) / gamma);
            odeint::integrate_adaptive(stepper, sys, g, t, target, dt0);
            t = target;
        }
        out.push_back(std::exp(g));
    }
    return out;
}

namespace {

/// floor(log2 x), snapping values within 1e-12 of a power of two onto it.
int dyadic_exponent(double x) {
    const double l = std::log2(x);
    const double r = std::round(l);
    if (std::abs(x - std::ldexp(1.0, static_cast<int>(r))) <= 1e-12 * x) return static_cast<int>(r);
    return static_cast<int>(std::floor(l));
}

} // namespace

EnvelopeSchedule envelope_schedule(double delta, double alpha, double gamma, double epsilon) {
    if (!(delta > 0.0 && delta <= 1.0)) throw InputError("delta must lie in (0, 1]");
    if (!(alpha > 0.0 && gamma > 0.0 && epsilon > 0.0)) throw InputError("alpha, gamma and epsilon must be positive");
    EnvelopeSchedule s;
    s.delta = delta;
    s.alpha = alpha;
    s.gamma = gamma;
    s.epsilon = epsilon;
    s.N0 = dyadic_exponent(std::pow(delta, -alpha));
    s.in_regime = s.N0 >= 15;
    s.t.push_back(0.0);
    if (s.in_regime) {
        double acc = 0.0;
        for (int j = 1; j <= s.N0 - 14; ++j) {
            acc += std::ldexp(1.0, -(s.N0 + 1 - j));
            s.t.push_back(7.0 / (8.0 * gamma) * acc);
        }
    } else {
        s.warning = "delta^{-alpha} < 2^15 (N0 = " + std::to_string(s.N0) +
                    "): outside the proven regime, no dyadic intervals and T0 = 0";
    }
    s.T0 = s.t.back();
    const double small = epsilon * std::pow(delta, 1.0 - 0.75 * alpha);
    s.T1 = 2.0 / gamma * std::log(1.0 / small);
    s.T2 = 1.0 / (small * small);
    s.beta = 1.0 - 0.75 * alpha * (1.0 + 1.0 / gamma);
    s.l6_switch = 6.0 * (2.0 + alpha) * std::log(1.0 / delta);
    return s;
}

namespace {

double interval_value(const EnvelopeSchedule& s, int j, double t) {
    const double start = 0.25 / (1.0 + std::ldexp(1.0, s.N0 + 1 - j));
    return 1.0 / (start + s.gamma * (t - s.t[j - 1]));
}

} // namespace

int envelope_interval(const EnvelopeSchedule& s, double t) {
    if (!(t >= 0.0)) throw InputError("envelope needs t >= 0");
    const int m = s.intervals();
    if (m <= 0 || t > s.T0) return 0;
    for (int j = 1; j <= m; ++j)
        if (t < s.t[j]) return j;
    return m;  // t == T0 closes the last interval
}

double envelope_value(const EnvelopeSchedule& s, double t) {
    const int j = envelope_interval(s, t);
    return j == 0 ? 4e4 : interval_value(s, j, t);
}

bool small_amplitude_regime(const EnvelopeSchedule& s, double t) { return t >= s.T1; }

double envelope_shape(const EnvelopeSchedule& s, double t, double C) {
    return C * (std::exp(-0.5 * s.gamma * t) + s.epsilon * std::pow(s.delta, 1.0 - 0.75 * s.alpha));
}

double interval_budget(const EnvelopeSchedule& s, int j) {
    if (j < 1 || j > s.intervals()) throw InputError("no dyadic interval " + std::to_string(j));
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    return gauss_kronrod<double, 61>::integrate([&](double t) { return interval_value(s, j, t); }, s.t[j - 1],
                                                s.t[j], 15, 1e-14, &err);
}

double envelope_l1(const EnvelopeSchedule& s) {
    double sum = 0.0;
    for (int j = 1; j <= s.intervals(); ++j) sum += interval_budget(s, j);
    return sum;
}

} // namespace pcns
