#pragma once

#include <string>
#include <vector>

namespace pcns {

/// f(t) = (delta^alpha + gamma t)^{-1}, the solution of f' + gamma f^2 = 0 with
/// f(0) = delta^{-alpha}. Throws InputError for t < 0 or nonpositive inputs.
double toy_model(double delta, double alpha, double gamma, double t);

/// The same initial value problem integrated by an adaptive Dormand-Prince
/// method (Boost.Odeint) in the variable log f, at every requested time
/// (nondecreasing, >= 0).
std::vector<double> toy_model_ode(double delta, double alpha, double gamma, const std::vector<double>& times,
                                  double rel_tol = 1e-13);

/// Dyadic schedule for the collapse of ||a||_inf.
///   N0: delta^{-alpha} in [2^N0, 2^{N0+1})
///   t_j = (7 / (8 gamma)) sum_{j'=1}^{j} 2^{-(N0+1-j')}, j = 0..N0-14
///   T0 = t_{N0-14} = (7 / (8 gamma)) (2^{-14} - 2^{-N0})
///   T1 = 2 ln(1 / (eps delta^{1-3 alpha/4})) / gamma,  T2 = (eps delta^{1-3 alpha/4})^{-2}
///   beta = 1 - (3 alpha / 4)(1 + 1 / gamma),  L6 switch time 6 (2 + alpha) ln(1 / delta)
/// Outside the regime N0 >= 15 there are no dyadic intervals and T0 = 0;
/// the other quantities keep their formulas.
struct EnvelopeSchedule {
    double delta = 0, alpha = 0, gamma = 0, epsilon = 0;
    int N0 = 0;
    std::vector<double> t;  ///< t_0 = 0, ..., t_{N0-14}
    double T0 = 0, T1 = 0, T2 = 0, beta = 0;
    double l6_switch = 0;
    bool in_regime = false;
    std::string warning;  ///< empty in the regime

    int intervals() const { return static_cast<int>(t.size()) - 1; }
};

/// Throws InputError unless delta in (0, 1], alpha, gamma, epsilon > 0.
EnvelopeSchedule envelope_schedule(double delta, double alpha, double gamma, double epsilon);

/// Bound on ||a(t)||_inf: on [t_{j-1}, t_j) the value
/// (1/4 (1 + 2^{N0+1-j})^{-1} + gamma (t - t_{j-1}))^{-1}, the left limit of the
/// last interval at t = T0, and the plateau 4e4 after T0.
double envelope_value(const EnvelopeSchedule& s, double t);

/// 1-based dyadic interval containing t, 0 on the plateau.
int envelope_interval(const EnvelopeSchedule& s, double t);

/// True once t >= T1, where the small-amplitude shape takes over.
bool small_amplitude_regime(const EnvelopeSchedule& s, double t);

/// Report-only shape C (exp(-gamma t / 2) + eps delta^{1-3 alpha/4}) between T0 and T1.
double envelope_shape(const EnvelopeSchedule& s, double t, double C);

/// Integral of the envelope over interval j by Gauss-Kronrod quadrature.
double interval_budget(const EnvelopeSchedule& s, int j);
/// Integral over [0, T0], the sum of the interval budgets.
double envelope_l1(const EnvelopeSchedule& s);

} // namespace pcns
