#pragma once

#include <string>
#include <vector>

namespace pcns {

enum class DecayModel { power, exponential, reciprocal };

/// Time coordinate of the power model: log<t> with <t> = (1 + t^2)^{1/2}, or log t.
enum class TimeAxis { bracket, raw };

/// Least-squares line in the model's linearizing coordinates:
///   power        log v = intercept + exponent * log(<t> or t)
///   exponential  log v = intercept + exponent * t
///   reciprocal   1 / v = intercept + exponent * t   (c0 = intercept, c1 = exponent)
struct FitResult {
    DecayModel model = DecayModel::power;
    double exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;  ///< clamped to [0, 1]
    double t_a = 0.0, t_b = 0.0;
    std::size_t samples = 0;
};

/// Fits the samples with t in [t_a, t_b]. Throws InputError for fewer than 8
/// samples in the window, t_a >= t_b, a window without time spread, nonpositive
/// values, or t <= 0 on the raw power axis.
FitResult fit_decay(const std::vector<double>& t, const std::vector<double>& v, double t_a, double t_b,
                    DecayModel model, TimeAxis axis = TimeAxis::bracket);

DecayModel parse_decay_model(const std::string& s);
std::string to_string(DecayModel m);

} // namespace pcns
