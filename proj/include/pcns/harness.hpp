#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcns/fit.hpp"
#include "pcns/schedule.hpp"

namespace pcns {

/// Comparison of an observed ||a(t)||_inf series with the envelope.
struct EnvelopeCheck {
    struct Margin {
        int interval = 0;  ///< dyadic interval, 0 for the plateau after T0
        double worst = 0.0;  ///< min over its samples of (envelope - observed) / envelope
        double t_worst = 0.0;
        std::size_t samples = 0;
    };
    bool in_regime = false;
    bool passed = false;
    std::vector<Margin> margins;
    /// First sample above the envelope (reported in the regime and outside it).
    std::optional<double> violation_t;
    double violation_value = 0.0, violation_envelope = 0.0;
    /// Reciprocal fit on [0, 0.1 / gamma], the pass criterion outside the regime.
    std::optional<FitResult> fit;
    std::string summary;
};

/// In the regime violations fail the check; outside it a reciprocal fit of
/// the series over [0, 0.1 / gamma] must reach r^2 >= 0.95. Throws InputError
/// unless the series starts at t = 0, is strictly increasing and free
/// of NaNs.
EnvelopeCheck envelope_check(const std::vector<double>& t, const std::vector<double>& a_inf,
                             const EnvelopeSchedule& s);

/// Observed norms of a at the threshold times, linearly interpolated in time.
struct ThresholdRow {
    std::string name;
    double time = 0.0;
    bool truncated = false;  ///< the series ends before this time
    double a_inf = 0.0, a_l6 = 0.0, a_l2 = 0.0;
};
struct ThresholdsReport {
    std::vector<ThresholdRow> rows;  ///< T0, T1, L6 switch, T2
    std::string text() const;
};
ThresholdsReport thresholds_report(const EnvelopeSchedule& s, const std::vector<double>& t,
                                   const std::vector<double>& a_inf, const std::vector<double>& a_l6,
                                   const std::vector<double>& a_l2);

/// Schedule table printed by the envelope subcommand.
std::string schedule_text(const EnvelopeSchedule& s);

} // namespace pcns
