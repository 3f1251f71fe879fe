#include "pcns/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pcns/csv.hpp"
#include "pcns/errors.hpp"

namespace pcns {

namespace {

void check_series(const std::vector<double>& t, const std::vector<std::vector<double>*>& values) {
    if (t.empty()) throw InputError("empty series");
    if (std::abs(t.front()) > 1e-12) throw InputError("series must start at t = 0");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw InputError("series times must be strictly increasing");
    for (const auto* v : values) {
        if (v->size() != t.size()) throw InputError("series columns differ in length");
        for (double x : *v)
            if (!std::isfinite(x)) throw InputError("series contains non-finite values");
    }
}

double interp(const std::vector<double>& t, const std::vector<double>& v, double at) {
    if (at <= t.front()) return v.front();
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (at <= t[i]) {
            const double w = (at - t[i - 1]) / (t[i] - t[i - 1]);
            return (1.0 - w) * v[i - 1] + w * v[i];
        }
    }
    return v.back();
}

} // namespace

EnvelopeCheck envelope_check(const std::vector<double>& t, const std::vector<double>& a_inf,
                             const EnvelopeSchedule& s) {
    {
        std::vector<double> copy = a_inf;
        check_series(t, {&copy});
    }
    EnvelopeCheck r;
    r.in_regime = s.in_regime;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const int j = envelope_interval(s, t[i]);
        const double env = envelope_value(s, t[i]);
        const double m = (env - a_inf[i]) / env;
        auto it = std::find_if(r.margins.begin(), r.margins.end(), [&](const auto& x) { return x.interval == j; });
        if (it == r.margins.end()) {
            r.margins.push_back({j, m, t[i], 1});
        } else {
            ++it->samples;
            if (m < it->worst) {
                it->worst = m;
                it->t_worst = t[i];
            }
        }
        if (m < 0.0 && !r.violation_t) {
            r.violation_t = t[i];
            r.violation_value = a_inf[i];
            r.violation_envelope = env;
        }
    }
    std::ostringstream os;
    if (s.in_regime) {
        r.passed = !r.violation_t;
        if (r.violation_t)
            os << "envelope exceeded at t=" << format_double(*r.violation_t) << ": ||a||_inf="
               << format_double(r.violation_value) << " > " << format_double(r.violation_envelope);
        else
            os << "series below the envelope at all " << t.size() << " samples";
    } else {
        r.fit = fit_decay(t, a_inf, 0.0, 0.1 / s.gamma, DecayModel::reciprocal);
        r.passed = r.fit->r_squared >= 0.95;
        os << "outside the regime (N0=" << s.N0 << "): reciprocal fit on [0, " << format_double(0.1 / s.gamma)
           << "] r^2=" << format_double(r.fit->r_squared) << " c0=" << format_double(r.fit->intercept)
           << " c1=" << format_double(r.fit->exponent);
    }
    r.summary = os.str();
    return r;
}

ThresholdsReport thresholds_report(const EnvelopeSchedule& s, const std::vector<double>& t,
                                   const std::vector<double>& a_inf, const std::vector<double>& a_l6,
                                   const std::vector<double>& a_l2) {
    {
        std::vector<double> a = a_inf, b = a_l6, c = a_l2;
        check_series(t, {&a, &b, &c});
    }
    ThresholdsReport r;
    const std::pair<const char*, double> marks[] = {
        {"T0", s.T0}, {"T1", s.T1}, {"L6_switch", s.l6_switch}, {"T2", s.T2}};
    for (const auto& [name, time] : marks) {
        ThresholdRow row;
        row.name = name;
        row.time = time;
        row.truncated = time > t.back() * (1.0 + 1e-12);
        if (!row.truncated) {
            row.a_inf = interp(t, a_inf, time);
            row.a_l6 = interp(t, a_l6, time);
            row.a_l2 = interp(t, a_l2, time);
        }
        r.rows.push_back(row);
    }
    return r;
}

std::string ThresholdsReport::text() const {
    std::ostringstream os;
    os << "threshold,time,truncated,Linf_a,L6_a,L2_a\n";
    for (const auto& r : rows) {
        os << r.name << "," << format_double(r.time) << "," << (r.truncated ? "yes" : "no");
        if (r.truncated) os << ",,,\n";
        else os << "," << format_double(r.a_inf) << "," << format_double(r.a_l6) << "," << format_double(r.a_l2) << "\n";
    }
    return os.str();
}

std::string schedule_text(const EnvelopeSchedule& s) {
    std::ostringstream os;
    os << "delta = " << format_double(s.delta) << "\nalpha = " << format_double(s.alpha)
       << "\ngamma = " << format_double(s.gamma) << "\nepsilon = " << format_double(s.epsilon) << "\nN0 = " << s.N0
       << "\nin_regime = " << (s.in_regime ? "yes" : "no") << "\n";
    if (!s.warning.empty()) os << "warning: " << s.warning << "\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "T0 = %.6e\nT1 = %.6e\nT2 = %.6e\nbeta = %.6e\nL6_switch = %.6e\n", s.T0, s.T1,
                  s.T2, s.beta, s.l6_switch);
    os << buf;
    if (s.intervals() > 0) {
        os << "j,t_start,t_end,envelope_start,budget\n";
        for (int j = 1; j <= s.intervals(); ++j)
            os << j << "," << format_double(s.t[j - 1]) << "," << format_double(s.t[j]) << ","
               << format_double(envelope_value(s, s.t[j - 1])) << "," << format_double(interval_budget(s, j)) << "\n";
        os << "L1_over_[0,T0] = " << format_double(envelope_l1(s)) << "\n";
    }
    return os.str();
}

} // namespace pcns
