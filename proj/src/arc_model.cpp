#include "arcsim/arc_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "arcsim/csv.hpp"
#include "arcsim/errors.hpp"

namespace arcsim {

namespace {

// Maximum admissible exponent for R_arc before the profile is declared
// divergent (R_arc = 1e12 ohm).
constexpr double kMaxLnR = 27.631021115928547;  // ln(1e12)

// Evaluates P_res at time t.  Each half-cycle anchor sits at
// h * period/2 + t_m; the distortion interval of an anchor can spill into
// the neighbouring half-cycles, so the anchors of the adjacent half-cycles
// are scanned as well.  Exactly one segment covers any t.
double residual_power_at(const ResidualPowerProfile& p, double t) {
    const double half = 0.5 * p.period;
    const double h0 = std::floor(t / half) * half;
    for (int shift = -1; shift <= 1; ++shift) {
        const double tm = h0 + shift * half + p.t_m;
        const double s = t - tm;
        if (s >= -0.5 * p.duration && s < 0.5 * p.duration) {
            return p.a1 * (s - 0.5 * p.duration) - p.b1;
        }
        if (s >= 0.5 * p.duration && s < half - 0.5 * p.duration) {
            return p.a2 * (s - 0.5 * p.duration) - p.b2;
        }
    }
    return 0.0;  // unreachable for a well-formed profile
}

}  // namespace

ResidualPowerProfile compute_profile_coefficients(const ArcParameters& params) {
    if (!(params.extent > 0.0)) {
        throw simulation_error("arc extent must be positive");
    }
    if (!(params.duration > 0.0)) {
        throw simulation_error("arc duration must be positive");
    }
    if (!(params.period > 0.0)) {
        throw simulation_error("arc period must be positive");
    }
    if (params.duration >= 0.5 * params.period) {
        throw simulation_error(
            "arc duration must be shorter than half the period; the "
            "inter-distortion segment would be degenerate");
    }
    if (params.grounding_resistance < 0.0) {
        throw simulation_error("grounding resistance must be non-negative");
    }

    const double ln_extent = std::log(params.extent);
    const double d = params.duration;

    ResidualPowerProfile profile;
    profile.a1 = -8.0 * ln_extent / (d * d);
    profile.b1 = 4.0 * ln_extent / d;
    profile.a2 = params.m_coefficient * (-16.0) * ln_extent / (d * (params.period - 2.0 * d));
    profile.b2 = params.m_coefficient * profile.b1;
    profile.t_m = 0.0;
    profile.duration = d;
    profile.period = params.period;
    profile.ln_extent = ln_extent;
    return profile;
}

double locate_t_m(const std::vector<double>& fault_voltage, double dt, double offset) {
    if (fault_voltage.size() < 2 || !(dt > 0.0)) {
        throw simulation_error("fault-voltage waveform needs at least two samples");
    }
    const double target = std::abs(offset);
    const double sign = (offset < 0.0) ? -1.0 : 1.0;

    for (std::size_t k = 0; k + 1 < fault_voltage.size(); ++k) {
        const double m0 = std::abs(fault_voltage[k]);
        const double m1 = std::abs(fault_voltage[k + 1]);
        const double slope = m1 - m0;
        if (sign * slope < 0.0) {
            continue;  // |u_f| moving the wrong way for this offset sign
        }
        if (m0 == target) {
            return k * dt;
        }
        const bool brackets = (m0 < target && target <= m1) || (m1 <= target && target < m0);
        if (brackets && slope != 0.0) {
            return (k + (target - m0) / slope) * dt;
        }
    }
    throw simulation_error(
        "offset magnitude never reached by the fault voltage; cannot anchor t_m");
}

double residual_power_integral(const ResidualPowerProfile& profile, double t_lo, double t_hi) {
    if (!(t_hi > t_lo)) {
        return 0.0;
    }
    const double half = 0.5 * profile.period;
    const double d = profile.duration;

    // Collect the segment boundaries falling inside (t_lo, t_hi).  The only
    // discontinuities of P_res are at anchor +- DURATION/2 for each
    // half-cycle anchor; between consecutive boundaries the integrand is
    // linear and the trapezoid rule is exact.
    std::vector<double> pts{t_lo, t_hi};
    const double h0 = std::floor(t_lo / half) * half;
    for (double anchor = h0 - half; anchor <= t_hi + half; anchor += half) {
        const double tm = anchor + profile.t_m;
        for (double bp : {tm - 0.5 * d, tm + 0.5 * d}) {
            if (t_lo < bp && bp < t_hi) {
                pts.push_back(bp);
            }
        }
    }
    std::sort(pts.begin(), pts.end());

    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double x0 = pts[k];
        const double x1 = pts[k + 1];
        if (!(x1 > x0)) {
            continue;
        }
        // P_res is linear on (x0, x1), so the midpoint rule integrates it
        // exactly; evaluating at the midpoint also dodges the boundary
        // ambiguity at the segment edges.
        const double xm = 0.5 * (x0 + x1);
        total += residual_power_at(profile, xm) * (x1 - x0);
    }
    return total;
}

ArcResistanceTrace arc_resistance_trace(const ArcParameters&,
                                        const ResidualPowerProfile& profile,
                                        double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0)) {
        throw simulation_error("arc-resistance trace needs positive horizon and step");
    }
    const std::size_t n = static_cast<std::size_t>(std::llround(horizon / dt));
    if (n == 0) {
        throw simulation_error("arc-resistance trace horizon shorter than one step");
    }

    ArcResistanceTrace trace;
    trace.dt = dt;
    trace.baseline = 1.0;
    trace.samples.resize(n);

    double acc = 0.0;  // ln R_arc, accumulated exactly over each step
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            acc += residual_power_integral(profile, (k - 1) * dt, k * dt);
            acc = std::max(0.0, acc);
        }
        if (acc > kMaxLnR) {
            throw simulation_error(
                "residual-power profile diverges: arc resistance exceeded 1e12 ohm");
        }
        trace.samples[k] = std::exp(acc);
    }
    return trace;
}

void write_csv(const ArcResistanceTrace& trace, const std::string& path) {
    std::vector<double> time(trace.samples.size());
    for (std::size_t k = 0; k < time.size(); ++k) {
        time[k] = k * trace.dt;
    }
    write_two_column_csv(path, "time_s,r_arc_ohm", time, trace.samples);
}

}  // namespace arcsim
