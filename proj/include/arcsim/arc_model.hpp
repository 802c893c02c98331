#pragma once

#include <string>
#include <vector>

namespace arcsim {

// Parameters of one arc-fault scenario.  `extent` is the target maximum arc
// resistance R_arc(t_m); `duration` is the length of the zero-off interval;
// `offset` is the fault-voltage magnitude (kV) at which the resistance
// maximum occurs; `m_coefficient` shapes the inter-distortion segment of the
// residual-power profile (0 keeps the profile neutral over a half-period);
// `grounding_resistance` is the series resistance R_T of the fault path.
struct ArcParameters {
    double extent = 5000.0;                // ohm
    double duration = 0.00413;             // s
    double offset = 0.2;                   // kV
    double m_coefficient = 0.0;            // dimensionless
    double grounding_resistance = 1000.0;  // ohm
    double period = 0.02;                  // s, one fundamental cycle
};

// Piecewise-linear residual-power profile
//   P_res(t) = a1 (t - t_m - DURATION/2) - b1   on [t_m - DURATION/2, t_m + DURATION/2)
//   P_res(t) = a2 (t - t_m - DURATION/2) - b2   on [t_m + DURATION/2, t_m + period/2 - DURATION/2)
// tiled with period/2 periodicity.  `t_m` anchors the profile inside the
// first half-cycle and is established separately by locate_t_m; the
// coefficient computation leaves it at 0.
struct ResidualPowerProfile {
    double a1 = 0.0;
    double b1 = 0.0;
    double a2 = 0.0;
    double b2 = 0.0;
    double t_m = 0.0;       // s, anchor within the first half-cycle
    double duration = 0.0;  // s, copied from the parameters
    double period = 0.02;   // s
    double ln_extent = 0.0;
};

// Time-varying arc resistance, R_arc(t) = exp(integral of P_res), baseline 1 ohm.
struct ArcResistanceTrace {
    std::vector<double> samples;  // ohm
    double dt = 0.0;              // s
    double baseline = 1.0;        // ohm, R_arc0 (fixed at 1)
};

// Evaluates the profile coefficients
//   a1 = -8 ln(EXTENT)/DURATION^2       b1 = 4 ln(EXTENT)/DURATION
//   a2 = -16 m ln(EXTENT)/(DURATION (period - 2 DURATION))   b2 = m b1
// Throws simulation_error when the parameters are invalid (non-positive
// extent/duration, duration >= period/2 making the second segment
// degenerate, negative grounding resistance).
ResidualPowerProfile compute_profile_coefficients(const ArcParameters& params);

// Earliest time within the first half-cycle of `fault_voltage` at which
// |u_f(t)| equals |offset| with sgn(offset) * d|u_f|/dt >= 0, resolved by
// linear interpolation between the bracketing samples.  Throws
// simulation_error when |offset| exceeds the waveform peak.
double locate_t_m(const std::vector<double>& fault_voltage, double dt, double offset);

// Exact integral of the residual-power profile over [t_lo, t_hi].  The
// integrand is piecewise linear, so trapezoidal accumulation on sub-intervals
// split at the segment boundaries reproduces the antiderivative exactly;
// this helper performs that split.
double residual_power_integral(const ResidualPowerProfile& profile, double t_lo, double t_hi);

// R_arc(t) = exp(integral of P_res from t = 0) sampled on [0, horizon) at
// step dt.  The running exponent is clamped at zero from below (the m = 0
// profile is analytically neutral over each half-period; the clamp absorbs
// rounding drift) and guarded against divergence: exceeding ln(1e12) raises
// a diverging-profile simulation_error.
ArcResistanceTrace arc_resistance_trace(const ArcParameters& params,
                                        const ResidualPowerProfile& profile,
                                        double horizon, double dt);

// Two-column CSV export (time_s, r_arc_ohm), 9 significant digits.
void write_csv(const ArcResistanceTrace& trace, const std::string& path);

}  // namespace arcsim
