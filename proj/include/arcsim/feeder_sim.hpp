#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "arcsim/arc_model.hpp"

namespace arcsim {

// Medium-voltage feeder with one or more aggregated constant-power loads and
// an optional shunt fault branch at the feeder head.
struct FeederConfig {
    double source_peak_voltage = 12.0;  // kV
    double frequency = 50.0;            // Hz
    double source_impedance = 0.5;      // ohm, series with the fault branch
    double load_power = 10.0;           // MW, per load
    int load_count = 1;
    double sample_rate = 20000.0;       // Hz
    double horizon = 0.5;               // s
    double fault_start = 0.2;           // s
    double fault_duration = 0.1;        // s
};

enum class ScenarioKind {
    low_current_arc,
    high_current_arc,
    arc_wet_cement,
    arc_dry_soil,
    load_switch,
    line_to_ground,
    arc_with_motor_load,
    arc_with_noise,
};

bool is_arc_kind(ScenarioKind kind);
const char* to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

// One scenario to simulate.  The arc parameters are meaningful only for arc
// kinds; snr_db only for arc_with_noise; the switching fields only for
// load_switch; fault_resistance only for line_to_ground; the inrush fields
// only for arc_with_motor_load.
struct ScenarioSpec {
    std::string id;
    ScenarioKind kind = ScenarioKind::low_current_arc;
    ArcParameters arc;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    double t_on = 0.2;            // s, load_switch turn-on
    double t_off = 0.3;           // s, load_switch turn-off
    double delta_power = 5.0;     // MW, load_switch step
    int stages = 4;               // load_switch contactor stages
    double fault_resistance = 1.0;                // ohm, line_to_ground
    double inrush_magnitude = 0.3;                // kA, arc_with_motor_load
    double inrush_time_constant = 0.05;           // s
};

// Feeder-head current measurement.
struct CurrentTrace {
    std::vector<double> samples;  // kA
    double dt = 0.0;              // s
    double fault_start = 0.0;     // s
    std::string label;
};

// simulate() plus the isolated fault-branch channel (the algebraic branch
// current without the high-frequency reignition component), used to inspect
// zero-off intervals.
struct DetailedTrace {
    CurrentTrace trace;
    std::vector<double> branch;  // kA
};

// Runs one scenario.  Deterministic in (config, spec, seed).  The returned
// feeder-head current includes the load current, the fault branch where one
// exists, reignition transients for arc kinds, and a 102 dB sensor noise
// floor.  Throws simulation_error on non-physical configurations (branch
// impedance <= 0, non-integral sample count).
CurrentTrace simulate(const FeederConfig& config, const ScenarioSpec& spec, unsigned long long seed);
DetailedTrace simulate_detailed(const FeederConfig& config, const ScenarioSpec& spec,
                                unsigned long long seed);

// Adds white Gaussian noise at the requested signal-to-noise ratio (dB,
// relative to the mean power of `trace`).  snr_db must be positive and is
// capped at 300 dB; deterministic in (trace, snr_db, seed).
CurrentTrace inject_noise(const CurrentTrace& trace, double snr_db, unsigned long long seed);

// Staged contactor load switching: `delta_power` MW ramp on at t_on (in
// `stages` staggered steps) and back off at t_off.  delta_power = 0
// reproduces the unfaulted baseline.
CurrentTrace switch_load(const FeederConfig& config, double t_on, double t_off,
                         double delta_power, int stages, unsigned long long seed);

// Persistent metallic line-to-ground fault through `fault_resistance` ohm
// from fault_start onward.  An infinite resistance is the no-fault sentinel
// and reproduces the baseline.
CurrentTrace line_to_ground(const FeederConfig& config, double fault_resistance,
                            unsigned long long seed);

// Scenario current with a decaying motor-inrush component superposed from
// fault_start: magnitude * exp(-(t - fault_start)/tau) * sin(2 pi f t).
// magnitude = 0 reproduces simulate(config, spec, seed) bit for bit.
CurrentTrace motor_load_surrogate(const FeederConfig& config, const ScenarioSpec& spec,
                                  double inrush_magnitude, double inrush_time_constant,
                                  unsigned long long seed);

// Two-column CSV export (time_s, current_ka), 9 significant digits.
void write_csv(const CurrentTrace& trace, const std::string& path);

}  // namespace arcsim
