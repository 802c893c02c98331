#include "arcsim/feeder_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "arcsim/csv.hpp"
#include "arcsim/errors.hpp"
#include "arcsim/rng.hpp"

namespace arcsim {

namespace {

// Reignition transient shaping.  The burst rides on the source voltage at
// restrike through a lumped high-frequency surge impedance, with a finite
// formative lag before the oscillation develops and an exponential decay as
// the channel conductance settles.
constexpr double kRingImpedance = 62.0;    // ohm
constexpr double kRingDecay = 1.8e-3;      // s
constexpr double kRingDelay = 412e-6;      // s, formative lag after restrike
constexpr double kRingOnset = 190e-6;      // s, oscillation build-up constant
constexpr double kCarrierHz = 2700.0;      // nominal burst carrier
constexpr double kCarrierJitter = 0.12;    // relative carrier spread
constexpr double kAmplitudeJitter = 0.6;   // relative burst-amplitude spread
constexpr double kRestrikeRamp = 2.0e-4;   // s, conductance ramp at restrike
constexpr double kIgnitionFraction = 0.02; // residual-energy fraction that quenches
constexpr double kSensorFloorDb = 102.0;   // sensor noise floor below signal power

// Staged contactor switching shape.
constexpr double kStageStagger = 0.015;  // s between contactor stages
constexpr double kStageRamp = 0.025;     // s, single-stage ramp width
constexpr double kStageShape = 4.0;      // erf steepness factor

constexpr unsigned long long kFloorSeedSalt = 0x9E3779B97F4A7C15ULL;

std::size_t sample_count(const FeederConfig& config) {
    const double n_exact = config.sample_rate * config.horizon;
    const double n_round = std::round(n_exact);
    if (!(config.sample_rate > 0.0) || !(config.horizon > 0.0) ||
        std::abs(n_exact - n_round) > 1e-6 || n_round < 1.0) {
        throw simulation_error("sample_rate * horizon must be a positive integer");
    }
    return static_cast<std::size_t>(n_round);
}

double load_peak_current(const FeederConfig& config, double extra_power_mw = 0.0) {
    const double v_rms = config.source_peak_voltage / std::sqrt(2.0);  // kV
    const double power = config.load_count * config.load_power + extra_power_mw;
    return power / v_rms * std::sqrt(2.0);  // kA peak
}

double add_sensor_floor(std::vector<double>& i, unsigned long long seed) {
    double mean_sq = 0.0;
    for (double v : i) {
        mean_sq += v * v;
    }
    mean_sq /= static_cast<double>(i.size());
    const double sigma = std::sqrt(mean_sq * std::pow(10.0, -kSensorFloorDb / 10.0));
    Rng rng(seed ^ kFloorSeedSalt);
    for (double& v : i) {
        v += sigma * rng.gaussian();
    }
    return sigma;
}

// Everything below fault injection is shared across scenario kinds; this is
// the single assembly path so that bit-level determinism and the random
// streams are identical however a scenario is reached.
CurrentTrace assemble(const FeederConfig& config, const ScenarioSpec& spec,
                      unsigned long long seed, std::vector<double>* branch_out) {
    const std::size_t n = sample_count(config);
    const double dt = 1.0 / config.sample_rate;
    const double w = 2.0 * kPi * config.frequency;
    const double half = 1.0 / (2.0 * config.frequency);
    const double fs = config.fault_start;
    const bool faulted = config.fault_duration > 0.0;

    std::vector<double> i(n), u(n), branch(n, 0.0);
    const double i_load = load_peak_current(config);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = k * dt;
        u[k] = config.source_peak_voltage * std::sin(w * t);
        i[k] = i_load * std::sin(w * t);
    }

    if (is_arc_kind(spec.kind) && faulted) {
        const ArcParameters& arc = spec.arc;
        if (!(arc.grounding_resistance + config.source_impedance + 1.0 > 0.0)) {
            throw simulation_error("fault-branch impedance must be positive");
        }
        ResidualPowerProfile profile = compute_profile_coefficients(arc);

        // Anchor the profile on the first half-cycle of the fault voltage,
        // then tile it with half-period periodicity.
        const std::size_t n_half = static_cast<std::size_t>(std::llround(half / dt)) + 1;
        std::vector<double> u_half(u.begin(), u.begin() + std::min(n_half, n));
        profile.t_m = locate_t_m(u_half, dt, arc.offset);

        // Gate: the channel conducts once the accumulated residual energy has
        // drained below the ignition fraction and the first breakdown delay
        // has elapsed; it quenches when the residual energy builds back up.
        const double ln_extent = profile.ln_extent;
        const double t_est = fs + 0.5 * arc.duration * std::sqrt(1.0 - kIgnitionFraction);
        std::vector<double> ln_r(n, 0.0);
        std::vector<char> act(n, 0);
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = k * dt;
            if (t < fs) {
                continue;
            }
            const double lo = std::max(fs, t - dt);
            acc = std::max(0.0, acc + residual_power_integral(profile, lo, t));
            ln_r[k] = acc;
            const bool quench = (acc > kIgnitionFraction * ln_extent) || (t < t_est);
            const bool in_window = (t >= fs) && (t < fs + config.fault_duration);
            act[k] = (in_window && !quench) ? 1 : 0;
        }

        // Conduction runs: algebraic branch current with a short conductance
        // ramp at each restrike, plus one high-frequency reignition burst per
        // run.  The first burst is deterministic; later bursts decorrelate in
        // carrier phase and amplitude with the channel state.
        Rng ring_rng(seed + 7777ULL);
        std::vector<double> ring(n, 0.0);
        std::size_t k = 0;
        int burst = 0;
        while (k < n) {
            if (!act[k]) {
                ++k;
                continue;
            }
            std::size_t j = k;
            while (j < n && act[j]) {
                ++j;
            }
            const double t0 = k * dt;
            const double fk = kCarrierHz * (1.0 + kCarrierJitter * (2.0 * ring_rng.uniform() - 1.0));
            double ph = 0.0;
            double amp = 1.0;
            if (burst > 0) {
                ph = 2.0 * kPi * ring_rng.uniform();
                amp = 1.0 + kAmplitudeJitter * (2.0 * ring_rng.uniform() - 1.0);
            }
            for (std::size_t m = k; m < j; ++m) {
                const double t = m * dt;
                const double g = std::clamp((t - t0) / kRestrikeRamp, 0.0, 1.0);
                branch[m] = u[m] * g /
                            (std::exp(ln_r[m]) + arc.grounding_resistance + config.source_impedance);
                const double ts = std::max(t - t0 - kRingDelay, 0.0);
                const double env = std::exp(-ts / kRingDecay) * (1.0 - std::exp(-ts / kRingOnset));
                ring[m] = amp * (u[k] / kRingImpedance) * env * std::sin(2.0 * kPi * fk * ts + ph);
            }
            ++burst;
            k = j;
        }
        for (std::size_t m = 0; m < n; ++m) {
            i[m] += branch[m] + ring[m];
        }
    } else if (spec.kind == ScenarioKind::load_switch && faulted) {
        const double stage_amp =
            (spec.stages > 0) ? spec.delta_power / (config.source_peak_voltage / std::sqrt(2.0)) *
                                    std::sqrt(2.0) / spec.stages
                              : 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = k * dt;
            double gsw = 0.0;
            for (int s = 0; s < spec.stages; ++s) {
                const double on = (t - spec.t_on - s * kStageStagger) / kStageRamp - 0.5;
                const double off = (t - spec.t_off - s * kStageStagger) / kStageRamp - 0.5;
                gsw += 0.5 * (1.0 + std::erf(kStageShape * on));
                gsw -= 0.5 * (1.0 + std::erf(kStageShape * off));
            }
            i[k] += stage_amp * gsw * std::sin(w * t);
        }
    } else if (spec.kind == ScenarioKind::line_to_ground && faulted) {
        if (!std::isinf(spec.fault_resistance)) {
            if (!(spec.fault_resistance + config.source_impedance > 0.0)) {
                throw simulation_error("fault-branch impedance must be positive");
            }
            for (std::size_t k = 0; k < n; ++k) {
                if (k * dt >= fs) {
                    branch[k] = u[k] / (spec.fault_resistance + config.source_impedance);
                    i[k] += branch[k];
                }
            }
        }
    }

    if (spec.kind == ScenarioKind::arc_with_motor_load && faulted) {
        for (std::size_t k = 0; k < n; ++k) {
            const double t = k * dt;
            if (t >= fs) {
                i[k] += spec.inrush_magnitude * std::exp(-(t - fs) / spec.inrush_time_constant) *
                        std::sin(w * t);
            }
        }
    }

    add_sensor_floor(i, seed);

    CurrentTrace trace;
    trace.samples = std::move(i);
    trace.dt = dt;
    trace.fault_start = fs;
    trace.label = spec.id.empty() ? to_string(spec.kind) : spec.id;

    if (spec.kind == ScenarioKind::arc_with_noise && faulted) {
        if (std::isnan(spec.snr_db)) {
            throw config_error("arc_with_noise scenario requires snr_db");
        }
        trace = inject_noise(trace, spec.snr_db, seed);
    }

    if (branch_out != nullptr) {
        *branch_out = std::move(branch);
    }
    return trace;
}

}  // namespace

bool is_arc_kind(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::low_current_arc:
        case ScenarioKind::high_current_arc:
        case ScenarioKind::arc_wet_cement:
        case ScenarioKind::arc_dry_soil:
        case ScenarioKind::arc_with_motor_load:
        case ScenarioKind::arc_with_noise:
            return true;
        case ScenarioKind::load_switch:
        case ScenarioKind::line_to_ground:
            return false;
    }
    return false;
}

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::low_current_arc: return "low_current_arc";
        case ScenarioKind::high_current_arc: return "high_current_arc";
        case ScenarioKind::arc_wet_cement: return "arc_wet_cement";
        case ScenarioKind::arc_dry_soil: return "arc_dry_soil";
        case ScenarioKind::load_switch: return "load_switch";
        case ScenarioKind::line_to_ground: return "line_to_ground";
        case ScenarioKind::arc_with_motor_load: return "arc_with_motor_load";
        case ScenarioKind::arc_with_noise: return "arc_with_noise";
    }
    return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
    for (ScenarioKind kind :
         {ScenarioKind::low_current_arc, ScenarioKind::high_current_arc,
          ScenarioKind::arc_wet_cement, ScenarioKind::arc_dry_soil, ScenarioKind::load_switch,
          ScenarioKind::line_to_ground, ScenarioKind::arc_with_motor_load,
          ScenarioKind::arc_with_noise}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    throw config_error("unknown scenario kind: " + name);
}

CurrentTrace simulate(const FeederConfig& config, const ScenarioSpec& spec,
                      unsigned long long seed) {
    return assemble(config, spec, seed, nullptr);
}

DetailedTrace simulate_detailed(const FeederConfig& config, const ScenarioSpec& spec,
                                unsigned long long seed) {
    DetailedTrace out;
    out.trace = assemble(config, spec, seed, &out.branch);
    return out;
}

CurrentTrace inject_noise(const CurrentTrace& trace, double snr_db, unsigned long long seed) {
    if (!(snr_db > 0.0)) {
        throw config_error("signal-to-noise ratio must be positive");
    }
    const double snr = std::min(snr_db, 300.0);
    double mean_sq = 0.0;
    for (double v : trace.samples) {
        mean_sq += v * v;
    }
    mean_sq /= static_cast<double>(trace.samples.size());
    const double sigma = std::sqrt(mean_sq * std::pow(10.0, -snr / 10.0));

    CurrentTrace out = trace;
    Rng rng(seed);
    for (double& v : out.samples) {
        v += sigma * rng.gaussian();
    }
    return out;
}

CurrentTrace switch_load(const FeederConfig& config, double t_on, double t_off,
                         double delta_power, int stages, unsigned long long seed) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::load_switch;
    spec.t_on = t_on;
    spec.t_off = t_off;
    spec.delta_power = delta_power;
    spec.stages = stages;
    return assemble(config, spec, seed, nullptr);
}

CurrentTrace line_to_ground(const FeederConfig& config, double fault_resistance,
                            unsigned long long seed) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::line_to_ground;
    spec.fault_resistance = fault_resistance;
    return assemble(config, spec, seed, nullptr);
}

CurrentTrace motor_load_surrogate(const FeederConfig& config, const ScenarioSpec& spec,
                                  double inrush_magnitude, double inrush_time_constant,
                                  unsigned long long seed) {
    ScenarioSpec with_motor = spec;
    with_motor.kind = ScenarioKind::arc_with_motor_load;
    with_motor.inrush_magnitude = inrush_magnitude;
    with_motor.inrush_time_constant = inrush_time_constant;
    return assemble(config, with_motor, seed, nullptr);
}

void write_csv(const CurrentTrace& trace, const std::string& path) {
    std::vector<double> time(trace.samples.size());
    for (std::size_t k = 0; k < time.size(); ++k) {
        time[k] = k * trace.dt;
    }
    write_two_column_csv(path, "time_s,current_ka", time, trace.samples);
}

}  // namespace arcsim
