#pragma once

#include <string>
#include <vector>

#include "arcsim/detector.hpp"
#include "arcsim/feeder_sim.hpp"

namespace arcsim {

// A parsed run manifest: global feeder/detector settings plus the scenario
// list.  `seed` is the base seed; repetition k of a scenario runs with
// seed + k.
struct RunManifest {
    FeederConfig feeder;
    DetectionThresholds thresholds;
    int q = 40;
    int reps = 1;
    unsigned long long seed = 0;
    std::string out_dir = "runs";
    bool with_expected = false;  // add expected-verdict and match-rate columns
    std::vector<ScenarioSpec> scenarios;
};

// Key=value manifest format: `key = value` lines, full-line # comments,
// global keys first, and each `scenario = <id>` line opening a block whose
// keys configure that scenario.  Throws config_error with the line number on
// malformed input, unknown keys, duplicate ids, or fields that do not apply
// to the scenario kind.
RunManifest parse_manifest_text(const std::string& text);
RunManifest parse_manifest_file(const std::string& path);

// "a,b,c,d" -> the four classification band edges, ascending.
DetectionThresholds parse_thresholds(const std::string& csv,
                                     const DetectionThresholds& base = {});

// The pinned nine-scenario benchmark (50 repetitions, base seed 0): four arc
// configurations, staged load switching, a metallic line-to-ground fault,
// two arcs with motor inrush, and the low-current arc under 70 dB noise.
RunManifest benchmark_manifest();

// Expected verdict for a scenario kind (arc kinds -> ArcFault, load
// switching -> NonArcing, line-to-ground -> OtherFault).
Verdict expected_verdict(ScenarioKind kind);

// Aggregated per-scenario outcome across repetitions.
struct ScenarioRow {
    std::string id;
    ScenarioKind kind = ScenarioKind::low_current_arc;
    const ScenarioSpec* spec = nullptr;
    double rep0_peak = 0.0;       // signed forcing peak of repetition 0
    double mean_latency_ms = 0.0; // over repetitions with a deviation; NaN if none
    Verdict modal_verdict = Verdict::no_event;
    double match_rate = 0.0;      // fraction of repetitions matching expected_verdict
    std::vector<DetectionResult> reps;
};

// Runs every scenario of the manifest, writes the artifacts (repetition-0
// trace and forcing CSVs per scenario, per-repetition report lines, aligned
// summary table plus CSV twin) into out_dir, and returns the rows.  The
// output directory is probed for writability before any simulation runs.
// Errors carry the offending scenario id in their message.
std::vector<ScenarioRow> run_manifest(const RunManifest& manifest);

}  // namespace arcsim
