#pragma once

#include <string>
#include <vector>

#include "arcsim/havok.hpp"

namespace arcsim {

enum class Verdict {
    no_event,
    non_arcing,
    inconclusive,
    arc_fault,
    other_fault,
};

const char* to_string(Verdict verdict);

// Classification bands on the signed forcing peak p and the deviation
// trigger.  The bands partition the magnitude axis:
//   |p| <  nonarc_max            -> NonArcing
//   nonarc_max <= |p| < arc_min  -> Inconclusive
//   arc_min <= |p| <= arc_max    -> ArcFault
//   arc_max <  |p| <= other_min  -> Inconclusive
//   |p| >  other_min             -> OtherFault
// The deviation threshold is deviation_factor times the quiescent baseline,
// floored at half of nonarc_max.
struct DetectionThresholds {
    double nonarc_max = 0.045;
    double arc_min = 0.06;
    double arc_max = 0.18;
    double other_min = 0.2;
    double baseline_window = 0.15;  // s of forcing used as quiescent reference
    double deviation_factor = 5.0;
};

struct DetectionResult {
    Verdict verdict = Verdict::no_event;
    double peak = 0.0;            // signed extremal forcing after deviation
    double baseline = 0.0;        // max |v_r| in the quiescent window
    double threshold = 0.0;       // deviation trigger level
    double deviation_time = 0.0;  // s, NaN when no deviation occurs
    double latency_ms = 0.0;      // deviation time minus fault start, clamped at 0; NaN for NoEvent
};

// Verdict for a signed peak under the band layout above.
Verdict classify(double peak, const DetectionThresholds& thresholds);

// Runs deviation detection and classification on a forcing signal.  The
// quiescent baseline is max |v_r| over [0, baseline_window); a forcing
// signal with no samples in that window raises config_error.  The signed
// peak is the extremal sample between the deviation and the end of the fault
// window.
DetectionResult detect(const ForcingSignal& forcing, double fault_start, double fault_duration,
                       const DetectionThresholds& thresholds = {});

// One labelled detection outcome for aggregate statistics.
struct BatchItem {
    bool arc_expected = false;
    DetectionResult result;
};

// Aggregates over a batch of detections.  Rates are NaN when the
// corresponding group is empty (never silently 0).  Latency statistics cover
// the ArcFault verdicts among arc-expected items.
struct BatchSummary {
    double arc_detection_rate = 0.0;
    double false_positive_rate = 0.0;
    double mean_latency_ms = 0.0;
    double max_latency_ms = 0.0;
    int arc_count = 0;
    int non_arc_count = 0;
};

BatchSummary batch_evaluate(const std::vector<BatchItem>& items);

// Single-line key=value report:
// scenario=<id> verdict=<v> peak=<p> deviation_time_s=<t> latency_ms=<l>
std::string format_report_line(const std::string& scenario, const DetectionResult& result);

}  // namespace arcsim
