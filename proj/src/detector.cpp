#include "arcsim/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arcsim/csv.hpp"
#include "arcsim/errors.hpp"

namespace arcsim {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::no_event: return "NoEvent";
        case Verdict::non_arcing: return "NonArcing";
        case Verdict::inconclusive: return "Inconclusive";
        case Verdict::arc_fault: return "ArcFault";
        case Verdict::other_fault: return "OtherFault";
    }
    return "unknown";
}

Verdict classify(double peak, const DetectionThresholds& thresholds) {
    const double a = std::abs(peak);
    if (a > thresholds.other_min) {
        return Verdict::other_fault;
    }
    if (a > thresholds.arc_max) {
        return Verdict::inconclusive;
    }
    if (a >= thresholds.arc_min) {
        return Verdict::arc_fault;
    }
    if (a >= thresholds.nonarc_max) {
        return Verdict::inconclusive;
    }
    return Verdict::non_arcing;
}

DetectionResult detect(const ForcingSignal& forcing, double fault_start, double fault_duration,
                       const DetectionThresholds& thresholds) {
    DetectionResult out;
    out.deviation_time = kNan;
    out.latency_ms = kNan;

    double baseline = -1.0;
    for (std::size_t j = 0; j < forcing.values.size(); ++j) {
        const double t = forcing.time[j];
        if (t >= 0.0 && t < thresholds.baseline_window) {
            baseline = std::max(baseline, std::abs(forcing.values[j]));
        }
    }
    if (baseline < 0.0) {
        throw config_error("forcing signal has no samples in the quiescent baseline window");
    }
    out.baseline = baseline;
    out.threshold =
        std::max(thresholds.deviation_factor * baseline, 0.5 * thresholds.nonarc_max);

    std::size_t dev = forcing.values.size();
    for (std::size_t j = 0; j < forcing.values.size(); ++j) {
        if (std::abs(forcing.values[j]) > out.threshold) {
            dev = j;
            break;
        }
    }
    if (dev == forcing.values.size()) {
        return out;  // NoEvent
    }
    out.deviation_time = forcing.time[dev];

    double peak = forcing.values[dev];
    const double window_end = fault_start + fault_duration;
    for (std::size_t j = dev; j < forcing.values.size(); ++j) {
        const double t = forcing.time[j];
        if (t > window_end) {
            break;
        }
        if (std::abs(forcing.values[j]) > std::abs(peak)) {
            peak = forcing.values[j];
        }
    }
    out.peak = peak;
    out.verdict = classify(peak, thresholds);
    out.latency_ms = std::max(0.0, (out.deviation_time - fault_start) * 1000.0);
    return out;
}

BatchSummary batch_evaluate(const std::vector<BatchItem>& items) {
    BatchSummary s;
    int arc_hits = 0;
    int fp = 0;
    int lat_n = 0;
    double lat_sum = 0.0;
    double lat_max = 0.0;
    for (const BatchItem& item : items) {
        const bool is_arc_verdict = item.result.verdict == Verdict::arc_fault;
        if (item.arc_expected) {
            ++s.arc_count;
            if (is_arc_verdict) {
                ++arc_hits;
                ++lat_n;
                lat_sum += item.result.latency_ms;
                lat_max = std::max(lat_max, item.result.latency_ms);
            }
        } else {
            ++s.non_arc_count;
            if (is_arc_verdict) {
                ++fp;
            }
        }
    }
    s.arc_detection_rate = (s.arc_count > 0) ? static_cast<double>(arc_hits) / s.arc_count : kNan;
    s.false_positive_rate =
        (s.non_arc_count > 0) ? static_cast<double>(fp) / s.non_arc_count : kNan;
    s.mean_latency_ms = (lat_n > 0) ? lat_sum / lat_n : kNan;
    s.max_latency_ms = (lat_n > 0) ? lat_max : kNan;
    return s;
}

std::string format_report_line(const std::string& scenario, const DetectionResult& result) {
    std::string line = "scenario=" + scenario;
    line += " verdict=";
    line += to_string(result.verdict);
    line += " peak=" + format_value(result.peak);
    line += " deviation_time_s=" + format_value(result.deviation_time);
    line += " latency_ms=" + format_value(result.latency_ms);
    return line;
}

}  // namespace arcsim
