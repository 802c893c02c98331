#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "arcsim/detector.hpp"
#include "arcsim/errors.hpp"

using namespace arcsim;

namespace {

// Quiet forcing with optional spikes: |v| = floor_level everywhere, plus
// (time, value) spikes.
ForcingSignal synthetic(double floor_level, const std::vector<std::pair<double, double>>& spikes,
                        double dt = 5e-5, int n = 9961) {
    ForcingSignal f;
    f.rank = 3;
    f.time.resize(n);
    f.values.resize(n);
    for (int j = 0; j < n; ++j) {
        f.time[j] = j * dt;
        f.values[j] = (j % 2 == 0) ? floor_level : -floor_level;
    }
    for (const auto& [t, v] : spikes) {
        f.values[static_cast<int>(std::llround(t / dt))] = v;
    }
    return f;
}

}  // namespace

TEST_CASE("classification bands") {
    const DetectionThresholds th;
    CHECK(classify(-0.1035, th) == Verdict::arc_fault);
    CHECK(classify(0.0429, th) == Verdict::non_arcing);
    CHECK(classify(-0.202, th) == Verdict::other_fault);
    CHECK(classify(0.05, th) == Verdict::inconclusive);

    SUBCASE("edges") {
        CHECK(classify(0.0449999, th) == Verdict::non_arcing);
        CHECK(classify(0.045, th) == Verdict::inconclusive);
        CHECK(classify(0.06, th) == Verdict::arc_fault);
        CHECK(classify(0.18, th) == Verdict::arc_fault);
        CHECK(classify(0.1800001, th) == Verdict::inconclusive);
        CHECK(classify(0.2, th) == Verdict::inconclusive);
        CHECK(classify(0.2000001, th) == Verdict::other_fault);
        CHECK(classify(-0.12, th) == Verdict::arc_fault);
    }
    SUBCASE("every magnitude belongs to exactly one band") {
        for (int i = 0; i <= 3000; ++i) {
            const double p = i * 1e-4;
            const Verdict v = classify(p, th);
            Verdict expect;
            if (p < th.nonarc_max) expect = Verdict::non_arcing;
            else if (p < th.arc_min) expect = Verdict::inconclusive;
            else if (p <= th.arc_max) expect = Verdict::arc_fault;
            else if (p <= th.other_min) expect = Verdict::inconclusive;
            else expect = Verdict::other_fault;
            CHECK(v == expect);
            CHECK(classify(-p, th) == expect);
        }
    }
}

TEST_CASE("deviation detection and latency") {
    SUBCASE("spike after fault start") {
        const ForcingSignal f = synthetic(0.001, {{0.25, -0.1}});
        const DetectionResult r = detect(f, 0.2, 0.1);
        CHECK(r.baseline == doctest::Approx(0.001));
        CHECK(r.threshold == doctest::Approx(0.0225));  // the floor dominates 5 x 0.001
        CHECK(r.deviation_time == doctest::Approx(0.25));
        CHECK(r.peak == doctest::Approx(-0.1));
        CHECK(r.verdict == Verdict::arc_fault);
        CHECK(r.latency_ms == doctest::Approx(50.0));
    }
    SUBCASE("a large baseline raises the trigger above the floor") {
        const ForcingSignal f = synthetic(0.01, {{0.25, -0.1}});
        const DetectionResult r = detect(f, 0.2, 0.1);
        CHECK(r.threshold == doctest::Approx(0.05));
    }
    SUBCASE("no deviation yields NoEvent with NaN times") {
        const ForcingSignal f = synthetic(0.001, {});
        const DetectionResult r = detect(f, 0.2, 0.1);
        CHECK(r.verdict == Verdict::no_event);
        CHECK(r.peak == 0.0);
        CHECK(std::isnan(r.deviation_time));
        CHECK(std::isnan(r.latency_ms));
    }
    SUBCASE("latency is clamped at zero for early deviations") {
        const ForcingSignal f = synthetic(0.001, {{0.16, 0.07}});
        const DetectionResult r = detect(f, 0.2, 0.1);
        CHECK(r.deviation_time == doctest::Approx(0.16));
        CHECK(r.latency_ms == 0.0);
    }
    SUBCASE("the peak search stops at the end of the fault window") {
        const ForcingSignal f = synthetic(0.001, {{0.25, -0.1}, {0.45, 0.5}});
        const DetectionResult r = detect(f, 0.2, 0.1);
        CHECK(r.peak == doctest::Approx(-0.1));
        CHECK(r.verdict == Verdict::arc_fault);
    }
    SUBCASE("an empty baseline window is an error") {
        ForcingSignal f = synthetic(0.001, {});
        for (double& t : f.time) t += 0.2;  // first sample now at 0.2 s
        CHECK_THROWS_AS(detect(f, 0.2, 0.1), config_error);
    }
}

TEST_CASE("latency is monotone in the deviation factor") {
    // Rising staircase after the fault: a stricter factor can only trigger
    // later (or not at all).
    ForcingSignal f = synthetic(0.004, {});
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        if (f.time[j] >= 0.2) {
            f.values[j] = 0.02 + 0.4 * (f.time[j] - 0.2);
        }
    }
    double prev = -1.0;
    for (double factor : {5.0, 8.0, 12.0, 20.0}) {
        DetectionThresholds th;
        th.deviation_factor = factor;
        const DetectionResult r = detect(f, 0.2, 0.1, th);
        REQUIRE_FALSE(std::isnan(r.latency_ms));
        CHECK(r.latency_ms >= prev);
        prev = r.latency_ms;
    }
}

TEST_CASE("detection is invariant under joint scaling") {
    const ForcingSignal f = synthetic(0.002, {{0.23, 0.1}, {0.26, -0.15}});
    const DetectionResult r1 = detect(f, 0.2, 0.1);

    const double scale = 3.0;
    ForcingSignal g = f;
    for (double& v : g.values) v *= scale;
    DetectionThresholds th;
    th.nonarc_max *= scale;
    th.arc_min *= scale;
    th.arc_max *= scale;
    th.other_min *= scale;
    const DetectionResult r2 = detect(g, 0.2, 0.1, th);

    CHECK(r1.verdict == r2.verdict);
    CHECK(r1.deviation_time == doctest::Approx(r2.deviation_time));
    CHECK(r1.latency_ms == doctest::Approx(r2.latency_ms));
    CHECK(r2.peak == doctest::Approx(scale * r1.peak));
}

TEST_CASE("batch aggregation") {
    auto result = [](Verdict v, double lat) {
        DetectionResult r;
        r.verdict = v;
        r.latency_ms = lat;
        if (v == Verdict::no_event) r.latency_ms = std::nan("");
        return r;
    };

    SUBCASE("rates and latency statistics") {
        std::vector<BatchItem> items = {
            {true, result(Verdict::arc_fault, 1.0)},
            {true, result(Verdict::arc_fault, 3.0)},
            {true, result(Verdict::no_event, 0.0)},
            {false, result(Verdict::non_arcing, 5.0)},
            {false, result(Verdict::arc_fault, 2.0)},
        };
        const BatchSummary s = batch_evaluate(items);
        CHECK(s.arc_count == 3);
        CHECK(s.non_arc_count == 2);
        CHECK(s.arc_detection_rate == doctest::Approx(2.0 / 3.0));
        CHECK(s.false_positive_rate == doctest::Approx(0.5));
        CHECK(s.mean_latency_ms == doctest::Approx(2.0));
        CHECK(s.max_latency_ms == doctest::Approx(3.0));
    }
    SUBCASE("empty groups report NaN, not zero") {
        const BatchSummary s1 = batch_evaluate({{true, result(Verdict::arc_fault, 1.0)}});
        CHECK(std::isnan(s1.false_positive_rate));
        const BatchSummary s2 = batch_evaluate({{false, result(Verdict::non_arcing, 1.0)}});
        CHECK(std::isnan(s2.arc_detection_rate));
        CHECK(std::isnan(s2.mean_latency_ms));
    }
}

TEST_CASE("report line format") {
    DetectionResult r;
    r.verdict = Verdict::arc_fault;
    r.peak = -0.1035;
    r.deviation_time = 0.20055;
    r.latency_ms = 0.55;
    CHECK(format_report_line("A", r) ==
          "scenario=A verdict=ArcFault peak=-0.1035 deviation_time_s=0.20055 latency_ms=0.55");
}
