#include "arcsim/manifest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "arcsim/csv.hpp"
#include "arcsim/errors.hpp"
#include "arcsim/havok.hpp"

namespace arcsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw config_error("manifest line " + std::to_string(line) + ": not a number: " + v);
    }
}

long long parse_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const long long n = std::stoll(v, &pos);
        while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw config_error("manifest line " + std::to_string(line) + ": not an integer: " + v);
    }
}

struct PendingKey {
    int line;
    std::string key;
    std::string value;
};

ScenarioSpec build_scenario(const std::string& id, int id_line,
                            const std::vector<PendingKey>& keys) {
    ScenarioSpec spec;
    spec.id = id;
    spec.snr_db = std::numeric_limits<double>::quiet_NaN();

    bool kind_set = false;
    for (const PendingKey& k : keys) {
        if (k.key == "kind") {
            spec.kind = scenario_kind_from_string(k.value);
            kind_set = true;
        }
    }
    if (!kind_set) {
        throw config_error("manifest line " + std::to_string(id_line) + ": scenario " + id +
                           " has no kind");
    }

    const bool arc = is_arc_kind(spec.kind);
    for (const PendingKey& k : keys) {
        const int line = k.line;
        auto require = [&](bool ok, const char* where) {
            if (!ok) {
                throw config_error("manifest line " + std::to_string(line) + ": key " + k.key +
                                   " only applies to " + where + " scenarios");
            }
        };
        if (k.key == "kind") {
            continue;
        } else if (k.key == "extent") {
            require(arc, "arc");
            spec.arc.extent = parse_double(k.value, line);
        } else if (k.key == "duration") {
            require(arc, "arc");
            spec.arc.duration = parse_double(k.value, line);
        } else if (k.key == "offset") {
            require(arc, "arc");
            spec.arc.offset = parse_double(k.value, line);
        } else if (k.key == "m_coefficient") {
            require(arc, "arc");
            spec.arc.m_coefficient = parse_double(k.value, line);
        } else if (k.key == "grounding_resistance") {
            require(arc, "arc");
            spec.arc.grounding_resistance = parse_double(k.value, line);
        } else if (k.key == "snr_db") {
            require(spec.kind == ScenarioKind::arc_with_noise, "arc_with_noise");
            spec.snr_db = parse_double(k.value, line);
        } else if (k.key == "t_on") {
            require(spec.kind == ScenarioKind::load_switch, "load_switch");
            spec.t_on = parse_double(k.value, line);
        } else if (k.key == "t_off") {
            require(spec.kind == ScenarioKind::load_switch, "load_switch");
            spec.t_off = parse_double(k.value, line);
        } else if (k.key == "delta_power") {
            require(spec.kind == ScenarioKind::load_switch, "load_switch");
            spec.delta_power = parse_double(k.value, line);
        } else if (k.key == "stages") {
            require(spec.kind == ScenarioKind::load_switch, "load_switch");
            spec.stages = static_cast<int>(parse_int(k.value, line));
        } else if (k.key == "fault_resistance") {
            require(spec.kind == ScenarioKind::line_to_ground, "line_to_ground");
            spec.fault_resistance = parse_double(k.value, line);
        } else if (k.key == "inrush_magnitude") {
            require(spec.kind == ScenarioKind::arc_with_motor_load, "arc_with_motor_load");
            spec.inrush_magnitude = parse_double(k.value, line);
        } else if (k.key == "inrush_time_constant") {
            require(spec.kind == ScenarioKind::arc_with_motor_load, "arc_with_motor_load");
            spec.inrush_time_constant = parse_double(k.value, line);
        } else {
            throw config_error("manifest line " + std::to_string(line) + ": unknown scenario key " +
                               k.key);
        }
    }
    if (spec.kind == ScenarioKind::arc_with_noise && std::isnan(spec.snr_db)) {
        throw config_error("manifest line " + std::to_string(id_line) + ": scenario " + id +
                           " is arc_with_noise and requires snr_db");
    }
    return spec;
}

std::string pad(const std::string& s, std::size_t width) {
    std::string out = s;
    out.resize(std::max(width, s.size()), ' ');
    return out;
}

}  // namespace

DetectionThresholds parse_thresholds(const std::string& csv, const DetectionThresholds& base) {
    std::array<double, 4> vals{};
    std::size_t n = 0;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (n >= vals.size()) {
            throw config_error("thresholds need exactly four comma-separated values: " + csv);
        }
        vals[n++] = parse_double(trim(cell), 0);
    }
    if (n != vals.size()) {
        throw config_error("thresholds need exactly four comma-separated values: " + csv);
    }
    if (!(0.0 < vals[0] && vals[0] < vals[1] && vals[1] < vals[2] && vals[2] < vals[3])) {
        throw config_error("threshold band edges must be positive and strictly ascending: " + csv);
    }
    DetectionThresholds t = base;
    t.nonarc_max = vals[0];
    t.arc_min = vals[1];
    t.arc_max = vals[2];
    t.other_min = vals[3];
    return t;
}

RunManifest parse_manifest_text(const std::string& text) {
    RunManifest m;
    std::string cur_id;
    int cur_line = 0;
    std::vector<PendingKey> cur_keys;
    bool in_scenario = false;

    auto flush = [&]() {
        if (in_scenario) {
            m.scenarios.push_back(build_scenario(cur_id, cur_line, cur_keys));
            cur_keys.clear();
        }
    };

    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("manifest line " + std::to_string(line_no) +
                               ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw config_error("manifest line " + std::to_string(line_no) +
                               ": empty key or value");
        }

        if (key == "scenario") {
            flush();
            in_scenario = true;
            cur_id = value;
            cur_line = line_no;
            continue;
        }
        if (in_scenario) {
            cur_keys.push_back({line_no, key, value});
            continue;
        }

        if (key == "out_dir") m.out_dir = value;
        else if (key == "reps") m.reps = static_cast<int>(parse_int(value, line_no));
        else if (key == "seed") m.seed = static_cast<unsigned long long>(parse_int(value, line_no));
        else if (key == "q") m.q = static_cast<int>(parse_int(value, line_no));
        else if (key == "thresholds") m.thresholds = parse_thresholds(value, m.thresholds);
        else if (key == "source_peak_voltage") m.feeder.source_peak_voltage = parse_double(value, line_no);
        else if (key == "frequency") m.feeder.frequency = parse_double(value, line_no);
        else if (key == "source_impedance") m.feeder.source_impedance = parse_double(value, line_no);
        else if (key == "load_power") m.feeder.load_power = parse_double(value, line_no);
        else if (key == "load_count") m.feeder.load_count = static_cast<int>(parse_int(value, line_no));
        else if (key == "sample_rate") m.feeder.sample_rate = parse_double(value, line_no);
        else if (key == "horizon") m.feeder.horizon = parse_double(value, line_no);
        else if (key == "fault_start") m.feeder.fault_start = parse_double(value, line_no);
        else if (key == "fault_duration") m.feeder.fault_duration = parse_double(value, line_no);
        else {
            throw config_error("manifest line " + std::to_string(line_no) + ": unknown key " + key);
        }
    }
    flush();

    if (m.reps < 1) {
        throw config_error("manifest reps must be at least 1");
    }
    if (m.q < 2) {
        throw config_error("manifest q must be at least 2");
    }
    std::set<std::string> ids;
    for (const ScenarioSpec& s : m.scenarios) {
        if (s.id.empty() || !ids.insert(s.id).second) {
            throw config_error("scenario ids must be unique and non-empty: " + s.id);
        }
    }
    return m;
}

RunManifest parse_manifest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw config_error("cannot open manifest file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifest_text(ss.str());
}

RunManifest benchmark_manifest() {
    RunManifest m;
    m.out_dir = "benchmark";
    m.reps = 50;
    m.seed = 0;
    m.q = 40;
    m.with_expected = true;

    auto arc = [](const std::string& id, ScenarioKind kind, double extent, double duration,
                  double grounding) {
        ScenarioSpec s;
        s.id = id;
        s.kind = kind;
        s.arc.extent = extent;
        s.arc.duration = duration;
        s.arc.offset = 0.2;
        s.arc.m_coefficient = 0.0;
        s.arc.grounding_resistance = grounding;
        return s;
    };

    m.scenarios.push_back(arc("A", ScenarioKind::low_current_arc, 5000.0, 0.00413, 1000.0));
    m.scenarios.push_back(arc("B", ScenarioKind::high_current_arc, 5000.0, 0.00413, 0.001));
    m.scenarios.push_back(arc("C", ScenarioKind::arc_wet_cement, 50000.0, 0.007, 50.0));
    m.scenarios.push_back(arc("D", ScenarioKind::arc_dry_soil, 4708.0, 0.007, 50.0));

    ScenarioSpec e;
    e.id = "E";
    e.kind = ScenarioKind::load_switch;
    e.t_on = 0.2;
    e.t_off = 0.3;
    e.delta_power = 5.0;
    e.stages = 4;
    m.scenarios.push_back(e);

    ScenarioSpec f;
    f.id = "F";
    f.kind = ScenarioKind::line_to_ground;
    f.fault_resistance = 1.0;
    m.scenarios.push_back(f);

    ScenarioSpec ga = arc("Ga", ScenarioKind::arc_with_motor_load, 5000.0, 0.00413, 1000.0);
    ga.inrush_magnitude = 0.3;
    ga.inrush_time_constant = 0.05;
    m.scenarios.push_back(ga);

    ScenarioSpec gb = arc("Gb", ScenarioKind::arc_with_motor_load, 5000.0, 0.00413, 0.001);
    gb.inrush_magnitude = 0.3;
    gb.inrush_time_constant = 0.05;
    m.scenarios.push_back(gb);

    ScenarioSpec h = arc("H", ScenarioKind::arc_with_noise, 5000.0, 0.00413, 1000.0);
    h.snr_db = 70.0;
    m.scenarios.push_back(h);

    return m;
}

Verdict expected_verdict(ScenarioKind kind) {
    if (is_arc_kind(kind)) {
        return Verdict::arc_fault;
    }
    if (kind == ScenarioKind::load_switch) {
        return Verdict::non_arcing;
    }
    return Verdict::other_fault;
}

std::vector<ScenarioRow> run_manifest(const RunManifest& manifest) {
    namespace fs = std::filesystem;
    const fs::path out(manifest.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    {
        const fs::path probe = out / ".write_probe";
        std::FILE* f = std::fopen(probe.string().c_str(), "wb");
        if (f == nullptr || std::fputc('x', f) == EOF) {
            if (f != nullptr) std::fclose(f);
            throw config_error("output directory is not writable: " + manifest.out_dir);
        }
        std::fclose(f);
        fs::remove(probe, ec);
    }
    if (manifest.reps < 1) {
        throw config_error("reps must be at least 1");
    }

    std::vector<ScenarioRow> rows;
    std::string reports;
    if (manifest.scenarios.empty()) {
        std::fprintf(stderr, "warning: manifest contains no scenarios; nothing to run\n");
    }

    for (const ScenarioSpec& spec : manifest.scenarios) {
        ScenarioRow row;
        row.id = spec.id;
        row.kind = spec.kind;
        row.spec = &spec;
        try {
            for (int rep = 0; rep < manifest.reps; ++rep) {
                const unsigned long long seed = manifest.seed + static_cast<unsigned>(rep);
                const CurrentTrace trace = simulate(manifest.feeder, spec, seed);
                const ForcingSignal forcing =
                    forcing_signal(trace.samples, trace.dt, 0.0, manifest.q);
                const DetectionResult res = detect(forcing, manifest.feeder.fault_start,
                                                   manifest.feeder.fault_duration,
                                                   manifest.thresholds);
                if (rep == 0) {
                    write_csv(trace, (out / (spec.id + "_trace.csv")).string());
                    write_csv(forcing, (out / (spec.id + "_forcing.csv")).string());
                    row.rep0_peak = res.peak;
                }
                row.reps.push_back(res);
                reports += "scenario=" + spec.id + " rep=" + std::to_string(rep) +
                           " seed=" + std::to_string(seed) + " verdict=" +
                           to_string(res.verdict) + " peak=" + format_value(res.peak) +
                           " deviation_time_s=" + format_value(res.deviation_time) +
                           " latency_ms=" + format_value(res.latency_ms) + "\n";
            }
        } catch (const config_error& e) {
            throw config_error("scenario " + spec.id + ": " + e.what());
        } catch (const decomposition_error& e) {
            throw decomposition_error("scenario " + spec.id + ": " + e.what());
        } catch (const simulation_error& e) {
            throw simulation_error("scenario " + spec.id + ": " + e.what());
        }

        std::map<Verdict, int> counts;
        int matches = 0;
        double lat_sum = 0.0;
        int lat_n = 0;
        for (const DetectionResult& r : row.reps) {
            ++counts[r.verdict];
            if (r.verdict == expected_verdict(spec.kind)) ++matches;
            if (!std::isnan(r.latency_ms)) {
                lat_sum += r.latency_ms;
                ++lat_n;
            }
        }
        row.modal_verdict = Verdict::no_event;
        int best = -1;
        for (const auto& [verdict, count] : counts) {
            if (count > best) {
                best = count;
                row.modal_verdict = verdict;
            }
        }
        row.mean_latency_ms =
            (lat_n > 0) ? lat_sum / lat_n : std::numeric_limits<double>::quiet_NaN();
        row.match_rate = static_cast<double>(matches) / static_cast<double>(row.reps.size());
        rows.push_back(std::move(row));
    }

    // Summary table: aligned text plus a CSV twin with identical content.
    std::vector<std::string> header = {"case",         "extent", "duration",   "offset",
                                       "r_t",          "peak_forcing", "latency_ms", "verdict"};
    if (manifest.with_expected) {
        header.push_back("expected");
        header.push_back("match_rate");
    }
    std::vector<std::vector<std::string>> cells;
    for (const ScenarioRow& row : rows) {
        std::vector<std::string> c;
        c.push_back(row.id);
        if (is_arc_kind(row.kind)) {
            c.push_back(format_value(row.spec->arc.extent));
            c.push_back(format_value(row.spec->arc.duration));
            c.push_back(format_value(row.spec->arc.offset));
            c.push_back(format_value(row.spec->arc.grounding_resistance));
        } else {
            c.insert(c.end(), {"-", "-", "-", "-"});
        }
        c.push_back(format_value(row.rep0_peak));
        c.push_back(format_value(row.mean_latency_ms));
        c.push_back(to_string(row.modal_verdict));
        if (manifest.with_expected) {
            c.push_back(to_string(expected_verdict(row.kind)));
            c.push_back(format_value(row.match_rate));
        }
        cells.push_back(std::move(c));
    }

    std::vector<std::size_t> widths(header.size());
    for (std::size_t j = 0; j < header.size(); ++j) {
        widths[j] = header[j].size();
        for (const auto& c : cells) {
            widths[j] = std::max(widths[j], c[j].size());
        }
    }
    auto append_row = [&](std::string& text, std::string& csv,
                          const std::vector<std::string>& row) {
        std::string line;
        for (std::size_t j = 0; j < row.size(); ++j) {
            line += pad(row[j], widths[j]);
            if (j + 1 < row.size()) line += "  ";
            csv += row[j];
            csv += (j + 1 < row.size()) ? "," : "\n";
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        text += line + "\n";
    };
    std::string text;
    std::string csv;
    append_row(text, csv, header);
    for (const auto& c : cells) {
        append_row(text, csv, c);
    }

    write_text_file((out / "reports.txt").string(), reports);
    write_text_file((out / "summary.txt").string(), text);
    write_text_file((out / "summary.csv").string(), csv);
    return rows;
}

}  // namespace arcsim
