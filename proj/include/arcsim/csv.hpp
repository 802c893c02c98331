#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "arcsim/errors.hpp"

namespace arcsim {

// All CSV artifacts use 9 significant digits and LF line endings so that
// repeated runs with identical seeds are byte-identical across platforms.
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file " + path);
    out << content;
    if (!out) throw config_error("write failure on " + path);
}

inline void write_two_column_csv(const std::string& path, const std::string& header,
                                 const std::vector<double>& col0,
                                 const std::vector<double>& col1) {
    if (col0.size() != col1.size())
        throw config_error("csv column length mismatch for " + path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file " + path);
    out << header << "\n";
    for (std::size_t i = 0; i < col0.size(); ++i)
        out << format_value(col0[i]) << "," << format_value(col1[i]) << "\n";
    if (!out) throw config_error("write failure on " + path);
}

}  // namespace arcsim
