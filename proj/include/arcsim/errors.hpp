#pragma once

#include <stdexcept>
#include <string>

namespace arcsim {

// Base class for all toolkit failures.  Subclasses map onto the CLI's exit
// codes: config_error -> 2, simulation_error -> 3, decomposition_error -> 4.
class toolkit_error : public std::runtime_error {
public:
    explicit toolkit_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad manifest / scenario configuration / unusable output location.
class config_error : public toolkit_error {
public:
    explicit config_error(const std::string& msg) : toolkit_error(msg) {}
};

// Waveform generation failure (invalid arc parameters, diverging resistance
// profile, non-positive fault branch impedance, ...).
class simulation_error : public toolkit_error {
public:
    explicit simulation_error(const std::string& msg) : toolkit_error(msg) {}
};

// Numerical failure inside the Hankel/SVD/regression pipeline.
class decomposition_error : public toolkit_error {
public:
    explicit decomposition_error(const std::string& msg) : toolkit_error(msg) {}
};

}  // namespace arcsim
