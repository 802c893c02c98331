#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace arcsim {

inline constexpr double kPi = 3.14159265358979323846;

// Deterministic random stream with a fully specified mapping from engine
// output to doubles.  std::uniform_real_distribution and
// std::normal_distribution are implementation-defined, which would break the
// bit-reproducibility guarantees of the trace generator, so the uniform
// mapping (53-bit mantissa draw) and the Gaussian transform (Box-Muller) are
// spelled out here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform double in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Standard normal deviate via the Box-Muller transform; the second
    // variate of each pair is cached so consecutive calls consume the
    // underlying stream two uniforms at a time.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace arcsim
