#pragma once

#include <numbers>

namespace aeris {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Fundamental constants (SI). Gyromagnetic ratios are angular (rad s^-1 T^-1);
// user-facing frequencies elsewhere are ordinary Hz.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;        // J s
    double mu0 = 1.25663706212e-6;        // T m / A
    double k_b = 1.380649e-23;            // J / K
    double gamma_n = 2.6752218744e8;      // proton, rad s^-1 T^-1
    double gamma_e = two_pi * 28.024e9;   // NV electron, rad s^-1 T^-1

    void validate() const;                // throws ConfigError
};

} // namespace aeris
