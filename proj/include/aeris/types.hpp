#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace aeris {

// Error taxonomy; the CLI maps these to distinct exit codes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PhysicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One spectral line: detuning from the RF carrier (Hz, typically negative for
// shifts downfield of the reference) and its field amplitude at the sensor.
struct SpectralComponent {
    double detuning_hz = 0.0;
    double amplitude_t = 0.0;
};

using SpectralModel = std::vector<SpectralComponent>;

// Magnetization in the rotating frame, |m| <= 1, thermal state = (0,0,1).
struct Magnetization {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline Magnetization operator+(const Magnetization& a, const Magnetization& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline Magnetization operator-(const Magnetization& a, const Magnetization& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline Magnetization operator*(double s, const Magnetization& m) {
    return {s * m.x, s * m.y, s * m.z};
}

// RF pulse in the rotating frame. phase_rad = 0 drives about +x; the rotation
// axis is (cos phi, -sin phi, 0) so that a phase of pi/2 tilts thermal
// polarization onto -x (sine-record convention).
struct Pulse {
    double rabi_hz = 0.0;
    double phase_rad = 0.0;
    double duration_s = 0.0;
};

// Sample physics independent of the pulse schedule.
struct SampleSpec {
    double b_ext_t = 0.0;        // bias field
    double temperature_k = 0.0;
    double t1_s = 0.0;           // may be +inf
    double t2_star_s = 0.0;      // may be +inf; requires t1 >= t2*
    double rf_carrier_hz = 0.0;  // reference (carrier) frequency
    SpectralModel components;

    void validate() const;  // throws ConfigError with the offending field
};

} // namespace aeris
