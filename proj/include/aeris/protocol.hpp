#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "aeris/ou_noise.hpp"
#include "aeris/sensor.hpp"
#include "aeris/types.hpp"

namespace aeris {

// standard: one x-phase rotation per stage, XY4 readout.
// robust:   the stage splits into two phase-inverted halves (phi, phi+pi)
//           read out by two concatenated spin echoes; first-order control-
//           amplitude errors cancel within the stage.
enum class Variant { standard, robust };

struct ProtocolSchedule {
    double tau_s = 0.0;            // free precession per cycle
    double t_m_s = 0.0;            // rotation-stage length
    std::size_t cycles = 0;
    double rabi_hz = 0.0;
    double trigger_phase_rad = 0;  // 0 -> cosine record, pi/2 -> sine record
    Variant variant = Variant::standard;

    void validate() const;
};

struct RecordMeta {
    std::string sample_id;
    std::uint64_t seed = 0;
    bool noisy = false;
    std::string note;
};

// One stroboscopic record: values[n] at precession time n*tau.
struct MeasurementRecord {
    std::vector<double> values;
    std::vector<double> precession_times_s;
    double trigger_phase_rad = 0.0;
    ProtocolSchedule schedule;
    RecordMeta meta;
};

// Full sequence: resonant trigger pulse (quarter Rabi period), then per cycle
// free precession followed by a rotation stage whose nuclear z-signal is
// integrated by the sensor. Cycle 0's stage runs immediately after the
// trigger (zero accumulated precession). A noise model, when given, applies
// one shared control-amplitude trajectory per stage (common RF coil) across
// all spectral components, the trigger included.
MeasurementRecord run_aeris(const SampleSpec& sample,
                            const ProtocolSchedule& schedule,
                            const SensorModel& sensor,
                            const NoiseModel* noise = nullptr);

// Convenience wrapper forcing the robust variant.
MeasurementRecord run_aeris_robust(const SampleSpec& sample,
                                   ProtocolSchedule schedule,
                                   const SensorModel& sensor,
                                   const NoiseModel* noise = nullptr);

// Mean record over noise realizations; runner(seed) must yield records with
// identical grids. Runs on a small thread pool, reduction in seed order.
MeasurementRecord average_realizations(
    const std::function<MeasurementRecord(std::uint64_t)>& runner,
    std::span<const std::uint64_t> seeds);

} // namespace aeris
