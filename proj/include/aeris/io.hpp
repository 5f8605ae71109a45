#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aeris/config.hpp"
#include "aeris/geometry.hpp"
#include "aeris/protocol.hpp"
#include "aeris/spectrum.hpp"

namespace aeris {

// CSV conventions: '.' decimal separator, LF endings, one header row.
// '#' comment lines carry provenance (config hash, seed). JSON outputs embed
// the same fields. No timestamps anywhere: identical inputs give
// byte-identical outputs.

void write_record_csv(const std::filesystem::path& path,
                      const MeasurementRecord& rec,
                      const std::string& config_hash);

// Restores values, precession times, trigger phase and meta; the schedule is
// not stored in the CSV and must be injected from metadata.json.
MeasurementRecord read_record_csv(const std::filesystem::path& path);

void write_metadata_json(const std::filesystem::path& path,
                         const ExperimentConfig& config,
                         const std::string& config_hash);

ExperimentConfig read_metadata_json(const std::filesystem::path& path,
                                    std::string* config_hash = nullptr);

struct PeakReport {
    Peak peak;
    PeakFit fit;
    bool fit_ok = false;
    std::string fit_error;
};

void write_spectrum_json(const std::filesystem::path& path,
                         const Spectrum& spectrum, std::uint64_t seed,
                         const std::string& config_hash);

void write_peaks_json(const std::filesystem::path& path,
                      const std::vector<PeakReport>& reports,
                      std::uint64_t seed, const std::string& config_hash);

void write_geometry_csv(const std::filesystem::path& path,
                        const std::vector<double>& etas,
                        const std::vector<GeometricFactors>& factors,
                        const std::string& config_hash);

void write_noise_curve_csv(const std::filesystem::path& path,
                           const std::vector<NoiseSweepPoint>& points,
                           const std::string& config_hash);

} // namespace aeris
