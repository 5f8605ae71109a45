#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "aeris/geometry.hpp"
#include "aeris/ou_noise.hpp"
#include "aeris/protocol.hpp"
#include "aeris/sensor.hpp"
#include "aeris/toml.hpp"
#include "aeris/types.hpp"

namespace aeris {

struct AnalysisConfig {
    int zero_pad_factor = 4;
    double min_prominence = 5.0;
};

// radius/depth sweep for the geometry command
struct GeometrySweepConfig {
    double depth_m = 5e-9;
    std::array<double, 3> nv_axis = {0.0, 0.0, 1.0};
    int resolution = 200;
    std::vector<double> eta_grid;
};

struct RobustnessConfig {
    std::vector<double> sigmas;  // relative OU amplitudes
    std::size_t realizations = 200;
};

// Fully resolved experiment description (SI units). TOML presets use
// unit-suffixed keys (tau_ms, rabi_khz, ...) and may describe the sample
// either as explicit spectral components or as chemistry-level multiplets;
// both resolve to SampleSpec.components at load time, so the JSON round trip
// below carries only resolved values.
struct ExperimentConfig {
    std::uint64_t seed = 0;
    SampleSpec sample;
    ProtocolSchedule schedule;
    SensorModel sensor;
    std::optional<NoiseModel> noise;
    std::size_t realizations = 1;
    AnalysisConfig analysis;
    std::optional<GeometrySweepConfig> geometry;
    std::optional<RobustnessConfig> robustness;
};

ExperimentConfig config_from_toml(const toml::Table& root);
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

// keeps schedule.variant and the sensor modulation paired
void apply_variant(ExperimentConfig& config, Variant variant);

std::uint64_t fnv1a64(std::string_view bytes);

// FNV-1a of the canonical (sorted-key) resolved-config JSON
std::string config_hash_hex(const ExperimentConfig& config);

} // namespace aeris
