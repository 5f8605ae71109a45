#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "aeris/types.hpp"

namespace aeris {

// Ornstein-Uhlenbeck model for relative control-amplitude error. The drive
// sees Omega * (1 + eps(t) + amp_shift) with eps a stationary OU process of
// standard deviation sigma and correlation time corr_time_s.
struct NoiseModel {
    double sigma = 0.0;          // relative, dimensionless
    double corr_time_s = 1e-3;
    double amp_shift = 0.0;      // constant relative offset
    double step_s = 1e-6;        // sampling grid for trajectories
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

// SplitMix64 round; used to derive decorrelated sub-seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

// One standard normal via Box-Muller (two uniform draws, no caching).
double standard_normal(std::mt19937_64& rng);

// Sampled OU path over [0, duration], piecewise-constant hold between the
// uniform samples. value() includes amp_shift.
struct OuTrajectory {
    std::vector<double> samples;  // eps + amp_shift at i*step_s
    double step_s = 0.0;

    double value(double t) const {
        if (samples.empty()) return 0.0;
        auto i = static_cast<std::size_t>(t / step_s);
        if (i >= samples.size()) i = samples.size() - 1;
        return samples[i];
    }
};

// Exact OU discretization driven by an external RNG stream:
//   eps' = eps*exp(-dt/tau) + sigma*sqrt(1 - exp(-2 dt/tau)) * N(0,1),
// initialized from the stationary distribution N(0, sigma^2).
OuTrajectory make_ou_trajectory(const NoiseModel& noise, double duration_s,
                                std::mt19937_64& rng);

// Self-seeded variant (fresh mt19937_64 from noise.seed); deterministic.
OuTrajectory ou_trajectory(const NoiseModel& noise, double duration_s);

} // namespace aeris
