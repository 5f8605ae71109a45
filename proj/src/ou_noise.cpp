#include "aeris/ou_noise.hpp"

#include <cmath>

#include "aeris/constants.hpp"

namespace aeris {

void NoiseModel::validate() const {
    if (!(sigma >= 0)) throw ConfigError("noise.sigma: must be >= 0");
    if (!(corr_time_s > 0))
        throw ConfigError("noise.corr_time_s: must be > 0");
    if (!(step_s > 0)) throw ConfigError("noise.step_s: must be > 0");
    if (!std::isfinite(amp_shift))
        throw ConfigError("noise.amp_shift: must be finite");
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double standard_normal(std::mt19937_64& rng) {
    // (0,1] x [0,1) uniforms from the top 53 bits
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    const double u1 = 1.0 - static_cast<double>(rng() >> 11) * scale;
    const double u2 = static_cast<double>(rng() >> 11) * scale;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

OuTrajectory make_ou_trajectory(const NoiseModel& noise, double duration_s,
                                std::mt19937_64& rng) {
    noise.validate();
    if (!(duration_s >= 0))
        throw ConfigError("ou_trajectory: duration must be >= 0");

    const auto n = static_cast<std::size_t>(
        std::ceil(duration_s / noise.step_s - 1e-9));
    OuTrajectory traj;
    traj.step_s = noise.step_s;
    traj.samples.resize(n + 1);

    if (noise.sigma == 0.0) {
        for (auto& s : traj.samples) s = noise.amp_shift;
        return traj;
    }
    const double decay = std::exp(-noise.step_s / noise.corr_time_s);
    const double kick = noise.sigma * std::sqrt(1.0 - decay * decay);
    double eps = noise.sigma * standard_normal(rng);  // stationary start
    traj.samples[0] = eps + noise.amp_shift;
    for (std::size_t i = 1; i <= n; ++i) {
        eps = eps * decay + kick * standard_normal(rng);
        traj.samples[i] = eps + noise.amp_shift;
    }
    return traj;
}

OuTrajectory ou_trajectory(const NoiseModel& noise, double duration_s) {
    std::mt19937_64 rng(noise.seed);
    return make_ou_trajectory(noise, duration_s, rng);
}

} // namespace aeris
