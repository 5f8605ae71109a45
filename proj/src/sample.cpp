#include "aeris/sample.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace aeris {

void PhysicalConstants::validate() const {
    if (!(hbar > 0) || !(mu0 > 0) || !(k_b > 0))
        throw ConfigError("constants: hbar, mu0, k_b must be positive");
    if (!(gamma_n > 0) || !(gamma_e > 0))
        throw ConfigError("constants: gyromagnetic ratios must be positive");
}

void SampleSpec::validate() const {
    if (!(b_ext_t > 0)) throw ConfigError("sample.b_ext_t: must be > 0");
    if (!(temperature_k > 0))
        throw ConfigError("sample.temperature_k: must be > 0");
    if (!(t2_star_s > 0)) throw ConfigError("sample.t2_star_s: must be > 0");
    if (!(t1_s >= t2_star_s))
        throw ConfigError("sample.t1_s: requires t1 >= t2*");
    if (!(rf_carrier_hz > 0))
        throw ConfigError("sample.rf_carrier_hz: must be > 0");
    if (components.empty())
        throw ConfigError("sample.components: need at least one line");
    for (std::size_t k = 0; k < components.size(); ++k) {
        if (!(components[k].amplitude_t > 0))
            throw ConfigError("sample.components[" + std::to_string(k) +
                              "].amplitude_t: must be > 0");
        if (!std::isfinite(components[k].detuning_hz))
            throw ConfigError("sample.components[" + std::to_string(k) +
                              "].detuning_hz: must be finite");
    }
}

SpectralModel build_multiplet(const std::vector<MultipletPattern>& patterns,
                              double j_hz, double carrier_hz,
                              double total_amplitude_t) {
    if (!(carrier_hz > 0)) throw ConfigError("build_multiplet: carrier must be > 0");
    if (!(total_amplitude_t > 0))
        throw ConfigError("build_multiplet: total amplitude must be > 0");
    if (!(j_hz >= 0)) throw ConfigError("build_multiplet: j_hz must be >= 0");

    double fraction_sum = 0.0;
    for (const auto& p : patterns) fraction_sum += p.fraction;
    if (std::abs(fraction_sum - 1.0) > 1e-9)
        throw ConfigError("build_multiplet: fractions must sum to 1");

    SpectralModel model;
    for (const auto& p : patterns) {
        if (p.ratios.empty())
            throw ConfigError("build_multiplet: empty ratio list");
        const double ratio_sum =
            std::accumulate(p.ratios.begin(), p.ratios.end(), 0.0);
        if (!(ratio_sum > 0))
            throw ConfigError("build_multiplet: ratios must sum > 0");

        const double center_hz = -p.shift_ppm * 1e-6 * carrier_hz;
        const double n = static_cast<double>(p.ratios.size());
        for (std::size_t i = 0; i < p.ratios.size(); ++i) {
            // n lines spaced j_hz apart, symmetric about the center
            const double offset = (static_cast<double>(i) - (n - 1) / 2.0) * j_hz;
            model.push_back({center_hz + offset,
                             total_amplitude_t * p.fraction * p.ratios[i] /
                                 ratio_sum});
        }
    }
    return model;
}

double estimate_total_amplitude(const PhysicalConstants& pc, double density_m3,
                                double b_ext_t, double temperature_k,
                                double geometric_factor) {
    if (!(density_m3 >= 0))
        throw ConfigError("estimate_total_amplitude: density must be >= 0");
    if (!(temperature_k > 0))
        throw ConfigError("estimate_total_amplitude: temperature must be > 0");
    // thermal polarization hbar*gamma_n*B/(2 k_B T) times the dipolar field
    // of the polarized volume, folded into a single closed form
    return pc.hbar * pc.hbar * pc.gamma_n * pc.gamma_n * pc.mu0 * density_m3 *
           b_ext_t / (16.0 * std::numbers::pi * pc.k_b * temperature_k) *
           geometric_factor;
}

double proton_density(double mass_density_kg_m3, double molar_mass_kg,
                      double protons_per_molecule) {
    if (!(mass_density_kg_m3 > 0) || !(molar_mass_kg > 0) ||
        !(protons_per_molecule > 0))
        throw ConfigError("proton_density: inputs must be positive");
    constexpr double avogadro = 6.02214076e23;
    return mass_density_kg_m3 / molar_mass_kg * avogadro * protons_per_molecule;
}

} // namespace aeris
