#pragma once

#include <cstddef>
#include <vector>

#include "aeris/constants.hpp"
#include "aeris/types.hpp"

namespace aeris {

// One chemically shifted group: center shift (ppm relative to the carrier),
// J-multiplet line ratios (e.g. {1,3,3,1}) and this group's share of the
// total amplitude (proton fraction).
struct MultipletPattern {
    double shift_ppm = 0.0;
    std::vector<double> ratios;
    double fraction = 0.0;
};

// Expand multiplets into spectral lines. Lines of an n-line multiplet sit at
// center +/- J-spaced offsets symmetric about the center (spacing j_hz), with
// amplitudes total * fraction * ratio / sum(ratios). Detunings follow the
// NMR sign convention delta = -shift_ppm * 1e-6 * carrier.
SpectralModel build_multiplet(const std::vector<MultipletPattern>& patterns,
                              double j_hz, double carrier_hz,
                              double total_amplitude_t);

// Mean 1H field amplitude at the sensor from thermal polarization:
//   b = hbar^2 gamma_n^2 mu0 rho B / (16 pi k_B T) * F
// with F the dimensionless geometry factor (see geometry.hpp).
double estimate_total_amplitude(const PhysicalConstants& pc, double density_m3,
                                double b_ext_t, double temperature_k,
                                double geometric_factor);

// Proton number density from bulk properties.
double proton_density(double mass_density_kg_m3, double molar_mass_kg,
                      double protons_per_molecule);

} // namespace aeris
