#pragma once

#include <functional>
#include <span>
#include <vector>

#include "aeris/constants.hpp"
#include "aeris/types.hpp"

namespace aeris {

// Decoupling sequence applied to the NV during a rotation stage.
//  - xy4: sign flips every half Rabi period (rectifies sin(2*pi*Omega*t)),
//  - double_echo: two concatenated spin echoes, flips at t_m/4 and 3*t_m/4
//    (pairs with the phase-inverted second half of a robust drive stage).
enum class ModulationKind { xy4, double_echo };

struct SensorModel {
    double gamma_e = two_pi * 28.024e9;  // rad s^-1 T^-1
    ModulationKind modulation = ModulationKind::xy4;
    bool small_angle = false;  // report phi instead of sin(phi)
};

// Concrete +/-1 modulation over [0, t_m]; starts at +1, flips at flip_times.
struct Modulation {
    std::vector<double> flip_times_s;
    double t_m_s = 0.0;

    int sign_at(double t) const {
        int flips = 0;
        for (double f : flip_times_s) {
            if (f <= t) ++flips;
            else break;
        }
        return (flips % 2 == 0) ? 1 : -1;
    }
};

// Build the modulation for a rotation stage. Requires t_m to span an integer,
// even number of Rabi periods (so both halves close and the sequence is
// balanced).
Modulation modulation_function(ModulationKind kind, double t_m_s,
                               double rabi_hz);

// Accumulated sensor phase phi = gamma_e * integral m(t)*signal(t) dt over
// [0, t_m]. `signal` holds n+1 uniform samples (step_s apart) spanning the
// modulation window. Trapezoid per cell with the modulation sign taken at
// cell midpoints, so flips on cell boundaries are exact and constants
// integrate to zero.
double acquire_phase(std::span<const double> signal, double step_s,
                     const Modulation& modulation, double gamma_e);

// Convenience overload sampling a signal callable on a `cells`-cell grid.
double acquire_phase(const std::function<double(double)>& signal,
                     const Modulation& modulation, double gamma_e,
                     std::size_t cells);

// Projective readout expectation <sigma_y> = sin(phi), or phi itself in
// small-angle mode.
double measure_sigma_y(double phi, bool small_angle);

// Closed-form expected record (linear in the field, no relaxation):
//   value_n = (2 gamma_e t_m / pi) * sum_k b_k cos(2 pi delta_k n tau - phi0)
// phi0 = trigger phase: 0 gives the cosine record, pi/2 the sine record.
// Independent of the Bloch integration path; used as a cross-check oracle.
std::vector<double> analytic_record(const SpectralModel& model, double gamma_e,
                                    double t_m_s, double tau_s,
                                    double trigger_phase_rad,
                                    std::size_t cycles);

} // namespace aeris
