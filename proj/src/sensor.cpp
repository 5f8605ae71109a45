#include "aeris/sensor.hpp"

#include <cmath>

namespace aeris {

Modulation modulation_function(ModulationKind kind, double t_m_s,
                               double rabi_hz) {
    if (!(t_m_s > 0)) throw PhysicsError("modulation: t_m must be > 0");
    if (!(rabi_hz > 0)) throw PhysicsError("modulation: Rabi frequency must be > 0");
    const double periods = t_m_s * rabi_hz;
    const auto p = static_cast<long long>(std::llround(periods));
    if (std::abs(periods - static_cast<double>(p)) > 1e-9 * periods || p < 2 ||
        p % 2 != 0)
        throw PhysicsError(
            "modulation: t_m must span an even integer number of Rabi periods");

    Modulation mod;
    mod.t_m_s = t_m_s;
    if (kind == ModulationKind::xy4) {
        // interior zeros of sin(2*pi*rabi*t): every half period
        const double half = 0.5 / rabi_hz;
        for (long long k = 1; k < 2 * p; ++k)
            mod.flip_times_s.push_back(static_cast<double>(k) * half);
    } else {
        mod.flip_times_s = {0.25 * t_m_s, 0.75 * t_m_s};
    }
    return mod;
}

double acquire_phase(std::span<const double> signal, double step_s,
                     const Modulation& modulation, double gamma_e) {
    if (signal.size() < 2) throw PhysicsError("acquire_phase: need >= 2 samples");
    if (!(step_s > 0)) throw PhysicsError("acquire_phase: step must be > 0");
    const std::size_t cells = signal.size() - 1;
    const double span = static_cast<double>(cells) * step_s;
    if (std::abs(span - modulation.t_m_s) > 1e-9 * modulation.t_m_s)
        throw PhysicsError("acquire_phase: samples do not span the modulation window");

    double integral = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double t_mid = (static_cast<double>(i) + 0.5) * step_s;
        const double cell = 0.5 * (signal[i] + signal[i + 1]) * step_s;
        integral += modulation.sign_at(t_mid) > 0 ? cell : -cell;
    }
    return gamma_e * integral;
}

double acquire_phase(const std::function<double(double)>& signal,
                     const Modulation& modulation, double gamma_e,
                     std::size_t cells) {
    if (cells == 0) throw PhysicsError("acquire_phase: need >= 1 cell");
    const double step = modulation.t_m_s / static_cast<double>(cells);
    std::vector<double> samples(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i)
        samples[i] = signal(static_cast<double>(i) * step);
    return acquire_phase(samples, step, modulation, gamma_e);
}

double measure_sigma_y(double phi, bool small_angle) {
    return small_angle ? phi : std::sin(phi);
}

std::vector<double> analytic_record(const SpectralModel& model, double gamma_e,
                                    double t_m_s, double tau_s,
                                    double trigger_phase_rad,
                                    std::size_t cycles) {
    const double scale = 2.0 * gamma_e * t_m_s / std::numbers::pi;
    std::vector<double> values(cycles);
    for (std::size_t n = 0; n < cycles; ++n) {
        double sum = 0.0;
        for (const auto& c : model)
            sum += c.amplitude_t *
                   std::cos(two_pi * c.detuning_hz * static_cast<double>(n) *
                                tau_s -
                            trigger_phase_rad);
        values[n] = scale * sum;
    }
    return values;
}

} // namespace aeris
