#include "aeris/bloch.hpp"

#include <cmath>

#include "aeris/constants.hpp"

namespace aeris {

namespace {

void check_relaxation(double t1_s, double t2_star_s) {
    if (!(t2_star_s > 0)) throw PhysicsError("bloch: T2* must be > 0");
    if (!(t1_s >= t2_star_s)) throw PhysicsError("bloch: requires T1 >= T2*");
}

// Number of steps for duration/step with an exact-division guard.
std::size_t step_count(double duration_s, double step_s) {
    const double ratio = duration_s / step_s;
    const auto n = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio))
        throw PhysicsError("bloch: integration step must divide the duration");
    return n;
}

} // namespace

Magnetization free_precess(const Magnetization& m0, double detuning_hz,
                           double duration_s, double t1_s, double t2_star_s) {
    check_relaxation(t1_s, t2_star_s);
    if (!(duration_s >= 0)) throw PhysicsError("free_precess: duration < 0");
    const double theta = two_pi * detuning_hz * duration_s;
    const double c = std::cos(theta), s = std::sin(theta);
    const double e2 = std::exp(-duration_s / t2_star_s);
    const double e1 = std::exp(-duration_s / t1_s);
    return {(m0.x * c - m0.y * s) * e2, (m0.x * s + m0.y * c) * e2,
            1.0 + (m0.z - 1.0) * e1};
}

double default_drive_step(double rabi_hz) { return 1.0 / (200.0 * rabi_hz); }

Magnetization drive_steps(const Magnetization& m0, const Pulse& pulse,
                          double detuning_hz, double t1_s, double t2_star_s,
                          const RabiPerturbation& perturbation,
                          double step_s, const SampleSink& sink) {
    check_relaxation(t1_s, t2_star_s);
    if (!(pulse.rabi_hz > 0)) throw PhysicsError("drive: Rabi frequency must be > 0");
    if (!(pulse.duration_s >= 0)) throw PhysicsError("drive: duration < 0");

    const double h = step_s > 0 ? step_s : default_drive_step(pulse.rabi_hz);
    const double rabi_period = 1.0 / pulse.rabi_hz;
    if (h > rabi_period / 100.0 * (1.0 + 1e-12))
        throw PhysicsError("drive: step exceeds Rabi period / 100");
    const std::size_t n = step_count(pulse.duration_s, h);

    const double omega0 = two_pi * pulse.rabi_hz;
    const double delta = two_pi * detuning_hz;
    const double cp = std::cos(pulse.phase_rad), sp = std::sin(pulse.phase_rad);
    const double inv_t2 = 1.0 / t2_star_s;
    const double inv_t1 = 1.0 / t1_s;
    const bool has_pert = static_cast<bool>(perturbation);

    auto omega_at = [&](double t) {
        return has_pert ? omega0 * (1.0 + perturbation(t)) : omega0;
    };
    auto rhs = [&](const Magnetization& m, double om) -> Magnetization {
        return {-delta * m.y - om * sp * m.z - m.x * inv_t2,
                delta * m.x - om * cp * m.z - m.y * inv_t2,
                om * sp * m.x + om * cp * m.y - (m.z - 1.0) * inv_t1};
    };

    Magnetization m = m0;
    if (sink) sink(0, m);
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double om0 = omega_at(t);
        const double omh = omega_at(t + 0.5 * h);
        const double om1 = omega_at(t + h);
        const Magnetization k1 = rhs(m, om0);
        const Magnetization k2 = rhs(m + 0.5 * h * k1, omh);
        const Magnetization k3 = rhs(m + 0.5 * h * k2, omh);
        const Magnetization k4 = rhs(m + h * k3, om1);
        m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = static_cast<double>(i + 1) * h;
        if (sink) sink(i + 1, m);
    }
    return m;
}

DriveTrajectory drive(const Magnetization& m0, const Pulse& pulse,
                      double detuning_hz, double t1_s, double t2_star_s,
                      const RabiPerturbation& perturbation, double step_s) {
    DriveTrajectory traj;
    const double h = step_s > 0 ? step_s : default_drive_step(pulse.rabi_hz);
    drive_steps(m0, pulse, detuning_hz, t1_s, t2_star_s, perturbation, step_s,
                [&](std::size_t i, const Magnetization& m) {
                    traj.times_s.push_back(static_cast<double>(i) * h);
                    traj.states.push_back(m);
                });
    return traj;
}

Magnetization rotation_closed_form(const Magnetization& m0, double rabi_hz,
                                   double duration_s) {
    const double theta = two_pi * rabi_hz * duration_s;
    const double c = std::cos(theta), s = std::sin(theta);
    return {m0.x, m0.y * c - m0.z * s, m0.y * s + m0.z * c};
}

double rotation_speed_error(double detuning_hz, double rabi_hz) {
    if (!(rabi_hz > 0))
        throw PhysicsError("rotation_speed_error: Rabi frequency must be > 0");
    const double r = detuning_hz / rabi_hz;
    return 0.5 * r * r;
}

} // namespace aeris
