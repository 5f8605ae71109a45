#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "aeris/types.hpp"

namespace aeris {

// Rotating-frame Bloch dynamics. Internally angular (2*pi folded in); all
// public frequencies are ordinary Hz.
//
// RHS with drive phase phi (rotation axis (cos phi, -sin phi, 0)):
//   dMx/dt = -delta*My - Om*sin(phi)*Mz - Mx/T2*
//   dMy/dt = +delta*Mx - Om*cos(phi)*Mz - My/T2*
//   dMz/dt = +Om*sin(phi)*Mx + Om*cos(phi)*My - (Mz-1)/T1

// Relative Rabi-amplitude perturbation epsilon(t); empty = none.
using RabiPerturbation = std::function<double(double)>;

// Per-sample callback for streaming integration: (index, state), index 0 is
// the initial state.
using SampleSink = std::function<void(std::size_t, const Magnetization&)>;

struct DriveTrajectory {
    std::vector<double> times_s;         // uniform grid, t0 = 0
    std::vector<Magnetization> states;   // states[i] at times_s[i]
};

// Exact free-precession map (no drive): transverse rotation by
// 2*pi*detuning*t with T2* damping, longitudinal T1 recovery toward +z.
Magnetization free_precess(const Magnetization& m0, double detuning_hz,
                           double duration_s, double t1_s, double t2_star_s);

// Default integration step for a drive stage (Rabi period / 200).
double default_drive_step(double rabi_hz);

// Fixed-step RK4 through one drive stage, streaming every grid sample into
// `sink`. Returns the final state. step_s = 0 selects the default step.
// Rejects steps coarser than a hundredth of a Rabi period and steps that do
// not divide the duration.
Magnetization drive_steps(const Magnetization& m0, const Pulse& pulse,
                          double detuning_hz, double t1_s, double t2_star_s,
                          const RabiPerturbation& perturbation,
                          double step_s, const SampleSink& sink);

// Same integration, materialized as a trajectory.
DriveTrajectory drive(const Magnetization& m0, const Pulse& pulse,
                      double detuning_hz, double t1_s, double t2_star_s,
                      const RabiPerturbation& perturbation = {},
                      double step_s = 0.0);

// Resonant unperturbed rotation about +x (phase 0), no relaxation:
//   (mx, my*c - mz*s, my*s + mz*c), angle = 2*pi*rabi*t.
Magnetization rotation_closed_form(const Magnetization& m0, double rabi_hz,
                                   double duration_s);

// Leading-order rotation-axis tilt error for off-resonant driving:
// (delta/Omega)^2 / 2.
double rotation_speed_error(double detuning_hz, double rabi_hz);

} // namespace aeris
