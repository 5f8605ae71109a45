#include "aeris/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "aeris/bloch.hpp"

namespace aeris {

void ProtocolSchedule::validate() const {
    if (!(tau_s > 0)) throw ConfigError("schedule.tau_s: must be > 0");
    if (!(t_m_s > 0)) throw ConfigError("schedule.t_m_s: must be > 0");
    if (cycles < 1) throw ConfigError("schedule.cycles: must be >= 1");
    if (!(rabi_hz > 0)) throw ConfigError("schedule.rabi_hz: must be > 0");
    if (!std::isfinite(trigger_phase_rad))
        throw ConfigError("schedule.trigger_phase_rad: must be finite");
}

namespace {

// Stage integration step: resolve both the Rabi cycle and the noise grid,
// nudged to divide the stage duration (even cell count so a robust stage
// splits cleanly).
double stage_step(double duration_s, double rabi_hz, const NoiseModel* noise,
                  bool even_cells) {
    double h = default_drive_step(rabi_hz);
    if (noise && noise->step_s < h) h = noise->step_s;
    auto cells = static_cast<std::size_t>(std::ceil(duration_s / h - 1e-9));
    if (even_cells && cells % 2 != 0) ++cells;
    return duration_s / static_cast<double>(cells);
}

RabiPerturbation hold(const OuTrajectory& traj, double offset_s = 0.0) {
    return [&traj, offset_s](double t) { return traj.value(t + offset_s); };
}

} // namespace

MeasurementRecord run_aeris(const SampleSpec& sample,
                            const ProtocolSchedule& schedule,
                            const SensorModel& sensor,
                            const NoiseModel* noise) {
    sample.validate();
    schedule.validate();
    if (sample.components.empty())
        throw PhysicsError("run_aeris: sample has no spectral components");
    for (const auto& c : sample.components)
        if (std::abs(c.detuning_hz) >= 0.5 / schedule.tau_s)
            throw PhysicsError(
                "run_aeris: component detuning violates the Nyquist bound "
                "1/(2 tau)");

    const bool robust = schedule.variant == Variant::robust;
    const auto want = robust ? ModulationKind::double_echo : ModulationKind::xy4;
    if (sensor.modulation != want)
        throw PhysicsError(robust
                               ? "run_aeris: robust variant requires the "
                                 "double-echo modulation"
                               : "run_aeris: standard variant requires the "
                                 "XY4 modulation");

    const Modulation mod =
        modulation_function(sensor.modulation, schedule.t_m_s, schedule.rabi_hz);

    const double t_trig = 0.25 / schedule.rabi_hz;
    const double h_trig = stage_step(t_trig, schedule.rabi_hz, noise, false);
    const double h = stage_step(schedule.t_m_s, schedule.rabi_hz, noise, robust);
    const auto cells =
        static_cast<std::size_t>(std::llround(schedule.t_m_s / h));

    std::mt19937_64 rng(noise ? noise->seed : 0);

    // trigger: resonant hard pulse; detunings (|delta| << Rabi) are ignored
    // for its 5 us duration, relaxation and control noise are not
    const std::size_t nk = sample.components.size();
    std::vector<Magnetization> m(nk);
    {
        OuTrajectory trig_noise;
        if (noise) trig_noise = make_ou_trajectory(*noise, t_trig, rng);
        const Pulse pulse{schedule.rabi_hz, schedule.trigger_phase_rad, t_trig};
        for (std::size_t k = 0; k < nk; ++k)
            m[k] = drive_steps({0.0, 0.0, 1.0}, pulse, 0.0, sample.t1_s,
                               sample.t2_star_s,
                               noise ? hold(trig_noise) : RabiPerturbation{},
                               h_trig, {});
    }

    MeasurementRecord rec;
    rec.trigger_phase_rad = schedule.trigger_phase_rad;
    rec.schedule = schedule;
    rec.values.resize(schedule.cycles);
    rec.precession_times_s.resize(schedule.cycles);
    rec.meta.seed = noise ? noise->seed : 0;
    rec.meta.noisy = noise != nullptr;
    if (noise)
        rec.meta.note =
            "ou: stationary resample at stage start, continuous within stage";

    const Pulse rot{schedule.rabi_hz, 0.0, schedule.t_m_s};
    const Pulse rot_half_a{schedule.rabi_hz, 0.0, 0.5 * schedule.t_m_s};
    const Pulse rot_half_b{schedule.rabi_hz, std::numbers::pi,
                           0.5 * schedule.t_m_s};
    std::vector<double> signal(cells + 1);

    for (std::size_t n = 0; n < schedule.cycles; ++n) {
        if (n > 0)
            for (std::size_t k = 0; k < nk; ++k)
                m[k] = free_precess(m[k], sample.components[k].detuning_hz,
                                    schedule.tau_s, sample.t1_s,
                                    sample.t2_star_s);

        OuTrajectory stage_noise;
        if (noise) stage_noise = make_ou_trajectory(*noise, schedule.t_m_s, rng);

        // sensor sees -sum_k b_k Mz_k (Hamiltonian sign folded in)
        std::fill(signal.begin(), signal.end(), 0.0);
        for (std::size_t k = 0; k < nk; ++k) {
            const double b = sample.components[k].amplitude_t;
            const double delta = sample.components[k].detuning_hz;
            auto sink = [&](std::size_t i, const Magnetization& mk) {
                signal[i] -= b * mk.z;
            };
            if (!robust) {
                m[k] = drive_steps(m[k], rot, delta, sample.t1_s,
                                   sample.t2_star_s,
                                   noise ? hold(stage_noise) : RabiPerturbation{},
                                   h, sink);
            } else {
                const std::size_t half = cells / 2;
                m[k] = drive_steps(m[k], rot_half_a, delta, sample.t1_s,
                                   sample.t2_star_s,
                                   noise ? hold(stage_noise) : RabiPerturbation{},
                                   h, sink);
                // the seam sample would land twice (end of the first half,
                // start of the second); cancel one copy up front
                signal[half] += b * m[k].z;
                auto sink_b = [&](std::size_t i, const Magnetization& mk) {
                    signal[half + i] -= b * mk.z;
                };
                // second half: RF phase inverted, noise continuous across it
                m[k] = drive_steps(
                    m[k], rot_half_b, delta, sample.t1_s, sample.t2_star_s,
                    noise ? hold(stage_noise, 0.5 * schedule.t_m_s)
                          : RabiPerturbation{},
                    h, sink_b);
            }
        }

        const double phi = acquire_phase(signal, h, mod, sensor.gamma_e);
        rec.values[n] = measure_sigma_y(phi, sensor.small_angle);
        rec.precession_times_s[n] = static_cast<double>(n) * schedule.tau_s;
    }
    return rec;
}

MeasurementRecord run_aeris_robust(const SampleSpec& sample,
                                   ProtocolSchedule schedule,
                                   const SensorModel& sensor,
                                   const NoiseModel* noise) {
    schedule.variant = Variant::robust;
    return run_aeris(sample, schedule, sensor, noise);
}

MeasurementRecord average_realizations(
    const std::function<MeasurementRecord(std::uint64_t)>& runner,
    std::span<const std::uint64_t> seeds) {
    if (seeds.empty())
        throw PhysicsError("average_realizations: need at least one seed");

    std::vector<MeasurementRecord> results(seeds.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    const std::size_t workers = std::max<std::size_t>(
        1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                 seeds.size()));
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            try {
                results[i] = runner(seeds[i]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    MeasurementRecord mean = results[0];
    for (std::size_t r = 1; r < results.size(); ++r) {
        if (results[r].values.size() != mean.values.size())
            throw PhysicsError("average_realizations: mismatched record grids");
        for (std::size_t i = 0; i < mean.values.size(); ++i)
            mean.values[i] += results[r].values[i];
    }
    const double inv = 1.0 / static_cast<double>(results.size());
    for (auto& v : mean.values) v *= inv;
    mean.meta.note += (mean.meta.note.empty() ? "" : "; ") + std::string("mean of ") +
                      std::to_string(seeds.size()) + " realizations";
    return mean;
}

} // namespace aeris
