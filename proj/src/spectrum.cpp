#include "aeris/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aeris/constants.hpp"

namespace aeris {

std::vector<double> Spectrum::absorptive() const {
    std::vector<double> re(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) re[i] = values[i].real();
    return re;
}

std::vector<double> Spectrum::magnitude() const {
    std::vector<double> mag(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) mag[i] = std::abs(values[i]);
    return mag;
}

std::vector<std::complex<double>> assemble_complex(
    const MeasurementRecord& cosine, const MeasurementRecord& sine) {
    if (cosine.values.empty() || cosine.values.size() != sine.values.size())
        throw PhysicsError("assemble_complex: records must share a non-empty grid");
    if (std::abs(cosine.trigger_phase_rad) > 1e-9 ||
        std::abs(sine.trigger_phase_rad - std::numbers::pi / 2) > 1e-9)
        throw PhysicsError(
            "assemble_complex: need trigger phases 0 (cosine) and pi/2 (sine)");
    const auto& a = cosine.schedule;
    const auto& b = sine.schedule;
    if (a.tau_s != b.tau_s || a.t_m_s != b.t_m_s || a.cycles != b.cycles ||
        a.rabi_hz != b.rabi_hz || a.variant != b.variant)
        throw PhysicsError("assemble_complex: records from different schedules");

    std::vector<std::complex<double>> s(cosine.values.size());
    for (std::size_t n = 0; n < s.size(); ++n)
        s[n] = {cosine.values[n], sine.values[n]};
    return s;
}

Spectrum dft(std::span<const std::complex<double>> series, double tau_s,
             int zero_pad_factor) {
    if (series.empty()) throw PhysicsError("dft: empty series");
    if (!(tau_s > 0)) throw PhysicsError("dft: tau must be > 0");
    if (zero_pad_factor < 1) throw PhysicsError("dft: zero_pad_factor must be >= 1");

    const auto n = series.size();
    const auto bins = n * static_cast<std::size_t>(zero_pad_factor);
    Spectrum spec;
    spec.tau_s = tau_s;
    spec.zero_pad_factor = zero_pad_factor;
    spec.bin_width_hz = 1.0 / (static_cast<double>(bins) * tau_s);
    spec.frequencies_hz.resize(bins);
    spec.values.resize(bins);

    // frequencies over (-1/(2 tau), 1/(2 tau)], ascending
    const auto k_lo = -static_cast<long long>((bins - 1) / 2);
    for (std::size_t j = 0; j < bins; ++j) {
        const double f =
            static_cast<double>(k_lo + static_cast<long long>(j)) *
            spec.bin_width_hz;
        spec.frequencies_hz[j] = f;
        // recurrence phasor: exp(-i 2 pi f tau) stepped across the record
        const std::complex<double> w = std::polar(1.0, -two_pi * f * tau_s);
        std::complex<double> p{1.0, 0.0};
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t m = 0; m < n; ++m) {
            sum += series[m] * p;
            p *= w;
        }
        spec.values[j] = sum;
    }
    return spec;
}

std::vector<Peak> find_peaks(const Spectrum& spectrum, double min_prominence) {
    if (!(min_prominence > 0))
        throw PhysicsError("find_peaks: min_prominence must be > 0");
    const std::vector<double> re = spectrum.absorptive();
    if (re.size() < 3) return {};

    std::vector<double> abs_re(re.size());
    double max_abs = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i) {
        abs_re[i] = std::abs(re[i]);
        max_abs = std::max(max_abs, abs_re[i]);
    }
    auto mid = abs_re.begin() + static_cast<std::ptrdiff_t>(abs_re.size() / 2);
    std::nth_element(abs_re.begin(), mid, abs_re.end());
    const double median = *mid;
    const double threshold =
        std::max(min_prominence * median, 1e-12 * max_abs);

    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < re.size(); ++i)
        if (re[i] > re[i - 1] && re[i] >= re[i + 1] && re[i] > threshold)
            peaks.push_back({i, spectrum.frequencies_hz[i], re[i]});
    return peaks;
}

PeakFit fit_lorentzian(const Spectrum& spectrum, double window_lo_hz,
                       double window_hi_hz) {
    if (!(window_lo_hz < window_hi_hz))
        throw FitError("fit_lorentzian: empty window");
    const std::vector<double> re = spectrum.absorptive();
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < re.size(); ++i) {
        const double f = spectrum.frequencies_hz[i];
        if (f >= window_lo_hz && f <= window_hi_hz) {
            xs.push_back(f);
            ys.push_back(re[i]);
        }
    }
    if (xs.size() < 8) throw FitError("fit_lorentzian: window too narrow");

    std::size_t top = 0;
    for (std::size_t i = 1; i < ys.size(); ++i)
        if (ys[i] > ys[top]) top = i;
    if (top == 0 || top + 1 == ys.size())
        throw FitError("fit_lorentzian: window contains no interior peak");

    LorentzianParams init;
    init.baseline = *std::min_element(ys.begin(), ys.end());
    init.amplitude = ys[top] - init.baseline;
    init.center = xs[top];
    if (!(init.amplitude > 0))
        throw FitError("fit_lorentzian: window contains no interior peak");

    // half-maximum crossings for the width seed
    const double half = init.baseline + 0.5 * init.amplitude;
    double left = xs.front(), right = xs.back();
    for (std::size_t i = top; i-- > 0;)
        if (ys[i] < half) {
            const double t = (half - ys[i]) / (ys[i + 1] - ys[i]);
            left = xs[i] + t * (xs[i + 1] - xs[i]);
            break;
        }
    for (std::size_t i = top + 1; i < ys.size(); ++i)
        if (ys[i] < half) {
            const double t = (ys[i - 1] - half) / (ys[i - 1] - ys[i]);
            right = xs[i - 1] + t * (xs[i] - xs[i - 1]);
            break;
        }
    init.fwhm = std::max(right - left, spectrum.bin_width_hz);

    double residual = 0.0;
    const LorentzianParams p = fit_lorentzian_ls(xs, ys, init, &residual);
    return {p.center, std::abs(p.fwhm), p.amplitude, p.baseline, residual};
}

std::vector<NoiseSweepPoint> fwhm_vs_noise_curve(
    const SampleSpec& sample, const ProtocolSchedule& schedule,
    const SensorModel& sensor, const NoiseModel& noise_template,
    std::span<const double> sigmas, std::size_t realizations,
    std::uint64_t base_seed, int zero_pad_factor,
    std::optional<double> target_hz,
    std::optional<double> window_halfwidth_hz) {
    if (realizations < 1)
        throw PhysicsError("fwhm_vs_noise_curve: need >= 1 realization");

    std::vector<NoiseSweepPoint> out;
    for (std::size_t si = 0; si < sigmas.size(); ++si) {
        NoiseSweepPoint point;
        point.sigma = sigmas[si];
        for (int variant = 0; variant < 2; ++variant) {
            const bool robust = variant == 1;
            ProtocolSchedule sched = schedule;
            sched.variant = robust ? Variant::robust : Variant::standard;
            SensorModel sens = sensor;
            sens.modulation =
                robust ? ModulationKind::double_echo : ModulationKind::xy4;
            NoiseModel noise = noise_template;
            noise.sigma = sigmas[si];

            auto averaged = [&](double trigger_phase, int phase_tag) {
                ProtocolSchedule s2 = sched;
                s2.trigger_phase_rad = trigger_phase;
                std::vector<std::uint64_t> seeds(realizations);
                const std::uint64_t group = mix_seed(
                    mix_seed(base_seed, si), 2 * variant + phase_tag);
                for (std::size_t r = 0; r < realizations; ++r)
                    seeds[r] = mix_seed(group, r);
                return average_realizations(
                    [&](std::uint64_t seed) {
                        NoiseModel nm = noise;
                        nm.seed = seed;
                        return run_aeris(sample, s2, sens, &nm);
                    },
                    seeds);
            };

            double fwhm = std::numeric_limits<double>::quiet_NaN();
            bool ok = false;
            try {
                const MeasurementRecord rc = averaged(0.0, 0);
                const MeasurementRecord rs = averaged(std::numbers::pi / 2, 1);
                const Spectrum spec =
                    dft(assemble_complex(rc, rs), sched.tau_s, zero_pad_factor);
                const auto peaks = find_peaks(spec, 5.0);
                const double halfwidth = window_halfwidth_hz.value_or(
                    12.0 / (static_cast<double>(sched.cycles) * sched.tau_s));
                const Peak* chosen = nullptr;
                if (target_hz) {
                    for (const auto& p : peaks) {
                        const double dist = std::abs(p.frequency_hz - *target_hz);
                        if (dist > halfwidth) continue;
                        if (!chosen || dist < std::abs(chosen->frequency_hz -
                                                       *target_hz))
                            chosen = &p;
                    }
                } else if (!peaks.empty()) {
                    chosen = &*std::max_element(
                        peaks.begin(), peaks.end(),
                        [](const Peak& a, const Peak& b) {
                            return a.height < b.height;
                        });
                }
                if (chosen) {
                    const PeakFit fit =
                        fit_lorentzian(spec, chosen->frequency_hz - halfwidth,
                                       chosen->frequency_hz + halfwidth);
                    fwhm = fit.fwhm_hz;
                    ok = true;
                }
            } catch (const FitError&) {
            } catch (const PhysicsError&) {
            }
            if (robust) {
                point.fwhm_robust_hz = fwhm;
                point.robust_ok = ok;
            } else {
                point.fwhm_standard_hz = fwhm;
                point.standard_ok = ok;
            }
        }
        out.push_back(point);
    }
    return out;
}

} // namespace aeris
