#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aeris/fit.hpp"
#include "aeris/protocol.hpp"

namespace aeris {

// Discrete spectrum of a stroboscopic record; frequencies ascending over
// (-1/(2 tau), 1/(2 tau)], bin_width_hz = 1/(zero_pad_factor * N * tau).
struct Spectrum {
    std::vector<double> frequencies_hz;
    std::vector<std::complex<double>> values;
    double bin_width_hz = 0.0;
    double tau_s = 0.0;
    int zero_pad_factor = 1;

    // The protocol has inherent zero phase (every component is real positive
    // at n = 0), so Re(S) is the absorptive line shape; peak finding and
    // fitting operate on it. The dispersive Im(S) stays available through
    // `values`.
    std::vector<double> absorptive() const;
    std::vector<double> magnitude() const;
};

// s_n = cos_record[n] + i * sin_record[n]; the records must share the grid
// and carry trigger phases 0 and pi/2.
std::vector<std::complex<double>> assemble_complex(
    const MeasurementRecord& cosine, const MeasurementRecord& sine);

// Direct DFT, S(f) = sum_n s_n exp(-i 2 pi f n tau), evaluated on
// zero_pad_factor * N bins. Fixed summation order, deterministic.
Spectrum dft(std::span<const std::complex<double>> series, double tau_s,
             int zero_pad_factor = 1);

struct Peak {
    std::size_t bin = 0;
    double frequency_hz = 0.0;
    double height = 0.0;
};

// Interior local maxima of the absorptive spectrum with height above
// min_prominence times the median absolute level (plus a tiny absolute
// floor so an all-zero spectrum yields no peaks).
std::vector<Peak> find_peaks(const Spectrum& spectrum, double min_prominence);

struct PeakFit {
    double center_hz = 0.0;
    double fwhm_hz = 0.0;
    double amplitude = 0.0;
    double baseline = 0.0;
    double residual_norm = 0.0;  // ||residual|| / (|A| sqrt(n))
};

// Lorentzian + constant baseline over the absorptive spectrum restricted to
// [window_lo_hz, window_hi_hz]; the window must contain one interior peak.
PeakFit fit_lorentzian(const Spectrum& spectrum, double window_lo_hz,
                       double window_hi_hz);

struct NoiseSweepPoint {
    double sigma = 0.0;
    double fwhm_standard_hz = 0.0;
    bool standard_ok = false;
    double fwhm_robust_hz = 0.0;
    bool robust_ok = false;
};

// Fitted FWHM of one tracked spectral line versus OU noise amplitude, for
// the standard and robust variants side by side. Per sigma and variant,
// cosine/sine records are averaged over `realizations` independent noise
// seeds (derived from base_seed), assembled, transformed and fitted. With
// target_hz set, the detected peak closest to it is fitted (it must land
// inside the fit window) -- use an isolated line so the single-Lorentzian
// window stays clean; otherwise the tallest peak is used. The fit window
// halfwidth defaults to twelve natural linewidth bins, 12 / (cycles * tau).
// Fit or detection failures mark the point not-ok instead of throwing.
std::vector<NoiseSweepPoint> fwhm_vs_noise_curve(
    const SampleSpec& sample, const ProtocolSchedule& schedule,
    const SensorModel& sensor, const NoiseModel& noise_template,
    std::span<const double> sigmas, std::size_t realizations,
    std::uint64_t base_seed, int zero_pad_factor = 4,
    std::optional<double> target_hz = {},
    std::optional<double> window_halfwidth_hz = {});

} // namespace aeris
