#include "aeris/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>

#include "aeris/io.hpp"
#include "aeris/plot.hpp"

namespace aeris {

namespace {

namespace fs = std::filesystem;

ExperimentConfig load_with_overrides(const CliOptions& opt) {
    if (opt.config_path.empty()) throw ConfigError("missing --config");
    ExperimentConfig cfg = load_config(opt.config_path);
    if (opt.seed) {
        cfg.seed = *opt.seed;
        if (cfg.noise) cfg.noise->seed = *opt.seed;
    }
    if (opt.realizations) {
        if (*opt.realizations < 1)
            throw ConfigError("--realizations must be >= 1");
        cfg.realizations = *opt.realizations;
        if (cfg.robustness) cfg.robustness->realizations = *opt.realizations;
    }
    if (opt.variant) {
        if (*opt.variant == "standard")
            apply_variant(cfg, Variant::standard);
        else if (*opt.variant == "robust")
            apply_variant(cfg, Variant::robust);
        else
            throw ConfigError("--variant must be 'standard' or 'robust'");
    }
    return cfg;
}

MeasurementRecord simulate_record(const ExperimentConfig& cfg,
                                  double trigger_phase, int phase_tag) {
    ProtocolSchedule sched = cfg.schedule;
    sched.trigger_phase_rad = trigger_phase;
    if (!cfg.noise) return run_aeris(cfg.sample, sched, cfg.sensor, nullptr);

    std::vector<std::uint64_t> seeds(cfg.realizations);
    const std::uint64_t group = mix_seed(cfg.seed, 0xA0 + phase_tag);
    for (std::size_t r = 0; r < seeds.size(); ++r)
        seeds[r] = mix_seed(group, r);
    return average_realizations(
        [&](std::uint64_t seed) {
            NoiseModel nm = *cfg.noise;
            nm.seed = seed;
            return run_aeris(cfg.sample, sched, cfg.sensor, &nm);
        },
        seeds);
}

// fit windows: half the gap to the nearest neighboring peak, capped at
// 12 natural (pre-padding) bins
double window_halfwidth(const std::vector<Peak>& peaks, std::size_t i,
                        std::size_t cycles, double tau_s) {
    double cap = 12.0 / (static_cast<double>(cycles) * tau_s);
    if (i > 0)
        cap = std::min(cap, 0.5 * (peaks[i].frequency_hz -
                                   peaks[i - 1].frequency_hz));
    if (i + 1 < peaks.size())
        cap = std::min(cap, 0.5 * (peaks[i + 1].frequency_hz -
                                   peaks[i].frequency_hz));
    return cap;
}

} // namespace

int cmd_simulate(const CliOptions& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const std::string hash = config_hash_hex(cfg);
    const fs::path out(opt.out_dir);

    const MeasurementRecord rec_cos = simulate_record(cfg, 0.0, 0);
    const MeasurementRecord rec_sin =
        simulate_record(cfg, std::numbers::pi / 2, 1);

    write_record_csv(out / "record_cos.csv", rec_cos, hash);
    write_record_csv(out / "record_sin.csv", rec_sin, hash);
    write_metadata_json(out / "metadata.json", cfg, hash);

    if (opt.svg) {
        PlotSeries cosine{rec_cos.precession_times_s, rec_cos.values,
                          "#1f77b4", "cosine record", false};
        PlotSeries sine{rec_sin.precession_times_s, rec_sin.values, "#ff7f0e",
                        "sine record", false};
        write_svg_plot(out / "records.svg", {cosine, sine}, {},
                       {"measurement records", "precession time (s)",
                        "sigma_y expectation", std::nullopt, ""});
    }
    return 0;
}

int cmd_spectrum(const CliOptions& opt) {
    const fs::path dir(opt.records_dir.empty() ? opt.out_dir
                                               : opt.records_dir);
    std::string hash;
    const ExperimentConfig cfg = read_metadata_json(dir / "metadata.json", &hash);

    MeasurementRecord rec_cos = read_record_csv(dir / "record_cos.csv");
    MeasurementRecord rec_sin = read_record_csv(dir / "record_sin.csv");
    rec_cos.schedule = cfg.schedule;
    rec_cos.schedule.trigger_phase_rad = rec_cos.trigger_phase_rad;
    rec_sin.schedule = cfg.schedule;
    rec_sin.schedule.trigger_phase_rad = rec_sin.trigger_phase_rad;

    const auto series = assemble_complex(rec_cos, rec_sin);
    const Spectrum spec =
        dft(series, cfg.schedule.tau_s, cfg.analysis.zero_pad_factor);
    const auto peaks = find_peaks(spec, cfg.analysis.min_prominence);

    std::vector<PeakReport> reports;
    bool any_fit_failed = false;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        PeakReport report;
        report.peak = peaks[i];
        const double hw =
            window_halfwidth(peaks, i, cfg.schedule.cycles, cfg.schedule.tau_s);
        try {
            report.fit = fit_lorentzian(spec, peaks[i].frequency_hz - hw,
                                        peaks[i].frequency_hz + hw);
            report.fit_ok = true;
        } catch (const FitError& e) {
            report.fit_error = e.what();
            any_fit_failed = true;
        }
        reports.push_back(std::move(report));
    }

    const fs::path out(opt.out_dir);
    write_spectrum_json(out / "spectrum.json", spec, cfg.seed, hash);
    write_peaks_json(out / "peaks.json", reports, cfg.seed, hash);

    if (opt.svg) {
        PlotSeries absorptive{spec.frequencies_hz, spec.absorptive(),
                              "#1f77b4", "absorptive", false};
        std::vector<PlotMarker> markers;
        for (const auto& p : peaks) markers.push_back({p.frequency_hz, p.height});
        write_svg_plot(out / "spectrum.svg", {absorptive}, markers,
                       {"spectrum", "detuning (Hz)", "absorptive amplitude",
                        std::nullopt, ""});
    }
    return any_fit_failed ? 5 : 0;
}

int cmd_geometry(const CliOptions& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    if (!cfg.geometry)
        throw ConfigError("config: geometry command needs a [geometry] table");
    const std::string hash = config_hash_hex(cfg);
    const auto& g = *cfg.geometry;

    std::vector<GeometricFactors> factors;
    for (double eta : g.eta_grid) {
        GeometryConfig gc;
        gc.depth_m = g.depth_m;
        gc.radius_m = eta * g.depth_m;
        gc.nv_axis = g.nv_axis;
        factors.push_back(geometric_integral(gc, g.resolution));
    }

    const fs::path out(opt.out_dir);
    write_geometry_csv(out / "geometry.csv", g.eta_grid, factors, hash);
    write_metadata_json(out / "metadata.json", cfg, hash);

    if (opt.svg) {
        PlotSeries f_series;
        f_series.x = g.eta_grid;
        for (const auto& fac : factors) f_series.y.push_back(fac.f);
        f_series.color = "#1f77b4";
        f_series.label = "F(radius/depth)";
        f_series.points = true;
        write_svg_plot(out / "geometry.svg", {f_series}, {},
                       {"geometric factor", "radius / depth", "F",
                        4.0 * std::numbers::pi / 3.0, "4 pi / 3"});
    }
    return 0;
}

int cmd_robustness(const CliOptions& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    if (!cfg.robustness)
        throw ConfigError("config: robustness command needs a [robustness] table");
    const std::string hash = config_hash_hex(cfg);

    NoiseModel base;
    if (cfg.noise) base = *cfg.noise;
    base.seed = cfg.seed;

    // Track the most isolated line: the single-Lorentzian window must not
    // swallow J-coupled neighbours. Clamp the window to stay clear of them.
    const auto& comps = cfg.sample.components;
    std::optional<double> target;
    double target_gap = std::numeric_limits<double>::infinity();
    if (comps.size() > 1) {
        double best_gap = -1.0;
        for (const auto& a : comps) {
            double gap = std::numeric_limits<double>::infinity();
            for (const auto& b : comps)
                if (&a != &b)
                    gap = std::min(gap,
                                   std::abs(a.detuning_hz - b.detuning_hz));
            if (gap > best_gap) {
                best_gap = gap;
                target = a.detuning_hz;
            }
        }
        target_gap = best_gap;
    } else if (comps.size() == 1) {
        target = comps.front().detuning_hz;
    }
    const double natural_halfwidth =
        12.0 / (static_cast<double>(cfg.schedule.cycles) * cfg.schedule.tau_s);
    const double halfwidth = std::min(natural_halfwidth, 0.45 * target_gap);

    const auto points = fwhm_vs_noise_curve(
        cfg.sample, cfg.schedule, cfg.sensor, base, cfg.robustness->sigmas,
        cfg.robustness->realizations, cfg.seed, cfg.analysis.zero_pad_factor,
        target, halfwidth);

    const fs::path out(opt.out_dir);
    write_noise_curve_csv(out / "fwhm_vs_noise.csv", points, hash);
    write_metadata_json(out / "metadata.json", cfg, hash);

    bool any_failed = false;
    if (opt.svg) {
        PlotSeries standard, robust;
        standard.color = "#2ca02c";
        standard.label = "standard";
        standard.points = true;
        robust.color = "#ff7f0e";
        robust.label = "robust";
        robust.points = true;
        for (const auto& p : points) {
            if (p.standard_ok) {
                standard.x.push_back(100.0 * p.sigma);
                standard.y.push_back(p.fwhm_standard_hz);
            }
            if (p.robust_ok) {
                robust.x.push_back(100.0 * p.sigma);
                robust.y.push_back(p.fwhm_robust_hz);
            }
        }
        const double floor_hz =
            1.0 / (std::numbers::pi * cfg.sample.t2_star_s);
        write_svg_plot(out / "fwhm_vs_noise.svg", {standard, robust}, {},
                       {"linewidth vs control noise", "OU amplitude (%)",
                        "fitted FWHM (Hz)", floor_hz, "T2* limit"});
    }
    for (const auto& p : points)
        if (!p.standard_ok || !p.robust_ok) any_failed = true;
    return any_failed ? 5 : 0;
}

int run_cli_command(int (*command)(const CliOptions&),
                    const CliOptions& options) {
    try {
        return command(options);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 4;
    } catch (const FitError& e) {
        std::cerr << "fit error: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace aeris
