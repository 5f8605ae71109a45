#include "aeris/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace aeris {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on any host
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

nlohmann::json round_trip_array(const std::vector<double>& v) {
    return nlohmann::json(v);
}

} // namespace

void write_record_csv(const std::filesystem::path& path,
                      const MeasurementRecord& rec,
                      const std::string& config_hash) {
    auto out = open_out(path);
    out << "# aeris measurement record\n";
    out << "# config_hash=" << config_hash << " seed=" << rec.meta.seed
        << " trigger_phase_rad=" << num(rec.trigger_phase_rad)
        << " noisy=" << (rec.meta.noisy ? 1 : 0) << "\n";
    if (!rec.meta.note.empty()) out << "# note=" << rec.meta.note << "\n";
    out << "n,precession_time_s,sigma_y\n";
    for (std::size_t n = 0; n < rec.values.size(); ++n)
        out << n << ',' << num(rec.precession_times_s[n]) << ','
            << num(rec.values[n]) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

MeasurementRecord read_record_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open record: " + path.string());
    MeasurementRecord rec;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream words(line.substr(1));
            std::string w;
            while (words >> w) {
                const auto eq = w.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = w.substr(0, eq);
                const std::string val = w.substr(eq + 1);
                try {
                    if (key == "seed")
                        rec.meta.seed = std::stoull(val);
                    else if (key == "trigger_phase_rad")
                        rec.trigger_phase_rad = std::stod(val);
                    else if (key == "noisy")
                        rec.meta.noisy = val == "1";
                } catch (...) {
                    throw IoError("bad record header in " + path.string());
                }
            }
            if (line.find("# note=") == 0) rec.meta.note = line.substr(7);
            continue;
        }
        if (!header_seen) {  // column header row
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        try {
            std::getline(row, cell, ',');  // n
            std::getline(row, cell, ',');
            rec.precession_times_s.push_back(std::stod(cell));
            std::getline(row, cell, ',');
            rec.values.push_back(std::stod(cell));
        } catch (...) {
            throw IoError("bad record row in " + path.string() + ": " + line);
        }
    }
    if (rec.values.empty())
        throw IoError("record has no samples: " + path.string());
    return rec;
}

void write_metadata_json(const std::filesystem::path& path,
                         const ExperimentConfig& config,
                         const std::string& config_hash) {
    nlohmann::json j;
    j["tool"] = "aeris";
    j["format_version"] = 1;
    j["config_hash"] = config_hash;
    j["seed"] = config.seed;
    j["noise_stream"] =
        "ou: stationary resample at stage start, continuous within stage";
    j["config"] = to_json(config);
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

ExperimentConfig read_metadata_json(const std::filesystem::path& path,
                                    std::string* config_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open metadata: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad metadata json in " + path.string() + ": " + e.what());
    }
    if (config_hash && j.contains("config_hash"))
        *config_hash = j["config_hash"].get<std::string>();
    if (!j.contains("config"))
        throw IoError("metadata missing 'config': " + path.string());
    return config_from_json(j["config"]);
}

void write_spectrum_json(const std::filesystem::path& path,
                         const Spectrum& spectrum, std::uint64_t seed,
                         const std::string& config_hash) {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["bin_width_hz"] = spectrum.bin_width_hz;
    j["tau_s"] = spectrum.tau_s;
    j["zero_pad_factor"] = spectrum.zero_pad_factor;
    j["frequencies_hz"] = round_trip_array(spectrum.frequencies_hz);
    j["absorptive"] = round_trip_array(spectrum.absorptive());
    std::vector<double> imag(spectrum.values.size());
    for (std::size_t i = 0; i < spectrum.values.size(); ++i)
        imag[i] = spectrum.values[i].imag();
    j["dispersive"] = round_trip_array(imag);
    j["magnitude"] = round_trip_array(spectrum.magnitude());
    auto out = open_out(path);
    out << j.dump() << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

void write_peaks_json(const std::filesystem::path& path,
                      const std::vector<PeakReport>& reports,
                      std::uint64_t seed, const std::string& config_hash) {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["peaks"] = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json p;
        p["bin"] = r.peak.bin;
        p["frequency_hz"] = r.peak.frequency_hz;
        p["height"] = r.peak.height;
        p["fit_ok"] = r.fit_ok;
        if (r.fit_ok) {
            p["fit"] = {{"center_hz", r.fit.center_hz},
                        {"fwhm_hz", r.fit.fwhm_hz},
                        {"amplitude", r.fit.amplitude},
                        {"baseline", r.fit.baseline},
                        {"residual_norm", r.fit.residual_norm}};
        } else {
            p["fit_error"] = r.fit_error;
        }
        j["peaks"].push_back(std::move(p));
    }
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

void write_geometry_csv(const std::filesystem::path& path,
                        const std::vector<double>& etas,
                        const std::vector<GeometricFactors>& factors,
                        const std::string& config_hash) {
    auto out = open_out(path);
    out << "# aeris geometry sweep\n# config_hash=" << config_hash << "\n";
    out << "radius_over_depth,f_integral,gx,gy\n";
    for (std::size_t i = 0; i < etas.size(); ++i)
        out << num(etas[i]) << ',' << num(factors[i].f) << ','
            << num(factors[i].gx) << ',' << num(factors[i].gy) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

void write_noise_curve_csv(const std::filesystem::path& path,
                           const std::vector<NoiseSweepPoint>& points,
                           const std::string& config_hash) {
    auto out = open_out(path);
    out << "# aeris robustness sweep\n# config_hash=" << config_hash << "\n";
    out << "sigma,fwhm_standard_hz,standard_ok,fwhm_robust_hz,robust_ok\n";
    for (const auto& p : points)
        out << num(p.sigma) << ',' << num(p.fwhm_standard_hz) << ','
            << (p.standard_ok ? 1 : 0) << ',' << num(p.fwhm_robust_hz) << ','
            << (p.robust_ok ? 1 : 0) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

} // namespace aeris
