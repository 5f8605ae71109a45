#include "aeris/config.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>

#include "aeris/sample.hpp"

namespace aeris {

namespace {

using toml::Table;
using toml::Value;

void check_keys(const Table& t, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : t) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("config: unknown key '" + prefix + key + "'");
    }
}

const Value* find(const Table& t, const std::string& key) {
    auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second;
}

double require_double(const Table& t, const std::string& prefix,
                      const std::string& key) {
    const Value* v = find(t, key);
    if (!v) throw ConfigError("config: missing key '" + prefix + key + "'");
    return v->as_double(prefix + key);
}

double get_double(const Table& t, const std::string& prefix,
                  const std::string& key, double fallback) {
    const Value* v = find(t, key);
    return v ? v->as_double(prefix + key) : fallback;
}

std::int64_t require_int(const Table& t, const std::string& prefix,
                         const std::string& key) {
    const Value* v = find(t, key);
    if (!v) throw ConfigError("config: missing key '" + prefix + key + "'");
    return v->as_int(prefix + key);
}

} // namespace

ExperimentConfig config_from_toml(const Table& root) {
    check_keys(root, "",
               {"seed", "sample", "schedule", "sensor", "noise", "analysis",
                "geometry", "robustness"});

    ExperimentConfig cfg;
    if (const Value* v = find(root, "seed")) {
        const std::int64_t s = v->as_int("seed");
        if (s < 0) throw ConfigError("config: 'seed' must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(s);
    }

    // ---- sample -------------------------------------------------------
    const Value* sv = find(root, "sample");
    if (!sv) throw ConfigError("config: missing [sample]");
    const Table& st = sv->as_table("sample");
    check_keys(st, "sample.",
               {"b_ext_t", "temperature_k", "t1_s", "t2_star_s",
                "rf_carrier_mhz", "chemistry", "component"});
    cfg.sample.b_ext_t = require_double(st, "sample.", "b_ext_t");
    cfg.sample.temperature_k = require_double(st, "sample.", "temperature_k");
    cfg.sample.t1_s = require_double(st, "sample.", "t1_s");
    cfg.sample.t2_star_s = require_double(st, "sample.", "t2_star_s");
    cfg.sample.rf_carrier_hz =
        require_double(st, "sample.", "rf_carrier_mhz") * 1e6;

    const Value* chem = find(st, "chemistry");
    const Value* comps = find(st, "component");
    if ((chem == nullptr) == (comps == nullptr))
        throw ConfigError(
            "config: need exactly one of [sample.chemistry] or "
            "[[sample.component]]");
    if (chem) {
        const std::string p = "sample.chemistry.";
        const Table& ct = chem->as_table("sample.chemistry");
        check_keys(ct, p, {"j_coupling_hz", "total_amplitude_nt", "multiplet"});
        const double j_hz = require_double(ct, p, "j_coupling_hz");
        const double total_t =
            require_double(ct, p, "total_amplitude_nt") * 1e-9;
        const Value* mv = find(ct, "multiplet");
        if (!mv) throw ConfigError("config: missing '" + p + "multiplet'");
        const auto& arr = mv->as_array(p + "multiplet");
        if (arr.empty())
            throw ConfigError("config: '" + p + "multiplet' is empty");
        std::vector<MultipletPattern> patterns;
        double proton_sum = 0.0;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string mp = p + "multiplet[" + std::to_string(i) + "].";
            const auto& mt = arr[i].as_table(p + "multiplet");
            check_keys(mt, mp, {"shift_ppm", "ratios", "protons"});
            MultipletPattern pat;
            pat.shift_ppm = require_double(mt, mp, "shift_ppm");
            const Value* rv = find(mt, "ratios");
            if (!rv) throw ConfigError("config: missing '" + mp + "ratios'");
            for (const auto& r : rv->as_array(mp + "ratios"))
                pat.ratios.push_back(r.as_double(mp + "ratios"));
            const double protons = require_double(mt, mp, "protons");
            if (!(protons > 0))
                throw ConfigError("config: '" + mp + "protons' must be > 0");
            pat.fraction = protons;
            proton_sum += protons;
            patterns.push_back(std::move(pat));
        }
        for (auto& pat : patterns) pat.fraction /= proton_sum;
        cfg.sample.components = build_multiplet(
            patterns, j_hz, cfg.sample.rf_carrier_hz, total_t);
    } else {
        const auto& arr = comps->as_array("sample.component");
        if (arr.empty())
            throw ConfigError("config: [[sample.component]] is empty");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string cp = "sample.component[" + std::to_string(i) + "].";
            const auto& ct = arr[i].as_table("sample.component");
            check_keys(ct, cp, {"detuning_hz", "amplitude_pt"});
            cfg.sample.components.push_back(
                {require_double(ct, cp, "detuning_hz"),
                 require_double(ct, cp, "amplitude_pt") * 1e-12});
        }
    }
    cfg.sample.validate();

    // ---- schedule -----------------------------------------------------
    const Value* scv = find(root, "schedule");
    if (!scv) throw ConfigError("config: missing [schedule]");
    const Table& sct = scv->as_table("schedule");
    check_keys(sct, "schedule.",
               {"tau_ms", "t_m_us", "cycles", "rabi_khz", "variant"});
    cfg.schedule.tau_s = require_double(sct, "schedule.", "tau_ms") * 1e-3;
    cfg.schedule.t_m_s = require_double(sct, "schedule.", "t_m_us") * 1e-6;
    const std::int64_t cycles = require_int(sct, "schedule.", "cycles");
    if (cycles < 1) throw ConfigError("config: 'schedule.cycles' must be >= 1");
    cfg.schedule.cycles = static_cast<std::size_t>(cycles);
    cfg.schedule.rabi_hz = require_double(sct, "schedule.", "rabi_khz") * 1e3;
    Variant variant = Variant::standard;
    if (const Value* v = find(sct, "variant")) {
        const std::string& name = v->as_string("schedule.variant");
        if (name == "standard")
            variant = Variant::standard;
        else if (name == "robust")
            variant = Variant::robust;
        else
            throw ConfigError(
                "config: 'schedule.variant' must be \"standard\" or \"robust\"");
    }
    cfg.schedule.validate();

    // ---- sensor -------------------------------------------------------
    if (const Value* v = find(root, "sensor")) {
        const Table& t = v->as_table("sensor");
        check_keys(t, "sensor.", {"gamma_e_ghz_per_t", "small_angle"});
        cfg.sensor.gamma_e =
            get_double(t, "sensor.", "gamma_e_ghz_per_t", 28.024) * 1e9 * two_pi;
        if (const Value* b = find(t, "small_angle"))
            cfg.sensor.small_angle = b->as_bool("sensor.small_angle");
        if (!(cfg.sensor.gamma_e > 0))
            throw ConfigError("config: 'sensor.gamma_e_ghz_per_t' must be > 0");
    }
    apply_variant(cfg, variant);

    // ---- noise --------------------------------------------------------
    if (const Value* v = find(root, "noise")) {
        const Table& t = v->as_table("noise");
        check_keys(t, "noise.",
                   {"sigma_percent", "corr_time_ms", "amp_shift_percent",
                    "step_us", "realizations"});
        NoiseModel nm;
        nm.sigma = require_double(t, "noise.", "sigma_percent") / 100.0;
        nm.corr_time_s = get_double(t, "noise.", "corr_time_ms", 1.0) * 1e-3;
        nm.amp_shift = get_double(t, "noise.", "amp_shift_percent", 0.0) / 100.0;
        nm.step_s = get_double(t, "noise.", "step_us", 1.0) * 1e-6;
        nm.seed = cfg.seed;
        nm.validate();
        cfg.noise = nm;
        if (const Value* r = find(t, "realizations")) {
            const std::int64_t n = r->as_int("noise.realizations");
            if (n < 1)
                throw ConfigError("config: 'noise.realizations' must be >= 1");
            cfg.realizations = static_cast<std::size_t>(n);
        }
    }

    // ---- analysis -----------------------------------------------------
    if (const Value* v = find(root, "analysis")) {
        const Table& t = v->as_table("analysis");
        check_keys(t, "analysis.", {"zero_pad_factor", "min_prominence"});
        if (const Value* z = find(t, "zero_pad_factor")) {
            const std::int64_t pad = z->as_int("analysis.zero_pad_factor");
            if (pad < 1)
                throw ConfigError(
                    "config: 'analysis.zero_pad_factor' must be >= 1");
            cfg.analysis.zero_pad_factor = static_cast<int>(pad);
        }
        cfg.analysis.min_prominence =
            get_double(t, "analysis.", "min_prominence", 5.0);
        if (!(cfg.analysis.min_prominence > 0))
            throw ConfigError("config: 'analysis.min_prominence' must be > 0");
    }

    // ---- geometry -----------------------------------------------------
    if (const Value* v = find(root, "geometry")) {
        const Table& t = v->as_table("geometry");
        check_keys(t, "geometry.",
                   {"depth_nm", "nv_axis", "resolution", "eta_grid"});
        GeometrySweepConfig g;
        g.depth_m = require_double(t, "geometry.", "depth_nm") * 1e-9;
        if (!(g.depth_m > 0))
            throw ConfigError("config: 'geometry.depth_nm' must be > 0");
        if (const Value* a = find(t, "nv_axis")) {
            const auto& arr = a->as_array("geometry.nv_axis");
            if (arr.size() != 3)
                throw ConfigError("config: 'geometry.nv_axis' needs 3 entries");
            for (int i = 0; i < 3; ++i)
                g.nv_axis[static_cast<std::size_t>(i)] =
                    arr[static_cast<std::size_t>(i)].as_double(
                        "geometry.nv_axis");
        }
        if (const Value* r = find(t, "resolution")) {
            const std::int64_t res = r->as_int("geometry.resolution");
            if (res < 16)
                throw ConfigError("config: 'geometry.resolution' must be >= 16");
            g.resolution = static_cast<int>(res);
        }
        const Value* grid = find(t, "eta_grid");
        if (!grid) throw ConfigError("config: missing 'geometry.eta_grid'");
        for (const auto& e : grid->as_array("geometry.eta_grid")) {
            const double eta = e.as_double("geometry.eta_grid");
            if (!(eta > 0))
                throw ConfigError("config: 'geometry.eta_grid' must be > 0");
            g.eta_grid.push_back(eta);
        }
        if (g.eta_grid.empty())
            throw ConfigError("config: 'geometry.eta_grid' is empty");
        cfg.geometry = std::move(g);
    }

    // ---- robustness ---------------------------------------------------
    if (const Value* v = find(root, "robustness")) {
        const Table& t = v->as_table("robustness");
        check_keys(t, "robustness.", {"sigma_percent_grid", "realizations"});
        RobustnessConfig r;
        const Value* grid = find(t, "sigma_percent_grid");
        if (!grid)
            throw ConfigError("config: missing 'robustness.sigma_percent_grid'");
        for (const auto& e : grid->as_array("robustness.sigma_percent_grid")) {
            const double s = e.as_double("robustness.sigma_percent_grid");
            if (!(s >= 0))
                throw ConfigError(
                    "config: 'robustness.sigma_percent_grid' must be >= 0");
            r.sigmas.push_back(s / 100.0);
        }
        if (r.sigmas.empty())
            throw ConfigError("config: 'robustness.sigma_percent_grid' is empty");
        if (const Value* n = find(t, "realizations")) {
            const std::int64_t count = n->as_int("robustness.realizations");
            if (count < 1)
                throw ConfigError(
                    "config: 'robustness.realizations' must be >= 1");
            r.realizations = static_cast<std::size_t>(count);
        }
        cfg.robustness = std::move(r);
    }

    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_toml(toml::parse_file(path));
}

void apply_variant(ExperimentConfig& config, Variant variant) {
    config.schedule.variant = variant;
    config.sensor.modulation = variant == Variant::robust
                                   ? ModulationKind::double_echo
                                   : ModulationKind::xy4;
}

namespace {

nlohmann::json finite_or_string(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double from_finite_or_string(const nlohmann::json& j, const char* field) {
    if (j.is_string()) {
        const std::string& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ConfigError(std::string("config json: bad value for ") + field);
    }
    return j.get<double>();
}

} // namespace

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["seed"] = c.seed;
    auto& s = j["sample"];
    s["b_ext_t"] = c.sample.b_ext_t;
    s["temperature_k"] = c.sample.temperature_k;
    s["t1_s"] = finite_or_string(c.sample.t1_s);
    s["t2_star_s"] = finite_or_string(c.sample.t2_star_s);
    s["rf_carrier_hz"] = c.sample.rf_carrier_hz;
    s["components"] = nlohmann::json::array();
    for (const auto& comp : c.sample.components)
        s["components"].push_back({{"detuning_hz", comp.detuning_hz},
                                   {"amplitude_t", comp.amplitude_t}});
    auto& sc = j["schedule"];
    sc["tau_s"] = c.schedule.tau_s;
    sc["t_m_s"] = c.schedule.t_m_s;
    sc["cycles"] = c.schedule.cycles;
    sc["rabi_hz"] = c.schedule.rabi_hz;
    sc["variant"] =
        c.schedule.variant == Variant::robust ? "robust" : "standard";
    auto& se = j["sensor"];
    se["gamma_e_rad_per_s_t"] = c.sensor.gamma_e;
    se["modulation"] = c.sensor.modulation == ModulationKind::double_echo
                           ? "double_echo"
                           : "xy4";
    se["small_angle"] = c.sensor.small_angle;
    if (c.noise) {
        auto& n = j["noise"];
        n["sigma"] = c.noise->sigma;
        n["corr_time_s"] = c.noise->corr_time_s;
        n["amp_shift"] = c.noise->amp_shift;
        n["step_s"] = c.noise->step_s;
        n["seed"] = c.noise->seed;
    } else {
        j["noise"] = nullptr;
    }
    j["realizations"] = c.realizations;
    j["analysis"] = {{"zero_pad_factor", c.analysis.zero_pad_factor},
                     {"min_prominence", c.analysis.min_prominence}};
    if (c.geometry) {
        j["geometry"] = {{"depth_m", c.geometry->depth_m},
                         {"nv_axis", c.geometry->nv_axis},
                         {"resolution", c.geometry->resolution},
                         {"eta_grid", c.geometry->eta_grid}};
    } else {
        j["geometry"] = nullptr;
    }
    if (c.robustness) {
        j["robustness"] = {{"sigmas", c.robustness->sigmas},
                           {"realizations", c.robustness->realizations}};
    } else {
        j["robustness"] = nullptr;
    }
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    try {
        ExperimentConfig c;
        c.seed = j.at("seed").get<std::uint64_t>();
        const auto& s = j.at("sample");
        c.sample.b_ext_t = s.at("b_ext_t").get<double>();
        c.sample.temperature_k = s.at("temperature_k").get<double>();
        c.sample.t1_s = from_finite_or_string(s.at("t1_s"), "sample.t1_s");
        c.sample.t2_star_s =
            from_finite_or_string(s.at("t2_star_s"), "sample.t2_star_s");
        c.sample.rf_carrier_hz = s.at("rf_carrier_hz").get<double>();
        for (const auto& comp : s.at("components"))
            c.sample.components.push_back(
                {comp.at("detuning_hz").get<double>(),
                 comp.at("amplitude_t").get<double>()});
        const auto& sc = j.at("schedule");
        c.schedule.tau_s = sc.at("tau_s").get<double>();
        c.schedule.t_m_s = sc.at("t_m_s").get<double>();
        c.schedule.cycles = sc.at("cycles").get<std::size_t>();
        c.schedule.rabi_hz = sc.at("rabi_hz").get<double>();
        c.schedule.variant = sc.at("variant").get<std::string>() == "robust"
                                 ? Variant::robust
                                 : Variant::standard;
        const auto& se = j.at("sensor");
        c.sensor.gamma_e = se.at("gamma_e_rad_per_s_t").get<double>();
        c.sensor.modulation =
            se.at("modulation").get<std::string>() == "double_echo"
                ? ModulationKind::double_echo
                : ModulationKind::xy4;
        c.sensor.small_angle = se.at("small_angle").get<bool>();
        if (!j.at("noise").is_null()) {
            NoiseModel nm;
            const auto& n = j.at("noise");
            nm.sigma = n.at("sigma").get<double>();
            nm.corr_time_s = n.at("corr_time_s").get<double>();
            nm.amp_shift = n.at("amp_shift").get<double>();
            nm.step_s = n.at("step_s").get<double>();
            nm.seed = n.at("seed").get<std::uint64_t>();
            c.noise = nm;
        }
        c.realizations = j.at("realizations").get<std::size_t>();
        c.analysis.zero_pad_factor =
            j.at("analysis").at("zero_pad_factor").get<int>();
        c.analysis.min_prominence =
            j.at("analysis").at("min_prominence").get<double>();
        if (!j.at("geometry").is_null()) {
            GeometrySweepConfig g;
            const auto& gj = j.at("geometry");
            g.depth_m = gj.at("depth_m").get<double>();
            for (int i = 0; i < 3; ++i)
                g.nv_axis[static_cast<std::size_t>(i)] =
                    gj.at("nv_axis")[static_cast<std::size_t>(i)].get<double>();
            g.resolution = gj.at("resolution").get<int>();
            g.eta_grid = gj.at("eta_grid").get<std::vector<double>>();
            c.geometry = std::move(g);
        }
        if (!j.at("robustness").is_null()) {
            RobustnessConfig r;
            r.sigmas = j.at("robustness").at("sigmas").get<std::vector<double>>();
            r.realizations =
                j.at("robustness").at("realizations").get<std::size_t>();
            c.robustness = std::move(r);
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config json: ") + e.what());
    }
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash_hex(const ExperimentConfig& config) {
    const std::uint64_t h = fnv1a64(to_json(config).dump());
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

} // namespace aeris
