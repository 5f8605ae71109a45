#include <CLI11.hpp>

#include "aeris/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"aeris — nanoscale NMR detection protocol simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "aeris 0.1.0");

    aeris::CliOptions opt;
    std::uint64_t seed_value = 0;
    std::size_t realizations_value = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* config =
            sub->add_option("--config", opt.config_path, "TOML preset path");
        if (needs_config) config->required();
        sub->add_option("--out", opt.out_dir, "output directory")
            ->capture_default_str();
        sub->add_flag("--svg", opt.svg, "also write SVG plots");
        sub->add_option("--seed", seed_value, "override the config seed");
        sub->add_option("--realizations", realizations_value,
                        "override the noise realization count");
    };

    auto* simulate =
        app.add_subcommand("simulate", "run the protocol, write records");
    add_common(simulate, true);
    std::string variant;
    simulate->add_option("--variant", variant, "standard|robust");

    auto* spectrum = app.add_subcommand(
        "spectrum", "transform records into a spectrum with fitted peaks");
    add_common(spectrum, false);
    spectrum->add_option("--records", opt.records_dir,
                         "directory with record CSVs and metadata.json");

    auto* geometry =
        app.add_subcommand("geometry", "sweep the geometric factor");
    add_common(geometry, true);

    auto* robustness = app.add_subcommand(
        "robustness", "linewidth versus control-noise amplitude");
    add_common(robustness, true);

    CLI11_PARSE(app, argc, argv);

    CLI::App* active = app.get_subcommands().front();
    if (active->count("--seed")) opt.seed = seed_value;
    if (active->count("--realizations")) opt.realizations = realizations_value;
    if (simulate->count("--variant")) opt.variant = variant;

    if (simulate->parsed())
        return aeris::run_cli_command(aeris::cmd_simulate, opt);
    if (spectrum->parsed())
        return aeris::run_cli_command(aeris::cmd_spectrum, opt);
    if (geometry->parsed())
        return aeris::run_cli_command(aeris::cmd_geometry, opt);
    return aeris::run_cli_command(aeris::cmd_robustness, opt);
}
