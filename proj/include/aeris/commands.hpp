#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace aeris {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::string records_dir;  // spectrum input; defaults to out_dir
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> realizations;
    std::optional<std::string> variant;
    bool svg = false;
};

// Exit codes: 0 ok, 1 unexpected, 2 invalid config, 3 physics precondition,
// 4 I/O failure, 5 fit non-convergence (partial results are still written).
int cmd_simulate(const CliOptions& options);
int cmd_spectrum(const CliOptions& options);
int cmd_geometry(const CliOptions& options);
int cmd_robustness(const CliOptions& options);

int run_cli_command(int (*command)(const CliOptions&),
                    const CliOptions& options);

} // namespace aeris
