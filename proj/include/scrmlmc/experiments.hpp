#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scrmlmc/alm.hpp"
#include "scrmlmc/butterfly.hpp"
#include "scrmlmc/config.hpp"

namespace scrmlmc {

// Experiment registry. Each experiment consumes the shared config, writes
// `<name>.csv` plus `<name>.manifest.cfg` (a config file that reproduces the
// run via the `run` subcommand) into the output directory.
std::vector<std::string> experiment_names();
bool is_experiment(const std::string& name);

void run_experiment(const std::string& name, ConfigFile& config,
                    const std::filesystem::path& out_dir);

// Shared config-block resolution (defaults are written back into the config
// so that the manifest is complete).
MarketParams resolve_market(ConfigFile& config);
ALMParams resolve_alm(ConfigFile& config);
EstimatorConfig resolve_estimator(ConfigFile& config);
ButterflyParams resolve_butterfly(ConfigFile& config);
RateShock resolve_shock_table(ConfigFile& config);

struct RunSettings {
    std::uint64_t seed = 12345;
    int n_batch = 10;
    ExecPolicy exec;
};
RunSettings resolve_run(ConfigFile& config);

}  // namespace scrmlmc
