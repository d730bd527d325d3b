#include <CLI11.hpp>
#include <iostream>

#include "scrmlmc/experiments.hpp"

namespace {

struct Options {
    std::string experiment;
    std::string config_path;
    std::string out_dir = "out";
    long seed = -1;
};

int run(const Options& opt) {
    using namespace scrmlmc;
    try {
        ConfigFile config = ConfigFile::parse_file(opt.config_path);
        std::string name = opt.experiment;
        if (name == "run") {
            name = config.get_string("run", "experiment", "");
            if (name.empty())
                throw ConfigError("run: config must set [run] experiment = <name>");
        }
        if (!is_experiment(name)) throw ConfigError("unknown experiment '" + name + "'");
        if (opt.seed >= 0) config.set("run", "seed", std::to_string(opt.seed));
        run_experiment(name, config, opt.out_dir);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo estimation of nested expectations and future SCR"};
    app.require_subcommand(1);
    Options opt;

    auto add = [&](const std::string& name, const std::string& description) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", opt.config_path, "configuration file")->required();
        sub->add_option("--seed", opt.seed, "override [run] seed");
        sub->add_option("--out", opt.out_dir, "output directory (default ./out)");
        sub->callback([&opt, name] { opt.experiment = name; });
    };

    add("run", "run the experiment named in the config's [run] section");
    for (const auto& name : scrmlmc::experiment_names()) add(name, "emit " + name + ".csv");

    CLI11_PARSE(app, argc, argv);
    return run(opt);
}
