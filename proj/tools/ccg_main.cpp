#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ccg/experiments.hpp"

namespace {

int dispatch(const std::string& name, const std::string& config_path,
             const std::vector<std::string>& sets, const std::string& seed,
             const std::string& out, long replicas, long workers) {
    using namespace ccg;
    cli::ExperimentConfig cfg = config_path.empty()
                                    ? cli::ExperimentConfig::empty()
                                    : cli::ExperimentConfig::from_file(config_path);
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw cli::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!seed.empty()) cfg.set("seed", seed);
    if (!out.empty()) cfg.set("out", out);
    if (replicas > 0) cfg.set("replicas", std::to_string(replicas));
    if (workers > 0) cfg.set("workers", std::to_string(workers));
    if (cfg.has("experiment") &&
        cfg.get_string("experiment", "") != name)
        throw cli::ConfigError("config names experiment '" +
                               cfg.get_string("experiment", "") +
                               "' but subcommand is '" + name + "'");
    return cli::run_experiment(name, cfg, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concentration experiments for high-dimensional convex bodies"};
    app.require_subcommand(1);

    std::string config_path, seed, out;
    long replicas = 0, workers = 0;
    std::vector<std::string> sets;
    app.add_option("--config,-c", config_path, "key = value config file")
        ->expected(1);
    app.add_option("--seed", seed, "RNG seed (required, no wall-clock default)");
    app.add_option("--out", out, "output directory for reports");
    app.add_option("--replicas", replicas, "replica count for CIs");
    app.add_option("--workers", workers, "worker threads (0 = all)");
    app.add_option("--set", sets, "extra key=value settings")->allow_extra_args(false);

    std::string chosen;
    for (const auto& info : ccg::cli::experiment_catalog()) {
        auto* sub = app.add_subcommand(info.name, info.description);
        sub->fallthrough();
        sub->callback([&chosen, name = info.name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : ccg::cli::exit_config_error;
    }

    if (chosen == "list") {
        std::cout << ccg::cli::list_experiments();
        return ccg::cli::exit_ok;
    }
    try {
        return dispatch(chosen, config_path, sets, seed, out, replicas,
                        workers);
    } catch (const ccg::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ccg::cli::exit_config_error;
    } catch (const ccg::dist::SpecError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ccg::cli::exit_config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ccg::cli::exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
