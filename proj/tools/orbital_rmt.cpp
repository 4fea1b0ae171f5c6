// orbital-rmt: run / validate / describe / selftest front-end.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "orbital/experiments.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Parse and validate; prints every error and returns false on failure.
bool load_config(const std::string& path, orbital::ExperimentConfig& cfg) {
    std::vector<orbital::ConfigError> errors;
    cfg = orbital::parse_config(read_file(path), errors);
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error [" << e.key << "]: " << e.message << "\n";
        return false;
    }
    return true;
}

void apply_worker_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("ORBITAL_RMT_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) omp_set_num_threads(n);
    }
#endif
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbital-rmt: Monte Carlo experiments on random block operators"};
    app.require_subcommand(1);

    std::string config_path, experiment_name;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "config file (key = value lines)")->required();

    auto* validate = app.add_subcommand("validate", "validate a config file without running");
    validate->add_option("config", config_path, "config file")->required();

    auto* describe = app.add_subcommand("describe", "print an experiment's schema and defaults");
    describe->add_option("experiment", experiment_name, "experiment name; omit to list all");

    app.add_subcommand("selftest", "run the fast invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            apply_worker_env();
            orbital::ExperimentConfig cfg;
            if (!load_config(config_path, cfg)) return 2;
            orbital::ResultRecord rec = orbital::run_experiment(cfg);
            const std::string& out = cfg.get("out");
            if (!out.empty()) {
                orbital::write_results(rec, out);
                std::cout << "wrote " << out << ".jsonl and " << out << ".csv\n";
            }
            std::cout << orbital::render_summary(rec) << "\n";
            return 0;
        }
        if (validate->parsed()) {
            orbital::ExperimentConfig cfg;
            if (!load_config(config_path, cfg)) return 2;
            std::cout << "ok: " << cfg.experiment << "\n";
            for (const auto& [k, v] : cfg.values) std::cout << k << " = " << v << "\n";
            return 0;
        }
        if (describe->parsed()) {
            if (experiment_name.empty()) {
                std::cout << "experiments:\n";
                for (const auto& s : orbital::experiment_schemas())
                    std::cout << "  " << s.name << ": " << s.summary << "\n";
                return 0;
            }
            if (!orbital::find_schema(experiment_name)) {
                std::cerr << "unknown experiment '" << experiment_name << "'\n";
                return 2;
            }
            std::cout << orbital::describe_experiment(experiment_name);
            return 0;
        }
        // selftest
        apply_worker_env();
        int failures = orbital::run_selftest();
        std::cout << (failures == 0 ? "selftest passed\n"
                                    : "selftest FAILED (" + std::to_string(failures) + " checks)\n");
        return failures == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
