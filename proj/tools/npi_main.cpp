#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "npi/config.hpp"
#include "npi/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int worker_count(int cli_value) {
    // env override applies to the worker count only
    if (const char* env = std::getenv("NPI_WORKERS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring unparsable NPI_WORKERS\n";
        }
    }
    return std::max(1, cli_value);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"npi: path-integral and master-equation simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false, out_set = false;
    int workers = 1;
    std::vector<std::string> manifests;

    auto* run = app.add_subcommand("run", "run an experiment from a config");
    run->add_option("config", config_path, "config file (JSON)")->required();
    run->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--out", out_dir, "override the output directory")
        ->each([&](const std::string&) { out_set = true; });
    run->add_option("--workers", workers, "concurrent branch workers");

    auto* validate = app.add_subcommand("validate", "check a config file");
    validate->add_option("config", config_path, "config file (JSON)")->required();

    auto* summ = app.add_subcommand("summarize", "compare finished runs");
    summ->add_option("manifests", manifests, "manifest.json paths")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) {
            try {
                npi::parse_config(read_file(config_path));
            } catch (const npi::ConfigError& e) {
                for (const auto& err : e.errors) std::cerr << err << "\n";
                return kExitValidation;
            }
            std::cout << "ok\n";
            return kExitOk;
        }

        if (app.got_subcommand(run)) {
            npi::ExperimentConfig cfg;
            try {
                cfg = npi::parse_config(read_file(config_path));
            } catch (const npi::ConfigError& e) {
                for (const auto& err : e.errors) std::cerr << err << "\n";
                return kExitValidation;
            }
            if (seed_set) cfg.seed = seed;
            if (out_set) cfg.output_dir = out_dir;
            auto manifest = npi::run_experiment(cfg, worker_count(workers));
            std::cout << "run complete: " << manifest.path << "\n";
            return kExitOk;
        }

        // summarize
        auto summary = npi::summarize(manifests);
        std::cout << summary.text();
        std::cout << "\n" << summary.csv();
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
