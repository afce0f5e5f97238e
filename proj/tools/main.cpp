#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "latwalk/experiment.hpp"

namespace {

// Exit codes: 0 success, 1 runtime failure, 2 config error.
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int loadConfig(const std::string& path, latwalk::ExperimentConfig& out) {
    std::string text;
    try {
        text = readFile(path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    auto parsed = latwalk::validateConfig(text);
    if (!parsed.ok()) {
        for (const auto& err : parsed.errors) {
            std::cerr << "config error";
            if (!err.path.empty()) std::cerr << " at " << err.path;
            std::cerr << ": " << err.message << "\n";
        }
        return kExitConfig;
    }
    out = *parsed.config;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice random-walk experiments on bounded domains"};
    app.require_subcommand(1);

    std::string configPath;
    std::string outputOverride;

    auto* run = app.add_subcommand("run", "run every experiment in a config");
    run->add_option("config", configPath, "experiment config (JSON)")->required();
    run->add_option("--output", outputOverride, "override the config's output directory");

    std::string validatePath;
    auto* validate = app.add_subcommand("validate", "check a config and report all errors");
    validate->add_option("config", validatePath, "experiment config (JSON)")->required();

    bool builtinsJson = false;
    auto* builtins = app.add_subcommand("builtins", "list built-in domains and test functions");
    builtins->add_flag("--json", builtinsJson, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (run->parsed()) {
            latwalk::ExperimentConfig cfg;
            if (int rc = loadConfig(configPath, cfg); rc != 0) return rc;
            if (!outputOverride.empty()) cfg.outputDir = outputOverride;
            return latwalk::runExperiment(cfg) == 0 ? 0 : kExitRuntime;
        }
        if (validate->parsed()) {
            latwalk::ExperimentConfig cfg;
            if (int rc = loadConfig(validatePath, cfg); rc != 0) return rc;
            std::cout << "ok\n";
            return 0;
        }
        if (builtins->parsed()) {
            std::cout << latwalk::listBuiltins(builtinsJson);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
