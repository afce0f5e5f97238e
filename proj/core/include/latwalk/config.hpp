#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "latwalk/domain.hpp"
#include "latwalk/walk.hpp"

namespace latwalk {

enum class ExperimentKind {
    buildGrid,
    energy,
    spectrumCheck,
    marginal,
    occupation,
    crevice,
    exitTime,
};

std::string to_string(ExperimentKind kind);

/// Domain selection as read from the config document.
struct DomainConfig {
    std::string name; // rectangle | disk | slitDisk | kochPrefractal | comb | polygon
    std::vector<std::array<double, 2>> bounds{{0.0, 1.0}, {0.0, 1.0}}; // rectangle
    Point center{0.0, 0.0};                                            // disk
    double radius = 1.0;                                               // disk
    int prefractalLevel = 0;                                           // kochPrefractal
    std::vector<double> channelWidths;                                 // comb
    std::vector<std::vector<std::array<double, 2>>> loops;             // polygon
    std::optional<Point> basePoint;                                    // optional override
};

std::unique_ptr<Domain> makeDomain(const DomainConfig& cfg);

struct AnalysisConfig {
    double time = 0.1;                     // marginal / exitTime observation time
    int bins = 20;                         // histogram bins per axis
    std::int64_t occupationSteps = 1000000;
    std::optional<Box> subBox;             // exitTime; default: centered, half extent
    GridTag gridTag = GridTag::cubeBased;  // grid flavor used by buildGrid/energy
};

/// One experiment batch: domain, levels, walk parameters, experiment list.
struct ExperimentConfig {
    DomainConfig domain;
    std::vector<int> levels;
    double c1 = 0.5;
    double horizon = 1.0;
    std::int64_t replicas = 10000;
    std::uint64_t seed = 0;
    Discipline discipline = Discipline::discreteTime;
    StartMode start = StartMode::stationary();
    std::vector<ExperimentKind> experiments{ExperimentKind::buildGrid};
    std::vector<std::string> testFunctions{"x1"};
    AnalysisConfig analysis;
    std::string outputDir = "out";
    int parallelism = 1;

    WalkConfig walkConfig(int level) const;

    /// Canonical JSON echo of the parsed config (defaults filled in);
    /// hashing this gives the manifest's config hash.
    std::string canonicalJson() const;
};

struct ConfigError {
    std::string path;
    std::string message;
};

struct ConfigParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<ConfigError> errors;

    bool ok() const { return config.has_value() && errors.empty(); }
};

/// Parses and validates a config document, reporting every error at once
/// with its field path. Never throws on bad input.
ConfigParseResult validateConfig(const std::string& jsonText);

} // namespace latwalk
