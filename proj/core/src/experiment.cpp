#include "latwalk/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latwalk/analysis.hpp"
#include "latwalk/operators.hpp"
#include "latwalk/rng.hpp"
#include "latwalk/test_functions.hpp"

namespace latwalk {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

json walkConfigJson(const WalkConfig& cfg) {
    json j;
    j["level"] = cfg.level;
    j["horizon"] = cfg.horizon;
    j["replicas"] = cfg.replicas;
    j["seed"] = cfg.seed;
    j["discipline"] = to_string(cfg.discipline);
    if (cfg.start.kind == StartMode::Kind::stationary) {
        j["start"] = "stationary";
    } else {
        j["start"] = json{{"fixedVertex", cfg.start.vertex}};
    }
    return j;
}

class OutputWriter {
  public:
    explicit OutputWriter(fs::path dir) : dir_(std::move(dir)) {
        fs::create_directories(dir_);
    }

    void write(const std::string& experiment, int level, const std::string& name,
               const std::string& contents, const std::string& status = "ok") {
        fs::path file = dir_ / name;
        std::ofstream out(file, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + file.string());
        out << contents;
        out.close();
        json entry;
        entry["experiment"] = experiment;
        entry["level"] = level;
        entry["file"] = name;
        entry["hash"] = toHex(fnv1a64(contents));
        entry["status"] = status;
        entries_.push_back(std::move(entry));
    }

    void note(const std::string& experiment, int level, const std::string& status) {
        json entry;
        entry["experiment"] = experiment;
        entry["level"] = level;
        entry["status"] = status;
        entries_.push_back(std::move(entry));
    }

    void finish(const std::string& configHash) {
        json manifest;
        manifest["configHash"] = configHash;
        manifest["outputs"] = entries_;
        fs::path file = dir_ / "manifest.json";
        std::ofstream out(file, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + file.string());
        out << manifest.dump(2) << "\n";
    }

  private:
    fs::path dir_;
    json entries_ = json::array();
};

std::string energyCsv(const std::vector<EnergyReport>& rows) {
    std::ostringstream out;
    out << "domain,k,c1,functionId,energySum,dirichletForm,continuumIntegral,relError\n";
    for (const auto& r : rows) {
        out << r.domain << ',' << r.level << ',' << doubleRepr(r.clearanceConstant) << ','
            << r.functionId << ',' << doubleRepr(r.energySumValue) << ','
            << doubleRepr(r.dirichletFormValue) << ',' << doubleRepr(r.continuumIntegral) << ','
            << doubleRepr(r.relError) << "\n";
    }
    return out.str();
}

std::string marginalJson(const MarginalComparison& cmp) {
    json j;
    j["level"] = cmp.level;
    j["time"] = cmp.time;
    j["replicas"] = cmp.replicas;
    j["binsPerAxis"] = cmp.binsPerAxis;
    j["binEdges"] = cmp.binEdges;
    j["empirical"] = cmp.empirical;
    j["oracle"] = cmp.oracle;
    j["tvDistance"] = cmp.tvDistance;
    j["gridFingerprint"] = toHex(cmp.gridFingerprint);
    j["walk"] = walkConfigJson(cmp.config);
    return j.dump(2) + "\n";
}

std::string occupationJson(const OccupationReport& rep) {
    json j;
    j["steps"] = rep.steps;
    j["tvDistance"] = rep.tvDistance;
    j["chiSquare"] = rep.chiSquare;
    j["maxDetailedBalanceZ"] = rep.maxDetailedBalanceZ;
    j["transitionPairs"] = rep.transitionPairs;
    j["gridFingerprint"] = toHex(rep.gridFingerprint);
    j["walk"] = walkConfigJson(rep.config);
    return j.dump(2) + "\n";
}

std::string creviceJson(const CreviceReport& rep) {
    json j;
    j["level"] = rep.level;
    j["c1"] = rep.c1;
    j["cubeBased"] = json{{"vertices", rep.cubeVertexCount},
                          {"edges", rep.cubeEdgeCount},
                          {"channelVertices", rep.cubeChannelVertices},
                          {"channelMass", rep.cubeChannelMass},
                          {"fingerprint", toHex(rep.cubeFingerprint)}};
    j["edgeBased"] = json{{"vertices", rep.edgeVertexCount},
                          {"edges", rep.edgeEdgeCount},
                          {"channelVertices", rep.edgeChannelVertices},
                          {"channelMass", rep.edgeChannelMass},
                          {"fingerprint", toHex(rep.edgeFingerprint)}};
    return j.dump(2) + "\n";
}

std::string exitTimeJson(const ExitTimeReport& rep) {
    json j;
    j["meanEmpirical"] = rep.meanEmpirical;
    j["meanOracle"] = rep.meanOracle;
    j["ksDistance"] = rep.ksDistance;
    j["replicas"] = rep.replicas;
    j["cappedReplicas"] = rep.cappedReplicas;
    j["subBox"] = json{{"lo", rep.subBox.lo}, {"hi", rep.subBox.hi}};
    j["gridFingerprint"] = toHex(rep.gridFingerprint);
    j["walk"] = walkConfigJson(rep.config);
    return j.dump(2) + "\n";
}

std::string spectrumJson(const ContractionReport& rep, std::uint64_t fingerprint, int count) {
    json j;
    j["functions"] = count;
    j["worstSlack"] = rep.worstSlack;
    j["ok"] = rep.ok;
    j["gridFingerprint"] = toHex(fingerprint);
    return j.dump(2) + "\n";
}

Box defaultSubBox(const Domain& domain) {
    // Centered box with half the extent per axis.
    const Box& bb = domain.boundingBox();
    Box box;
    box.lo.resize(bb.lo.size());
    box.hi.resize(bb.lo.size());
    for (std::size_t i = 0; i < bb.lo.size(); ++i) {
        double mid = 0.5 * (bb.lo[i] + bb.hi[i]);
        double quarter = 0.25 * (bb.hi[i] - bb.lo[i]);
        box.lo[i] = mid - quarter;
        box.hi[i] = mid + quarter;
    }
    return box;
}

} // namespace

int runExperiment(const ExperimentConfig& cfg) {
    try {
        auto domain = makeDomain(cfg.domain);
        OutputWriter writer{fs::path(cfg.outputDir)};
        std::string configHash = toHex(fnv1a64(cfg.canonicalJson()));

        for (int level : cfg.levels) {
            GridGraph grid = cfg.analysis.gridTag == GridTag::cubeBased
                                 ? buildCubeComplex(*domain, level, cfg.c1)
                                 : buildEdgeGraph(*domain, level);
            std::string suffix = cfg.domain.name + "-k" + std::to_string(level);

            for (ExperimentKind kind : cfg.experiments) {
                std::string kindName = to_string(kind);
                if (grid.empty() && kind != ExperimentKind::crevice) {
                    writer.note(kindName, level, "emptyGrid");
                    continue;
                }
                switch (kind) {
                    case ExperimentKind::buildGrid: {
                        writer.write(kindName, level,
                                     "grid-" + suffix + "-" + to_string(grid.tag) + ".json",
                                     gridToJson(grid) + "\n");
                        break;
                    }
                    case ExperimentKind::energy: {
                        std::vector<EnergyReport> rows;
                        for (const auto& id : cfg.testFunctions) {
                            const TestFunction& fn = testFunction(id, grid.dimension);
                            rows.push_back(energyReport(cfg.domain.name, grid, fn));
                        }
                        writer.write(kindName, level, "report-energy-" + suffix + ".csv",
                                     energyCsv(rows));
                        break;
                    }
                    case ExperimentKind::spectrumCheck: {
                        if (grid.vertexCount() > 2000) {
                            writer.note(kindName, level, "skipped: grid above dense-power cap");
                            break;
                        }
                        RandomSource rng(cfg.seed, 0x5bec7201u);
                        ContractionReport worst;
                        worst.worstSlack = std::numeric_limits<double>::infinity();
                        worst.ok = true;
                        int count = 8;
                        for (int i = 0; i < count; ++i) {
                            GridFunction f = makeGridFunction(grid);
                            for (auto& x : f.values) x = 2.0 * rng.nextUnit() - 1.0;
                            ContractionReport rep = powerContractionCheck(grid, f, 20);
                            if (rep.worstSlack < worst.worstSlack) worst = rep;
                            worst.ok = worst.ok && rep.ok;
                        }
                        writer.write(kindName, level, "report-spectrum-" + suffix + ".json",
                                     spectrumJson(worst, grid.fingerprint, count));
                        break;
                    }
                    case ExperimentKind::marginal: {
                        WalkConfig wc = cfg.walkConfig(level);
                        if (wc.start.kind == StartMode::Kind::stationary) {
                            // kernel comparison needs a point start; use the
                            // vertex nearest the base point
                            Point bp = domain->basePoint();
                            std::int32_t best = 0;
                            double bestDist = std::numeric_limits<double>::infinity();
                            for (std::int32_t v = 0;
                                 v < static_cast<std::int32_t>(grid.vertexCount()); ++v) {
                                double d = squaredDistance(grid.position(v), bp);
                                if (d < bestDist) {
                                    bestDist = d;
                                    best = v;
                                }
                            }
                            wc.start = StartMode::fixed(best);
                        }
                        auto boxOpt = domain->asAxisBox();
                        std::vector<double> lengths(boxOpt->lo.size());
                        for (std::size_t i = 0; i < lengths.size(); ++i) {
                            lengths[i] = boxOpt->hi[i] - boxOpt->lo[i];
                        }
                        NeumannHeatKernel oracle(lengths, grid.dimension);
                        MarginalComparison cmp =
                            marginalTest(grid, *domain, wc, oracle, cfg.analysis.time,
                                         cfg.analysis.bins, cfg.parallelism);
                        writer.write(kindName, level, "report-marginal-" + suffix + ".json",
                                     marginalJson(cmp));
                        break;
                    }
                    case ExperimentKind::occupation: {
                        if (grid.vertexCount() > 4096) {
                            writer.note(kindName, level, "skipped: grid above transition-count cap");
                            break;
                        }
                        OccupationReport rep = occupationTest(grid, cfg.walkConfig(level),
                                                              cfg.analysis.occupationSteps);
                        writer.write(kindName, level, "report-occupation-" + suffix + ".json",
                                     occupationJson(rep));
                        break;
                    }
                    case ExperimentKind::crevice: {
                        CreviceReport rep = crevicePenetration(*domain, level, cfg.c1);
                        writer.write(kindName, level, "report-crevice-" + suffix + ".json",
                                     creviceJson(rep));
                        break;
                    }
                    case ExperimentKind::exitTime: {
                        Box sub = cfg.analysis.subBox ? *cfg.analysis.subBox
                                                      : defaultSubBox(*domain);
                        ExitTimeReport rep = exitTimeTest(grid, cfg.walkConfig(level), sub,
                                                          cfg.parallelism);
                        writer.write(kindName, level, "report-exitTime-" + suffix + ".json",
                                     exitTimeJson(rep));
                        break;
                    }
                }
            }
        }

        writer.finish(configHash);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 1;
    }
}

std::string listBuiltins(bool jsonMode) {
    json domains = json::array();
    domains.push_back({{"name", "rectangle"},
                       {"params", {{"bounds", "[[lo, hi], ...] per axis (default unit square)"}}}});
    domains.push_back({{"name", "disk"},
                       {"params", {{"center", "[x, y, ...]"}, {"radius", "positive real"}}}});
    domains.push_back({{"name", "slitDisk"},
                       {"params", "none (unit disk minus the segment [-1,0] x {0})"}});
    domains.push_back({{"name", "kochPrefractal"},
                       {"params", {{"level", "refinement level >= 0 of the snowflake polygon"}}}});
    domains.push_back(
        {{"name", "comb"},
         {"params",
          {{"channelWidths",
            "[w2, w3, ...]; channel j attaches at height 1/(j+2), widths must keep channels disjoint"}}}});
    domains.push_back({{"name", "polygon"},
                       {"params",
                        {{"loops", "vertex loops, ccw outer then cw holes"},
                         {"basePoint", "optional interior point"}}}});

    json functions = json::array();
    for (const auto& f : testFunctionCatalog()) {
        functions.push_back({{"id", f.id},
                             {"dimension", f.dimension == 0 ? "any" : std::to_string(f.dimension)},
                             {"description", f.description}});
    }

    json j;
    j["domains"] = domains;
    j["testFunctions"] = functions;
    if (jsonMode) return j.dump(2) + "\n";

    std::ostringstream out;
    out << "built-in domains:\n";
    for (const auto& d : domains) {
        out << "  " << d.at("name").get<std::string>() << "\n";
        if (d.at("params").is_object()) {
            for (const auto& [key, val] : d.at("params").items()) {
                out << "      " << key << ": " << val.get<std::string>() << "\n";
            }
        } else {
            out << "      " << d.at("params").get<std::string>() << "\n";
        }
    }
    out << "test functions:\n";
    for (const auto& f : functions) {
        out << "  " << f.at("id").get<std::string>() << " (d="
            << f.at("dimension").get<std::string>() << "): "
            << f.at("description").get<std::string>() << "\n";
    }
    return out.str();
}

} // namespace latwalk
