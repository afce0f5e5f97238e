#include "latwalk/config.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "latwalk/test_functions.hpp"

namespace latwalk {

namespace {

using json = nlohmann::json;

const char* kExperimentNames[] = {"buildGrid", "energy",     "spectrumCheck", "marginal",
                                  "occupation", "crevice",   "exitTime"};

std::optional<ExperimentKind> experimentFromString(const std::string& s) {
    for (std::size_t i = 0; i < std::size(kExperimentNames); ++i) {
        if (s == kExperimentNames[i]) return static_cast<ExperimentKind>(i);
    }
    return std::nullopt;
}

} // namespace

std::string to_string(ExperimentKind kind) {
    return kExperimentNames[static_cast<int>(kind)];
}

std::unique_ptr<Domain> makeDomain(const DomainConfig& cfg) {
    if (cfg.name == "rectangle") return makeRectangle(cfg.bounds, cfg.basePoint);
    if (cfg.name == "disk") return makeDisk(cfg.center, cfg.radius, cfg.basePoint);
    if (cfg.name == "slitDisk") return makeSlitDisk(cfg.basePoint);
    if (cfg.name == "kochPrefractal") return makeKochPrefractal(cfg.prefractalLevel, cfg.basePoint);
    if (cfg.name == "comb") return makeComb(CombParams{cfg.channelWidths}, cfg.basePoint);
    if (cfg.name == "polygon") return makePolygon(cfg.loops, cfg.basePoint);
    throw std::invalid_argument("unknown domain: " + cfg.name);
}

WalkConfig ExperimentConfig::walkConfig(int level) const {
    WalkConfig cfg;
    cfg.level = level;
    cfg.horizon = horizon;
    cfg.replicas = replicas;
    cfg.seed = seed;
    cfg.discipline = discipline;
    cfg.start = start;
    return cfg;
}

std::string ExperimentConfig::canonicalJson() const {
    json j;
    json dom;
    dom["name"] = domain.name;
    if (domain.name == "rectangle") {
        json b = json::array();
        for (const auto& ax : domain.bounds) b.push_back(json::array({ax[0], ax[1]}));
        dom["bounds"] = std::move(b);
    } else if (domain.name == "disk") {
        dom["center"] = domain.center;
        dom["radius"] = domain.radius;
    } else if (domain.name == "kochPrefractal") {
        dom["level"] = domain.prefractalLevel;
    } else if (domain.name == "comb") {
        dom["channelWidths"] = domain.channelWidths;
    } else if (domain.name == "polygon") {
        json loops = json::array();
        for (const auto& loop : domain.loops) {
            json l = json::array();
            for (const auto& v : loop) l.push_back(json::array({v[0], v[1]}));
            loops.push_back(std::move(l));
        }
        dom["loops"] = std::move(loops);
    }
    if (domain.basePoint) dom["basePoint"] = *domain.basePoint;
    j["domain"] = std::move(dom);

    j["levels"] = levels;
    j["c1"] = c1;

    json walk;
    walk["horizon"] = horizon;
    walk["replicas"] = replicas;
    walk["seed"] = seed;
    walk["discipline"] = to_string(discipline);
    if (start.kind == StartMode::Kind::stationary) {
        walk["start"] = "stationary";
    } else {
        walk["start"] = json{{"fixedVertex", start.vertex}};
    }
    j["walk"] = std::move(walk);

    json exps = json::array();
    for (auto e : experiments) exps.push_back(to_string(e));
    j["experiments"] = std::move(exps);
    j["testFunctions"] = testFunctions;

    json an;
    an["time"] = analysis.time;
    an["bins"] = analysis.bins;
    an["occupationSteps"] = analysis.occupationSteps;
    an["gridTag"] = to_string(analysis.gridTag);
    if (analysis.subBox) {
        an["subBox"] = json{{"lo", analysis.subBox->lo}, {"hi", analysis.subBox->hi}};
    }
    j["analysis"] = std::move(an);

    j["output"] = outputDir;
    j["parallelism"] = parallelism;
    return j.dump();
}

namespace {

class Validator {
  public:
    explicit Validator(std::vector<ConfigError>& errors) : errors_(errors) {}

    void error(const std::string& path, const std::string& message) {
        errors_.push_back({path, message});
    }

    bool expectObject(const json& j, const std::string& path) {
        if (!j.is_object()) {
            error(path, "expected an object");
            return false;
        }
        return true;
    }

    template <typename T>
    std::optional<T> get(const json& j, const std::string& key, const std::string& path) {
        if (!j.contains(key)) return std::nullopt;
        try {
            return j.at(key).get<T>();
        } catch (const json::exception&) {
            error(path + "." + key, "has the wrong type");
            return std::nullopt;
        }
    }

  private:
    std::vector<ConfigError>& errors_;
};

void parseDomain(const json& j, Validator& v, DomainConfig& out) {
    if (!v.expectObject(j, "domain")) return;
    auto name = v.get<std::string>(j, "name", "domain");
    if (!name) {
        v.error("domain.name", "missing domain name");
        return;
    }
    out.name = *name;
    static const char* known[] = {"rectangle", "disk",  "slitDisk",
                                  "kochPrefractal", "comb", "polygon"};
    bool ok = false;
    for (const char* k : known) ok = ok || out.name == k;
    if (!ok) {
        v.error("domain.name", "unknown domain '" + out.name + "'");
        return;
    }

    if (out.name == "rectangle") {
        if (j.contains("bounds")) {
            out.bounds.clear();
            try {
                for (const auto& ax : j.at("bounds")) {
                    out.bounds.push_back({ax.at(0).get<double>(), ax.at(1).get<double>()});
                }
            } catch (const json::exception&) {
                v.error("domain.bounds", "expected [[lo, hi], ...] per axis");
            }
            for (std::size_t i = 0; i < out.bounds.size(); ++i) {
                if (!(out.bounds[i][0] < out.bounds[i][1])) {
                    v.error("domain.bounds[" + std::to_string(i) + "]", "need lo < hi");
                }
            }
        }
    } else if (out.name == "disk") {
        if (auto r = v.get<double>(j, "radius", "domain")) out.radius = *r;
        if (!(out.radius > 0.0)) v.error("domain.radius", "must be positive");
        if (auto c = v.get<std::vector<double>>(j, "center", "domain")) out.center = *c;
        if (out.center.empty()) v.error("domain.center", "must be nonempty");
    } else if (out.name == "kochPrefractal") {
        if (auto l = v.get<int>(j, "level", "domain")) out.prefractalLevel = *l;
        if (out.prefractalLevel < 0) v.error("domain.level", "must be >= 0");
    } else if (out.name == "comb") {
        if (auto w = v.get<std::vector<double>>(j, "channelWidths", "domain")) {
            out.channelWidths = *w;
        }
        if (out.channelWidths.empty()) {
            v.error("domain.channelWidths", "comb requires channel widths");
        } else {
            try {
                CombParams p{out.channelWidths};
                makeComb(p); // runs the disjointness checks
            } catch (const std::invalid_argument& e) {
                v.error("domain.channelWidths", e.what());
            }
        }
    } else if (out.name == "polygon") {
        try {
            for (const auto& loop : j.at("loops")) {
                std::vector<std::array<double, 2>> l;
                for (const auto& p : loop) l.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
                out.loops.push_back(std::move(l));
            }
        } catch (const json::exception&) {
            v.error("domain.loops", "expected a list of vertex loops");
        }
        if (!out.loops.empty()) {
            try {
                makePolygon(out.loops);
            } catch (const std::invalid_argument& e) {
                v.error("domain.loops", e.what());
            }
        } else {
            v.error("domain.loops", "polygon requires vertex loops");
        }
    }

    if (auto bp = v.get<std::vector<double>>(j, "basePoint", "domain")) out.basePoint = *bp;
}

} // namespace

ConfigParseResult validateConfig(const std::string& jsonText) {
    ConfigParseResult result;
    auto& errors = result.errors;
    Validator v(errors);

    json j = json::parse(jsonText, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
        errors.push_back({"", "config is not valid JSON"});
        return result;
    }
    if (!j.is_object()) {
        errors.push_back({"", "config must be a JSON object"});
        return result;
    }

    ExperimentConfig cfg;

    if (j.contains("domain")) {
        parseDomain(j.at("domain"), v, cfg.domain);
    } else {
        v.error("domain", "missing domain");
    }

    if (auto levels = v.get<std::vector<int>>(j, "levels", "")) {
        cfg.levels = *levels;
    }
    if (cfg.levels.empty()) {
        v.error("levels", "at least one level is required");
    }
    for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
        if (cfg.levels[i] < 1) v.error("levels[" + std::to_string(i) + "]", "must be >= 1");
        if (cfg.levels[i] > 14) v.error("levels[" + std::to_string(i) + "]", "too fine (max 14)");
    }

    if (auto c1 = v.get<double>(j, "c1", "")) cfg.c1 = *c1;
    if (!(cfg.c1 > 0.0 && cfg.c1 < 1.0)) v.error("c1", "c1 must lie in (0,1)");

    if (j.contains("walk") && v.expectObject(j.at("walk"), "walk")) {
        const json& w = j.at("walk");
        if (auto h = v.get<double>(w, "horizon", "walk")) cfg.horizon = *h;
        if (auto r = v.get<std::int64_t>(w, "replicas", "walk")) cfg.replicas = *r;
        if (w.contains("seed")) {
            if (auto s = v.get<std::uint64_t>(w, "seed", "walk")) cfg.seed = *s;
        } else {
            v.error("walk.seed", "seed is required; runs must be reproducible");
        }
        if (auto d = v.get<std::string>(w, "discipline", "walk")) {
            try {
                cfg.discipline = disciplineFromString(*d);
            } catch (const std::invalid_argument& e) {
                v.error("walk.discipline", e.what());
            }
        }
        if (w.contains("start")) {
            const json& s = w.at("start");
            if (s.is_string() && s.get<std::string>() == "stationary") {
                cfg.start = StartMode::stationary();
            } else if (s.is_object() && s.contains("fixedVertex")) {
                try {
                    cfg.start = StartMode::fixed(s.at("fixedVertex").get<std::int32_t>());
                } catch (const json::exception&) {
                    v.error("walk.start.fixedVertex", "has the wrong type");
                }
            } else {
                v.error("walk.start", "expected \"stationary\" or {\"fixedVertex\": id}");
            }
        }
    } else if (!j.contains("walk")) {
        v.error("walk.seed", "seed is required; runs must be reproducible");
    }
    if (!(cfg.horizon > 0.0)) v.error("walk.horizon", "must be positive");
    if (cfg.replicas < 1) v.error("walk.replicas", "must be >= 1");

    if (j.contains("experiments")) {
        cfg.experiments.clear();
        if (auto names = v.get<std::vector<std::string>>(j, "experiments", "")) {
            for (std::size_t i = 0; i < names->size(); ++i) {
                auto kind = experimentFromString((*names)[i]);
                if (kind) {
                    cfg.experiments.push_back(*kind);
                } else {
                    v.error("experiments[" + std::to_string(i) + "]",
                            "unknown experiment '" + (*names)[i] + "'");
                }
            }
        }
        if (cfg.experiments.empty() && errors.empty()) {
            v.error("experiments", "at least one experiment is required");
        }
    }

    if (auto fns = v.get<std::vector<std::string>>(j, "testFunctions", "")) {
        cfg.testFunctions = *fns;
    }
    for (std::size_t i = 0; i < cfg.testFunctions.size(); ++i) {
        if (!isTestFunction(cfg.testFunctions[i])) {
            v.error("testFunctions[" + std::to_string(i) + "]",
                    "unknown test function '" + cfg.testFunctions[i] + "'");
        }
    }

    if (j.contains("analysis") && v.expectObject(j.at("analysis"), "analysis")) {
        const json& a = j.at("analysis");
        if (auto t = v.get<double>(a, "time", "analysis")) cfg.analysis.time = *t;
        if (auto b = v.get<int>(a, "bins", "analysis")) cfg.analysis.bins = *b;
        if (auto s = v.get<std::int64_t>(a, "occupationSteps", "analysis")) {
            cfg.analysis.occupationSteps = *s;
        }
        if (auto tag = v.get<std::string>(a, "gridTag", "analysis")) {
            try {
                cfg.analysis.gridTag = gridTagFromString(*tag);
            } catch (const std::invalid_argument& e) {
                v.error("analysis.gridTag", e.what());
            }
        }
        if (a.contains("subBox")) {
            Box box;
            auto lo = v.get<std::vector<double>>(a.at("subBox"), "lo", "analysis.subBox");
            auto hi = v.get<std::vector<double>>(a.at("subBox"), "hi", "analysis.subBox");
            if (lo && hi && lo->size() == hi->size() && !lo->empty()) {
                box.lo = *lo;
                box.hi = *hi;
                bool ordered = true;
                for (std::size_t i = 0; i < box.lo.size(); ++i) {
                    ordered = ordered && box.lo[i] < box.hi[i];
                }
                if (ordered) {
                    cfg.analysis.subBox = box;
                } else {
                    v.error("analysis.subBox", "needs lo < hi per axis");
                }
            } else {
                v.error("analysis.subBox", "expected {lo: [...], hi: [...]}");
            }
        }
    }
    if (!(cfg.analysis.time > 0.0)) v.error("analysis.time", "must be positive");
    if (cfg.analysis.time > cfg.horizon) {
        v.error("analysis.time", "must not exceed walk.horizon");
    }
    if (cfg.analysis.bins < 1) v.error("analysis.bins", "must be >= 1");
    if (cfg.analysis.occupationSteps < 1) v.error("analysis.occupationSteps", "must be >= 1");

    if (auto out = v.get<std::string>(j, "output", "")) cfg.outputDir = *out;
    if (auto par = v.get<int>(j, "parallelism", "")) cfg.parallelism = *par;
    if (cfg.parallelism < 1) v.error("parallelism", "must be >= 1");

    // Cross-field checks.
    for (auto e : cfg.experiments) {
        if ((e == ExperimentKind::marginal) && cfg.domain.name != "rectangle") {
            v.error("experiments", "marginal needs a rectangle domain (kernel oracle geometry)");
        }
        if (e == ExperimentKind::crevice && cfg.domain.name != "comb") {
            v.error("experiments", "crevice needs a domain with marked channels (comb)");
        }
        if (e == ExperimentKind::exitTime && cfg.domain.name != "rectangle") {
            v.error("experiments", "exitTime needs a rectangle domain");
        }
    }

    if (errors.empty()) {
        // Domain construction may still fail on geometric grounds.
        try {
            makeDomain(cfg.domain);
        } catch (const std::exception& e) {
            v.error("domain", e.what());
        }
    }

    if (errors.empty()) result.config = std::move(cfg);
    return result;
}

} // namespace latwalk
