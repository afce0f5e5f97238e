#include "latwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace latwalk {

std::string to_string(Discipline d) {
    return d == Discipline::discreteTime ? "discreteTime" : "exponentialHolding";
}

Discipline disciplineFromString(const std::string& s) {
    if (s == "discreteTime") return Discipline::discreteTime;
    if (s == "exponentialHolding") return Discipline::exponentialHolding;
    throw std::invalid_argument("unknown discipline: " + s);
}

std::int32_t stepDiscrete(const GridGraph& g, std::int32_t vertex, RandomSource& rng) {
    auto nbrs = g.neighbors(vertex);
    if (nbrs.empty()) throw std::logic_error("stepDiscrete: isolated vertex");
    return nbrs[rng.nextBounded(static_cast<std::uint32_t>(nbrs.size()))];
}

StationarySampler::StationarySampler(const GridGraph& g) {
    const std::size_t n = g.vertexCount();
    if (n == 0) throw std::invalid_argument("StationarySampler: empty grid");
    double total = totalMeasure(g);

    accept_.assign(n, 1.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = g.measure[i] * n / total;

    std::vector<std::int32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::int32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        std::int32_t s = small.back();
        small.pop_back();
        std::int32_t l = large.back();
        large.pop_back();
        accept_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::int32_t i : large) accept_[i] = 1.0;
    for (std::int32_t i : small) accept_[i] = 1.0;
}

std::int32_t StationarySampler::sample(RandomSource& rng) const {
    std::uint32_t i = rng.nextBounded(static_cast<std::uint32_t>(accept_.size()));
    return rng.nextUnit() < accept_[i] ? static_cast<std::int32_t>(i) : alias_[i];
}

std::int32_t sampleStationaryStart(const StationarySampler& sampler, RandomSource& rng) {
    return sampler.sample(rng);
}

std::int32_t resolveStart(const GridGraph& g, const WalkConfig& cfg, RandomSource& rng,
                          const StationarySampler* sampler) {
    if (g.empty()) throw std::invalid_argument("walk start: empty grid");
    if (cfg.start.kind == StartMode::Kind::fixedVertex) {
        if (cfg.start.vertex < 0 ||
            cfg.start.vertex >= static_cast<std::int32_t>(g.vertexCount())) {
            throw std::invalid_argument("walk start: vertex id out of range");
        }
        return cfg.start.vertex;
    }
    if (sampler) return sampler->sample(rng);
    StationarySampler local(g);
    return local.sample(rng);
}

namespace {

void checkWalkConfig(const GridGraph& g, const WalkConfig& cfg) {
    if (g.empty()) throw std::invalid_argument("simulate: empty grid");
    if (cfg.level != g.level) throw std::invalid_argument("simulate: config level != grid level");
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be positive");
}

} // namespace

PathSample simulateDiscrete(const GridGraph& g, const WalkConfig& cfg, RandomSource& rng,
                            std::int32_t startVertex) {
    checkWalkConfig(g, cfg);
    const double dt = std::ldexp(1.0, -2 * cfg.level);
    const auto steps = static_cast<std::int64_t>(std::ceil(cfg.horizon * std::ldexp(1.0, 2 * cfg.level)));

    PathSample p;
    p.interpolation = Interpolation::linear;
    p.times.reserve(steps + 1);
    p.vertexIds.reserve(steps + 1);
    p.times.push_back(0.0);
    p.vertexIds.push_back(startVertex);
    std::int32_t v = startVertex;
    for (std::int64_t j = 1; j <= steps; ++j) {
        v = stepDiscrete(g, v, rng);
        p.times.push_back(static_cast<double>(j) * dt);
        p.vertexIds.push_back(v);
    }
    p.horizon = p.times.back();
    return p;
}

PathSample simulateDiscrete(const GridGraph& g, const WalkConfig& cfg, RandomSource& rng) {
    std::int32_t start = resolveStart(g, cfg, rng);
    return simulateDiscrete(g, cfg, rng, start);
}

PathSample simulateContinuous(const GridGraph& g, const WalkConfig& cfg, RandomSource& rng,
                              std::int32_t startVertex) {
    checkWalkConfig(g, cfg);
    const double meanHold = std::ldexp(1.0, -2 * cfg.level);

    PathSample p;
    p.interpolation = Interpolation::jump;
    p.times.push_back(0.0);
    p.vertexIds.push_back(startVertex);
    p.horizon = cfg.horizon;
    double clock = 0.0;
    std::int32_t v = startVertex;
    while (true) {
        double hold = rng.nextExponential(meanHold);
        if (clock + hold > cfg.horizon) break;
        clock += hold;
        v = stepDiscrete(g, v, rng);
        p.times.push_back(clock);
        p.vertexIds.push_back(v);
    }
    return p;
}

PathSample simulateContinuous(const GridGraph& g, const WalkConfig& cfg, RandomSource& rng) {
    std::int32_t start = resolveStart(g, cfg, rng);
    return simulateContinuous(g, cfg, rng, start);
}

namespace {

double uniformStep(const PathSample& p, const char* what) {
    if (p.size() < 2) return 0.0;
    double dt = p.times[1] - p.times[0];
    if (!(dt > 0.0)) throw std::invalid_argument(std::string(what) + ": degenerate path");
    return dt;
}

} // namespace

Point evalLinear(const GridGraph& g, const PathSample& p, double t) {
    if (t < 0.0) throw std::invalid_argument("evalLinear: negative time");
    if (p.size() == 1) return g.position(p.vertexIds[0]);
    double dt = uniformStep(p, "evalLinear");
    double u = t / dt;
    auto j = static_cast<std::int64_t>(std::floor(u));
    auto last = static_cast<std::int64_t>(p.size()) - 1;
    if (j >= last) return g.position(p.vertexIds[last]);
    double theta = u - static_cast<double>(j);
    Point a = g.position(p.vertexIds[j]);
    Point b = g.position(p.vertexIds[j + 1]);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = (1.0 - theta) * a[i] + theta * b[i];
    return a;
}

std::int32_t evalStepVertex(const PathSample& p, double t) {
    if (t < 0.0) throw std::invalid_argument("evalStepVertex: negative time");
    if (p.size() == 1) return p.vertexIds[0];
    double dt = uniformStep(p, "evalStepVertex");
    auto j = static_cast<std::int64_t>(std::floor(t / dt));
    auto last = static_cast<std::int64_t>(p.size()) - 1;
    return p.vertexIds[std::min(j, last)];
}

std::int32_t evalJumpVertex(const PathSample& p, double t) {
    if (t < 0.0) throw std::invalid_argument("evalJumpVertex: negative time");
    auto it = std::upper_bound(p.times.begin(), p.times.end(), t);
    return p.vertexIds[static_cast<std::size_t>(it - p.times.begin()) - 1];
}

Point pathPosition(const GridGraph& g, const PathSample& p, double t) {
    switch (p.interpolation) {
        case Interpolation::linear:
            return evalLinear(g, p, t);
        case Interpolation::step:
            return g.position(evalStepVertex(p, t));
        case Interpolation::jump:
            return g.position(evalJumpVertex(p, t));
    }
    throw std::logic_error("pathPosition: bad interpolation");
}

PathSample reversePath(const PathSample& p, double t) {
    if (t < 0.0 || t > p.horizon * (1.0 + 1e-12)) {
        throw std::invalid_argument("reversePath: t exceeds path horizon");
    }

    PathSample r;
    r.interpolation = p.interpolation;
    r.horizon = t;

    if (p.interpolation == Interpolation::linear) {
        // A continuous path reverses by flipping the samples; t must land on
        // the sample lattice so vertices stay representable.
        double dt = uniformStep(p, "reversePath");
        std::int64_t j;
        if (p.size() == 1) {
            j = 0;
        } else {
            double u = t / dt;
            j = static_cast<std::int64_t>(std::llround(u));
            if (std::abs(u - static_cast<double>(j)) > 1e-9 ||
                j > static_cast<std::int64_t>(p.size()) - 1) {
                throw std::invalid_argument(
                    "reversePath: linear paths reverse only at sample times");
            }
        }
        for (std::int64_t i = j; i >= 0; --i) {
            r.times.push_back(t - p.times[i]);
            r.vertexIds.push_back(p.vertexIds[i]);
        }
        return r;
    }

    // Piecewise-constant path: jumps in (0, t], values read as left limits.
    std::int64_t m = 0;
    for (std::int64_t i = 1; i < static_cast<std::int64_t>(p.size()); ++i) {
        if (p.times[i] <= t) m = i;
    }
    if (m == 0) {
        r.times.push_back(0.0);
        r.vertexIds.push_back(p.vertexIds[0]);
        return r;
    }
    if (p.times[m] < t) {
        r.times.push_back(0.0);
        r.vertexIds.push_back(p.vertexIds[m]);
        r.times.push_back(t - p.times[m]);
        r.vertexIds.push_back(p.vertexIds[m - 1]);
    } else { // jump exactly at t: start from the left limit there
        r.times.push_back(0.0);
        r.vertexIds.push_back(p.vertexIds[m - 1]);
    }
    for (std::int64_t i = m - 1; i >= 1; --i) {
        r.times.push_back(t - p.times[i]);
        r.vertexIds.push_back(p.vertexIds[i - 1]);
    }
    return r;
}

void exportPathCsv(std::ostream& out, const GridGraph& g, const PathSample& p,
                   std::int64_t replica, bool header) {
    if (header) {
        out << "replica,time,vertex";
        for (int i = 0; i < g.dimension; ++i) out << ",x" << (i + 1);
        out << "\n";
    }
    Point pos(g.dimension);
    for (std::size_t i = 0; i < p.size(); ++i) {
        g.position(p.vertexIds[i], pos);
        out << replica << ',' << doubleRepr(p.times[i]) << ',' << p.vertexIds[i];
        for (double c : pos) out << ',' << doubleRepr(c);
        out << "\n";
    }
}

} // namespace latwalk
