#include "latwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

namespace latwalk {

namespace {

// Contiguous replica ranges per worker; per-thread accumulators are merged
// in thread order, and every replica derives its stream from its own index,
// so results do not depend on the worker count.
void forEachReplica(std::int64_t replicas, int parallelism,
                    const std::function<void(std::int64_t replica, int thread)>& body) {
    int threads = std::max(1, parallelism);
    threads = static_cast<int>(std::min<std::int64_t>(threads, replicas));
    if (threads <= 1) {
        for (std::int64_t r = 0; r < replicas; ++r) body(r, 0);
        return;
    }
    std::int64_t chunk = (replicas + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        std::int64_t begin = t * chunk;
        std::int64_t end = std::min(replicas, begin + chunk);
        pool.emplace_back([&, begin, end, t] {
            for (std::int64_t r = begin; r < end; ++r) body(r, t);
        });
    }
    for (auto& th : pool) th.join();
}

std::int32_t nearestVertex(const GridGraph& g, std::span<const double> target) {
    std::int32_t best = -1;
    double bestDist = std::numeric_limits<double>::infinity();
    Point p(g.dimension);
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.vertexCount()); ++v) {
        g.position(v, p);
        double d = squaredDistance(p, target);
        if (d < bestDist) {
            bestDist = d;
            best = v;
        }
    }
    return best;
}

int binIndex(const std::vector<double>& edges, double x) {
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    auto i = static_cast<std::int64_t>(it - edges.begin()) - 1;
    return static_cast<int>(std::clamp<std::int64_t>(i, 0, static_cast<std::int64_t>(edges.size()) - 2));
}

} // namespace

double tvDistance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("tvDistance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

std::vector<double> latticeAlignedBinEdges(double lo, double hi, int bins, double spacing) {
    if (bins < 1) throw std::invalid_argument("bin edges: need at least one bin");
    std::vector<double> edges(bins + 1);
    edges[0] = lo;
    edges[bins] = hi;
    for (int j = 1; j < bins; ++j) {
        double target = lo + (hi - lo) * j / bins;
        double cell = std::round((target - lo) / spacing - 0.5);
        double snapped = lo + (cell + 0.5) * spacing;
        snapped = std::clamp(snapped, lo + 0.5 * spacing, hi - 0.5 * spacing);
        edges[j] = snapped;
    }
    for (int j = 0; j < bins; ++j) {
        if (!(edges[j] < edges[j + 1])) {
            throw std::invalid_argument("bin edges: more bins than lattice cells");
        }
    }
    return edges;
}

namespace {

// Walk every replica to time t and histogram the arrival vertex. Discrete
// walks deposit the two steps bracketing t with half weight each (the chain
// is parity-periodic); continuous walks deposit the exact-time state.
std::vector<double> empiricalMarginal(const GridGraph& g, const WalkConfig& cfg, double t,
                                      const std::vector<std::vector<double>>& edges,
                                      int binsPerAxis, int parallelism) {
    if (g.empty()) throw std::invalid_argument("marginal: empty grid");
    if (!(t > 0.0) || t > cfg.horizon) {
        throw std::invalid_argument("marginal: need 0 < t <= horizon");
    }
    if (cfg.level != g.level) throw std::invalid_argument("marginal: config level != grid level");

    const int dim = g.dimension;
    std::size_t cells = 1;
    for (int i = 0; i < dim; ++i) cells *= binsPerAxis;

    const bool stationary = cfg.start.kind == StartMode::Kind::stationary;
    std::optional<StationarySampler> sampler;
    if (stationary) sampler.emplace(g);

    const bool discrete = cfg.discipline == Discipline::discreteTime;
    const double dt = std::ldexp(1.0, -2 * cfg.level);
    const auto stepsLow = static_cast<std::int64_t>(std::floor(t / dt));

    int threads = std::max(1, parallelism);
    std::vector<std::vector<std::int64_t>> counts(threads, std::vector<std::int64_t>(cells, 0));

    auto cellOf = [&](std::int32_t vertex) {
        auto idx = g.vertex(vertex);
        std::size_t flat = 0;
        for (int i = 0; i < dim; ++i) {
            double x = std::ldexp(static_cast<double>(idx[i]), -g.level);
            flat = flat * binsPerAxis + binIndex(edges[i], x);
        }
        return flat;
    };

    forEachReplica(cfg.replicas, parallelism, [&](std::int64_t replica, int thread) {
        RandomSource rng(cfg.seed, static_cast<std::uint64_t>(replica));
        std::int32_t v = stationary ? sampler->sample(rng) : cfg.start.vertex;
        if (discrete) {
            for (std::int64_t j = 0; j < stepsLow; ++j) v = stepDiscrete(g, v, rng);
            counts[thread][cellOf(v)] += 1;
            v = stepDiscrete(g, v, rng);
            counts[thread][cellOf(v)] += 1;
        } else {
            double clock = 0.0;
            while (true) {
                double hold = rng.nextExponential(dt);
                if (clock + hold > t) break;
                clock += hold;
                v = stepDiscrete(g, v, rng);
            }
            counts[thread][cellOf(v)] += 2;
        }
    });

    std::vector<std::int64_t> total(cells, 0);
    for (const auto& c : counts) {
        for (std::size_t i = 0; i < cells; ++i) total[i] += c[i];
    }
    std::vector<double> masses(cells);
    double norm = 1.0 / (2.0 * static_cast<double>(cfg.replicas));
    for (std::size_t i = 0; i < cells; ++i) masses[i] = total[i] * norm;
    return masses;
}

} // namespace

MarginalHistogram marginalHistogram(const GridGraph& g, const WalkConfig& cfg, double t,
                                    int binsPerAxis, int parallelism) {
    // Bins span the smallest lattice-aligned box around the vertex set,
    // padded by one cell so the end cells are whole.
    const int dim = g.dimension;
    std::vector<std::int32_t> minIdx(dim, std::numeric_limits<std::int32_t>::max());
    std::vector<std::int32_t> maxIdx(dim, std::numeric_limits<std::int32_t>::min());
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.vertexCount()); ++v) {
        auto idx = g.vertex(v);
        for (int i = 0; i < dim; ++i) {
            minIdx[i] = std::min(minIdx[i], idx[i]);
            maxIdx[i] = std::max(maxIdx[i], idx[i]);
        }
    }
    MarginalHistogram hist;
    hist.binEdges.resize(dim);
    double h = g.spacing();
    for (int i = 0; i < dim; ++i) {
        hist.binEdges[i] =
            latticeAlignedBinEdges((minIdx[i] - 1) * h, (maxIdx[i] + 1) * h, binsPerAxis, h);
    }
    hist.masses = empiricalMarginal(g, cfg, t, hist.binEdges, binsPerAxis, parallelism);
    return hist;
}

MarginalComparison marginalTest(const GridGraph& g, const Domain& domain, const WalkConfig& cfg,
                                const NeumannHeatKernel& oracle, double t, int binsPerAxis,
                                int parallelism) {
    auto boxOpt = domain.asAxisBox();
    if (!boxOpt) {
        throw std::invalid_argument("marginalTest: domain geometry does not match the oracle");
    }
    const Box& box = *boxOpt;
    if (box.dimension() != oracle.dimension() || g.dimension != oracle.dimension()) {
        throw std::invalid_argument("marginalTest: dimension mismatch with the oracle");
    }
    if (cfg.start.kind != StartMode::Kind::fixedVertex) {
        throw std::invalid_argument("marginalTest: fixed-vertex start required");
    }

    MarginalComparison cmp;
    cmp.level = g.level;
    cmp.time = t;
    cmp.replicas = cfg.replicas;
    cmp.binsPerAxis = binsPerAxis;
    cmp.gridFingerprint = g.fingerprint;
    cmp.config = cfg;

    // Oracle bins must tile the oracle box exactly; build edges over the
    // box rather than the vertex hull.
    const int dim = g.dimension;
    double h = g.spacing();
    cmp.binEdges.resize(dim);
    for (int i = 0; i < dim; ++i) {
        cmp.binEdges[i] = latticeAlignedBinEdges(box.lo[i], box.hi[i], binsPerAxis, h);
    }

    std::size_t cells = 1;
    for (int i = 0; i < dim; ++i) cells *= binsPerAxis;

    cmp.empirical = empiricalMarginal(g, cfg, t, cmp.binEdges, binsPerAxis, parallelism);

    // Oracle masses: product of per-axis integrals over each bin, start
    // point in box-local coordinates. Flat index matches the empirical one
    // (axis 0 most significant).
    Point startPos = g.position(cfg.start.vertex);
    std::vector<std::vector<double>> axisMasses(dim, std::vector<double>(binsPerAxis));
    for (int i = 0; i < dim; ++i) {
        double x0 = startPos[i] - box.lo[i];
        for (int b = 0; b < binsPerAxis; ++b) {
            axisMasses[i][b] = oracle.axisMass(t, i, x0, cmp.binEdges[i][b] - box.lo[i],
                                               cmp.binEdges[i][b + 1] - box.lo[i]);
        }
    }
    cmp.oracle.assign(cells, 0.0);
    std::vector<int> counter(dim, 0);
    while (true) {
        std::size_t flat = 0;
        double mass = 1.0;
        for (int i = 0; i < dim; ++i) {
            flat = flat * binsPerAxis + counter[i];
            mass *= axisMasses[i][counter[i]];
        }
        cmp.oracle[flat] = mass;
        int axis = dim - 1;
        while (axis >= 0 && ++counter[axis] == binsPerAxis) {
            counter[axis] = 0;
            --axis;
        }
        if (axis < 0) break;
    }

    // Normalize the oracle to unit mass (truncation residue is tiny).
    double oracleSum = 0.0;
    for (double m : cmp.oracle) oracleSum += m;
    for (double& m : cmp.oracle) m /= oracleSum;

    cmp.tvDistance = tvDistance(cmp.empirical, cmp.oracle);
    return cmp;
}

OccupationReport occupationTest(const GridGraph& g, const WalkConfig& cfg, std::int64_t steps) {
    if (g.empty()) throw std::invalid_argument("occupationTest: empty grid");
    if (steps < 1) throw std::invalid_argument("occupationTest: need at least one step");
    const std::size_t n = g.vertexCount();
    if (n > 4096) {
        throw std::invalid_argument("occupationTest: dense transition counts capped at 4096 vertices");
    }

    OccupationReport rep;
    rep.steps = steps;
    rep.gridFingerprint = g.fingerprint;
    rep.config = cfg;

    RandomSource rng(cfg.seed, 0);
    StationarySampler sampler(g);
    std::int32_t v = resolveStart(g, cfg, rng, &sampler);

    std::vector<std::int64_t> visits(n, 0);
    std::vector<std::int64_t> transitions(n * n, 0);
    for (std::int64_t s = 0; s < steps; ++s) {
        ++visits[v];
        std::int32_t w = stepDiscrete(g, v, rng);
        ++transitions[static_cast<std::size_t>(v) * n + w];
        v = w;
    }

    double total = totalMeasure(g);
    double tv = 0.0, chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double expected = g.measure[i] / total;
        double observed = static_cast<double>(visits[i]) / static_cast<double>(steps);
        tv += std::abs(observed - expected);
        double e = expected * static_cast<double>(steps);
        double d = static_cast<double>(visits[i]) - e;
        chi2 += d * d / e;
    }
    rep.tvDistance = 0.5 * tv;
    rep.chiSquare = chi2;

    double maxZ = 0.0;
    std::int64_t pairs = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            std::int64_t ab = transitions[a * n + b];
            std::int64_t ba = transitions[b * n + a];
            if (ab + ba == 0) continue;
            ++pairs;
            double z = std::abs(static_cast<double>(ab - ba)) /
                       std::sqrt(static_cast<double>(ab + ba));
            maxZ = std::max(maxZ, z);
        }
    }
    rep.maxDetailedBalanceZ = maxZ;
    rep.transitionPairs = pairs;
    return rep;
}

CreviceReport crevicePenetration(const Domain& domain, int level, double c1) {
    CreviceReport rep;
    rep.level = level;
    rep.c1 = c1;

    GridGraph cube = buildCubeComplex(domain, level, c1);
    GridGraph edge = buildEdgeGraph(domain, level);
    rep.cubeVertexCount = cube.vertexCount();
    rep.edgeVertexCount = edge.vertexCount();
    rep.cubeEdgeCount = cube.edgeCount();
    rep.edgeEdgeCount = edge.edgeCount();
    rep.cubeFingerprint = cube.fingerprint;
    rep.edgeFingerprint = edge.fingerprint;

    auto regions = domain.creviceRegions();
    auto strictlyInside = [&](std::span<const double> p) {
        for (const auto& r : regions) {
            if (r.containsOpen(p)) return true;
        }
        return false;
    };

    auto tally = [&](const GridGraph& g, std::size_t& count, double& mass) {
        count = 0;
        KahanSum inMass;
        Point p(g.dimension);
        for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.vertexCount()); ++v) {
            g.position(v, p);
            if (strictlyInside(p)) {
                ++count;
                inMass.add(g.measure[v]);
            }
        }
        double total = totalMeasure(g);
        mass = total > 0.0 ? inMass.value() / total : 0.0;
    };

    tally(cube, rep.cubeChannelVertices, rep.cubeChannelMass);
    tally(edge, rep.edgeChannelVertices, rep.edgeChannelMass);
    return rep;
}

ExitTimeReport exitTimeTest(const GridGraph& g, const WalkConfig& cfg, const Box& subBox,
                            int parallelism) {
    if (g.empty()) throw std::invalid_argument("exitTimeTest: empty grid");
    if (subBox.dimension() != g.dimension) {
        throw std::invalid_argument("exitTimeTest: sub-box dimension mismatch");
    }

    ExitTimeReport rep;
    rep.subBox = subBox;
    rep.replicas = cfg.replicas;
    rep.gridFingerprint = g.fingerprint;
    rep.config = cfg;

    Point center = subBox.center();
    std::int32_t start = nearestVertex(g, center);
    {
        Point sp = g.position(start);
        if (!subBox.containsOpen(sp)) {
            throw std::invalid_argument("exitTimeTest: start vertex not inside the sub-box");
        }
    }

    DirichletExitLaw law(subBox, g.dimension);
    Point startPos = g.position(start);
    rep.meanOracle = law.meanExitTime(startPos);

    const double dt = std::ldexp(1.0, -2 * cfg.level);
    const bool discrete = cfg.discipline == Discipline::discreteTime;
    // Exit beyond 100x the oracle mean has probability well under 1e-12.
    const auto stepCap = static_cast<std::int64_t>(std::ceil(100.0 * rep.meanOracle / dt)) + 16;

    const int dim = g.dimension;
    auto exited = [&](std::int32_t v) {
        auto idx = g.vertex(v);
        for (int i = 0; i < dim; ++i) {
            double x = std::ldexp(static_cast<double>(idx[i]), -g.level);
            if (x <= subBox.lo[i] || x >= subBox.hi[i]) return true;
        }
        return false;
    };

    std::vector<double> exitTimes(cfg.replicas, 0.0);
    int threads = std::max(1, parallelism);
    std::vector<std::int64_t> capped(threads, 0);

    forEachReplica(cfg.replicas, parallelism, [&](std::int64_t replica, int thread) {
        RandomSource rng(cfg.seed, static_cast<std::uint64_t>(replica));
        std::int32_t v = start;
        if (discrete) {
            std::int64_t stepsTaken = 0;
            while (stepsTaken < stepCap) {
                v = stepDiscrete(g, v, rng);
                ++stepsTaken;
                if (exited(v)) break;
            }
            if (stepsTaken >= stepCap && !exited(v)) ++capped[thread];
            exitTimes[replica] = static_cast<double>(stepsTaken) * dt;
        } else {
            double clock = 0.0;
            std::int64_t stepsTaken = 0;
            while (stepsTaken < stepCap) {
                clock += rng.nextExponential(dt);
                v = stepDiscrete(g, v, rng);
                ++stepsTaken;
                if (exited(v)) break;
            }
            if (stepsTaken >= stepCap && !exited(v)) ++capped[thread];
            exitTimes[replica] = clock;
        }
    });

    for (std::int64_t c : capped) rep.cappedReplicas += c;

    KahanSum mean;
    for (double t : exitTimes) mean.add(t);
    rep.meanEmpirical = mean.value() / static_cast<double>(cfg.replicas);

    std::sort(exitTimes.begin(), exitTimes.end());
    double ks = 0.0;
    const auto n = static_cast<double>(exitTimes.size());
    for (std::size_t i = 0; i < exitTimes.size(); ++i) {
        double f = law.cdf(exitTimes[i], startPos);
        ks = std::max(ks, std::abs((i + 1.0) / n - f));
        ks = std::max(ks, std::abs(static_cast<double>(i) / n - f));
    }
    rep.ksDistance = ks;
    return rep;
}

DisplacementReport meanSquaredDisplacement(const GridGraph& g, const WalkConfig& cfg, double t,
                                           int parallelism) {
    if (g.empty()) throw std::invalid_argument("meanSquaredDisplacement: empty grid");
    if (cfg.start.kind != StartMode::Kind::fixedVertex) {
        throw std::invalid_argument("meanSquaredDisplacement: fixed-vertex start required");
    }
    const double dt = std::ldexp(1.0, -2 * cfg.level);
    const auto steps = static_cast<std::int64_t>(std::llround(t / dt));
    if (steps < 1) throw std::invalid_argument("meanSquaredDisplacement: t below one step");

    Point startPos = g.position(cfg.start.vertex);
    std::vector<double> sq(cfg.replicas, 0.0);
    forEachReplica(cfg.replicas, parallelism, [&](std::int64_t replica, int) {
        RandomSource rng(cfg.seed, static_cast<std::uint64_t>(replica));
        std::int32_t v = cfg.start.vertex;
        for (std::int64_t j = 0; j < steps; ++j) v = stepDiscrete(g, v, rng);
        Point p = g.position(v);
        sq[replica] = squaredDistance(p, startPos);
    });

    KahanSum sum, sumSq;
    for (double s : sq) {
        sum.add(s);
        sumSq.add(s * s);
    }
    DisplacementReport rep;
    rep.time = static_cast<double>(steps) * dt;
    rep.replicas = cfg.replicas;
    rep.meanSquaredDisplacement = sum.value() / static_cast<double>(cfg.replicas);
    double var = sumSq.value() / static_cast<double>(cfg.replicas) -
                 rep.meanSquaredDisplacement * rep.meanSquaredDisplacement;
    rep.standardError = std::sqrt(std::max(var, 0.0) / static_cast<double>(cfg.replicas));
    return rep;
}

} // namespace latwalk
