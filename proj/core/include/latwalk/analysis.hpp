#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "latwalk/domain.hpp"
#include "latwalk/grid.hpp"
#include "latwalk/heat_kernel.hpp"
#include "latwalk/walk.hpp"

namespace latwalk {

/// Half the L1 distance between two mass vectors.
double tvDistance(const std::vector<double>& a, const std::vector<double>& b);

/// Equal-width bin edges snapped to the lattice cell boundaries
/// lo + (i + 1/2) h, so the 2^-k lattice never aliases against the bins.
/// edges.front() == lo, edges.back() == hi.
std::vector<double> latticeAlignedBinEdges(double lo, double hi, int bins, double spacing);

/// Marginal-law comparison at a fixed time against the reflected-kernel
/// oracle. Discrete-time walks average the two steps bracketing t (the
/// chain is parity-periodic); continuous-time walks sample exactly at t.
struct MarginalComparison {
    int level = 0;
    double time = 0.0;
    std::int64_t replicas = 0;
    int binsPerAxis = 0;
    std::vector<std::vector<double>> binEdges; // per axis
    std::vector<double> empirical;             // sums to 1
    std::vector<double> oracle;                // sums to 1
    double tvDistance = 0.0;
    std::uint64_t gridFingerprint = 0;
    WalkConfig config;
};

/// Empirical marginal histogram of the walk at time t (normalized).
struct MarginalHistogram {
    std::vector<std::vector<double>> binEdges;
    std::vector<double> masses;
};

MarginalHistogram marginalHistogram(const GridGraph& g, const WalkConfig& cfg, double t,
                                    int binsPerAxis, int parallelism);

MarginalComparison marginalTest(const GridGraph& g, const Domain& domain, const WalkConfig& cfg,
                                const NeumannHeatKernel& oracle, double t, int binsPerAxis,
                                int parallelism = 1);

/// Long-run occupation of a single stationary-start chain against the
/// normalized vertex measure, plus a detailed-balance check on the ordered
/// transition counts.
struct OccupationReport {
    std::int64_t steps = 0;
    double tvDistance = 0.0;
    double chiSquare = 0.0;
    double maxDetailedBalanceZ = 0.0; // max |N(xy)-N(yx)| / sqrt(N(xy)+N(yx))
    std::int64_t transitionPairs = 0;
    std::uint64_t gridFingerprint = 0;
    WalkConfig config;
};

OccupationReport occupationTest(const GridGraph& g, const WalkConfig& cfg, std::int64_t steps);

/// Builds both grid flavors over a domain with marked crevice regions and
/// counts the vertices and stationary mass each places inside them.
struct CreviceReport {
    int level = 0;
    double c1 = 0.0;
    std::size_t cubeVertexCount = 0;
    std::size_t edgeVertexCount = 0;
    std::size_t cubeEdgeCount = 0;
    std::size_t edgeEdgeCount = 0;
    std::size_t cubeChannelVertices = 0;
    std::size_t edgeChannelVertices = 0;
    double cubeChannelMass = 0.0; // fraction of the stationary measure
    double edgeChannelMass = 0.0;
    std::uint64_t cubeFingerprint = 0;
    std::uint64_t edgeFingerprint = 0;
};

CreviceReport crevicePenetration(const Domain& domain, int level, double c1);

/// First-exit-time statistics of the walk from a sub-box against the
/// Dirichlet eigenseries law of the limit diffusion.
struct ExitTimeReport {
    double meanEmpirical = 0.0;
    double meanOracle = 0.0;
    double ksDistance = 0.0;
    std::int64_t replicas = 0;
    std::int64_t cappedReplicas = 0; // replicas cut off by the step cap (expect 0)
    Box subBox;
    std::uint64_t gridFingerprint = 0;
    WalkConfig config;
};

ExitTimeReport exitTimeTest(const GridGraph& g, const WalkConfig& cfg, const Box& subBox,
                            int parallelism = 1);

/// Mean squared displacement of the walk over [0, t]; equals t exactly for
/// the free walk away from the boundary.
struct DisplacementReport {
    double time = 0.0;
    double meanSquaredDisplacement = 0.0;
    double standardError = 0.0;
    std::int64_t replicas = 0;
};

DisplacementReport meanSquaredDisplacement(const GridGraph& g, const WalkConfig& cfg, double t,
                                           int parallelism = 1);

} // namespace latwalk
