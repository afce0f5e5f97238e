#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "latwalk/grid.hpp"
#include "latwalk/rng.hpp"

namespace latwalk {

enum class Discipline { discreteTime, exponentialHolding };

std::string to_string(Discipline d);
Discipline disciplineFromString(const std::string& s);

/// Start distribution of a walk.
struct StartMode {
    enum class Kind { fixedVertex, stationary };
    Kind kind = Kind::stationary;
    std::int32_t vertex = -1;

    static StartMode fixed(std::int32_t v) { return {Kind::fixedVertex, v}; }
    static StartMode stationary() { return {Kind::stationary, -1}; }
};

struct WalkConfig {
    int level = 0;
    double horizon = 1.0;
    std::int64_t replicas = 1;
    std::uint64_t seed = 0;
    Discipline discipline = Discipline::discreteTime;
    StartMode start = StartMode::stationary();
};

enum class Interpolation { linear, step, jump };

/// Timestamped trajectory on a grid. `times` is increasing and starts at 0;
/// consecutive vertices are equal or adjacent. Discrete-time walks carry
/// uniformly spaced times j * 2^-2k; continuous-time walks carry jump
/// epochs. The path is defined on [0, horizon], constant after the last
/// recorded time.
struct PathSample {
    std::vector<double> times;
    std::vector<std::int32_t> vertexIds;
    Interpolation interpolation = Interpolation::linear;
    double horizon = 0.0;

    std::size_t size() const { return times.size(); }
};

/// One uniform step to a neighbor. Throws on an isolated vertex (grids
/// never produce one; reaching this is a construction bug).
std::int32_t stepDiscrete(const GridGraph& g, std::int32_t vertex, RandomSource& rng);

/// Alias-table sampler for the normalized vertex measure; build once per
/// grid and share across replicas.
class StationarySampler {
  public:
    explicit StationarySampler(const GridGraph& g);
    std::int32_t sample(RandomSource& rng) const;

  private:
    std::vector<double> accept_;
    std::vector<std::int32_t> alias_;
};

std::int32_t sampleStationaryStart(const StationarySampler& sampler, RandomSource& rng);

std::int32_t resolveStart(const GridGraph& g, const WalkConfig& cfg, RandomSource& rng,
                          const StationarySampler* sampler = nullptr);

/// Jump every 2^-2k time units; ceil(horizon * 2^2k) steps.
PathSample simulateDiscrete(const GridGraph& g, const WalkConfig& cfg, RandomSource& rng,
                            std::int32_t startVertex);
PathSample simulateDiscrete(const GridGraph& g, const WalkConfig& cfg, RandomSource& rng);

/// Exponential holding times with mean 2^-2k; same jump chain as the
/// discrete walk, right-continuous (jump) interpolation.
PathSample simulateContinuous(const GridGraph& g, const WalkConfig& cfg, RandomSource& rng,
                              std::int32_t startVertex);
PathSample simulateContinuous(const GridGraph& g, const WalkConfig& cfg, RandomSource& rng);

/// Linearly interpolated position at time t (clamped to the last vertex
/// beyond the horizon).
Point evalLinear(const GridGraph& g, const PathSample& p, double t);

/// Vertex under the step (left-constant) reading: state at floor(t/dt)*dt.
std::int32_t evalStepVertex(const PathSample& p, double t);

/// Vertex of a right-continuous jump path at time t.
std::int32_t evalJumpVertex(const PathSample& p, double t);

/// Position under the path's own interpolation discipline.
Point pathPosition(const GridGraph& g, const PathSample& p, double t);

/// Time reversal about t: s -> path((t-s)-) for s <= t, path(0) after,
/// with left limits read off the stored jumps. For linear (continuous)
/// paths t must coincide with a sample time.
PathSample reversePath(const PathSample& p, double t);

/// CSV rows (replica, time, vertex, x1..xd), one row per stored time.
void exportPathCsv(std::ostream& out, const GridGraph& g, const PathSample& p,
                   std::int64_t replica, bool header = false);

} // namespace latwalk
