#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "latwalk/walk.hpp"

using namespace latwalk;

namespace {

std::unique_ptr<Domain> unitSquare() { return makeRectangle({{0.0, 1.0}, {0.0, 1.0}}); }

// Free simple walk on the integer lattice with the same neighbor ordering
// as the grid adjacency (lexicographic), for exact coupling checks.
std::vector<std::int32_t> freeStep(const std::vector<std::int32_t>& v, RandomSource& rng) {
    const int d = static_cast<int>(v.size());
    std::vector<std::vector<std::int32_t>> nbrs;
    for (int axis = 0; axis < d; ++axis) {
        for (int dir : {-1, 1}) {
            auto w = v;
            w[axis] += dir;
            nbrs.push_back(std::move(w));
        }
    }
    std::sort(nbrs.begin(), nbrs.end());
    return nbrs[rng.nextBounded(static_cast<std::uint32_t>(nbrs.size()))];
}

} // namespace

TEST_CASE("single steps are uniform over the neighbors") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 2, 0.5);

    std::int32_t corner = g.findVertex(std::vector<std::int32_t>{1, 1}); // degree 2
    std::int32_t center = g.findVertex(std::vector<std::int32_t>{2, 2}); // degree 4
    REQUIRE(corner >= 0);
    REQUIRE(center >= 0);

    const int n = 100000;
    RandomSource rng(11);
    std::map<std::int32_t, int> cornerCounts, centerCounts;
    for (int i = 0; i < n; ++i) {
        ++cornerCounts[stepDiscrete(g, corner, rng)];
        ++centerCounts[stepDiscrete(g, center, rng)];
    }
    REQUIRE(cornerCounts.size() == 2);
    REQUIRE(centerCounts.size() == 4);
    // binomial 3-sigma bands
    double sigma2 = std::sqrt(n * 0.5 * 0.5);
    for (const auto& [v, c] : cornerCounts) {
        CHECK(std::abs(c - n * 0.5) <= 3.0 * sigma2);
    }
    double sigma4 = std::sqrt(n * 0.25 * 0.75);
    for (const auto& [v, c] : centerCounts) {
        CHECK(std::abs(c - n * 0.25) <= 3.0 * sigma4);
    }
}

TEST_CASE("random streams reproduce and decorrelate") {
    RandomSource a(42, 1), b(42, 1), c(42, 2);
    bool allEqual = true, anyDiffer = false;
    for (int i = 0; i < 64; ++i) {
        auto x = a.nextU64(), y = b.nextU64(), z = c.nextU64();
        allEqual = allEqual && (x == y);
        anyDiffer = anyDiffer || (x != z);
    }
    CHECK(allEqual);
    CHECK(anyDiffer);

    // identical seeds give identical neighbor sequences
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 3, 0.5);
    RandomSource r1(7, 3), r2(7, 3);
    std::int32_t v1 = 0, v2 = 0;
    for (int i = 0; i < 200; ++i) {
        v1 = stepDiscrete(g, v1, r1);
        v2 = stepDiscrete(g, v2, r2);
        CHECK(v1 == v2);
    }
}

TEST_CASE("discrete walk timing and interpolation") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 2, 0.5);
    double dt = std::ldexp(1.0, -4);

    WalkConfig cfg;
    cfg.level = 2;
    cfg.horizon = dt; // exactly one jump
    cfg.seed = 5;
    cfg.start = StartMode::fixed(g.findVertex(std::vector<std::int32_t>{2, 2}));

    RandomSource rng(cfg.seed, 0);
    PathSample p = simulateDiscrete(g, cfg, rng);
    REQUIRE(p.size() == 2);
    CHECK(p.times[0] == 0.0);
    CHECK(p.times[1] == dt);

    // halfway through the single step the interpolant sits at the midpoint
    Point a = g.position(p.vertexIds[0]);
    Point b = g.position(p.vertexIds[1]);
    Point mid = evalLinear(g, p, dt / 2.0);
    CHECK(mid[0] == doctest::Approx(0.5 * (a[0] + b[0])).epsilon(1e-15));
    CHECK(mid[1] == doctest::Approx(0.5 * (a[1] + b[1])).epsilon(1e-15));
}

TEST_CASE("step process stays within one lattice spacing of the interpolant") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 3, 0.5);
    double h = g.spacing();

    WalkConfig cfg;
    cfg.level = 3;
    cfg.horizon = 0.5;
    cfg.seed = 9;
    cfg.start = StartMode::fixed(g.findVertex(std::vector<std::int32_t>{4, 4}));
    RandomSource rng(cfg.seed, 0);
    PathSample p = simulateDiscrete(g, cfg, rng);

    for (int i = 0; i <= 400; ++i) {
        double t = 0.5 * i / 400.0;
        Point x = evalLinear(g, p, t);
        Point y = g.position(evalStepVertex(p, t));
        double dist = std::sqrt(squaredDistance(x, y));
        CHECK(dist <= h + 1e-12);
    }

    // the two processes agree exactly on the jump lattice
    double dt = std::ldexp(1.0, -6);
    for (std::size_t j = 0; j < p.size(); ++j) {
        Point x = evalLinear(g, p, j * dt);
        Point y = g.position(evalStepVertex(p, j * dt));
        CHECK(x == y);
    }
}

TEST_CASE("continuous-time walk holding statistics") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 3, 0.5);
    double dt = std::ldexp(1.0, -6);

    WalkConfig cfg;
    cfg.level = 3;
    cfg.horizon = 1.0;
    cfg.seed = 13;
    cfg.discipline = Discipline::exponentialHolding;
    cfg.start = StartMode::fixed(g.findVertex(std::vector<std::int32_t>{4, 4}));

    // jump counts are Poisson(horizon * 2^{2k}); check the mean at 3 sigma
    const int replicas = 10000;
    double lambda = cfg.horizon / dt;
    double totalJumps = 0.0;
    for (int r = 0; r < replicas; ++r) {
        RandomSource rng(cfg.seed, static_cast<std::uint64_t>(r));
        PathSample p = simulateContinuous(g, cfg, rng);
        totalJumps += static_cast<double>(p.size() - 1);
        for (std::size_t i = 0; i + 1 < p.size(); ++i) CHECK(p.times[i] < p.times[i + 1]);
        CHECK(p.horizon == cfg.horizon);
    }
    double meanJumps = totalJumps / replicas;
    double sigma = std::sqrt(lambda / replicas);
    CHECK(std::abs(meanJumps - lambda) <= 3.0 * sigma);

    // holding-time sample mean within 1% at 10^6 draws
    RandomSource rng(99);
    double sum = 0.0;
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) sum += rng.nextExponential(dt);
    CHECK(std::abs(sum / draws / dt - 1.0) <= 0.01);
}

TEST_CASE("time reversal of piecewise-constant paths") {
    // constant path reverses to itself
    PathSample constant;
    constant.interpolation = Interpolation::jump;
    constant.times = {0.0};
    constant.vertexIds = {4};
    constant.horizon = 3.0;
    PathSample rc = reversePath(constant, 2.0);
    CHECK(rc.times == std::vector<double>{0.0});
    CHECK(rc.vertexIds == std::vector<std::int32_t>{4});

    // hand enumeration: values a,b,c on [0,1), [1,2), [2,inf)
    PathSample p;
    p.interpolation = Interpolation::step;
    p.times = {0.0, 1.0, 2.0};
    p.vertexIds = {10, 11, 12};
    p.horizon = 2.0;

    // reversal at the horizon: left limits give (b on [0,1), a after)
    PathSample r = reversePath(p, 2.0);
    CHECK(r.times == std::vector<double>{0.0, 1.0});
    CHECK(r.vertexIds == std::vector<std::int32_t>{11, 10});

    // reversal at t = 1.5: the value last reached (c) never appears since
    // left limits are read; segments are b on [0, 0.5) then a
    PathSample r15 = reversePath(p, 1.5);
    CHECK(r15.times == std::vector<double>{0.0, 0.5});
    CHECK(r15.vertexIds == std::vector<std::int32_t>{11, 10});

    // endpoint identities: r(0) = left limit at t, r(t) = starting value
    CHECK(evalJumpVertex(r, 0.0) == 11);
    CHECK(evalJumpVertex(r, 2.0) == 10);

    // double reversal recovers the left-limit path at continuity points
    PathSample rr = reversePath(r15, 1.5);
    for (double s : {0.2, 0.7, 1.2}) {
        CHECK(evalJumpVertex(rr, s) == evalJumpVertex(p, s));
    }

    CHECK_THROWS_AS(reversePath(p, 2.5), std::invalid_argument);
}

TEST_CASE("time reversal of linear paths flips the sample order") {
    PathSample p;
    p.interpolation = Interpolation::linear;
    p.times = {0.0, 0.25, 0.5, 0.75};
    p.vertexIds = {1, 2, 3, 2};
    p.horizon = 0.75;

    PathSample r = reversePath(p, 0.75);
    CHECK(r.vertexIds == std::vector<std::int32_t>{2, 3, 2, 1});
    CHECK(r.times == std::vector<double>{0.0, 0.25, 0.5, 0.75});

    PathSample half = reversePath(p, 0.5);
    CHECK(half.vertexIds == std::vector<std::int32_t>{3, 2, 1});

    CHECK_THROWS_AS(reversePath(p, 0.3), std::invalid_argument); // off the sample lattice
}

TEST_CASE("stationary sampling follows the vertex measure") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 2, 0.5);
    StationarySampler sampler(g);

    std::int32_t center = g.findVertex(std::vector<std::int32_t>{2, 2});
    const int n = 100000;
    RandomSource rng(123);
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        if (sampler.sample(rng) == center) ++hits;
    }
    double p = 4.0 / 24.0; // degree 4 over total degree 24
    double sigma = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(hits - n * p) <= 3.0 * sigma);

    // reproducibility
    RandomSource r1(5, 8), r2(5, 8);
    for (int i = 0; i < 100; ++i) CHECK(sampler.sample(r1) == sampler.sample(r2));

    // equal degrees => uniform: single-edge two-vertex graph
    GridGraph pair = gridFromJson(R"({"level":1,"c1":0,"tag":"edgeBased","dimension":1,
        "vertices":[[1],[2]],"edges":[[0,1]],"degrees":[1,1],"measure":[0.25,0.25]})");
    StationarySampler uniform(pair);
    int ones = 0;
    RandomSource r3(77);
    for (int i = 0; i < 100000; ++i) ones += uniform.sample(r3);
    CHECK(std::abs(ones - 50000) <= 3.0 * std::sqrt(100000 * 0.25));
}

TEST_CASE("killed walk couples exactly with the free lattice walk") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 5, 0.5);
    std::int32_t start = g.findVertex(std::vector<std::int32_t>{16, 16});
    REQUIRE(start >= 0);

    Box subBox{{0.25, 0.25}, {0.75, 0.75}};
    RandomSource walkRng(31, 4), freeRng(31, 4);
    std::vector<std::int32_t> freePos{16, 16};
    std::int32_t v = start;
    double h = g.spacing();
    for (int step = 0; step < 100000; ++step) {
        v = stepDiscrete(g, v, walkRng);
        freePos = freeStep(freePos, freeRng);
        auto idx = g.vertex(v);
        REQUIRE(idx[0] == freePos[0]);
        REQUIRE(idx[1] == freePos[1]);
        double x = idx[0] * h, y = idx[1] * h;
        if (x <= subBox.lo[0] || x >= subBox.hi[0] || y <= subBox.lo[1] || y >= subBox.hi[1]) {
            break; // exit: the laws may differ from here on
        }
    }
}

TEST_CASE("walk rejects bad inputs") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 2, 0.5);
    GridGraph empty = buildCubeComplex(*domain, 1, 0.5);

    WalkConfig cfg;
    cfg.level = 1;
    cfg.horizon = 1.0;
    cfg.seed = 1;
    cfg.start = StartMode::fixed(0);
    RandomSource rng(1);
    CHECK_THROWS_AS(simulateDiscrete(empty, cfg, rng), std::invalid_argument);

    cfg.level = 3; // wrong level for the grid
    CHECK_THROWS_AS(simulateDiscrete(g, cfg, rng), std::invalid_argument);

    // isolated vertex: a one-vertex grid violates the degree invariant
    GridGraph lonely = gridFromJson(R"({"level":1,"c1":0,"tag":"edgeBased","dimension":1,
        "vertices":[[1]],"edges":[],"degrees":[1],"measure":[0.25]})");
    CHECK_THROWS_AS(stepDiscrete(lonely, 0, rng), std::logic_error);
}

TEST_CASE("path CSV export") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 2, 0.5);
    WalkConfig cfg;
    cfg.level = 2;
    cfg.horizon = 2.0 * std::ldexp(1.0, -4);
    cfg.seed = 3;
    cfg.start = StartMode::fixed(0);
    RandomSource rng(cfg.seed, 0);
    PathSample p = simulateDiscrete(g, cfg, rng);

    std::ostringstream out;
    exportPathCsv(out, g, p, 17, /*header=*/true);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "replica,time,vertex,x1,x2");
    std::getline(in, line);
    CHECK(line == "17,0,0,0.25,0.25");
}
