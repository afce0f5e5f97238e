#include <doctest.h>

#include <cmath>
#include <numbers>

#include "latwalk/domain.hpp"
#include "latwalk/rng.hpp"

using namespace latwalk;

namespace {

std::vector<std::int32_t> cube2(int i, int j) { return {i, j}; }

// Dense-sampling lower estimate of dist(Q, boundary): minimum over sampled
// boundary points of their distance to the closed cube.
double sampledBoundaryDistance(const std::vector<Point>& boundarySamples,
                               const std::vector<std::int32_t>& cube, int level) {
    double h = std::ldexp(1.0, -level);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : boundarySamples) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            double lo = cube[i] * h;
            double hi = lo + h;
            double d = 0.0;
            if (b[i] < lo) d = lo - b[i];
            if (b[i] > hi) d = b[i] - hi;
            d2 += d * d;
        }
        best = std::min(best, std::sqrt(d2));
    }
    return best;
}

} // namespace

TEST_CASE("membership of the built-in domains") {
    auto square = makeRectangle({{0.0, 1.0}, {0.0, 1.0}});
    CHECK(square->contains(Point{0.5, 0.5}));
    CHECK_FALSE(square->contains(Point{0.0, 0.5})); // boundary of the open set
    CHECK_FALSE(square->contains(Point{1.0, 1.0}));

    auto slit = makeSlitDisk();
    CHECK_FALSE(slit->contains(Point{-0.5, 0.0})); // on the removed slit
    CHECK(slit->contains(Point{0.5, 0.0}));
    CHECK(slit->contains(Point{-0.5, 0.3}));
    CHECK_FALSE(slit->contains(Point{0.0, 0.0})); // slit closure

    CHECK_THROWS_AS((void)square->contains(Point{0.5}), std::invalid_argument);
}

TEST_CASE("cube clearance closed forms") {
    auto square = makeRectangle({{0.0, 1.0}, {0.0, 1.0}});
    // [1/4,1/2]^2: nearest boundary face at distance 1/4
    CHECK(square->cubeClearance(cube2(1, 1), 2) == doctest::Approx(0.25).epsilon(1e-15));
    // [0,1/4] x [1/4,1/2] touches the boundary
    CHECK(square->cubeClearance(cube2(0, 1), 2) == 0.0);

    auto disk = makeDisk(Point{0.0, 0.0}, 1.0);
    // [0,1/2]^2: farthest corner (1/2,1/2)
    CHECK(disk->cubeClearance(cube2(0, 0), 1) ==
          doctest::Approx(1.0 - std::numbers::sqrt2 / 2.0).epsilon(1e-15));
    CHECK(disk->cubeClearance(cube2(1, 1), 1) == 0.0); // corner (1,1) outside
}

TEST_CASE("comb channel disjointness") {
    // delta_n = 4^-n: 1/n + 4^-n < 1/(n-1) for n = 2, 3, 4 by direct arithmetic
    for (int n = 3; n <= 4; ++n) {
        CHECK(1.0 / n + std::pow(4.0, -n) < 1.0 / (n - 1));
    }
    CHECK(0.5 + std::pow(4.0, -2) < 1.0);

    CombParams params{{1.0 / 16, 1.0 / 64, 1.0 / 256}};
    auto comb = makeComb(params);
    CHECK(comb->creviceRegions().size() == 3);

    // channel regions are inside the domain away from their faces
    CHECK(comb->contains(Point{0.0, 1.0 / 3 + 1.0 / 128}));
    // point on a closed channel face is outside
    CHECK_FALSE(comb->contains(Point{0.1, 0.5}));
    CHECK_FALSE(comb->contains(Point{0.5, 0.5})); // face endpoint (closure)
    CHECK(comb->contains(Point{0.9, 0.5}));       // beyond the face
    CHECK_FALSE(comb->contains(Point{0.0, 0.9})); // dividing wall

    CHECK_THROWS_AS(makeComb(CombParams{{0.3, 0.3}}), std::invalid_argument); // overlap
    CHECK_THROWS_AS(makeComb(CombParams{{-0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(makeComb(CombParams{{}}), std::invalid_argument);
}

TEST_CASE("built-in factories and base points") {
    auto square = makeRectangle({{0.0, 1.0}, {0.0, 1.0}});
    CHECK(square->basePoint() == Point{0.5, 0.5});

    auto koch0 = makeKochPrefractal(0);
    CHECK(koch0->name() == "kochPrefractal");
    CHECK(koch0->contains(koch0->basePoint()));
    // level 0 is the plain triangle: nothing below the base edge
    CHECK_FALSE(koch0->contains(Point{0.5, -0.05}));

    auto koch1 = makeKochPrefractal(1);
    // the bottom bump of level 1 reaches below the base edge
    CHECK(koch1->contains(Point{0.5, -0.2}));
    CHECK_FALSE(koch1->contains(Point{0.1, -0.2}));
    CHECK(koch1->boundingBox().lo[1] < 0.0);

    CHECK_THROWS_AS(makeDisk(Point{0.0, 0.0}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(makeKochPrefractal(-1), std::invalid_argument);
    CHECK_THROWS_AS(makeRectangle({{1.0, 0.0}}), std::invalid_argument);
    // base point outside rejected
    CHECK_THROWS_AS(makeRectangle({{0.0, 1.0}}, Point{2.0}), std::invalid_argument);
}

TEST_CASE("positive clearance implies the cube is inside the domain") {
    RandomSource rng(2024);
    std::vector<std::unique_ptr<Domain>> domains;
    domains.push_back(makeRectangle({{0.0, 1.0}, {0.0, 1.0}}));
    domains.push_back(makeDisk(Point{0.0, 0.0}, 1.0));
    domains.push_back(makeComb(CombParams{{1.0 / 16, 1.0 / 64}}));
    domains.push_back(makeKochPrefractal(2));
    domains.push_back(makeSlitDisk());

    for (const auto& domain : domains) {
        int level = 4;
        double h = std::ldexp(1.0, -level);
        const Box& bb = domain->boundingBox();
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<std::int32_t> cube(2);
            for (int i = 0; i < 2; ++i) {
                auto lo = static_cast<std::int32_t>(std::floor(bb.lo[i] / h));
                auto hi = static_cast<std::int32_t>(std::ceil(bb.hi[i] / h)) - 1;
                cube[i] = lo + static_cast<std::int32_t>(rng.nextBounded(hi - lo + 1));
            }
            double clearance = domain->cubeClearance(cube, level);
            if (clearance <= 0.0) continue;
            // corners, center, and random interior points all belong to D
            for (int trial2 = 0; trial2 < 16; ++trial2) {
                Point p(2);
                for (int i = 0; i < 2; ++i) {
                    double frac = trial2 < 4 ? static_cast<double>((trial2 >> i) & 1)
                                             : (trial2 == 4 ? 0.5 : rng.nextUnit());
                    p[i] = (cube[i] + frac) * h;
                }
                CAPTURE(domain->name());
                CHECK(domain->contains(p));
            }
        }
    }
}

TEST_CASE("clearance is monotone under cube refinement") {
    std::vector<std::unique_ptr<Domain>> domains;
    domains.push_back(makeRectangle({{0.0, 1.0}, {0.0, 1.0}}));
    domains.push_back(makeDisk(Point{0.0, 0.0}, 1.0));
    domains.push_back(makeComb(CombParams{{1.0 / 16, 1.0 / 64}}));

    for (const auto& domain : domains) {
        int level = 3;
        for (std::int32_t i = -8; i < 8; ++i) {
            for (std::int32_t j = -8; j < 8; ++j) {
                double coarse = domain->cubeClearance(cube2(i, j), level);
                // the four sub-cubes one level finer
                for (int di = 0; di < 2; ++di) {
                    for (int dj = 0; dj < 2; ++dj) {
                        double fine =
                            domain->cubeClearance(cube2(2 * i + di, 2 * j + dj), level + 1);
                        if (coarse > 0.0) {
                            CHECK(fine >= coarse - 1e-15);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("clearance agrees with a dense boundary sampling") {
    // rectangle boundary
    std::vector<Point> rectBoundary;
    const int samples = 4000;
    for (int i = 0; i <= samples; ++i) {
        double s = static_cast<double>(i) / samples;
        rectBoundary.push_back({s, 0.0});
        rectBoundary.push_back({s, 1.0});
        rectBoundary.push_back({0.0, s});
        rectBoundary.push_back({1.0, s});
    }
    auto square = makeRectangle({{0.0, 1.0}, {0.0, 1.0}});
    double exact = square->cubeClearance(cube2(1, 1), 2);
    double sampled = sampledBoundaryDistance(rectBoundary, cube2(1, 1), 2);
    CHECK(exact == doctest::Approx(sampled).epsilon(1e-3));

    // disk boundary
    std::vector<Point> circle;
    for (int i = 0; i < samples; ++i) {
        double a = 2.0 * std::numbers::pi * i / samples;
        circle.push_back({std::cos(a), std::sin(a)});
    }
    auto disk = makeDisk(Point{0.0, 0.0}, 1.0);
    exact = disk->cubeClearance(cube2(0, 0), 2);
    sampled = sampledBoundaryDistance(circle, cube2(0, 0), 2);
    CHECK(exact == doctest::Approx(sampled).epsilon(1e-3));
}

TEST_CASE("polygon domains validate orientation") {
    std::vector<std::vector<std::array<double, 2>>> loops = {
        {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    auto poly = makePolygon(loops);
    CHECK(poly->contains(Point{0.5, 0.5}));
    CHECK_FALSE(poly->contains(Point{1.5, 0.5}));

    // clockwise outer loop rejected
    std::vector<std::vector<std::array<double, 2>>> cw = {
        {{0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, 0.0}}};
    CHECK_THROWS_AS(makePolygon(cw), std::invalid_argument);

    // square with a small hole tucked inside one cube: the cube center is in
    // the domain but the cube still fails the subset test
    std::vector<std::vector<std::array<double, 2>>> holed = {
        {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}},
        {{0.26, 0.26}, {0.26, 0.35}, {0.35, 0.35}, {0.35, 0.26}}};
    auto annulus = makePolygon(holed, Point{0.7, 0.7});
    CHECK_FALSE(annulus->contains(Point{0.3, 0.3}));
    CHECK(annulus->contains(Point{0.7, 0.7}));
    CHECK(annulus->contains(Point{0.375, 0.375}));           // center of [1/4,1/2]^2
    CHECK(annulus->cubeClearance(cube2(1, 1), 2) == 0.0);    // hole inside [1/4,1/2]^2
    CHECK(annulus->cubeClearance(cube2(2, 2), 2) > 0.0);     // [1/2,3/4]^2 clear
}
