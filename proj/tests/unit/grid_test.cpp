#include <doctest.h>

#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "latwalk/grid.hpp"

using namespace latwalk;

namespace {

std::unique_ptr<Domain> unitSquare() { return makeRectangle({{0.0, 1.0}, {0.0, 1.0}}); }

bool connected(const GridGraph& g) {
    if (g.empty()) return true;
    std::vector<char> seen(g.vertexCount(), 0);
    std::deque<std::int32_t> frontier{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!frontier.empty()) {
        auto v = frontier.front();
        frontier.pop_front();
        for (auto w : g.neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++visited;
                frontier.push_back(w);
            }
        }
    }
    return visited == g.vertexCount();
}

} // namespace

TEST_CASE("unit square level 2 is the worked fixture") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 2, 0.5);

    CHECK(g.cubeCount() == 4);
    CHECK(g.vertexCount() == 9);
    CHECK(g.edgeCount() == 12);

    std::multiset<int> degrees(g.degrees.begin(), g.degrees.end());
    CHECK(degrees == std::multiset<int>{2, 2, 2, 2, 3, 3, 3, 3, 4});
    CHECK(totalMeasure(g) == doctest::Approx(0.375).epsilon(1e-15));

    // canonical lexicographic order: first vertex (1,1), center (2,2) has degree 4
    CHECK(g.vertex(0)[0] == 1);
    CHECK(g.vertex(0)[1] == 1);
    std::int32_t center = g.findVertex(std::vector<std::int32_t>{2, 2});
    REQUIRE(center >= 0);
    CHECK(g.degrees[center] == 4);

    // every vertex is a corner of an accepted cube
    for (std::size_t c = 0; c < g.cubeCount(); ++c) {
        auto cube = g.cube(c);
        for (unsigned bits = 0; bits < 4; ++bits) {
            std::vector<std::int32_t> corner{cube[0] + static_cast<std::int32_t>(bits & 1),
                                             cube[1] + static_cast<std::int32_t>(bits >> 1)};
            CHECK(g.findVertex(corner) >= 0);
        }
    }
}

TEST_CASE("coarse level yields the empty grid") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 1, 0.5);
    CHECK(g.empty());
    CHECK(g.vertexCount() == 0);
    CHECK(totalMeasure(g) == 0.0);
}

TEST_CASE("narrow comb channels admit no cubes") {
    // widths 4^-n for n = 2,3,4; at level 3 the threshold 2^-k (1+c1)
    // exceeds every width, so accepted cubes avoid the channels entirely
    auto comb = makeComb(CombParams{{1.0 / 16, 1.0 / 64, 1.0 / 256}});
    GridGraph g = buildCubeComplex(*comb, 3, 0.5);
    REQUIRE_FALSE(g.empty());

    auto regions = comb->creviceRegions();
    double h = g.spacing();
    for (std::size_t c = 0; c < g.cubeCount(); ++c) {
        auto cube = g.cube(c);
        double xlo = cube[0] * h, xhi = xlo + h;
        double ylo = cube[1] * h, yhi = ylo + h;
        for (const auto& r : regions) {
            bool overlaps = xlo < r.hi[0] && xhi > r.lo[0] && ylo < r.hi[1] && yhi > r.lo[1];
            CHECK_FALSE(overlaps);
        }
    }
}

TEST_CASE("edge graph on the unit square matches the cube graph") {
    auto domain = unitSquare();
    GridGraph cube = buildCubeComplex(*domain, 2, 0.5);
    GridGraph edge = buildEdgeGraph(*domain, 2);

    CHECK(edge.tag == GridTag::edgeBased);
    CHECK(edge.vertexCount() == 9);
    CHECK(edge.edgeCount() == 12);
    CHECK(edge.vertexData == cube.vertexData);
    CHECK(edge.adjList == cube.adjList);
    CHECK(edge.degrees == cube.degrees);
}

TEST_CASE("one-step channels separate the two constructions") {
    // channel width = one lattice step at level 5
    double h = std::ldexp(1.0, -5);
    auto comb = makeComb(CombParams{{h, h, h}});
    GridGraph cube = buildCubeComplex(*comb, 5, 0.5);
    GridGraph edge = buildEdgeGraph(*comb, 5);
    REQUIRE_FALSE(cube.empty());
    REQUIRE_FALSE(edge.empty());

    // cube vertices form a strict subset of the edge vertices
    std::set<std::vector<std::int32_t>> edgeVerts;
    for (std::size_t v = 0; v < edge.vertexCount(); ++v) {
        auto idx = edge.vertex(static_cast<std::int32_t>(v));
        edgeVerts.insert(std::vector<std::int32_t>(idx.begin(), idx.end()));
    }
    for (std::size_t v = 0; v < cube.vertexCount(); ++v) {
        auto idx = cube.vertex(static_cast<std::int32_t>(v));
        CHECK(edgeVerts.count(std::vector<std::int32_t>(idx.begin(), idx.end())) == 1);
    }
    CHECK(edge.vertexCount() > cube.vertexCount());

    // edge graph reaches across the wall, cube graph stays on the base side
    bool edgeHasLeft = false, cubeHasLeft = false;
    for (std::size_t v = 0; v < edge.vertexCount(); ++v) {
        if (edge.vertex(static_cast<std::int32_t>(v))[0] < 0) edgeHasLeft = true;
    }
    for (std::size_t v = 0; v < cube.vertexCount(); ++v) {
        if (cube.vertex(static_cast<std::int32_t>(v))[0] < 0) cubeHasLeft = true;
    }
    CHECK(edgeHasLeft);
    CHECK_FALSE(cubeHasLeft);
}

TEST_CASE("edge graph keeps only the component of the base point") {
    // channels too thin for any lattice row: the wall disconnects the two
    // squares and the left one must be dropped
    auto comb = makeComb(CombParams{{1.0 / 64, 1.0 / 256}});
    GridGraph edge = buildEdgeGraph(*comb, 4);
    REQUIRE_FALSE(edge.empty());
    for (std::size_t v = 0; v < edge.vertexCount(); ++v) {
        CHECK(edge.vertex(static_cast<std::int32_t>(v))[0] >= 1); // strictly right of the wall
    }
    CHECK(connected(edge));
}

TEST_CASE("grids are connected and respect the measure identity") {
    std::vector<std::unique_ptr<Domain>> domains;
    domains.push_back(unitSquare());
    domains.push_back(makeDisk(Point{0.0, 0.0}, 1.0));
    domains.push_back(makeComb(CombParams{{1.0 / 16, 1.0 / 64}}));
    domains.push_back(makeKochPrefractal(1));

    for (const auto& domain : domains) {
        for (int level : {3, 4}) {
            GridGraph g = buildCubeComplex(*domain, level, 0.5);
            GridGraph e = buildEdgeGraph(*domain, level);
            CAPTURE(domain->name());
            CAPTURE(level);
            CHECK(connected(g));
            CHECK(connected(e));
            for (const GridGraph* grid : {&g, &e}) {
                if (grid->empty()) continue;
                // sum_x m(x) = #edges * 2^{-kd} / d
                double expected = static_cast<double>(grid->edgeCount()) *
                                  std::ldexp(1.0, -level * grid->dimension) / grid->dimension;
                CHECK(totalMeasure(*grid) == doctest::Approx(expected).epsilon(1e-13));
                // degree bounds 1 <= v <= 2d
                for (auto d : grid->degrees) {
                    CHECK(d >= 1);
                    CHECK(d <= 2 * grid->dimension);
                }
            }
            // adjacent midpoints lie inside the domain (cube-based path safety)
            Point mid(2);
            for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.vertexCount()); ++v) {
                for (auto w : g.neighbors(v)) {
                    if (w < v) continue;
                    Point a = g.position(v), b = g.position(w);
                    for (int i = 0; i < 2; ++i) mid[i] = 0.5 * (a[i] + b[i]);
                    CHECK(domain->contains(mid));
                }
            }
        }
    }
}

TEST_CASE("total measure grows toward the domain volume") {
    auto domain = unitSquare();
    double previous = 0.0;
    for (int level : {4, 6, 8}) {
        GridGraph g = buildCubeComplex(*domain, level, 0.5);
        double m = totalMeasure(g);
        // closed form: edge count 2 M (M-1) with M = 2^k - 1 vertices per row
        double M = std::ldexp(1.0, level) - 1.0;
        double expected = M * (M - 1.0) * std::ldexp(1.0, -2 * level);
        CHECK(m == doctest::Approx(expected).epsilon(1e-13));
        CHECK(m > previous);
        CHECK(m < 1.0);
        previous = m;
    }
}

TEST_CASE("builds are deterministic") {
    auto comb = makeComb(CombParams{{1.0 / 16, 1.0 / 64}});
    GridGraph a = buildCubeComplex(*comb, 4, 0.5);
    GridGraph b = buildCubeComplex(*comb, 4, 0.5);
    CHECK(a.vertexData == b.vertexData);
    CHECK(a.adjList == b.adjList);
    CHECK(a.cubeData == b.cubeData);
    CHECK(a.fingerprint == b.fingerprint);

    GridGraph e1 = buildEdgeGraph(*comb, 4);
    GridGraph e2 = buildEdgeGraph(*comb, 4);
    CHECK(e1.fingerprint == e2.fingerprint);
    CHECK(e1.fingerprint != a.fingerprint);
}

TEST_CASE("piecewise-constant extension and cell-average restriction") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 2, 0.5);

    GridFunction ones = makeGridFunction(g, 1.0);
    auto field = extendToDomain(g, ones);
    CHECK(field(Point{0.5, 0.5}) == 1.0);   // vertex position
    CHECK(field(Point{0.05, 0.05}) == 0.0); // outside every cell

    // lower-closed cell convention on a shared boundary
    GridFunction ramp = sampleAtVertices(g, [](std::span<const double> p) { return p[0]; });
    auto rampField = extendToDomain(g, ramp);
    double h = g.spacing();
    // z on the boundary between the cells of (1/4,1/2) and (1/2,1/2)
    CHECK(rampField(Point{0.25 + 0.5 * h, 0.5}) == 0.5);

    // restrict o extend = identity, exactly
    GridFunction back = restrictToGrid(g, [&](std::span<const double> z) { return rampField(z); });
    for (std::size_t i = 0; i < back.values.size(); ++i) {
        CHECK(back.values[i] == doctest::Approx(ramp.values[i]).epsilon(1e-15));
    }

    // cell averages of linear functions equal the center value
    GridFunction proj = restrictToGrid(g, [](std::span<const double> p) { return p[0]; });
    std::int32_t v = g.findVertex(std::vector<std::int32_t>{1, 2}); // (1/4, 1/2)
    REQUIRE(v >= 0);
    CHECK(proj.values[v] == doctest::Approx(0.25).epsilon(1e-15));

    // averages of a constant are that constant
    GridFunction c = restrictToGrid(g, [](std::span<const double>) { return 3.25; });
    for (double x : c.values) CHECK(x == doctest::Approx(3.25).epsilon(1e-15));
}

TEST_CASE("grid JSON round-trips") {
    auto domain = unitSquare();
    GridGraph g = buildCubeComplex(*domain, 3, 0.5);
    std::string text = gridToJson(g);
    GridGraph back = gridFromJson(text);
    CHECK(back.fingerprint == g.fingerprint);
    CHECK(back.vertexData == g.vertexData);
    CHECK(back.measure == g.measure);
    CHECK(back.level == g.level);
    CHECK(gridToJson(back) == text);
}
