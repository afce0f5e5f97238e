#include "latwalk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace latwalk {

namespace {

using json = nlohmann::json;

// Candidate window of lattice cells covering the domain bounding box.
struct LatticeWindow {
    std::vector<std::int64_t> lo, hi;   // inclusive index range per axis
    std::vector<std::int64_t> strides;  // last axis fastest => flat order is lex
    std::int64_t total = 0;

    static LatticeWindow forCubes(const Domain& d, int level) {
        return make(d, level, /*cells=*/true);
    }
    static LatticeWindow forVertices(const Domain& d, int level) {
        return make(d, level, /*cells=*/false);
    }

    std::int64_t flatten(std::span<const std::int64_t> idx) const {
        std::int64_t f = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) f += (idx[i] - lo[i]) * strides[i];
        return f;
    }

    void unflatten(std::int64_t flat, std::span<std::int64_t> out) const {
        for (std::size_t i = 0; i < lo.size(); ++i) {
            out[i] = lo[i] + flat / strides[i];
            flat %= strides[i];
        }
    }

    bool inRange(std::span<const std::int64_t> idx) const {
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] < lo[i] || idx[i] > hi[i]) return false;
        }
        return true;
    }

  private:
    static LatticeWindow make(const Domain& d, int level, bool cells) {
        const auto& box = d.boundingBox();
        double h = std::ldexp(1.0, -level);
        LatticeWindow w;
        int dim = d.dimension();
        w.lo.resize(dim);
        w.hi.resize(dim);
        w.strides.assign(dim, 1);
        for (int i = 0; i < dim; ++i) {
            if (cells) {
                w.lo[i] = static_cast<std::int64_t>(std::floor(box.lo[i] / h));
                w.hi[i] = static_cast<std::int64_t>(std::ceil(box.hi[i] / h)) - 1;
            } else {
                w.lo[i] = static_cast<std::int64_t>(std::ceil(box.lo[i] / h));
                w.hi[i] = static_cast<std::int64_t>(std::floor(box.hi[i] / h));
            }
            if (w.hi[i] < w.lo[i]) w.hi[i] = w.lo[i];
        }
        w.total = 1;
        for (int i = dim - 1; i >= 0; --i) {
            w.strides[i] = w.total;
            std::int64_t n = w.hi[i] - w.lo[i] + 1;
            if (n > 0 && w.total > (std::int64_t{1} << 31) / n) {
                throw std::runtime_error("grid build: candidate lattice too large");
            }
            w.total *= n;
        }
        return w;
    }
};

std::vector<std::int32_t> sortedUniqueRows(std::vector<std::int32_t> flatRows, int dim) {
    std::size_t n = flatRows.size() / dim;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(
            flatRows.begin() + a * dim, flatRows.begin() + (a + 1) * dim,
            flatRows.begin() + b * dim, flatRows.begin() + (b + 1) * dim);
    };
    auto equal = [&](std::size_t a, std::size_t b) {
        return std::equal(flatRows.begin() + a * dim, flatRows.begin() + (a + 1) * dim,
                          flatRows.begin() + b * dim);
    };
    std::sort(order.begin(), order.end(), less);
    std::vector<std::int32_t> out;
    out.reserve(flatRows.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && equal(order[i], order[i - 1])) continue;
        out.insert(out.end(), flatRows.begin() + order[i] * dim,
                   flatRows.begin() + (order[i] + 1) * dim);
    }
    return out;
}

std::int32_t findRow(const std::vector<std::int32_t>& rows, int dim,
                     std::span<const std::int32_t> key) {
    std::size_t n = rows.size() / dim;
    std::size_t lo = 0, hi = n;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        auto first = rows.begin() + mid * dim;
        if (std::lexicographical_compare(first, first + dim, key.begin(), key.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < n && std::equal(rows.begin() + lo * dim, rows.begin() + (lo + 1) * dim, key.begin())) {
        return static_cast<std::int32_t>(lo);
    }
    return -1;
}

void finalizeGraph(GridGraph& g, std::vector<std::array<std::int32_t, 2>>& edgePairs) {
    std::sort(edgePairs.begin(), edgePairs.end());
    edgePairs.erase(std::unique(edgePairs.begin(), edgePairs.end()), edgePairs.end());

    std::size_t n = g.vertexData.size() / std::max(g.dimension, 1);
    std::vector<std::int32_t> deg(n, 0);
    for (const auto& e : edgePairs) {
        ++deg[e[0]];
        ++deg[e[1]];
    }
    g.adjOffsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.adjOffsets[i + 1] = g.adjOffsets[i] + deg[i];
    g.adjList.assign(edgePairs.size() * 2, 0);
    std::vector<std::int32_t> cursor(g.adjOffsets.begin(), g.adjOffsets.end() - 1);
    for (const auto& e : edgePairs) {
        g.adjList[cursor[e[0]]++] = e[1];
        g.adjList[cursor[e[1]]++] = e[0];
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(g.adjList.begin() + g.adjOffsets[i], g.adjList.begin() + g.adjOffsets[i + 1]);
    }
    g.degrees = std::move(deg);

    double cellVolume = std::ldexp(1.0, -g.level * g.dimension);
    double scale = cellVolume / (2.0 * g.dimension);
    g.measure.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.measure[i] = g.degrees[i] * scale;

    g.fingerprint = fnv1a64(gridToJson(g));
}

} // namespace

std::string to_string(GridTag tag) {
    return tag == GridTag::cubeBased ? "cubeBased" : "edgeBased";
}

GridTag gridTagFromString(const std::string& s) {
    if (s == "cubeBased") return GridTag::cubeBased;
    if (s == "edgeBased") return GridTag::edgeBased;
    throw std::invalid_argument("unknown grid tag: " + s);
}

Point GridGraph::position(std::int32_t id) const {
    Point p(dimension);
    position(id, p);
    return p;
}

void GridGraph::position(std::int32_t id, std::span<double> out) const {
    auto v = vertex(id);
    for (int i = 0; i < dimension; ++i) {
        out[i] = std::ldexp(static_cast<double>(v[i]), -level);
    }
}

std::int32_t GridGraph::findVertex(std::span<const std::int32_t> index) const {
    if (empty()) return -1;
    return findRow(vertexData, dimension, index);
}

std::vector<std::array<std::int32_t, 2>> GridGraph::edges() const {
    std::vector<std::array<std::int32_t, 2>> out;
    out.reserve(edgeCount());
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(vertexCount()); ++v) {
        for (std::int32_t w : neighbors(v)) {
            if (v < w) out.push_back({v, w});
        }
    }
    return out;
}

GridGraph buildCubeComplex(const Domain& domain, int level, double c1) {
    if (level < 1) throw std::invalid_argument("buildCubeComplex: level must be >= 1");
    if (!(c1 > 0.0 && c1 < 1.0)) {
        throw std::invalid_argument("buildCubeComplex: c1 must lie in (0,1)");
    }

    const int dim = domain.dimension();
    const double h = std::ldexp(1.0, -level);
    const double threshold = c1 * h;

    GridGraph g;
    g.dimension = dim;
    g.level = level;
    g.clearanceConstant = c1;
    g.tag = GridTag::cubeBased;

    auto window = LatticeWindow::forCubes(domain, level);

    std::vector<std::int32_t> scratch(dim);
    auto qualifies = [&](std::span<const std::int64_t> cube) {
        for (int i = 0; i < dim; ++i) scratch[i] = static_cast<std::int32_t>(cube[i]);
        return domain.cubeClearance(scratch, level) > threshold;
    };

    // Seeds: every closed cube containing the base point (several when the
    // base point sits on a lattice plane).
    std::vector<std::vector<std::int64_t>> seeds{{}};
    const Point& x0 = domain.basePoint();
    for (int i = 0; i < dim; ++i) {
        double u = x0[i] / h;
        double fl = std::floor(u);
        std::vector<std::int64_t> choices{static_cast<std::int64_t>(fl)};
        if (u == fl) choices.insert(choices.begin(), static_cast<std::int64_t>(fl) - 1);
        std::vector<std::vector<std::int64_t>> next;
        for (const auto& partial : seeds) {
            for (auto c : choices) {
                auto ext = partial;
                ext.push_back(c);
                next.push_back(std::move(ext));
            }
        }
        seeds = std::move(next);
    }

    std::vector<std::uint8_t> visited(window.total, 0);
    std::deque<std::int64_t> frontier;
    std::vector<std::int64_t> accepted;

    for (const auto& s : seeds) {
        if (!window.inRange(s)) continue;
        std::int64_t flat = window.flatten(s);
        if (visited[flat]) continue;
        visited[flat] = 1;
        if (qualifies(s)) {
            accepted.push_back(flat);
            frontier.push_back(flat);
        }
    }

    std::vector<std::int64_t> cur(dim);
    while (!frontier.empty()) {
        std::int64_t flat = frontier.front();
        frontier.pop_front();
        window.unflatten(flat, cur);
        for (int axis = 0; axis < dim; ++axis) {
            for (int dir : {-1, 1}) {
                cur[axis] += dir;
                if (window.inRange(cur)) {
                    std::int64_t nf = window.flatten(cur);
                    if (!visited[nf]) {
                        visited[nf] = 1;
                        if (qualifies(cur)) {
                            accepted.push_back(nf);
                            frontier.push_back(nf);
                        }
                    }
                }
                cur[axis] -= dir;
            }
        }
    }

    if (accepted.empty()) {
        g.fingerprint = fnv1a64(gridToJson(g));
        return g;
    }

    std::sort(accepted.begin(), accepted.end()); // flat order == lex order
    g.cubeData.reserve(accepted.size() * dim);
    for (std::int64_t flat : accepted) {
        window.unflatten(flat, cur);
        for (int i = 0; i < dim; ++i) g.cubeData.push_back(static_cast<std::int32_t>(cur[i]));
    }

    // Corners of the accepted cubes, deduplicated.
    const std::size_t cubeCount = accepted.size();
    const unsigned cornersPerCube = 1u << dim;
    std::vector<std::int32_t> corners;
    corners.reserve(cubeCount * cornersPerCube * dim);
    for (std::size_t c = 0; c < cubeCount; ++c) {
        auto base = g.cube(c);
        for (unsigned bits = 0; bits < cornersPerCube; ++bits) {
            for (int i = 0; i < dim; ++i) {
                corners.push_back(base[i] + static_cast<std::int32_t>((bits >> i) & 1u));
            }
        }
    }
    g.vertexData = sortedUniqueRows(std::move(corners), dim);

    // Edges of the accepted cubes.
    std::vector<std::array<std::int32_t, 2>> edgePairs;
    std::vector<std::int32_t> a(dim), b(dim);
    for (std::size_t c = 0; c < cubeCount; ++c) {
        auto base = g.cube(c);
        for (int axis = 0; axis < dim; ++axis) {
            for (unsigned bits = 0; bits < cornersPerCube; ++bits) {
                if ((bits >> axis) & 1u) continue;
                for (int i = 0; i < dim; ++i) {
                    a[i] = base[i] + static_cast<std::int32_t>((bits >> i) & 1u);
                    b[i] = a[i];
                }
                b[axis] += 1;
                std::int32_t ia = findRow(g.vertexData, dim, a);
                std::int32_t ib = findRow(g.vertexData, dim, b);
                edgePairs.push_back({std::min(ia, ib), std::max(ia, ib)});
            }
        }
    }

    finalizeGraph(g, edgePairs);
    return g;
}

GridGraph buildEdgeGraph(const Domain& domain, int level) {
    if (level < 1) throw std::invalid_argument("buildEdgeGraph: level must be >= 1");

    const int dim = domain.dimension();
    const double h = std::ldexp(1.0, -level);

    GridGraph g;
    g.dimension = dim;
    g.level = level;
    g.clearanceConstant = 0.0;
    g.tag = GridTag::edgeBased;

    auto window = LatticeWindow::forVertices(domain, level);

    // Membership of every lattice point in the window, then segments to the
    // +axis neighbors that stay inside the domain.
    std::vector<std::uint8_t> inside(window.total, 0);
    std::vector<std::int64_t> cur(dim);
    Point pos(dim), npos(dim);
    for (std::int64_t flat = 0; flat < window.total; ++flat) {
        window.unflatten(flat, cur);
        for (int i = 0; i < dim; ++i) pos[i] = std::ldexp(static_cast<double>(cur[i]), -level);
        inside[flat] = domain.contains(pos) ? 1 : 0;
    }

    std::vector<std::array<std::int64_t, 2>> candidate; // flat endpoint pairs
    for (std::int64_t flat = 0; flat < window.total; ++flat) {
        if (!inside[flat]) continue;
        window.unflatten(flat, cur);
        for (int i = 0; i < dim; ++i) pos[i] = std::ldexp(static_cast<double>(cur[i]), -level);
        for (int axis = 0; axis < dim; ++axis) {
            cur[axis] += 1;
            if (window.inRange(cur)) {
                std::int64_t nf = window.flatten(cur);
                if (inside[nf]) {
                    for (int i = 0; i < dim; ++i) {
                        npos[i] = std::ldexp(static_cast<double>(cur[i]), -level);
                    }
                    if (domain.segmentInside(pos, npos)) candidate.push_back({flat, nf});
                }
            }
            cur[axis] -= 1;
        }
    }

    if (candidate.empty()) {
        g.fingerprint = fnv1a64(gridToJson(g));
        return g;
    }

    // Endpoint set, flat order == lex order.
    std::vector<std::int64_t> endpoints;
    endpoints.reserve(candidate.size() * 2);
    for (const auto& e : candidate) {
        endpoints.push_back(e[0]);
        endpoints.push_back(e[1]);
    }
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());

    auto localId = [&](std::int64_t flat) {
        return static_cast<std::int32_t>(
            std::lower_bound(endpoints.begin(), endpoints.end(), flat) - endpoints.begin());
    };

    std::vector<std::vector<std::int32_t>> adj(endpoints.size());
    for (const auto& e : candidate) {
        std::int32_t u = localId(e[0]);
        std::int32_t v = localId(e[1]);
        adj[u].push_back(v);
        adj[v].push_back(u);
    }

    // Seed: endpoint nearest the base point; lex order breaks ties because
    // endpoints are scanned in lex order and strict improvement is required.
    const Point& x0 = domain.basePoint();
    std::int32_t seed = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
        window.unflatten(endpoints[i], cur);
        double d2 = 0.0;
        for (int j = 0; j < dim; ++j) {
            double c = std::ldexp(static_cast<double>(cur[j]), -level) - x0[j];
            d2 += c * c;
        }
        if (d2 < best) {
            best = d2;
            seed = static_cast<std::int32_t>(i);
        }
    }

    std::vector<std::uint8_t> keep(endpoints.size(), 0);
    std::deque<std::int32_t> frontier{seed};
    keep[seed] = 1;
    while (!frontier.empty()) {
        std::int32_t v = frontier.front();
        frontier.pop_front();
        for (std::int32_t w : adj[v]) {
            if (!keep[w]) {
                keep[w] = 1;
                frontier.push_back(w);
            }
        }
    }

    std::vector<std::int32_t> remap(endpoints.size(), -1);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
        if (!keep[i]) continue;
        remap[i] = next++;
        window.unflatten(endpoints[i], cur);
        for (int j = 0; j < dim; ++j) g.vertexData.push_back(static_cast<std::int32_t>(cur[j]));
    }

    std::vector<std::array<std::int32_t, 2>> edgePairs;
    edgePairs.reserve(candidate.size());
    for (const auto& e : candidate) {
        std::int32_t u = remap[localId(e[0])];
        std::int32_t v = remap[localId(e[1])];
        if (u >= 0 && v >= 0) edgePairs.push_back({std::min(u, v), std::max(u, v)});
    }

    finalizeGraph(g, edgePairs);
    return g;
}

double totalMeasure(const GridGraph& g) {
    KahanSum sum;
    for (double m : g.measure) sum.add(m);
    return sum.value();
}

GridFunction makeGridFunction(const GridGraph& g, double fill) {
    return GridFunction{g.fingerprint, std::vector<double>(g.vertexCount(), fill)};
}

GridFunction sampleAtVertices(const GridGraph& g,
                              const std::function<double(std::span<const double>)>& u) {
    GridFunction f = makeGridFunction(g);
    Point p(g.dimension);
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.vertexCount()); ++v) {
        g.position(v, p);
        f.values[v] = u(p);
    }
    return f;
}

void checkGridFunction(const GridGraph& g, const GridFunction& f) {
    if (f.gridId != g.fingerprint || f.values.size() != g.vertexCount()) {
        throw std::invalid_argument("grid function does not belong to this grid");
    }
}

PiecewiseConstantField::PiecewiseConstantField(const GridGraph& g, GridFunction f)
    : grid_(&g), f_(std::move(f)) {
    checkGridFunction(g, f_);
}

double PiecewiseConstantField::operator()(std::span<const double> z) const {
    const GridGraph& g = *grid_;
    if (z.size() != static_cast<std::size_t>(g.dimension)) {
        throw std::invalid_argument("field evaluation: dimension mismatch");
    }
    std::vector<std::int32_t> idx(g.dimension);
    double invH = std::ldexp(1.0, g.level);
    for (int i = 0; i < g.dimension; ++i) {
        // half-open cell [x - h/2, x + h/2): lower edge belongs to the cell
        double u = std::floor(z[i] * invH + 0.5);
        if (u < std::numeric_limits<std::int32_t>::min() ||
            u > std::numeric_limits<std::int32_t>::max()) {
            return 0.0;
        }
        idx[i] = static_cast<std::int32_t>(u);
    }
    std::int32_t id = g.findVertex(idx);
    return id < 0 ? 0.0 : f_.values[id];
}

PiecewiseConstantField extendToDomain(const GridGraph& g, GridFunction f) {
    return PiecewiseConstantField(g, std::move(f));
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
void gaussRule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    switch (n) {
        case 1:
            nodes = {0.0};
            weights = {2.0};
            break;
        case 2:
            nodes = {-0.5773502691896257, 0.5773502691896257};
            weights = {1.0, 1.0};
            break;
        case 3:
            nodes = {-0.7745966692414834, 0.0, 0.7745966692414834};
            weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
            break;
        case 4:
            nodes = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                     0.8611363115940526};
            weights = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                       0.3478548451374538};
            break;
        case 5:
            nodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                     0.9061798459386640};
            weights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                       0.4786286704993665, 0.2369268850561891};
            break;
        default:
            throw std::invalid_argument("quadrature: points per axis must be 1..5");
    }
}

} // namespace

GridFunction restrictToGrid(const GridGraph& g,
                            const std::function<double(std::span<const double>)>& u,
                            int pointsPerAxis) {
    std::vector<double> nodes, weights;
    gaussRule(pointsPerAxis, nodes, weights);

    GridFunction f = makeGridFunction(g);
    const int dim = g.dimension;
    const double half = 0.5 * g.spacing();
    Point center(dim), p(dim);
    std::vector<int> counter(dim, 0);
    const double norm = std::pow(0.5, dim); // Gauss weights sum to 2 per axis

    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.vertexCount()); ++v) {
        g.position(v, center);
        std::fill(counter.begin(), counter.end(), 0);
        KahanSum acc;
        while (true) {
            double w = 1.0;
            for (int i = 0; i < dim; ++i) {
                p[i] = center[i] + half * nodes[counter[i]];
                w *= weights[counter[i]];
            }
            double val = u(p);
            if (!std::isfinite(val)) {
                throw std::runtime_error("restrictToGrid: non-finite integrand value");
            }
            acc.add(w * val);
            int axis = 0;
            while (axis < dim && ++counter[axis] == pointsPerAxis) {
                counter[axis] = 0;
                ++axis;
            }
            if (axis == dim) break;
        }
        f.values[v] = acc.value() * norm;
    }
    return f;
}

std::string gridToJson(const GridGraph& g) {
    json j;
    j["level"] = g.level;
    j["c1"] = g.clearanceConstant;
    j["tag"] = to_string(g.tag);
    j["dimension"] = g.dimension;

    json vertices = json::array();
    for (std::size_t v = 0; v < g.vertexCount(); ++v) {
        json row = json::array();
        for (std::int32_t c : g.vertex(static_cast<std::int32_t>(v))) row.push_back(c);
        vertices.push_back(std::move(row));
    }
    j["vertices"] = std::move(vertices);

    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back(json::array({e[0], e[1]}));
    j["edges"] = std::move(edges);

    j["degrees"] = g.degrees;
    j["measure"] = g.measure;

    if (g.tag == GridTag::cubeBased) {
        json cubes = json::array();
        for (std::size_t c = 0; c < g.cubeCount(); ++c) {
            json row = json::array();
            for (std::int32_t i : g.cube(c)) row.push_back(i);
            cubes.push_back(std::move(row));
        }
        j["cubes"] = std::move(cubes);
    }
    return j.dump();
}

GridGraph gridFromJson(const std::string& text) {
    json j = json::parse(text);
    GridGraph g;
    g.level = j.at("level").get<int>();
    g.clearanceConstant = j.at("c1").get<double>();
    g.tag = gridTagFromString(j.at("tag").get<std::string>());
    g.dimension = j.at("dimension").get<int>();

    for (const auto& row : j.at("vertices")) {
        for (const auto& c : row) g.vertexData.push_back(c.get<std::int32_t>());
    }
    std::vector<std::array<std::int32_t, 2>> edgePairs;
    for (const auto& e : j.at("edges")) {
        edgePairs.push_back({e[0].get<std::int32_t>(), e[1].get<std::int32_t>()});
    }
    if (j.contains("cubes")) {
        for (const auto& row : j.at("cubes")) {
            for (const auto& c : row) g.cubeData.push_back(c.get<std::int32_t>());
        }
    }
    finalizeGraph(g, edgePairs);
    return g;
}

} // namespace latwalk
