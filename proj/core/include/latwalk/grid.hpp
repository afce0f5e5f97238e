#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "latwalk/domain.hpp"
#include "latwalk/geometry.hpp"

namespace latwalk {

enum class GridTag { cubeBased, edgeBased };

std::string to_string(GridTag tag);
GridTag gridTagFromString(const std::string& s);

/// Level-k lattice graph over a domain. Vertices are lattice points
/// (integer index, position = index * 2^-k), edges join nearest neighbors.
/// Vertex order and adjacency are canonical (lexicographic), so two builds
/// from identical inputs are bit-identical.
struct GridGraph {
    int dimension = 0;
    int level = 0;
    double clearanceConstant = 0.0; // c1; 0 for edge-based grids
    GridTag tag = GridTag::cubeBased;

    std::vector<std::int32_t> vertexData; // dimension * count, rows sorted lex
    std::vector<std::int32_t> adjOffsets{0};
    std::vector<std::int32_t> adjList;    // neighbor ids, sorted per vertex
    std::vector<std::int32_t> degrees;
    std::vector<double> measure;          // degree * 2^{-k d} / (2d)
    std::vector<std::int32_t> cubeData;   // accepted cube indices (cube-based)

    std::uint64_t fingerprint = 0; // hash of the canonical JSON form

    std::size_t vertexCount() const { return degrees.size(); }
    std::size_t cubeCount() const {
        return dimension ? cubeData.size() / dimension : 0;
    }
    std::size_t edgeCount() const { return adjList.size() / 2; }
    bool empty() const { return degrees.empty(); }
    double spacing() const { return std::ldexp(1.0, -level); }

    std::span<const std::int32_t> vertex(std::int32_t id) const {
        return {vertexData.data() + static_cast<std::size_t>(id) * dimension,
                static_cast<std::size_t>(dimension)};
    }
    std::span<const std::int32_t> neighbors(std::int32_t id) const {
        return {adjList.data() + adjOffsets[id],
                static_cast<std::size_t>(adjOffsets[id + 1] - adjOffsets[id])};
    }
    std::span<const std::int32_t> cube(std::size_t i) const {
        return {cubeData.data() + i * dimension, static_cast<std::size_t>(dimension)};
    }

    Point position(std::int32_t id) const;
    void position(std::int32_t id, std::span<double> out) const;
    double coordinate(std::int32_t id, int axis) const {
        return std::ldexp(static_cast<double>(vertex(id)[axis]), -level);
    }

    /// Id of the vertex with the given lattice index, or -1.
    std::int32_t findVertex(std::span<const std::int32_t> index) const;

    /// Unordered edges (u < v), lexicographic.
    std::vector<std::array<std::int32_t, 2>> edges() const;
};

/// Accepts cubes with lattice corners whose clearance exceeds c1 * 2^-k,
/// face-connected to a cube containing the domain base point; the grid is
/// the corner graph of the accepted cubes. Returns an empty grid when no
/// qualifying cube contains the base point.
GridGraph buildCubeComplex(const Domain& domain, int level, double c1);

/// Graph of lattice segments contained in the domain; keeps the connected
/// component of the vertex nearest the base point (ties lexicographic).
GridGraph buildEdgeGraph(const Domain& domain, int level);

/// Sum of the vertex measures.
double totalMeasure(const GridGraph& g);

/// Real values attached to the vertices of one specific grid.
struct GridFunction {
    std::uint64_t gridId = 0;
    std::vector<double> values;
};

GridFunction makeGridFunction(const GridGraph& g, double fill = 0.0);
GridFunction sampleAtVertices(const GridGraph& g,
                              const std::function<double(std::span<const double>)>& u);
void checkGridFunction(const GridGraph& g, const GridFunction& f);

/// Piecewise-constant extension: value f(x) on the half-open cell
/// [x_i - 2^-k-1, x_i + 2^-k-1) around each vertex, 0 outside all cells.
class PiecewiseConstantField {
  public:
    PiecewiseConstantField(const GridGraph& g, GridFunction f);
    double operator()(std::span<const double> z) const;
    const GridFunction& gridFunction() const { return f_; }

  private:
    const GridGraph* grid_;
    GridFunction f_;
};

PiecewiseConstantField extendToDomain(const GridGraph& g, GridFunction f);

/// Cell-average restriction by tensor Gauss quadrature over each vertex
/// cell. Exact on piecewise constants, so it inverts extendToDomain.
GridFunction restrictToGrid(const GridGraph& g,
                            const std::function<double(std::span<const double>)>& u,
                            int pointsPerAxis = 3);

/// Canonical JSON form {level, c1, tag, dimension, vertices, edges,
/// degrees, measure[, cubes]}; the golden-fixture format.
std::string gridToJson(const GridGraph& g);
GridGraph gridFromJson(const std::string& text);

} // namespace latwalk
