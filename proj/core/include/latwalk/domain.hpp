#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latwalk/geometry.hpp"

namespace latwalk {

/// Geometry oracle for a bounded open set D in R^d.
///
/// `contains` is open-set membership. `cubeClearance` returns the exact
/// distance from the closed lattice cube to the boundary of D when the cube
/// is a subset of D, and 0 otherwise; the built-in families compute it in
/// closed form (per-face margins, radial formulas, minima over finitely many
/// boundary segments), so a positive return value is never an overestimate.
class Domain {
  public:
    virtual ~Domain() = default;

    int dimension() const { return dimension_; }
    const std::string& name() const { return name_; }
    const Point& basePoint() const { return basePoint_; }
    const Box& boundingBox() const { return boundingBox_; }

    bool contains(std::span<const double> p) const;

    /// Distance from the closed cube with index `cube` at level k (edge
    /// 2^-k, corners on the 2^-k lattice) to the boundary of D; 0 signals
    /// that the cube is not contained in D.
    double cubeClearance(std::span<const std::int32_t> cube, int level) const;

    /// True iff the closed segment [a, b] is contained in D.
    bool segmentInside(std::span<const double> a, std::span<const double> b) const;

    /// If the domain is an axis-aligned box, its extent (used by the
    /// heat-kernel comparisons); empty otherwise.
    virtual std::optional<Box> asAxisBox() const { return std::nullopt; }

    /// Marked thin regions (the comb's channels). Vertex-penetration
    /// statistics count lattice vertices strictly inside these boxes.
    virtual std::vector<Box> creviceRegions() const { return {}; }

  protected:
    Domain(std::string name, int dimension, Point basePoint, Box boundingBox);

    virtual bool containsImpl(std::span<const double> p) const = 0;
    virtual double clearanceImpl(std::span<const std::int32_t> cube, int level) const = 0;
    virtual bool segmentInsideImpl(std::span<const double> a,
                                   std::span<const double> b) const = 0;

  private:
    std::string name_;
    int dimension_;
    Point basePoint_;
    Box boundingBox_;
};

struct CombParams {
    /// Channel widths, entry j is the width of the channel attached at
    /// height 1/(j+2); channel count = widths.size().
    std::vector<double> channelWidths;
};

std::unique_ptr<Domain> makeRectangle(const std::vector<std::array<double, 2>>& bounds,
                                      std::optional<Point> basePoint = std::nullopt);
std::unique_ptr<Domain> makeDisk(Point center, double radius,
                                 std::optional<Point> basePoint = std::nullopt);
std::unique_ptr<Domain> makeSlitDisk(std::optional<Point> basePoint = std::nullopt);
std::unique_ptr<Domain> makeKochPrefractal(int level,
                                           std::optional<Point> basePoint = std::nullopt);
std::unique_ptr<Domain> makeComb(const CombParams& params,
                                 std::optional<Point> basePoint = std::nullopt);
std::unique_ptr<Domain> makePolygon(std::vector<std::vector<std::array<double, 2>>> loops,
                                    std::optional<Point> basePoint = std::nullopt,
                                    std::string name = "polygon");

} // namespace latwalk
