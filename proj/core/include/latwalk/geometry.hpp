#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace latwalk {

/// A position in R^d. Length equals the ambient dimension.
using Point = std::vector<double>;

/// Integer lattice index (cube or vertex), one entry per axis.
using LatticeIndex = std::vector<std::int32_t>;

/// Axis-aligned box, lo[i] < hi[i] per axis.
struct Box {
    Point lo;
    Point hi;

    int dimension() const { return static_cast<int>(lo.size()); }
    bool containsOpen(std::span<const double> p) const;
    bool containsClosed(std::span<const double> p) const;
    Point center() const;
};

double squaredDistance(std::span<const double> a, std::span<const double> b);

/// Compensated (Kahan) accumulator; keeps long sums accurate to a few ulp
/// of the result independent of term count.
class KahanSum {
  public:
    void add(double x) {
        double y = x - carry_;
        double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// FNV-1a over bytes; used for config hashes and grid fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);
std::string toHex(std::uint64_t value);

/// Shortest decimal string that round-trips to the same double. Keeps CSV
/// and JSON output byte-stable across runs.
std::string doubleRepr(double x);

// 2-d segment primitives used by the planar domain oracles. Segments are
// closed; "intersects" includes touching at a single point.
namespace seg2 {

struct Segment {
    double ax, ay, bx, by;
};

struct Rect {
    double xlo, ylo, xhi, yhi;

    bool containsClosed(double x, double y) const {
        return x >= xlo && x <= xhi && y >= ylo && y <= yhi;
    }
};

double distPointSegment(double px, double py, const Segment& s);
bool segmentsIntersect(const Segment& a, const Segment& b);
double distSegmentSegment(const Segment& a, const Segment& b);
bool rectIntersectsSegment(const Rect& r, const Segment& s);
double distRectSegment(const Rect& r, const Segment& s);

} // namespace seg2

/// Even-odd membership test against a set of vertex loops. Points lying on
/// a loop edge count as outside (open-set convention).
bool pointInLoops(double px, double py,
                  const std::vector<std::vector<std::array<double, 2>>>& loops);

} // namespace latwalk
