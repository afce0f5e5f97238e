#include "latwalk/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace latwalk {

namespace {

void checkDimension(int expected, std::size_t got, const char* what) {
    if (static_cast<std::size_t>(expected) != got) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
}

struct CubeBounds {
    Point lo, hi;
};

CubeBounds cubeBounds(std::span<const std::int32_t> cube, int level) {
    CubeBounds b;
    b.lo.resize(cube.size());
    b.hi.resize(cube.size());
    for (std::size_t i = 0; i < cube.size(); ++i) {
        b.lo[i] = std::ldexp(static_cast<double>(cube[i]), -level);
        b.hi[i] = std::ldexp(static_cast<double>(cube[i]) + 1.0, -level);
    }
    return b;
}

seg2::Rect toRect(const CubeBounds& b) {
    return {b.lo[0], b.lo[1], b.hi[0], b.hi[1]};
}

} // namespace

Domain::Domain(std::string name, int dimension, Point basePoint, Box boundingBox)
    : name_(std::move(name)),
      dimension_(dimension),
      basePoint_(std::move(basePoint)),
      boundingBox_(std::move(boundingBox)) {
    if (dimension_ < 1) throw std::invalid_argument("domain dimension must be >= 1");
    checkDimension(dimension_, basePoint_.size(), "basePoint");
}

bool Domain::contains(std::span<const double> p) const {
    checkDimension(dimension_, p.size(), "contains");
    return containsImpl(p);
}

double Domain::cubeClearance(std::span<const std::int32_t> cube, int level) const {
    checkDimension(dimension_, cube.size(), "cubeClearance");
    if (level < 0) throw std::invalid_argument("cubeClearance: level must be >= 0");
    return clearanceImpl(cube, level);
}

bool Domain::segmentInside(std::span<const double> a, std::span<const double> b) const {
    checkDimension(dimension_, a.size(), "segmentInside");
    checkDimension(dimension_, b.size(), "segmentInside");
    return segmentInsideImpl(a, b);
}

// ---------------------------------------------------------------------------
// Axis-aligned box domain ("rectangle"); any dimension, intervals included.

namespace {

class RectangleDomain final : public Domain {
  public:
    RectangleDomain(Box box, Point base)
        : Domain("rectangle", box.dimension(), std::move(base), box), box_(std::move(box)) {}

    std::optional<Box> asAxisBox() const override { return box_; }

  protected:
    bool containsImpl(std::span<const double> p) const override {
        return box_.containsOpen(p);
    }

    double clearanceImpl(std::span<const std::int32_t> cube, int level) const override {
        auto b = cubeBounds(cube, level);
        double clearance = std::numeric_limits<double>::infinity();
        for (int i = 0; i < dimension(); ++i) {
            double below = b.lo[i] - box_.lo[i];
            double above = box_.hi[i] - b.hi[i];
            if (below <= 0.0 || above <= 0.0) return 0.0;
            clearance = std::min(clearance, std::min(below, above));
        }
        return clearance;
    }

    bool segmentInsideImpl(std::span<const double> a, std::span<const double> b) const override {
        return box_.containsOpen(a) && box_.containsOpen(b); // convex
    }

  private:
    Box box_;
};

// Euclidean ball; named "disk" after the planar case.
class BallDomain final : public Domain {
  public:
    BallDomain(Point center, double radius, Point base)
        : Domain("disk", static_cast<int>(center.size()), std::move(base),
                 ballBox(center, radius)),
          center_(std::move(center)),
          radius_(radius) {}

  protected:
    bool containsImpl(std::span<const double> p) const override {
        return squaredDistance(p, center_) < radius_ * radius_;
    }

    double clearanceImpl(std::span<const std::int32_t> cube, int level) const override {
        // The farthest point of the cube from the center is a corner.
        double far = farthestCornerDistance(cube, level, center_);
        return far < radius_ ? radius_ - far : 0.0;
    }

    bool segmentInsideImpl(std::span<const double> a, std::span<const double> b) const override {
        return containsImpl(a) && containsImpl(b); // convex
    }

  private:
    static Box ballBox(const Point& c, double r) {
        Box box;
        box.lo.resize(c.size());
        box.hi.resize(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            box.lo[i] = c[i] - r;
            box.hi[i] = c[i] + r;
        }
        return box;
    }

    static double farthestCornerDistance(std::span<const std::int32_t> cube, int level,
                                         const Point& center) {
        double s = 0.0;
        for (std::size_t i = 0; i < cube.size(); ++i) {
            double lo = std::ldexp(static_cast<double>(cube[i]), -level);
            double hi = std::ldexp(static_cast<double>(cube[i]) + 1.0, -level);
            double d = std::max(std::abs(lo - center[i]), std::abs(hi - center[i]));
            s += d * d;
        }
        return std::sqrt(s);
    }

    Point center_;
    double radius_;
};

// Unit disk minus the closed slit [-1, 0] x {0}. Removing the closed
// segment keeps the set open; the open-segment reading would leave the
// origin as a non-interior member.
class SlitDiskDomain final : public Domain {
  public:
    explicit SlitDiskDomain(Point base)
        : Domain("slitDisk", 2, std::move(base), Box{{-1.0, -1.0}, {1.0, 1.0}}) {}

  protected:
    bool containsImpl(std::span<const double> p) const override {
        if (p[0] * p[0] + p[1] * p[1] >= 1.0) return false;
        if (p[1] == 0.0 && p[0] <= 0.0) return false; // p[0] >= -1 inside the disk
        return true;
    }

    double clearanceImpl(std::span<const std::int32_t> cube, int level) const override {
        auto b = cubeBounds(cube, level);
        double far = 0.0;
        for (int i = 0; i < 2; ++i) {
            double d = std::max(std::abs(b.lo[i]), std::abs(b.hi[i]));
            far += d * d;
        }
        far = std::sqrt(far);
        if (far >= 1.0) return 0.0;
        double dSlit = seg2::distRectSegment(toRect(b), slit_);
        if (dSlit == 0.0) return 0.0;
        return std::min(1.0 - far, dSlit);
    }

    bool segmentInsideImpl(std::span<const double> a, std::span<const double> b) const override {
        if (!containsImpl(a) || !containsImpl(b)) return false;
        return !seg2::segmentsIntersect({a[0], a[1], b[0], b[1]}, slit_);
    }

  private:
    seg2::Segment slit_{-1.0, 0.0, 0.0, 0.0};
};

// Two unit squares joined along x = 0 by thin horizontal channels at
// heights 1/n, with the closed channel top/bottom faces removed. The
// boundary is the outer rectangle plus a finite list of wall and face
// segments, so clearances are exact minima over segments.
class CombDomain final : public Domain {
  public:
    CombDomain(CombParams params, Point base)
        : Domain("comb", 2, std::move(base), Box{{-1.0, 0.0}, {1.0, 1.0}}),
          widths_(std::move(params.channelWidths)) {
        buildObstacles();
    }

    std::vector<Box> creviceRegions() const override {
        std::vector<Box> regions;
        for (std::size_t j = 0; j < widths_.size(); ++j) {
            double n = static_cast<double>(j + 2);
            double half = 1.0 / n;
            regions.push_back(Box{{-half, 1.0 / n}, {half, 1.0 / n + widths_[j]}});
        }
        return regions;
    }

    static void validate(const CombParams& params) {
        const auto& w = params.channelWidths;
        if (w.empty()) throw std::invalid_argument("comb: at least one channel required");
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (!(w[j] > 0.0)) throw std::invalid_argument("comb: channel widths must be positive");
            double n = static_cast<double>(j + 2);
            double top = 1.0 / n + w[j];
            double ceiling = (j == 0) ? 1.0 : 1.0 / (n - 1.0);
            if (!(top < ceiling)) {
                throw std::invalid_argument("comb: channels overlap; need 1/n + width < 1/(n-1)");
            }
        }
    }

  protected:
    bool containsImpl(std::span<const double> p) const override {
        double x = p[0], y = p[1];
        if (!(x > -1.0 && x < 1.0 && y > 0.0 && y < 1.0)) return false;
        for (std::size_t j = 0; j < widths_.size(); ++j) {
            double n = static_cast<double>(j + 2);
            double bottom = 1.0 / n;
            double top = bottom + widths_[j];
            double half = 1.0 / n;
            // closed channel faces are removed
            if ((y == bottom || y == top) && x >= -half && x <= half) return false;
        }
        if (x == 0.0) {
            for (std::size_t j = 0; j < widths_.size(); ++j) {
                double n = static_cast<double>(j + 2);
                if (y > 1.0 / n && y < 1.0 / n + widths_[j]) return true; // gateway
            }
            return false; // on the dividing wall
        }
        return true;
    }

    double clearanceImpl(std::span<const std::int32_t> cube, int level) const override {
        auto b = cubeBounds(cube, level);
        double clearance = std::numeric_limits<double>::infinity();
        double margins[4] = {b.lo[0] - (-1.0), 1.0 - b.hi[0], b.lo[1] - 0.0, 1.0 - b.hi[1]};
        for (double m : margins) {
            if (m <= 0.0) return 0.0;
            clearance = std::min(clearance, m);
        }
        auto rect = toRect(b);
        for (const auto& s : obstacles_) {
            double d = seg2::distRectSegment(rect, s);
            if (d == 0.0) return 0.0;
            clearance = std::min(clearance, d);
        }
        return clearance;
    }

    bool segmentInsideImpl(std::span<const double> a, std::span<const double> b) const override {
        if (!containsImpl(a) || !containsImpl(b)) return false;
        seg2::Segment s{a[0], a[1], b[0], b[1]};
        for (const auto& o : obstacles_) {
            if (seg2::segmentsIntersect(s, o)) return false;
        }
        return true;
    }

  private:
    void buildObstacles() {
        validate(CombParams{widths_});
        // Channel faces, closed in x.
        struct Gateway {
            double bottom, top;
        };
        std::vector<Gateway> gateways;
        for (std::size_t j = 0; j < widths_.size(); ++j) {
            double n = static_cast<double>(j + 2);
            double half = 1.0 / n;
            double bottom = 1.0 / n;
            double top = bottom + widths_[j];
            obstacles_.push_back({-half, bottom, half, bottom});
            obstacles_.push_back({-half, top, half, top});
            gateways.push_back({bottom, top});
        }
        // The wall x = 0 minus the open gateway intervals.
        std::sort(gateways.begin(), gateways.end(),
                  [](const Gateway& a, const Gateway& b) { return a.bottom < b.bottom; });
        double y = 0.0;
        for (const auto& g : gateways) {
            obstacles_.push_back({0.0, y, 0.0, g.bottom});
            y = g.top;
        }
        obstacles_.push_back({0.0, y, 0.0, 1.0});
    }

    std::vector<double> widths_;
    std::vector<seg2::Segment> obstacles_;
};

// Polygon with optional holes; membership by even-odd rule, clearance as a
// minimum over boundary edges.
class PolygonDomain final : public Domain {
  public:
    PolygonDomain(std::vector<std::vector<std::array<double, 2>>> loops, Point base,
                  std::string name)
        : Domain(std::move(name), 2, std::move(base), loopsBox(loops)), loops_(std::move(loops)) {
        for (const auto& loop : loops_) {
            std::size_t n = loop.size();
            for (std::size_t i = 0; i < n; ++i) {
                const auto& a = loop[i];
                const auto& b = loop[(i + 1) % n];
                edges_.push_back({a[0], a[1], b[0], b[1]});
            }
        }
    }

    static void validate(const std::vector<std::vector<std::array<double, 2>>>& loops) {
        if (loops.empty()) throw std::invalid_argument("polygon: no loops given");
        for (std::size_t li = 0; li < loops.size(); ++li) {
            if (loops[li].size() < 3) throw std::invalid_argument("polygon: loop needs >= 3 vertices");
            double area2 = signedArea2(loops[li]);
            if (li == 0 && area2 <= 0.0) {
                throw std::invalid_argument("polygon: outer loop must be counterclockwise");
            }
            if (li > 0 && area2 >= 0.0) {
                throw std::invalid_argument("polygon: hole loops must be clockwise");
            }
        }
    }

    static double signedArea2(const std::vector<std::array<double, 2>>& loop) {
        double s = 0.0;
        std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = loop[i];
            const auto& b = loop[(i + 1) % n];
            s += a[0] * b[1] - b[0] * a[1];
        }
        return s;
    }

  protected:
    bool containsImpl(std::span<const double> p) const override {
        return pointInLoops(p[0], p[1], loops_);
    }

    double clearanceImpl(std::span<const std::int32_t> cube, int level) const override {
        auto b = cubeBounds(cube, level);
        auto rect = toRect(b);
        Point c = {0.5 * (b.lo[0] + b.hi[0]), 0.5 * (b.lo[1] + b.hi[1])};
        if (!containsImpl(c)) return 0.0;
        double clearance = std::numeric_limits<double>::infinity();
        for (const auto& e : edges_) {
            double d = seg2::distRectSegment(rect, e);
            if (d == 0.0) return 0.0;
            clearance = std::min(clearance, d);
        }
        // A hole lying entirely inside the cube has its vertices inside.
        for (const auto& loop : loops_) {
            for (const auto& v : loop) {
                if (v[0] > rect.xlo && v[0] < rect.xhi && v[1] > rect.ylo && v[1] < rect.yhi) {
                    return 0.0;
                }
            }
        }
        return clearance;
    }

    bool segmentInsideImpl(std::span<const double> a, std::span<const double> b) const override {
        if (!containsImpl(a) || !containsImpl(b)) return false;
        seg2::Segment s{a[0], a[1], b[0], b[1]};
        for (const auto& e : edges_) {
            if (seg2::segmentsIntersect(s, e)) return false;
        }
        return true;
    }

  private:
    static Box loopsBox(const std::vector<std::vector<std::array<double, 2>>>& loops) {
        double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
        double ylo = xlo, yhi = -xlo;
        for (const auto& loop : loops) {
            for (const auto& v : loop) {
                xlo = std::min(xlo, v[0]);
                xhi = std::max(xhi, v[0]);
                ylo = std::min(ylo, v[1]);
                yhi = std::max(yhi, v[1]);
            }
        }
        return Box{{xlo, ylo}, {xhi, yhi}};
    }

    std::vector<std::vector<std::array<double, 2>>> loops_;
    std::vector<seg2::Segment> edges_;
};

std::unique_ptr<Domain> checkedBasePoint(std::unique_ptr<Domain> domain) {
    if (!domain->contains(domain->basePoint())) {
        throw std::invalid_argument(domain->name() + ": basePoint must lie inside the domain");
    }
    return domain;
}

std::vector<std::array<double, 2>> kochLoop(int level) {
    // Equilateral base triangle (0,0), (1,0), (1/2, sqrt(3)/2); each
    // refinement replaces every edge by four, bumping outward.
    std::vector<std::array<double, 2>> loop = {
        {0.0, 0.0}, {1.0, 0.0}, {0.5, std::numbers::sqrt3 / 2.0}};
    for (int l = 0; l < level; ++l) {
        std::vector<std::array<double, 2>> next;
        next.reserve(loop.size() * 4);
        std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = loop[i];
            const auto& b = loop[(i + 1) % n];
            double dx = b[0] - a[0];
            double dy = b[1] - a[1];
            std::array<double, 2> p1 = {a[0] + dx / 3.0, a[1] + dy / 3.0};
            std::array<double, 2> p2 = {a[0] + 2.0 * dx / 3.0, a[1] + 2.0 * dy / 3.0};
            // outward normal of a ccw loop is (dy, -dx)
            double mx = a[0] + dx / 2.0 + dy * (std::numbers::sqrt3 / 6.0);
            double my = a[1] + dy / 2.0 - dx * (std::numbers::sqrt3 / 6.0);
            next.push_back(a);
            next.push_back(p1);
            next.push_back({mx, my});
            next.push_back(p2);
        }
        loop = std::move(next);
    }
    return loop;
}

} // namespace

std::unique_ptr<Domain> makeRectangle(const std::vector<std::array<double, 2>>& bounds,
                                      std::optional<Point> basePoint) {
    if (bounds.empty()) throw std::invalid_argument("rectangle: bounds required");
    Box box;
    for (const auto& b : bounds) {
        if (!(b[0] < b[1])) throw std::invalid_argument("rectangle: need lo < hi per axis");
        box.lo.push_back(b[0]);
        box.hi.push_back(b[1]);
    }
    Point base = basePoint ? *basePoint : box.center();
    return checkedBasePoint(std::make_unique<RectangleDomain>(std::move(box), std::move(base)));
}

std::unique_ptr<Domain> makeDisk(Point center, double radius, std::optional<Point> basePoint) {
    if (center.empty()) throw std::invalid_argument("disk: center required");
    if (!(radius > 0.0)) throw std::invalid_argument("disk: radius must be positive");
    Point base = basePoint ? *basePoint : center;
    return checkedBasePoint(std::make_unique<BallDomain>(std::move(center), radius, std::move(base)));
}

std::unique_ptr<Domain> makeSlitDisk(std::optional<Point> basePoint) {
    Point base = basePoint ? *basePoint : Point{0.5, 0.25};
    return checkedBasePoint(std::make_unique<SlitDiskDomain>(std::move(base)));
}

std::unique_ptr<Domain> makeKochPrefractal(int level, std::optional<Point> basePoint) {
    if (level < 0) throw std::invalid_argument("kochPrefractal: level must be >= 0");
    if (level > 8) throw std::invalid_argument("kochPrefractal: level too large");
    Point base = basePoint ? *basePoint : Point{0.5, std::numbers::sqrt3 / 6.0};
    return checkedBasePoint(std::make_unique<PolygonDomain>(
        std::vector<std::vector<std::array<double, 2>>>{kochLoop(level)}, std::move(base),
        "kochPrefractal"));
}

std::unique_ptr<Domain> makeComb(const CombParams& params, std::optional<Point> basePoint) {
    CombDomain::validate(params);
    Point base = basePoint ? *basePoint : Point{0.5, 0.75};
    return checkedBasePoint(std::make_unique<CombDomain>(params, std::move(base)));
}

std::unique_ptr<Domain> makePolygon(std::vector<std::vector<std::array<double, 2>>> loops,
                                    std::optional<Point> basePoint, std::string name) {
    PolygonDomain::validate(loops);
    Point base;
    if (basePoint) {
        base = *basePoint;
    } else {
        // centroid of the outer loop; factory fails if it is not inside
        double cx = 0.0, cy = 0.0;
        for (const auto& v : loops[0]) {
            cx += v[0];
            cy += v[1];
        }
        base = {cx / loops[0].size(), cy / loops[0].size()};
    }
    return checkedBasePoint(
        std::make_unique<PolygonDomain>(std::move(loops), std::move(base), std::move(name)));
}

} // namespace latwalk
