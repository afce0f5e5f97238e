#include "latwalk/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace latwalk {

bool Box::containsOpen(std::span<const double> p) const {
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!(p[i] > lo[i] && p[i] < hi[i])) return false;
    }
    return true;
}

bool Box::containsClosed(std::span<const double> p) const {
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (p[i] < lo[i] || p[i] > hi[i]) return false;
    }
    return true;
}

Point Box::center() const {
    Point c(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
}

double squaredDistance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string toHex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf);
}

std::string doubleRepr(double x) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return std::string(buf);
}

namespace seg2 {

namespace {

double cross(double ox, double oy, double ax, double ay, double bx, double by) {
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

int orientation(double ox, double oy, double ax, double ay, double bx, double by) {
    double c = cross(ox, oy, ax, ay, bx, by);
    if (c > 0.0) return 1;
    if (c < 0.0) return -1;
    return 0;
}

bool onSegmentCollinear(double px, double py, const Segment& s) {
    return px >= std::min(s.ax, s.bx) && px <= std::max(s.ax, s.bx) &&
           py >= std::min(s.ay, s.by) && py <= std::max(s.ay, s.by);
}

} // namespace

double distPointSegment(double px, double py, const Segment& s) {
    double dx = s.bx - s.ax;
    double dy = s.by - s.ay;
    double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = ((px - s.ax) * dx + (py - s.ay) * dy) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    double cx = s.ax + t * dx;
    double cy = s.ay + t * dy;
    return std::sqrt((px - cx) * (px - cx) + (py - cy) * (py - cy));
}

bool segmentsIntersect(const Segment& a, const Segment& b) {
    int o1 = orientation(a.ax, a.ay, a.bx, a.by, b.ax, b.ay);
    int o2 = orientation(a.ax, a.ay, a.bx, a.by, b.bx, b.by);
    int o3 = orientation(b.ax, b.ay, b.bx, b.by, a.ax, a.ay);
    int o4 = orientation(b.ax, b.ay, b.bx, b.by, a.bx, a.by);

    if (o1 != o2 && o3 != o4) return true;

    if (o1 == 0 && onSegmentCollinear(b.ax, b.ay, a)) return true;
    if (o2 == 0 && onSegmentCollinear(b.bx, b.by, a)) return true;
    if (o3 == 0 && onSegmentCollinear(a.ax, a.ay, b)) return true;
    if (o4 == 0 && onSegmentCollinear(a.bx, a.by, b)) return true;
    return false;
}

double distSegmentSegment(const Segment& a, const Segment& b) {
    if (segmentsIntersect(a, b)) return 0.0;
    double d = distPointSegment(a.ax, a.ay, b);
    d = std::min(d, distPointSegment(a.bx, a.by, b));
    d = std::min(d, distPointSegment(b.ax, b.ay, a));
    d = std::min(d, distPointSegment(b.bx, b.by, a));
    return d;
}

bool rectIntersectsSegment(const Rect& r, const Segment& s) {
    if (r.containsClosed(s.ax, s.ay) || r.containsClosed(s.bx, s.by)) return true;
    Segment bottom{r.xlo, r.ylo, r.xhi, r.ylo};
    Segment top{r.xlo, r.yhi, r.xhi, r.yhi};
    Segment left{r.xlo, r.ylo, r.xlo, r.yhi};
    Segment right{r.xhi, r.ylo, r.xhi, r.yhi};
    return segmentsIntersect(s, bottom) || segmentsIntersect(s, top) ||
           segmentsIntersect(s, left) || segmentsIntersect(s, right);
}

double distRectSegment(const Rect& r, const Segment& s) {
    if (rectIntersectsSegment(r, s)) return 0.0;
    Segment bottom{r.xlo, r.ylo, r.xhi, r.ylo};
    Segment top{r.xlo, r.yhi, r.xhi, r.yhi};
    Segment left{r.xlo, r.ylo, r.xlo, r.yhi};
    Segment right{r.xhi, r.ylo, r.xhi, r.yhi};
    double d = distSegmentSegment(s, bottom);
    d = std::min(d, distSegmentSegment(s, top));
    d = std::min(d, distSegmentSegment(s, left));
    d = std::min(d, distSegmentSegment(s, right));
    return d;
}

} // namespace seg2

bool pointInLoops(double px, double py,
                  const std::vector<std::vector<std::array<double, 2>>>& loops) {
    // Boundary points are not members.
    for (const auto& loop : loops) {
        std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = loop[i];
            const auto& b = loop[(i + 1) % n];
            if (seg2::distPointSegment(px, py, {a[0], a[1], b[0], b[1]}) == 0.0) {
                return false;
            }
        }
    }
    bool inside = false;
    for (const auto& loop : loops) {
        std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = loop[i];
            const auto& b = loop[(i + 1) % n];
            if ((a[1] > py) != (b[1] > py)) {
                double xCross = a[0] + (py - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if (px < xCross) inside = !inside;
            }
        }
    }
    return inside;
}

} // namespace latwalk
