#include "latwalk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace latwalk {

GridFunction neighborAverage(const GridGraph& g, const GridFunction& f) {
    checkGridFunction(g, f);
    GridFunction out = makeGridFunction(g);
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.vertexCount()); ++v) {
        auto nbrs = g.neighbors(v);
        if (nbrs.empty()) throw std::logic_error("neighborAverage: isolated vertex");
        double s = 0.0;
        for (std::int32_t w : nbrs) s += f.values[w];
        out.values[v] = s / static_cast<double>(nbrs.size());
    }
    return out;
}

GridFunction walkGenerator(const GridGraph& g, const GridFunction& f) {
    GridFunction out = neighborAverage(g, f);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= f.values[i];
    return out;
}

double measureInnerProduct(const GridGraph& g, const GridFunction& f, const GridFunction& h) {
    checkGridFunction(g, f);
    checkGridFunction(g, h);
    KahanSum acc;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        acc.add(f.values[i] * h.values[i] * g.measure[i]);
    }
    return acc.value();
}

std::vector<double> martingaleCompensator(const GridGraph& g, const PathSample& p,
                                          const GridFunction& f) {
    checkGridFunction(g, f);
    if (p.interpolation == Interpolation::jump) {
        throw std::invalid_argument("martingaleCompensator: needs a discrete-time path");
    }
    GridFunction gen = walkGenerator(g, f);

    std::vector<double> m(p.size());
    double f0 = f.values[p.vertexIds[0]];
    KahanSum drift;
    m[0] = 0.0;
    for (std::size_t j = 1; j < p.size(); ++j) {
        drift.add(gen.values[p.vertexIds[j - 1]]);
        m[j] = f.values[p.vertexIds[j]] - f0 - drift.value();
    }
    return m;
}

namespace {

double edgeSquareSum(const GridGraph& g, const GridFunction& f) {
    KahanSum acc;
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.vertexCount()); ++v) {
        for (std::int32_t w : g.neighbors(v)) {
            if (v < w) {
                double d = f.values[v] - f.values[w];
                acc.add(d * d);
            }
        }
    }
    return acc.value();
}

} // namespace

double energySum(const GridGraph& g, const GridFunction& f) {
    checkGridFunction(g, f);
    double scale = std::ldexp(1.0, g.level * (2 - g.dimension));
    return scale * edgeSquareSum(g, f);
}

double dirichletForm(const GridGraph& g, const GridFunction& f) {
    return energySum(g, f) / (2.0 * g.dimension);
}

double dirichletFormBilinear(const GridGraph& g, const GridFunction& f, const GridFunction& h) {
    checkGridFunction(g, f);
    checkGridFunction(g, h);
    KahanSum acc;
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.vertexCount()); ++v) {
        for (std::int32_t w : g.neighbors(v)) {
            if (v < w) {
                acc.add((f.values[v] - f.values[w]) * (h.values[v] - h.values[w]));
            }
        }
    }
    double scale = std::ldexp(1.0, g.level * (2 - g.dimension));
    return scale * acc.value() / (2.0 * g.dimension);
}

ContractionReport powerContractionCheck(const GridGraph& g, const GridFunction& f, int jMax,
                                        double tolerance, std::size_t maxVertices) {
    checkGridFunction(g, f);
    if (jMax < 1) throw std::invalid_argument("powerContractionCheck: jMax must be >= 1");
    if (g.vertexCount() > maxVertices) {
        throw std::invalid_argument("powerContractionCheck: grid too large for dense powers");
    }

    double ff = measureInnerProduct(g, f, f);

    // gaps[i] = (f - A^i f, f) for i = 1..2*jMax
    std::vector<double> gaps(2 * jMax + 1, 0.0);
    GridFunction power = f;
    for (int i = 1; i <= 2 * jMax; ++i) {
        power = neighborAverage(g, power);
        gaps[i] = ff - measureInnerProduct(g, power, f);
    }

    ContractionReport report;
    report.worstSlack = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= jMax; ++j) {
        double lhs = gaps[2 * j];
        double mid = j * gaps[2];
        double rhs = 2.0 * j * gaps[1];
        report.exponents.push_back(j);
        report.lhs.push_back(lhs);
        report.middle.push_back(mid);
        report.rhs.push_back(rhs);
        report.worstSlack = std::min(report.worstSlack, mid - lhs);
        report.worstSlack = std::min(report.worstSlack, rhs - mid);
    }
    report.ok = report.worstSlack >= -tolerance;
    return report;
}

double continuumEnergy(const GridGraph& g, const TestFunction& phi, int pointsPerAxis) {
    if (g.tag != GridTag::cubeBased) {
        throw std::invalid_argument("continuumEnergy: needs a cube-based grid");
    }
    if (g.empty()) return 0.0;

    // Tensor Gauss rule per cube; cube volume h^d, rule normalization 2^-d.
    static const double nodes3[] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double weights3[] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    if (pointsPerAxis != 3) {
        throw std::invalid_argument("continuumEnergy: fixed 3-point rule per axis");
    }

    const int dim = g.dimension;
    const double h = g.spacing();
    const double jac = std::pow(h / 2.0, dim);
    Point p(dim);
    std::vector<int> counter(dim, 0);

    KahanSum total;
    for (std::size_t c = 0; c < g.cubeCount(); ++c) {
        auto cube = g.cube(c);
        std::fill(counter.begin(), counter.end(), 0);
        while (true) {
            double w = 1.0;
            for (int i = 0; i < dim; ++i) {
                double mid = (static_cast<double>(cube[i]) + 0.5) * h;
                p[i] = mid + 0.5 * h * nodes3[counter[i]];
                w *= weights3[counter[i]];
            }
            double val = phi.gradientSquared(p);
            if (!std::isfinite(val)) {
                throw std::runtime_error("continuumEnergy: non-finite gradient value");
            }
            total.add(w * jac * val);
            int axis = 0;
            while (axis < dim && ++counter[axis] == 3) {
                counter[axis] = 0;
                ++axis;
            }
            if (axis == dim) break;
        }
    }
    return total.value();
}

EnergyReport energyReport(const std::string& domainName, const GridGraph& g,
                          const TestFunction& phi) {
    EnergyReport r;
    r.domain = domainName;
    r.level = g.level;
    r.clearanceConstant = g.clearanceConstant;
    r.functionId = phi.id;

    GridFunction restricted = restrictToGrid(g, phi.value);
    r.energySumValue = energySum(g, restricted);
    r.dirichletFormValue = dirichletForm(g, restricted);
    r.continuumIntegral = continuumEnergy(g, phi);
    r.relError = r.continuumIntegral != 0.0 ? r.energySumValue / r.continuumIntegral - 1.0 : 0.0;
    return r;
}

} // namespace latwalk
