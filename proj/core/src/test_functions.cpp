#include "latwalk/test_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace latwalk {

namespace {

using std::numbers::pi;

std::vector<TestFunction> buildCatalog() {
    std::vector<TestFunction> fns;

    fns.push_back({"x1", 0, "first coordinate",
                   [](std::span<const double> p) { return p[0]; },
                   [](std::span<const double> p, std::span<double> g) {
                       for (auto& v : g) v = 0.0;
                       g[0] = 1.0;
                       (void)p;
                   }});

    fns.push_back({"quadratic", 0, "squared distance from the origin",
                   [](std::span<const double> p) {
                       double s = 0.0;
                       for (double x : p) s += x * x;
                       return s;
                   },
                   [](std::span<const double> p, std::span<double> g) {
                       for (std::size_t i = 0; i < p.size(); ++i) g[i] = 2.0 * p[i];
                   }});

    fns.push_back({"sin1", 1, "sin(pi x)",
                   [](std::span<const double> p) { return std::sin(pi * p[0]); },
                   [](std::span<const double> p, std::span<double> g) {
                       g[0] = pi * std::cos(pi * p[0]);
                   }});

    fns.push_back({"sin_cos", 2, "sin(pi x1) cos(pi x2)",
                   [](std::span<const double> p) {
                       return std::sin(pi * p[0]) * std::cos(pi * p[1]);
                   },
                   [](std::span<const double> p, std::span<double> g) {
                       g[0] = pi * std::cos(pi * p[0]) * std::cos(pi * p[1]);
                       g[1] = -pi * std::sin(pi * p[0]) * std::sin(pi * p[1]);
                   }});

    fns.push_back({"cos_prod", 0, "product of cos(pi x_i)",
                   [](std::span<const double> p) {
                       double v = 1.0;
                       for (double x : p) v *= std::cos(pi * x);
                       return v;
                   },
                   [](std::span<const double> p, std::span<double> g) {
                       for (std::size_t i = 0; i < p.size(); ++i) {
                           double v = -pi * std::sin(pi * p[i]);
                           for (std::size_t j = 0; j < p.size(); ++j) {
                               if (j != i) v *= std::cos(pi * p[j]);
                           }
                           g[i] = v;
                       }
                   }});

    return fns;
}

const std::vector<TestFunction>& catalog() {
    static const std::vector<TestFunction> fns = buildCatalog();
    return fns;
}

} // namespace

double TestFunction::gradientSquared(std::span<const double> p) const {
    std::vector<double> g(p.size());
    gradient(p, g);
    double s = 0.0;
    for (double v : g) s += v * v;
    return s;
}

const TestFunction& testFunction(const std::string& id, int dimension) {
    for (const auto& f : catalog()) {
        if (f.id == id) {
            if (f.dimension != 0 && f.dimension != dimension) {
                throw std::invalid_argument("test function " + id + " needs dimension " +
                                            std::to_string(f.dimension));
            }
            return f;
        }
    }
    throw std::invalid_argument("unknown test function: " + id);
}

bool isTestFunction(const std::string& id) {
    for (const auto& f : catalog()) {
        if (f.id == id) return true;
    }
    return false;
}

std::vector<std::string> testFunctionIds() {
    std::vector<std::string> ids;
    for (const auto& f : catalog()) ids.push_back(f.id);
    return ids;
}

const std::vector<TestFunction>& testFunctionCatalog() {
    return catalog();
}

} // namespace latwalk
