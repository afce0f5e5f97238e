#include "latwalk/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace latwalk {

namespace {

using std::numbers::pi;

constexpr int kMaxTerms = 200000;

} // namespace

NeumannHeatKernel::NeumannHeatKernel(std::vector<double> lengths, int ambientDimension,
                                     double tolerance)
    : lengths_(std::move(lengths)),
      diffusion_(1.0 / (2.0 * ambientDimension)),
      tolerance_(tolerance) {
    if (lengths_.empty()) throw std::invalid_argument("heat kernel: lengths required");
    for (double L : lengths_) {
        if (!(L > 0.0)) throw std::invalid_argument("heat kernel: lengths must be positive");
    }
    if (ambientDimension < 1) throw std::invalid_argument("heat kernel: bad dimension");
    if (!(tolerance > 0.0)) throw std::invalid_argument("heat kernel: bad tolerance");
}

int NeumannHeatKernel::termCount(double t, int axis) const {
    if (!(t > 0.0)) throw std::invalid_argument("heat kernel: t must be positive");
    double L = lengths_[axis];
    double alpha = diffusion_ * pi * pi * t / (L * L); // exponent scale per n^2
    for (int n = 1; n <= kMaxTerms; ++n) {
        // tail <= (2/L) e^{-(n+1)^2 alpha} / (1 - e^{-(2n+3) alpha})
        double head = std::exp(-static_cast<double>(n + 1) * (n + 1) * alpha);
        double ratio = std::exp(-(2.0 * n + 3.0) * alpha);
        if (ratio < 1.0) {
            double tail = (2.0 / L) * head / (1.0 - ratio);
            if (tail < tolerance_) return n;
        }
    }
    throw std::runtime_error("heat kernel: truncation insufficient for requested tolerance");
}

double NeumannHeatKernel::truncationBound(double t, int axis) const {
    int n = termCount(t, axis);
    double L = lengths_[axis];
    double alpha = diffusion_ * pi * pi * t / (L * L);
    double head = std::exp(-static_cast<double>(n + 1) * (n + 1) * alpha);
    double ratio = std::exp(-(2.0 * n + 3.0) * alpha);
    return (2.0 / L) * head / (1.0 - ratio);
}

double NeumannHeatKernel::axisFactor(double t, int axis, double x, double y) const {
    double L = lengths_[axis];
    if (x < 0.0 || x > L || y < 0.0 || y > L) {
        throw std::invalid_argument("heat kernel: point outside the box");
    }
    int terms = termCount(t, axis);
    double alpha = diffusion_ * pi * pi * t / (L * L);
    KahanSum sum;
    for (int n = terms; n >= 1; --n) { // small terms first
        double w = std::exp(-static_cast<double>(n) * n * alpha);
        sum.add(w * std::cos(n * pi * x / L) * std::cos(n * pi * y / L));
    }
    return 1.0 / L + (2.0 / L) * sum.value();
}

double NeumannHeatKernel::density(double t, std::span<const double> x,
                                  std::span<const double> y) const {
    if (x.size() != lengths_.size() || y.size() != lengths_.size()) {
        throw std::invalid_argument("heat kernel: dimension mismatch");
    }
    double p = 1.0;
    for (int i = 0; i < dimension(); ++i) p *= axisFactor(t, i, x[i], y[i]);
    return p;
}

double NeumannHeatKernel::axisMass(double t, int axis, double x, double a, double b) const {
    double L = lengths_[axis];
    int terms = termCount(t, axis);
    double alpha = diffusion_ * pi * pi * t / (L * L);
    KahanSum sum;
    for (int n = terms; n >= 1; --n) {
        double w = std::exp(-static_cast<double>(n) * n * alpha);
        double integral = (L / (n * pi)) * (std::sin(n * pi * b / L) - std::sin(n * pi * a / L));
        sum.add(w * std::cos(n * pi * x / L) * integral);
    }
    return (b - a) / L + (2.0 / L) * sum.value();
}

DirichletExitLaw::DirichletExitLaw(Box box, int ambientDimension, double tolerance)
    : box_(std::move(box)), diffusion_(1.0 / (2.0 * ambientDimension)), tolerance_(tolerance) {
    for (int i = 0; i < box_.dimension(); ++i) {
        if (!(box_.lo[i] < box_.hi[i])) {
            throw std::invalid_argument("exit law: box needs lo < hi per axis");
        }
    }
}

double DirichletExitLaw::axisSurvival(double t, int axis, double start) const {
    double L = box_.hi[axis] - box_.lo[axis];
    double x = start - box_.lo[axis];
    if (x <= 0.0 || x >= L) return 0.0;
    double lambda1 = diffusion_ * pi * pi / (L * L);
    KahanSum sum;
    for (int m = 1; m <= kMaxTerms; m += 2) { // even coefficients vanish
        double coeff = 4.0 / (m * pi);
        double term = coeff * std::sin(m * pi * x / L) * std::exp(-lambda1 * m * m * t);
        sum.add(term);
        if (coeff * std::exp(-lambda1 * (m + 2.0) * (m + 2.0) * t) < tolerance_ * 0.01) {
            return std::clamp(sum.value(), 0.0, 1.0);
        }
    }
    throw std::runtime_error("exit law: survival series did not converge");
}

double DirichletExitLaw::survival(double t, std::span<const double> start) const {
    if (t <= 0.0) return 1.0;
    double s = 1.0;
    for (int i = 0; i < box_.dimension(); ++i) s *= axisSurvival(t, i, start[i]);
    return s;
}

double DirichletExitLaw::cdf(double t, std::span<const double> start) const {
    return 1.0 - survival(t, start);
}

double DirichletExitLaw::meanExitTime(std::span<const double> start) const {
    // Slowest axis rate bounds the decay of the product survival.
    double lambdaMin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < box_.dimension(); ++i) {
        double L = box_.hi[i] - box_.lo[i];
        lambdaMin = std::min(lambdaMin, diffusion_ * pi * pi / (L * L));
    }
    // Early window where the series is slow but survival is essentially 1:
    // the walk has had no chance to cross half the thinnest box side.
    double tLo = 1e-3 / lambdaMin;
    double tHi = 60.0 / lambdaMin; // survival < e^-60 beyond

    double early = survival(tLo, start);

    // Composite Simpson on [tLo, tHi].
    const int panels = 1 << 12;
    double step = (tHi - tLo) / panels;
    KahanSum acc;
    acc.add(survival(tLo, start));
    acc.add(survival(tHi, start));
    for (int i = 1; i < panels; ++i) {
        double w = (i % 2 == 1) ? 4.0 : 2.0;
        acc.add(w * survival(tLo + i * step, start));
    }
    double integral = acc.value() * step / 3.0;

    // [0, tLo] contributes between tLo * survival(tLo) and tLo.
    double head = 0.5 * tLo * (1.0 + early);
    return head + integral;
}

} // namespace latwalk
