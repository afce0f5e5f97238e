#pragma once

#include <span>
#include <vector>

#include "latwalk/geometry.hpp"

namespace latwalk {

/// Transition density of the Brownian motion with generator (1/(2d)) Lap
/// reflected at the walls of an axis-aligned box, as a per-axis cosine
/// series truncated once the tail bound drops below `tolerance`.
///
///   p_t(x, y) = prod_i [ 1/L_i + (2/L_i) sum_n exp(-n^2 pi^2 t / (2 d L_i^2))
///                                         cos(n pi x_i / L_i) cos(n pi y_i / L_i) ]
///
/// Coordinates are box-local (0 <= x_i <= L_i).
class NeumannHeatKernel {
  public:
    NeumannHeatKernel(std::vector<double> lengths, int ambientDimension,
                      double tolerance = 1e-14);

    int dimension() const { return static_cast<int>(lengths_.size()); }
    double diffusionCoefficient() const { return diffusion_; }

    double density(double t, std::span<const double> x, std::span<const double> y) const;

    /// One axis factor of the product density.
    double axisFactor(double t, int axis, double x, double y) const;

    /// Exact integral of the axis factor over [a, b] in the y variable.
    double axisMass(double t, int axis, double x, double a, double b) const;

    /// Terms needed on `axis` at time t; throws when the cap is exceeded
    /// (truncation insufficient for the requested tolerance).
    int termCount(double t, int axis) const;

    /// Bound on the dropped tail of the axis series.
    double truncationBound(double t, int axis) const;

  private:
    std::vector<double> lengths_;
    double diffusion_;
    double tolerance_;
};

/// Law of the first exit time of the (1/(2d)) Lap Brownian motion from an
/// axis-aligned box, via the per-axis Dirichlet eigenfunction series;
/// per-axis survivals multiply because the coordinates are independent.
class DirichletExitLaw {
  public:
    DirichletExitLaw(Box box, int ambientDimension, double tolerance = 1e-12);

    double survival(double t, std::span<const double> start) const;
    double cdf(double t, std::span<const double> start) const;

    /// Mean exit time, by quadrature of the survival function.
    double meanExitTime(std::span<const double> start) const;

  private:
    double axisSurvival(double t, int axis, double start) const;

    Box box_;
    double diffusion_;
    double tolerance_;
};

} // namespace latwalk
