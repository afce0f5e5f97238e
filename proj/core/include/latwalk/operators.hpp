#pragma once

#include <vector>

#include "latwalk/grid.hpp"
#include "latwalk/test_functions.hpp"
#include "latwalk/walk.hpp"

namespace latwalk {

/// One-step transition operator: (neighborAverage f)(x) is the mean of f
/// over the neighbors of x. Stochastic and symmetric in the vertex measure.
GridFunction neighborAverage(const GridGraph& g, const GridFunction& f);

/// Generator of the discrete walk: neighborAverage(f) - f.
GridFunction walkGenerator(const GridGraph& g, const GridFunction& f);

/// Inner product weighted by the vertex measure.
double measureInnerProduct(const GridGraph& g, const GridFunction& f, const GridFunction& h);

/// Compensated process M_j = f(path_j) - f(path_0) - sum_{i<j} (Gf)(path_i)
/// along a discrete-time path; M is a martingale under the walk law.
/// Returns M_0..M_n.
std::vector<double> martingaleCompensator(const GridGraph& g, const PathSample& p,
                                          const GridFunction& f);

/// 2^{k(2-d)} * sum over unordered adjacent pairs of (f(x)-f(y))^2.
double energySum(const GridGraph& g, const GridFunction& f);

/// Dirichlet energy of the walk: energySum / (2d). Satisfies the exact
/// identity dirichletForm(f) = 2^{2k} (f - neighborAverage f, f)_measure.
double dirichletForm(const GridGraph& g, const GridFunction& f);

/// Polarized form (f, h) -> (dirichletForm(f+h) - dirichletForm(f-h)) / 4,
/// evaluated directly from edge differences.
double dirichletFormBilinear(const GridGraph& g, const GridFunction& f, const GridFunction& h);

/// Checks (f - A^{2j} f, f) <= j (f - A^2 f, f) <= 2j (f - A f, f) in the
/// measure inner product for j = 1..jMax, A = neighborAverage. Dense
/// repeated application; grids are capped at `maxVertices`.
struct ContractionReport {
    std::vector<int> exponents;   // j
    std::vector<double> lhs;      // (f - A^{2j} f, f)
    std::vector<double> middle;   // j (f - A^2 f, f)
    std::vector<double> rhs;      // 2j (f - A f, f)
    double worstSlack = 0.0;      // min over the two gaps, >= -tolerance when ok
    bool ok = false;
};

ContractionReport powerContractionCheck(const GridGraph& g, const GridFunction& f, int jMax,
                                        double tolerance = 1e-9,
                                        std::size_t maxVertices = 2000);

/// Integral of |grad phi|^2 over the union of accepted cubes by tensor
/// Gauss quadrature per cube.
double continuumEnergy(const GridGraph& g, const TestFunction& phi, int pointsPerAxis = 3);

/// Energy table row emitted by the CLI (CSV: domain, k, c1, functionId,
/// energySum, dirichletForm, continuumIntegral, relError).
struct EnergyReport {
    std::string domain;
    int level = 0;
    double clearanceConstant = 0.0;
    std::string functionId;
    double energySumValue = 0.0;
    double dirichletFormValue = 0.0;
    double continuumIntegral = 0.0;
    double relError = 0.0; // energySum / continuumIntegral - 1
};

EnergyReport energyReport(const std::string& domainName, const GridGraph& g,
                          const TestFunction& phi);

} // namespace latwalk
