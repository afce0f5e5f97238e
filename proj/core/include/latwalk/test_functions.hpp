#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "latwalk/geometry.hpp"

namespace latwalk {

/// Smooth test function with an analytic gradient, used by the energy
/// comparisons. `dimension` 0 means any ambient dimension.
struct TestFunction {
    std::string id;
    int dimension = 0;
    std::string description;
    std::function<double(std::span<const double>)> value;
    std::function<void(std::span<const double>, std::span<double>)> gradient;

    double gradientSquared(std::span<const double> p) const;
};

/// Catalog lookup; throws std::invalid_argument for unknown ids or a
/// dimension the function does not support.
const TestFunction& testFunction(const std::string& id, int dimension);

bool isTestFunction(const std::string& id);

std::vector<std::string> testFunctionIds();

const std::vector<TestFunction>& testFunctionCatalog();

} // namespace latwalk
