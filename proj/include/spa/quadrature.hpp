#pragma once

#include <cmath>
#include <functional>

namespace spa {

/// Adaptive composite Simpson on [a, b] with an absolute tolerance.
/// Recursion depth is capped; at the cap the local Richardson estimate is returned.
double integrate_simpson(const std::function<double(double)>& fn, double a, double b,
                         double abs_tol = 1e-10, int max_depth = 48);

}  // namespace spa
