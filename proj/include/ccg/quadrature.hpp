#pragma once

#include <functional>
#include <stdexcept>

namespace ccg::num {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Simpson on [a, b]; eps is an absolute error budget for the panel.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double eps, int max_depth = 60);

// Integral of a nonnegative integrable g over [0, inf) within relative
// tolerance tol. The cutoff doubles until the last octave is geometrically
// decaying and its extrapolated tail is below tol * integral; throws
// QuadratureError when the growth limit is hit first.
double integrate_halfline(const std::function<double(double)>& g, double tol);

}  // namespace ccg::num
