#pragma once

#include <span>

#include "aeris/types.hpp"

namespace aeris {

// Lorentzian A * (g/2)^2 / ((x - x0)^2 + (g/2)^2) + c.
struct LorentzianParams {
    double amplitude = 0.0;
    double center = 0.0;
    double fwhm = 0.0;
    double baseline = 0.0;
};

// Levenberg-damped Gauss-Newton least squares over all four parameters.
// Throws FitError on non-convergence. residual_norm (optional out) is
// ||residual|| / (|A| * sqrt(n)).
LorentzianParams fit_lorentzian_ls(std::span<const double> xs,
                                   std::span<const double> ys,
                                   LorentzianParams init,
                                   double* residual_norm = nullptr);

} // namespace aeris
