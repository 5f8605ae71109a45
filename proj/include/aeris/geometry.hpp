#pragma once

#include <array>

#include "aeris/types.hpp"

namespace aeris {

// NV at the origin, sample filling the half-space beyond depth_m along the
// surface normal (+z). The detection region is the sample volume within
// radius_m of the NV (spherical cap). Only the ratio radius/depth matters
// for the dimensionless factors.
struct GeometryConfig {
    double depth_m = 5e-9;
    double radius_m = 50e-9;
    std::array<double, 3> nv_axis = {0.0, 0.0, 1.0};  // unit vector

    void validate() const;
};

// F  = integral of (3 (r_hat . axis)^2 - 1) / r^3 over the region,
// Gx = integral of 3 (r_hat . axis)(r_hat . ex') / r^3,  Gy analogous.
// All dimensionless; Gx = Gy = 0 by symmetry for the default axis.
struct GeometricFactors {
    double f = 0.0;
    double gx = 0.0;
    double gy = 0.0;
};

// Midpoint quadrature in cylindrical coordinates about the surface normal,
// mesh graded toward the near point of the region where the integrand
// peaks. `resolution` sets the cell count per coordinate. Errors if the
// result is not converged at the requested resolution (checked against a
// half-resolution pass).
GeometricFactors geometric_integral(const GeometryConfig& geom,
                                    int resolution = 200);

} // namespace aeris
