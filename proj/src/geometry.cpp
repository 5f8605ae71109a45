#include "aeris/geometry.hpp"

#include <cmath>

#include "aeris/constants.hpp"

namespace aeris {

void GeometryConfig::validate() const {
    if (!(depth_m > 0)) throw ConfigError("geometry.depth_m: must be > 0");
    if (!(radius_m > 0)) throw ConfigError("geometry.radius_m: must be > 0");
    const double n2 = nv_axis[0] * nv_axis[0] + nv_axis[1] * nv_axis[1] +
                      nv_axis[2] * nv_axis[2];
    if (std::abs(n2 - 1.0) > 1e-6)
        throw ConfigError("geometry.nv_axis: must be a unit vector");
}

namespace {

// Exponential grading toward 0; g(0)=0, g(1)=1, cells cluster near 0.
double grade(double v) {
    constexpr double alpha = 4.0;
    return std::expm1(alpha * v) / std::expm1(alpha);
}

GeometricFactors integrate(const GeometryConfig& geom, int res) {
    const double eta = geom.radius_m / geom.depth_m;  // work in units of depth
    GeometricFactors out;
    if (eta <= 1.0) return out;  // sphere does not reach the sample

    // orthonormal triad (ex', ey', axis) for the transverse components
    const std::array<double, 3> az = geom.nv_axis;
    std::array<double, 3> ex{};
    if (std::abs(az[2]) < 0.9)
        ex = {-az[1], az[0], 0.0};
    else
        ex = {az[2], 0.0, -az[0]};
    const double exn = std::sqrt(ex[0] * ex[0] + ex[1] * ex[1] + ex[2] * ex[2]);
    for (auto& c : ex) c /= exn;
    const std::array<double, 3> ey = {az[1] * ex[2] - az[2] * ex[1],
                                      az[2] * ex[0] - az[0] * ex[2],
                                      az[0] * ex[1] - az[1] * ex[0]};

    const int n_phi = std::max(32, res / 4);
    const double dphi = two_pi / n_phi;
    const int n = res;

    // z in [1, eta] graded toward the surface, s in [0, s_max(z)] graded
    // toward the symmetry axis; the (u -> s) map follows the spherical rim.
    for (int j = 0; j < n; ++j) {
        const double z0 = 1.0 + (eta - 1.0) * grade(static_cast<double>(j) / n);
        const double z1 =
            1.0 + (eta - 1.0) * grade(static_cast<double>(j + 1) / n);
        const double z = 0.5 * (z0 + z1);
        const double dz = z1 - z0;
        const double s_max = std::sqrt(std::max(0.0, eta * eta - z * z));
        if (s_max <= 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const double u0 = grade(static_cast<double>(i) / n);
            const double u1 = grade(static_cast<double>(i + 1) / n);
            const double s = 0.5 * (u0 + u1) * s_max;
            const double ds = (u1 - u0) * s_max;
            const double rho2 = s * s + z * z;
            const double rho = std::sqrt(rho2);
            const double w = s * ds * dz * dphi / (rho2 * rho);  // dV / r^3
            for (int m = 0; m < n_phi; ++m) {
                const double phi = (m + 0.5) * dphi;
                const std::array<double, 3> r = {s * std::cos(phi),
                                                 s * std::sin(phi), z};
                const double ca =
                    (r[0] * az[0] + r[1] * az[1] + r[2] * az[2]) / rho;
                const double cx =
                    (r[0] * ex[0] + r[1] * ex[1] + r[2] * ex[2]) / rho;
                const double cy =
                    (r[0] * ey[0] + r[1] * ey[1] + r[2] * ey[2]) / rho;
                out.f += (3.0 * ca * ca - 1.0) * w;
                out.gx += 3.0 * ca * cx * w;
                out.gy += 3.0 * ca * cy * w;
            }
        }
    }
    return out;
}

} // namespace

GeometricFactors geometric_integral(const GeometryConfig& geom,
                                    int resolution) {
    geom.validate();
    if (resolution < 16)
        throw ConfigError("geometric_integral: resolution must be >= 16");

    const GeometricFactors full = integrate(geom, resolution);
    const GeometricFactors half = integrate(geom, resolution / 2);
    const double scale = std::max(std::abs(full.f), 0.1);
    if (std::abs(full.f - half.f) > 0.01 * scale)
        throw PhysicsError(
            "geometric_integral: not converged at requested resolution");
    return full;
}

} // namespace aeris
