#include "aeris/fit.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace aeris {

namespace {

double lorentz(double x, const LorentzianParams& p) {
    const double g = 0.5 * p.fwhm;
    const double d = x - p.center;
    return p.amplitude * g * g / (d * d + g * g) + p.baseline;
}

double cost(std::span<const double> xs, std::span<const double> ys,
            const LorentzianParams& p) {
    double c = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - lorentz(xs[i], p);
        c += r * r;
    }
    return c;
}

// Solve a 4x4 system in place, partial pivoting. Returns false if singular.
bool solve4(std::array<std::array<double, 5>, 4>& a, std::array<double, 4>& x) {
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) return false;
        std::swap(a[col], a[piv]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
        }
    }
    for (int r = 3; r >= 0; --r) {
        double s = a[r][4];
        for (int c = r + 1; c < 4; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return true;
}

} // namespace

LorentzianParams fit_lorentzian_ls(std::span<const double> xs,
                                   std::span<const double> ys,
                                   LorentzianParams init,
                                   double* residual_norm) {
    if (xs.size() != ys.size() || xs.size() < 5)
        throw FitError("lorentzian fit: need >= 5 samples");

    const double span = xs.back() - xs.front();
    const double min_fwhm = 1e-6 * std::abs(span);

    LorentzianParams p = init;
    p.fwhm = std::max(std::abs(p.fwhm), min_fwhm);
    double current = cost(xs, ys, p);
    double lambda = 1e-3;
    bool converged = false;

    for (int iter = 0; iter < 200 && !converged; ++iter) {
        // normal equations for columns (dA, df0, dfwhm, dc)
        std::array<std::array<double, 5>, 4> jtj{};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double g = 0.5 * p.fwhm;
            const double q = g * g;
            const double d = xs[i] - p.center;
            const double den = d * d + q;
            const double u = q / den;
            const double res = ys[i] - (p.amplitude * u + p.baseline);
            const std::array<double, 4> j = {
                u, p.amplitude * q * 2.0 * d / (den * den),
                p.amplitude * g * d * d / (den * den), 1.0};
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < 4; ++c) jtj[r][c] += j[r] * j[c];
                jtj[r][4] += j[r] * res;
            }
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
            auto damped = jtj;
            for (int r = 0; r < 4; ++r) damped[r][r] *= 1.0 + lambda;
            std::array<double, 4> step{};
            if (!solve4(damped, step)) {
                lambda *= 3.0;
                continue;
            }
            LorentzianParams trial = p;
            trial.amplitude += step[0];
            trial.center += step[1];
            trial.fwhm = std::max(std::abs(trial.fwhm + step[2]), min_fwhm);
            trial.baseline += step[3];
            const double trial_cost = cost(xs, ys, trial);
            if (trial_cost <= current) {
                const double scale =
                    std::max({std::abs(p.amplitude), std::abs(p.fwhm), 1e-30});
                const double rel_step =
                    std::max({std::abs(step[0]), std::abs(step[1]),
                              std::abs(step[2]), std::abs(step[3])}) /
                    scale;
                if (current - trial_cost <= 1e-14 * (current + 1e-300) ||
                    rel_step < 1e-12)
                    converged = true;
                p = trial;
                current = trial_cost;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
            } else {
                lambda *= 3.0;
                if (lambda > 1e10) break;
            }
        }
        if (!accepted && !converged) {
            // no downhill step found at any damping: either converged to
            // machine precision or genuinely stuck
            if (lambda > 1e10 && current > 1e-20)
                throw FitError("lorentzian fit: no descent step found");
            converged = true;
        }
    }
    if (!converged) throw FitError("lorentzian fit: did not converge");

    if (residual_norm) {
        const double denom =
            std::max(std::abs(p.amplitude), 1e-300) *
            std::sqrt(static_cast<double>(xs.size()));
        *residual_norm = std::sqrt(current) / denom;
    }
    return p;
}

} // namespace aeris
