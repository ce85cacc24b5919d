// Radial vortex-core profile:
//   (1/r)(r f')' - f/r^2 + (1 - f^2) f / eps^2 = 0 on (0, r0),  f(0) = 0,  f(r0) = 1,
// discretized by centered differences on a uniform mesh and solved by damped Newton.

#ifndef VORTEXFLOW_PROFILE_HPP
#define VORTEXFLOW_PROFILE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortexflow/errors.hpp"

namespace vortexflow {

struct RadialProfile {
    double epsilon = 0.0;
    double r0 = 0.0;
    double dr = 0.0;             // effective spacing r0 / (values.size() - 1)
    std::vector<double> values;  // f(i * dr), i = 0..N
    int newton_iterations = 0;
    double residual = 0.0;  // final max-norm of the dr^2-scaled discrete residual

    double ratio() const { return r0 / epsilon; }
    std::size_t intervals() const { return values.empty() ? 0 : values.size() - 1; }
    double node(std::size_t i) const { return static_cast<double>(i) * dr; }
};

/// Newton stops once its update is below this size (in units of f).
inline constexpr double kProfileStepFloor = 1e-13;

namespace detail {

// Discrete residual at interior node i (1 <= i < N), multiplied by dr^2 so
// that it depends on dr and eps only through kappa = (dr/eps)^2.
inline double profile_residual_at(const std::vector<double>& f, std::size_t i, double kappa) {
    const double di = static_cast<double>(i);
    const double up = (di + 0.5) / di;
    const double dn = (di - 0.5) / di;
    return up * (f[i + 1] - f[i]) - dn * (f[i] - f[i - 1]) - f[i] / (di * di) + kappa * (1.0 - f[i] * f[i]) * f[i];
}

inline double profile_residual_norm(const std::vector<double>& f, double kappa) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) worst = std::max(worst, std::abs(profile_residual_at(f, i, kappa)));
    return worst;
}

// Solves the tridiagonal system lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]
// in place; rhs receives the solution.
inline void thomas_solve(std::vector<double>& lower, std::vector<double>& diag, std::vector<double>& upper,
                         std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace detail

/// Solves the core-profile problem on nodes i * dr, i = 0..N with N = round(r0 / dr)
/// (the spacing is adjusted so the last node lands on r0). The Newton loop stops
/// once the dr^2-scaled discrete residual drops below `tol`.
inline RadialProfile solve_profile(double epsilon, double r0, double dr, double tol = 1e-10, int max_iter = 100) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("solve_profile: epsilon must be > 0");
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw std::invalid_argument("solve_profile: r0 must be > 0");
    if (!(dr > 0.0)) throw std::invalid_argument("solve_profile: dr must be > 0");
    if (dr > epsilon / 20.0 * (1.0 + 1e-12)) throw std::invalid_argument("solve_profile: dr must not exceed epsilon/20");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_profile: tol must be > 0");

    const auto n = static_cast<std::size_t>(std::llround(r0 / dr));
    if (n < 2) throw std::invalid_argument("solve_profile: fewer than two intervals");

    RadialProfile p;
    p.epsilon = epsilon;
    p.r0 = r0;
    p.dr = r0 / static_cast<double>(n);
    const double kappa = (p.dr / epsilon) * (p.dr / epsilon);

    auto& f = p.values;
    f.resize(n + 1);
    const double edge = std::tanh(0.6 * r0 / epsilon);
    for (std::size_t i = 0; i <= n; ++i) {
        const double r = p.node(i);
        f[i] = std::tanh(0.6 * r / epsilon) + (r / r0) * (1.0 - edge);
    }
    f[0] = 0.0;
    f[n] = 1.0;

    const std::size_t m = n - 1;  // unknowns f[1..n-1]
    std::vector<double> lower(m), diag(m), upper(m), step(m), trial(f.size());
    double res = detail::profile_residual_norm(f, kappa);

    // The dr^2 scaling makes `tol` easy to reach long before the iterate has
    // settled, so once it is met Newton keeps taking full steps until the
    // update itself reaches roundoff level.
    for (int iter = 0; iter < max_iter; ++iter) {
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = k + 1;
            const double di = static_cast<double>(i);
            lower[k] = (di - 0.5) / di;
            upper[k] = (di + 0.5) / di;
            diag[k] = -2.0 - 1.0 / (di * di) + kappa * (1.0 - 3.0 * f[i] * f[i]);
            step[k] = -detail::profile_residual_at(f, i, kappa);
        }
        detail::thomas_solve(lower, diag, upper, step);
        double step_size = 0.0;
        for (double v : step) step_size = std::max(step_size, std::abs(v));
        p.newton_iterations = iter + 1;

        const bool polishing = res <= tol;
        double lambda = 1.0;
        double trial_res = res;
        for (int halvings = 0; halvings < 30; ++halvings, lambda *= 0.5) {
            trial = f;
            for (std::size_t k = 0; k < m; ++k) trial[k + 1] += lambda * step[k];
            trial_res = detail::profile_residual_norm(trial, kappa);
            if (polishing || trial_res < res) break;
        }
        if (!polishing && !(trial_res < res)) break;  // no descent direction left
        f.swap(trial);
        res = trial_res;
        if (polishing && step_size <= kProfileStepFloor) break;
    }
    p.residual = res;
    if (res <= tol) return p;
    throw ConvergenceError("solve_profile: Newton iteration stalled at residual " + std::to_string(res));
}

/// f at radius r: 0 at r = 0, 1 for r >= r0, local cubic interpolation in between.
inline double eval_profile(const RadialProfile& p, double r) {
    if (!(r > 0.0)) return 0.0;
    if (r >= p.r0) return 1.0;
    const std::size_t n = p.intervals();
    if (n < 3) throw std::invalid_argument("eval_profile: profile has too few nodes");

    const double s = r / p.dr;
    const auto cell = std::min(static_cast<std::size_t>(s), n - 1);
    // Four-point stencil cell-1 .. cell+2, shifted inward at the ends.
    const std::size_t first = std::clamp<std::size_t>(cell == 0 ? 0 : cell - 1, 0, n - 3);
    const double t = s - static_cast<double>(first);
    std::array<double, 4> w{};
    for (int a = 0; a < 4; ++a) {
        double prod = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) prod *= (t - b) / static_cast<double>(a - b);
        w[static_cast<std::size_t>(a)] = prod;
    }
    double value = 0.0;
    for (std::size_t a = 0; a < 4; ++a) value += w[a] * p.values[first + a];
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace vortexflow

#endif
