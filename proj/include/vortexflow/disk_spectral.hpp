// Boundary projection and interior evaluation on the unit disk for
//   Laplace-Dirichlet      (basis P_j = r^|j| e^{ij theta}),
//   modified Helmholtz     (basis Q_j = I_|j|(r) e^{ij theta}, Delta u = u),
//   Laplace-Neumann        (zero-mean harmonic).
//
// On the unit circle both bases reduce to Fourier modes, so the projection is
// a discrete Fourier transform of uniformly sampled boundary data. Expansions
// store the trace coefficients c_j (the value of mode j on r = 1); the radial
// factor is normalised, I_|j|(r)/I_|j|(1) for the Helmholtz kind.

#ifndef VORTEXFLOW_DISK_SPECTRAL_HPP
#define VORTEXFLOW_DISK_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "vortexflow/errors.hpp"
#include "vortexflow/geometry.hpp"
#include "vortexflow/specialfn.hpp"

namespace vortexflow {

enum class ExpansionKind { harmonic, modified_helmholtz };

inline constexpr double kNeumannCompatibilityTol = 1e-8;

/// Boundary sample count used when none is given: max(4m + 4, 512).
inline int default_sample_count(int order) { return std::max(4 * order + 4, 512); }

/// Fourier modes -order..order of a boundary function.
struct ModeCoefficients {
    int order = 0;
    std::vector<complex> values;  // values[j + order]

    ModeCoefficients() = default;
    explicit ModeCoefficients(int m) : order(m), values(2 * static_cast<std::size_t>(m) + 1) {
        if (m < 0) throw std::invalid_argument("ModeCoefficients: negative order");
    }

    complex operator[](int j) const { return values[static_cast<std::size_t>(j + order)]; }
    complex& operator[](int j) { return values[static_cast<std::size_t>(j + order)]; }
};

/// Samples of a boundary function at theta_k = 2 pi k / N.
struct BoundarySamples {
    std::vector<complex> values;

    std::size_t size() const { return values.size(); }
    static double angle(std::size_t k, std::size_t n) {
        return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    }

    template <class Fn>
    static BoundarySamples sample(Fn&& g, std::size_t n) {
        if (n == 0) throw std::invalid_argument("BoundarySamples: empty sample set");
        BoundarySamples out;
        out.values.resize(n);
        for (std::size_t k = 0; k < n; ++k) out.values[k] = complex(g(angle(k, n)));
        return out;
    }
};

namespace detail {

inline void check_aliasing(std::size_t n, int order) {
    if (order < 0) throw std::invalid_argument("project_boundary: negative order");
    if (n < 2 * static_cast<std::size_t>(order) + 1) {
        throw std::invalid_argument("project_boundary: " + std::to_string(n) +
                                    " samples cannot resolve order " + std::to_string(order));
    }
}

struct Twiddles {
    std::vector<double> c;
    std::vector<double> s;
    explicit Twiddles(std::size_t n) : c(n), s(n) {
        for (std::size_t k = 0; k < n; ++k) {
            const double t = BoundarySamples::angle(k, n);
            c[k] = std::cos(t);
            s[k] = std::sin(t);
        }
    }
};

}  // namespace detail

/// g_hat(k) = (1/N) sum_n g(theta_n) e^{-i k theta_n}, k = -order..order.
inline ModeCoefficients project_boundary(std::span<const complex> samples, int order) {
    const std::size_t n = samples.size();
    detail::check_aliasing(n, order);
    const detail::Twiddles tw(n);
    ModeCoefficients out(order);
    for (int k = -order; k <= order; ++k) {
        const std::size_t step = static_cast<std::size_t>((k % static_cast<long>(n) + static_cast<long>(n)) %
                                                          static_cast<long>(n));
        std::size_t idx = 0;
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const complex g = samples[i];
            // g * e^{-i t} = (gr c + gi s) + i (gi c - gr s)
            re += g.real() * tw.c[idx] + g.imag() * tw.s[idx];
            im += g.imag() * tw.c[idx] - g.real() * tw.s[idx];
            idx += step;
            if (idx >= n) idx -= n;
        }
        out[k] = complex(re, im) / static_cast<double>(n);
    }
    return out;
}

inline ModeCoefficients project_boundary(const BoundarySamples& samples, int order) {
    return project_boundary(std::span<const complex>(samples.values), order);
}

/// Real boundary data: computes k = 0..order and mirrors by conjugate symmetry.
inline ModeCoefficients project_real_boundary(std::span<const double> samples, int order) {
    const std::size_t n = samples.size();
    detail::check_aliasing(n, order);
    const detail::Twiddles tw(n);
    ModeCoefficients out(order);
    for (int k = 0; k <= order; ++k) {
        const std::size_t step = static_cast<std::size_t>(k) % n;
        std::size_t idx = 0;
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            re += samples[i] * tw.c[idx];
            im -= samples[i] * tw.s[idx];
            idx += step;
            if (idx >= n) idx -= n;
        }
        const complex v = complex(re, im) / static_cast<double>(n);
        out[k] = v;
        out[-k] = std::conj(v);
    }
    out[0] = complex(out[0].real(), 0.0);
    return out;
}

/// Projects a boundary function g(theta) sampled at n points.
template <class Fn>
ModeCoefficients project_boundary(Fn&& g, int order, std::size_t n) {
    using Result = std::invoke_result_t<Fn&, double>;
    detail::check_aliasing(n, order);
    if constexpr (std::is_floating_point_v<Result>) {
        std::vector<double> values(n);
        for (std::size_t k = 0; k < n; ++k) values[k] = g(BoundarySamples::angle(k, n));
        return project_real_boundary(values, order);
    } else {
        return project_boundary(BoundarySamples::sample(g, n), order);
    }
}

/// Truncated modal expansion of a harmonic or modified-Helmholtz function on
/// the unit disk. Immutable after construction.
class BoundaryExpansion {
  public:
    BoundaryExpansion() = default;

    BoundaryExpansion(ExpansionKind kind, ModeCoefficients trace, bool zero_mean = false)
        : kind_(kind), zero_mean_(zero_mean), coeffs_(std::move(trace)) {
        if (zero_mean_) coeffs_[0] = 0.0;
        if (kind_ == ExpansionKind::modified_helmholtz) {
            norms_.resize(static_cast<std::size_t>(coeffs_.order) + 1);
            for (int j = 0; j <= coeffs_.order; ++j) norms_[j] = bessel_I_entire(j, 1.0).first;
        }
    }

    ExpansionKind kind() const { return kind_; }
    int order() const { return coeffs_.order; }
    bool zero_mean() const { return zero_mean_; }
    const ModeCoefficients& trace_coefficients() const { return coeffs_; }

    /// Coefficient of mode j on the boundary circle.
    complex trace_coefficient(int j) const { return coeffs_[j]; }

    /// Coefficient in the unnormalised basis: a_j for P_j, b_j = c_j / I_|j|(1)
    /// for Q_j. Overflows to infinity once I_|j|(1) underflows (|j| > ~140).
    complex basis_coefficient(int j) const {
        if (kind_ == ExpansionKind::harmonic) return coeffs_[j];
        return coeffs_[j] / bessel_I(std::abs(j), 1.0);
    }

    /// Value at an interior point, assembled in Cartesian form
    /// (r^|j| e^{ij theta} = z^j or conj(z)^|j|).
    complex eval(Vec2 p) const {
        check_interior(p);
        const complex z = to_complex(p);
        const complex zb = std::conj(z);
        const double s = norm_sq(p);
        complex sum = coeffs_[0] * radial(0, s);
        complex zp = 1.0;
        complex zbp = 1.0;
        for (int j = 1; j <= coeffs_.order; ++j) {
            zp *= z;
            zbp *= zb;
            sum += (coeffs_[j] * zp + coeffs_[-j] * zbp) * radial(j, s);
        }
        return sum;
    }

    /// Same value assembled in polar coordinates with bessel_I directly.
    complex eval_polar(Vec2 p) const {
        check_interior(p);
        const double r = norm(p);
        const double theta = std::atan2(p.y, p.x);
        complex sum = 0.0;
        for (int j = -coeffs_.order; j <= coeffs_.order; ++j) {
            const int a = std::abs(j);
            double factor = 0.0;
            if (kind_ == ExpansionKind::harmonic) {
                factor = a == 0 ? 1.0 : std::pow(r, a);
            } else {
                const double denom = bessel_I(a, 1.0);
                factor = denom > 0.0 ? bessel_I(a, r) / denom : 0.0;
            }
            sum += coeffs_[j] * factor * std::polar(1.0, j * theta);
        }
        return sum;
    }

    /// Gradient of the real part at an interior point. The Cartesian form has
    /// no coordinate singularity at the origin.
    Vec2 eval_grad(Vec2 p) const {
        check_interior(p);
        const complex z = to_complex(p);
        const complex zb = std::conj(z);
        const double s = norm_sq(p);
        const complex i(0.0, 1.0);

        const double dw0 = radial_with_slope(0, s).second;
        complex gx = coeffs_[0] * dw0 * (2.0 * p.x);
        complex gy = coeffs_[0] * dw0 * (2.0 * p.y);

        complex zp_prev = 1.0;   // z^{j-1}
        complex zbp_prev = 1.0;
        for (int j = 1; j <= coeffs_.order; ++j) {
            const complex zp = zp_prev * z;
            const complex zbp = zbp_prev * zb;
            const auto [w, dw] = radial_with_slope(j, s);
            const complex a = coeffs_[j];
            const complex b = coeffs_[-j];
            const complex lower_sum = a * zp_prev + b * zbp_prev;
            const complex lower_diff = a * zp_prev - b * zbp_prev;
            const complex value = a * zp + b * zbp;
            const double jj = j;
            gx += jj * lower_sum * w + value * dw * (2.0 * p.x);
            gy += i * jj * lower_diff * w + value * dw * (2.0 * p.y);
            zp_prev = zp;
            zbp_prev = zbp;
        }
        return {gx.real(), gy.real()};
    }

    /// Boundary trace sum_j c_j e^{ij theta}.
    complex eval_boundary(double theta) const {
        complex sum = 0.0;
        for (int j = -coeffs_.order; j <= coeffs_.order; ++j) sum += coeffs_[j] * std::polar(1.0, j * theta);
        return sum;
    }

    /// Integral over the unit disk; only mode 0 contributes.
    complex disk_integral() const {
        if (kind_ == ExpansionKind::harmonic) return std::numbers::pi * coeffs_[0];
        return 2.0 * std::numbers::pi * coeffs_[0] * bessel_I(1, 1.0) / bessel_I(0, 1.0);
    }

  private:
    static void check_interior(Vec2 p) {
        if (!(norm_sq(p) < 1.0)) {
            throw std::domain_error("BoundaryExpansion: point outside the open unit disk");
        }
    }

    // Radial factor divided by r^|j|, as a function of s = r^2.
    double radial(int j, double s) const {
        if (kind_ == ExpansionKind::harmonic) return 1.0;
        return bessel_I_entire(j, s).first / norms_[j];
    }

    std::pair<double, double> radial_with_slope(int j, double s) const {
        if (kind_ == ExpansionKind::harmonic) return {1.0, 0.0};
        const auto [t, dt] = bessel_I_entire(j, s);
        return {t / norms_[j], dt / norms_[j]};
    }

    ExpansionKind kind_ = ExpansionKind::harmonic;
    bool zero_mean_ = false;
    ModeCoefficients coeffs_;
    std::vector<double> norms_;  // T_j(1), Helmholtz only
};

/// Harmonic extension of Dirichlet data; on the disk a_j = g_hat(j).
inline BoundaryExpansion solve_laplace_dirichlet(ModeCoefficients g_hat) {
    return BoundaryExpansion(ExpansionKind::harmonic, std::move(g_hat));
}

/// Solution of (Delta - 1) F = 0 with Dirichlet data g. The trace coefficients
/// equal g_hat(j); the basis coefficients are g_hat(j) / I_|j|(1), which is
/// always well defined since I_|j|(1) > 0.
inline BoundaryExpansion solve_helmholtz_dirichlet(ModeCoefficients g_hat) {
    return BoundaryExpansion(ExpansionKind::modified_helmholtz, std::move(g_hat));
}

/// Zero-mean harmonic function with normal derivative g on the circle:
/// d_r r^|j| = |j| on r = 1, so c_j = g_hat(j) / |j| and c_0 = 0.
inline BoundaryExpansion solve_laplace_neumann(const ModeCoefficients& g_hat,
                                               double tol_compat = kNeumannCompatibilityTol) {
    if (std::abs(g_hat[0]) > tol_compat) {
        throw CompatibilityError("solve_laplace_neumann: boundary flux " + std::to_string(std::abs(g_hat[0])) +
                                 " exceeds compatibility tolerance");
    }
    ModeCoefficients c(g_hat.order);
    for (int j = 1; j <= g_hat.order; ++j) {
        c[j] = g_hat[j] / static_cast<double>(j);
        c[-j] = g_hat[-j] / static_cast<double>(j);
    }
    return BoundaryExpansion(ExpansionKind::harmonic, std::move(c), /*zero_mean=*/true);
}

}  // namespace vortexflow

#endif
