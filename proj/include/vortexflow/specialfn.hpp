// Modified Bessel functions I_n (integer n >= 0), K_0 and K_1 for real
// arguments.
//
// I_n uses the power series up to x = 20 (all terms are positive, so it is
// stable for any order), the Hankel asymptotic series above that for n <= 1,
// and Miller's backward recurrence normalised by I_0 for higher orders.
// K_0/K_1 use the logarithmic power series for x <= 2 and Steed's continued
// fraction (Temme's CF2) beyond. The asymptotic series for K alone only
// reaches ~1e-7 near x = 8, which is why the continued fraction is used for
// the large-argument branch.

#ifndef VORTEXFLOW_SPECIALFN_HPP
#define VORTEXFLOW_SPECIALFN_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace vortexflow {

inline constexpr double euler_gamma = std::numbers::egamma;

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kSeriesMaxI = 20.0;
inline constexpr double kSeriesMaxK = 2.0;

inline void require_domain(bool ok, const char* what, double x) {
    if (!ok) {
        throw std::domain_error(std::string(what) + ": argument out of domain (x = " +
                                std::to_string(x) + ")");
    }
}

// sum_k (x^2/4)^k / (k! (n+1)_k); I_n(x) = (x/2)^n / n! times this.
inline double bessel_i_series_sum(int order, double quarter_x2) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 10000; ++k) {
        term *= quarter_x2 / (static_cast<double>(k) * static_cast<double>(order + k));
        sum += term;
        if (term < kEps * 0.25 * sum) break;
    }
    return sum;
}

inline double bessel_i_series(int order, double x) {
    double prefactor = 1.0;
    const double half_x = 0.5 * x;
    for (int k = 1; k <= order; ++k) {
        prefactor *= half_x / k;
        if (prefactor == 0.0) return 0.0;
    }
    return prefactor * bessel_i_series_sum(order, half_x * half_x);
}

// Hankel expansion, valid for x well above the order.
inline double bessel_i_asymptotic(int order, double x) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * x);
        if (std::abs(term) > last) break;
        sum += term;
        last = std::abs(term);
        if (last < kEps * 0.25 * std::abs(sum)) break;
    }
    return std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * sum;
}

// Miller's algorithm: backward recurrence I_{k-1} = (2k/x) I_k + I_{k+1}
// from a start index far above max(order, x), normalised by I_0.
inline double bessel_i_miller(int order, double x) {
    const double anchor = std::max<double>(order, x);
    const int start = 2 * (static_cast<int>(anchor) + static_cast<int>(std::sqrt(60.0 * anchor)) + 10);
    constexpr double big = 1e250;
    double next = 0.0;
    double cur = 1.0;
    double result = 0.0;
    for (int k = start; k >= 1; --k) {
        const double prev = next + (2.0 * k / x) * cur;
        next = cur;
        cur = prev;
        if (std::abs(cur) > big) {
            cur /= big;
            next /= big;
            result /= big;
        }
        if (k - 1 == order) result = cur;
    }
    return result * (bessel_i_asymptotic(0, x) / cur);
}

struct KPair {
    double k0;
    double k1;
    // K0(x) + log(x) and K1(x) - 1/x, kept separately so callers near the
    // origin do not lose digits to cancellation.
    double k0_plus_log;
    double k1_minus_inv;
};

inline KPair bessel_k01_series(double x) {
    const double q = 0.25 * x * x;
    const double log_half = std::log(0.5 * x);
    // t_k = q^k / (k!)^2, harmonic number H_k, digamma psi(k+1) = H_k - gamma.
    double t = 1.0;
    double harmonic = 0.0;
    double i0 = 1.0;
    double i1_sum = 1.0;  // sum t_k / (k+1)
    double k0_tail = 0.0;  // sum_{k>=1} t_k H_k
    double k1_tail = 1.0 - 2.0 * euler_gamma;  // k = 0: psi(1) + psi(2)
    for (int k = 1; k < 500; ++k) {
        t *= q / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        i0 += t;
        i1_sum += t / (k + 1.0);
        k0_tail += t * harmonic;
        // psi(k+1) + psi(k+2) = H_k + H_{k+1} - 2 gamma
        k1_tail += t / (k + 1.0) * (2.0 * harmonic + 1.0 / (k + 1.0) - 2.0 * euler_gamma);
        if (t * (harmonic + 1.0) < kEps * 0.125 * i0) break;
    }
    const double i1 = 0.5 * x * i1_sum;
    KPair out{};
    out.k0_plus_log = std::numbers::ln2 - euler_gamma - (log_half + euler_gamma) * (i0 - 1.0) + k0_tail;
    out.k0 = -(log_half + euler_gamma) * i0 + k0_tail;
    out.k1_minus_inv = log_half * i1 - 0.25 * x * k1_tail;
    out.k1 = 1.0 / x + out.k1_minus_inv;
    return out;
}

// Steed's method for the continued fraction CF2 (Temme 1975), order 0.
inline KPair bessel_k01_continued_fraction(double x) {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 100000; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 0.5 * kEps) break;
    }
    h *= a1;
    KPair out{};
    out.k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    out.k1 = out.k0 * (x + 0.5 - h) / x;
    out.k0_plus_log = out.k0 + std::log(x);
    out.k1_minus_inv = out.k1 - 1.0 / x;
    return out;
}

inline KPair bessel_k01(double x) {
    return x <= kSeriesMaxK ? bessel_k01_series(x) : bessel_k01_continued_fraction(x);
}

}  // namespace detail

/// Modified Bessel function of the first kind I_order(x), x >= 0.
inline double bessel_I(int order, double x) {
    detail::require_domain(order >= 0, "bessel_I order", order);
    detail::require_domain(x >= 0.0, "bessel_I", x);
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    if (x <= detail::kSeriesMaxI) return detail::bessel_i_series(order, x);
    if (order <= 1) return detail::bessel_i_asymptotic(order, x);
    return detail::bessel_i_miller(order, x);
}

/// Modified Bessel function of the second kind K_0(x), x > 0.
inline double bessel_K0(double x) {
    detail::require_domain(x > 0.0, "bessel_K0", x);
    return detail::bessel_k01(x).k0;
}

/// Modified Bessel function of the second kind K_1(x), x > 0.
inline double bessel_K1(double x) {
    detail::require_domain(x > 0.0, "bessel_K1", x);
    return detail::bessel_k01(x).k1;
}

/// K_0(x) and K_1(x) from a single evaluation.
inline std::pair<double, double> bessel_K01(double x) {
    detail::require_domain(x > 0.0, "bessel_K01", x);
    const auto k = detail::bessel_k01(x);
    return {k.k0, k.k1};
}

/// K_0(x) + log(x), finite as x -> 0 with limit log 2 - gamma.
inline double bessel_K0_plus_log(double x) {
    detail::require_domain(x >= 0.0, "bessel_K0_plus_log", x);
    if (x == 0.0) return std::numbers::ln2 - euler_gamma;
    return detail::bessel_k01(x).k0_plus_log;
}

/// K_1(x) - 1/x, which tends to 0 as x -> 0.
inline double bessel_K1_minus_inv(double x) {
    detail::require_domain(x >= 0.0, "bessel_K1_minus_inv", x);
    if (x == 0.0) return 0.0;
    return detail::bessel_k01(x).k1_minus_inv;
}

/// Entire part of I_order: T(s) = sum_k (s/4)^k / (k! (order+1)_k) with s = x^2,
/// so that I_order(x) = (x/2)^order / order! * T(x^2). Returns {T(s), T'(s)}.
///
/// Ratios I_n(r)/I_n(1) = r^n T(r^2)/T(1) computed this way stay finite for
/// orders where I_n(1) itself underflows.
inline std::pair<double, double> bessel_I_entire(int order, double s) {
    detail::require_domain(order >= 0, "bessel_I_entire order", order);
    detail::require_domain(s >= 0.0, "bessel_I_entire", s);
    const double q = 0.25 * s;
    // partial = c_k q^(k-1), c_k = 1 / (k! (n+1)_k); term k of T is partial * q.
    double partial = 1.0 / (order + 1.0);
    double value = 1.0 + partial * q;
    double slope = 0.25 * partial;
    for (int k = 2; k < 10000; ++k) {
        partial *= q / (static_cast<double>(k) * (order + k));
        value += partial * q;
        slope += 0.25 * k * partial;
        if (k * partial < detail::kEps * 0.25 * slope) break;
    }
    return {value, slope};
}

}  // namespace vortexflow

#endif
