#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "oracles.hpp"
#include "vortexflow/specialfn.hpp"

namespace vf = vortexflow;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Reference values computed with 50-digit arithmetic (mpmath).
struct KRef {
    double x, k0, k1;
};
constexpr KRef kReference[] = {
    {0.5, 0.9244190712276659, 1.6564411200033009},
    {1.0, 0.42102443824070834, 0.6019072301972346},
    {2.0, 0.11389387274953344, 0.13986588181652243},
    {5.0, 0.0036910983340425943, 0.0040446134454521642},
    {8.0, 1.4647070522281539e-4, 1.5536921180500113e-4},
    {20.0, 5.741237815336524e-10, 5.883057969557038e-10},
    {50.0, 3.4101677497894955e-23, 3.4441022267175556e-23},
    {100.0, 4.656628229175902e-45, 4.679853735636909e-45},
};

}  // namespace

TEST(BesselK, MatchesExtendedPrecisionTable) {
    for (const auto& r : kReference) {
        EXPECT_LT(rel(vf::bessel_K0(r.x), r.k0), 1e-14) << "x = " << r.x;
        EXPECT_LT(rel(vf::bessel_K1(r.x), r.k1), 1e-14) << "x = " << r.x;
        const auto [k0, k1] = vf::bessel_K01(r.x);
        EXPECT_EQ(k0, vf::bessel_K0(r.x));
        EXPECT_EQ(k1, vf::bessel_K1(r.x));
    }
}

TEST(BesselK, MatchesIntegralRepresentation) {
    for (double x = 0.05; x < 60.0; x *= 1.37) {
        EXPECT_LT(rel(vf::bessel_K0(x), oracle::bessel_k_integral(0, x)), 1e-13) << "x = " << x;
        EXPECT_LT(rel(vf::bessel_K1(x), oracle::bessel_k_integral(1, x)), 1e-13) << "x = " << x;
    }
}

TEST(BesselI, MatchesExtendedPrecisionValues) {
    EXPECT_LT(rel(vf::bessel_I(1, 1.0), 0.5651591039924850), 1e-15);
    EXPECT_LT(rel(1.0 / vf::bessel_I(0, 1.0), 0.78984831482511197), 1e-15);
    EXPECT_LT(rel(vf::bessel_I(5, 0.7), 4.466968956960165e-5), 1e-14);
    EXPECT_LT(rel(vf::bessel_I(64, 10.0), 6.269266084388465e-45), 1e-13);
    EXPECT_LT(rel(vf::bessel_I(3, 150.0), 4.408874237296726e63), 1e-13);
    EXPECT_LT(rel(vf::bessel_I(40, 30.0), 24.05569763953388), 1e-13);
    EXPECT_LT(rel(vf::bessel_I(0, 20.0), 43558282.55955353), 1e-14);
    EXPECT_LT(rel(vf::bessel_I(1, 20.0), 42454973.38512777), 1e-14);
}

TEST(BesselI, MatchesSeriesAndIntegralOracles) {
    for (int n : {0, 1, 2, 5, 13, 40}) {
        for (double x : {0.01, 0.3, 1.0, 4.5, 11.0, 19.9}) {
            const double ref = static_cast<double>(oracle::bessel_i_series(n, x));
            EXPECT_LT(rel(vf::bessel_I(n, x), ref), 1e-14) << "n = " << n << " x = " << x;
        }
    }
    // Beyond the series range: integral form, accurate while I_n(x) ~ e^x.
    for (int n : {0, 1, 2, 3, 7}) {
        for (double x : {20.5, 33.0, 75.0, 150.0}) {
            EXPECT_LT(rel(vf::bessel_I(n, x), oracle::bessel_i_integral(n, x)), 1e-13) << "n = " << n << " x = " << x;
        }
    }
}

TEST(Bessel, WronskianOnLogGrid) {
    // I0 K1 + I1 K0 = 1/x.
    for (double x = 1e-3; x <= 100.0; x *= 1.05) {
        const double w = vf::bessel_I(0, x) * vf::bessel_K1(x) + vf::bessel_I(1, x) * vf::bessel_K0(x);
        EXPECT_LT(std::abs(w * x - 1.0), 1e-12) << "x = " << x;
    }
}

TEST(BesselI, RecurrenceUpToOrder64) {
    for (int nu = 1; nu <= 64; ++nu) {
        for (double x = 0.1; x <= 50.0; x *= 1.3) {
            const double lo = vf::bessel_I(nu - 1, x);
            const double mid = vf::bessel_I(nu, x);
            const double hi = vf::bessel_I(nu + 1, x);
            EXPECT_LT(std::abs(lo - hi - (2.0 * nu / x) * mid), 1e-10 * std::abs(lo)) << "nu = " << nu << " x = " << x;
        }
    }
}

TEST(Bessel, DerivativeIdentitiesByCentralDifferences) {
    for (double x : {0.2, 0.9, 1.7, 2.0, 3.3, 8.0, 19.0, 25.0, 60.0}) {
        const double h = 1e-5;
        const double di0 = (vf::bessel_I(0, x + h) - vf::bessel_I(0, x - h)) / (2 * h);
        const double di1 = (vf::bessel_I(1, x + h) - vf::bessel_I(1, x - h)) / (2 * h);
        const double dk0 = (vf::bessel_K0(x + h) - vf::bessel_K0(x - h)) / (2 * h);
        const double dk1 = (vf::bessel_K1(x + h) - vf::bessel_K1(x - h)) / (2 * h);
        EXPECT_LT(rel(di0, vf::bessel_I(1, x)), 1e-8) << x;
        EXPECT_LT(rel(di1, vf::bessel_I(0, x) - vf::bessel_I(1, x) / x), 1e-8) << x;
        EXPECT_LT(rel(dk0, -vf::bessel_K1(x)), 1e-8) << x;
        EXPECT_LT(rel(dk1, -vf::bessel_K0(x) - vf::bessel_K1(x) / x), 1e-8) << x;
    }
}

TEST(BesselK, SmallArgumentLimits) {
    const double log2_minus_gamma = 0.11593151565841245;
    EXPECT_NEAR(vf::bessel_K0(1e-8) + std::log(1e-8), log2_minus_gamma, 1e-9);
    EXPECT_NEAR(vf::bessel_K0_plus_log(1e-8), 0.11593151565841294, 1e-15);
    EXPECT_DOUBLE_EQ(vf::bessel_K0_plus_log(0.0), log2_minus_gamma);

    const double tail = vf::bessel_K1(1e-6) - 1e6;
    EXPECT_LE(tail, 0.0);
    EXPECT_GE(tail, -1e-5);
    EXPECT_NEAR(vf::bessel_K1_minus_inv(1e-6), -7.2157210368e-6, 1e-15);
    EXPECT_EQ(vf::bessel_K1_minus_inv(0.0), 0.0);
}

TEST(BesselK, HelpersAgreeWithDirectEvaluation) {
    for (double x : {0.3, 1.0, 1.99, 2.01, 7.0}) {
        EXPECT_NEAR(vf::bessel_K0_plus_log(x), vf::bessel_K0(x) + std::log(x), 1e-14);
        EXPECT_NEAR(vf::bessel_K1_minus_inv(x), vf::bessel_K1(x) - 1.0 / x, 1e-14);
    }
}

TEST(BesselI, EntireSeriesReproducesI) {
    // I_nu(x) = (x/2)^nu / nu! * T_nu(x^2)
    for (int nu : {0, 1, 4, 17}) {
        for (double x : {0.0, 0.25, 0.8, 1.0}) {
            const auto [t, dt] = vf::bessel_I_entire(nu, x * x);
            double pref = 1.0;
            for (int k = 1; k <= nu; ++k) pref *= x / (2.0 * k);
            if (x > 0.0) {
                EXPECT_LT(rel(pref * t, vf::bessel_I(nu, x)), 1e-14);
            }
            const double s = x * x, h = 1e-6;
            if (s == 0.0) {
                // Leading series coefficient: T_nu'(0) = 1 / (4 (nu + 1)).
                EXPECT_NEAR(dt, 0.25 / (nu + 1), 1e-15);
                continue;
            }
            const double fd = (vf::bessel_I_entire(nu, s + h).first - vf::bessel_I_entire(nu, s - h).first) / (2 * h);
            EXPECT_NEAR(dt, fd, 1e-8);
        }
    }
}

TEST(Bessel, DomainErrors) {
    EXPECT_THROW(vf::bessel_K0(0.0), std::domain_error);
    EXPECT_THROW(vf::bessel_K1(-1.0), std::domain_error);
    EXPECT_THROW(vf::bessel_I(-1, 1.0), std::domain_error);
    EXPECT_THROW(vf::bessel_I(0, -1.0), std::domain_error);
    EXPECT_THROW(vf::bessel_K0(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    EXPECT_EQ(vf::bessel_I(0, 0.0), 1.0);
    EXPECT_EQ(vf::bessel_I(3, 0.0), 0.0);
}
