// Renormalized energy of a vortex configuration in the unit disk under a
// constant applied field, its gradient with respect to the vortex positions,
// and the limiting magnetic field and vector potential.
//
// Everything is expressed through
//   Xi   = Xi_p + F - R + h_ex,
//   Xi_p = -sum_j d_j (log|x - a_j| + K0(|x - a_j|)),
//   (Delta - 1) F = 0,  F = -h_ex + sum_j d_j K0(|x - a_j|)  on the circle,
//   Delta R = 0,        R = -sum_j d_j log|x - a_j|          on the circle.
// The dynamics only needs F; R is solved on first use by the vector potential.

#ifndef VORTEXFLOW_RENORM_HPP
#define VORTEXFLOW_RENORM_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortexflow/disk_spectral.hpp"
#include "vortexflow/errors.hpp"
#include "vortexflow/geometry.hpp"
#include "vortexflow/specialfn.hpp"

namespace vortexflow {

/// Vortex positions a_j (strictly inside the unit disk, pairwise distinct)
/// and integer degrees d_j.
struct VortexConfig {
    std::vector<Vec2> positions;
    std::vector<int> degrees;

    std::size_t size() const { return positions.size(); }

    int total_degree() const {
        int s = 0;
        for (int d : degrees) s += d;
        return s;
    }

    /// Throws std::invalid_argument unless the configuration is admissible.
    void validate() const {
        if (positions.size() != degrees.size()) {
            throw std::invalid_argument("VortexConfig: " + std::to_string(positions.size()) + " positions but " +
                                        std::to_string(degrees.size()) + " degrees");
        }
        for (std::size_t i = 0; i < positions.size(); ++i) {
            if (!std::isfinite(positions[i].x) || !std::isfinite(positions[i].y) || !(norm_sq(positions[i]) < 1.0)) {
                throw std::invalid_argument("VortexConfig: vortex " + std::to_string(i) + " is not inside the unit disk");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (positions[i] == positions[j]) {
                    throw std::invalid_argument("VortexConfig: vortices " + std::to_string(j) + " and " +
                                                std::to_string(i) + " coincide");
                }
            }
        }
    }

    /// Same admissibility check without throwing.
    bool admissible() const noexcept {
        try {
            validate();
            return true;
        } catch (...) {
            return false;
        }
    }

    double min_pair_distance() const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < positions.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) best = std::min(best, distance(positions[i], positions[j]));
        return best;
    }

    double min_boundary_distance() const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : positions) best = std::min(best, 1.0 - norm(a));
        return best;
    }
};

inline constexpr double kBoundaryGuardDistance = 0.02;
inline constexpr int kDiskQuadratureAngles = 256;

/// Spectral solution data for one configuration and applied field.
/// Immutable once built; R is computed at most once, thread-safely.
class FieldContext {
  public:
    FieldContext(VortexConfig cfg, double h_ex, int order, BoundaryExpansion f, int samples)
        : cfg_(std::move(cfg)),
          h_ex_(h_ex),
          order_(order),
          samples_(samples),
          f_(std::move(f)),
          lazy_(std::make_shared<Lazy>()) {}

    const VortexConfig& config() const { return cfg_; }
    double h_ex() const { return h_ex_; }
    int order() const { return order_; }
    int samples() const { return samples_; }

    /// Solution F of the modified Helmholtz problem.
    const BoundaryExpansion& helmholtz_part() const { return f_; }

    /// Harmonic function R, built on first request.
    const BoundaryExpansion& harmonic_part() const {
        std::call_once(lazy_->once, [this] {
            const auto& cfg = cfg_;
            auto data = [&cfg](double theta) {
                const Vec2 x{std::cos(theta), std::sin(theta)};
                double v = 0.0;
                for (std::size_t j = 0; j < cfg.size(); ++j) v -= cfg.degrees[j] * std::log(distance(x, cfg.positions[j]));
                return v;
            };
            lazy_->r = solve_laplace_dirichlet(project_boundary(data, order_, static_cast<std::size_t>(samples_)));
        });
        return lazy_->r;
    }

    /// Advisory flag: some vortex is within guard_dist of the boundary, where
    /// the boundary data needs more modes than usual.
    bool near_boundary(double guard_dist = kBoundaryGuardDistance) const {
        return cfg_.size() > 0 && cfg_.min_boundary_distance() < guard_dist;
    }

  private:
    struct Lazy {
        std::once_flag once;
        BoundaryExpansion r;
    };

    VortexConfig cfg_;
    double h_ex_;
    int order_;
    int samples_;
    BoundaryExpansion f_;
    std::shared_ptr<Lazy> lazy_;
};

/// Boundary data of F: -h_ex + sum_j d_j K0(|x - a_j|) at x = e^{i theta}.
inline double helmholtz_boundary_data(const VortexConfig& cfg, double h_ex, double theta) {
    const Vec2 x{std::cos(theta), std::sin(theta)};
    double v = -h_ex;
    for (std::size_t j = 0; j < cfg.size(); ++j) v += cfg.degrees[j] * bessel_K0(distance(x, cfg.positions[j]));
    return v;
}

inline FieldContext build_context(const VortexConfig& cfg, double h_ex, int order, int samples = 0) {
    cfg.validate();
    if (order < 0) throw std::invalid_argument("build_context: negative order");
    if (samples <= 0) samples = default_sample_count(order);
    auto data = [&](double theta) { return helmholtz_boundary_data(cfg, h_ex, theta); };
    auto f = solve_helmholtz_dirichlet(project_boundary(data, order, static_cast<std::size_t>(samples)));
    return FieldContext(cfg, h_ex, order, std::move(f), samples);
}

namespace detail {

inline void require_distinct(double r, std::size_t i, std::size_t j) {
    if (!(r > 0.0)) {
        throw CollapseError("vortices " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
    }
}

// Distance from a (inside the unit disk) to the circle along direction phi.
inline double ray_to_circle(Vec2 a, double phi) {
    const double p = a.x * std::cos(phi) + a.y * std::sin(phi);
    const double c = 1.0 - norm_sq(a);
    return -p + std::sqrt(p * p + c);
}

}  // namespace detail

/// Gradient of the renormalized energy with respect to each vortex position:
///   -2 pi sum_{j != k} d_j d_k (a_k - a_j)/|a_k - a_j| K1(|a_k - a_j|) - 2 pi d_k grad F(a_k).
inline std::vector<Vec2> grad_W(const FieldContext& ctx) {
    const auto& cfg = ctx.config();
    const std::size_t n = cfg.size();
    std::vector<Vec2> out(n);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < n; ++k) {
        Vec2 pair{};
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            const Vec2 diff = cfg.positions[k] - cfg.positions[j];
            const double r = norm(diff);
            detail::require_distinct(r, k, j);
            pair += (cfg.degrees[j] * cfg.degrees[k] * bessel_K1(r) / r) * diff;
        }
        const Vec2 grad_f = ctx.helmholtz_part().eval_grad(cfg.positions[k]);
        out[k] = -two_pi * pair - (two_pi * cfg.degrees[k]) * grad_f;
    }
    return out;
}

/// Integral of K0(|x - a|) over the unit disk, in polar coordinates centred
/// at a: the radial part integrates exactly (int_0^rho K0(s) s ds = 1 - rho K1(rho)),
/// the angular part uses the trapezoidal rule.
inline double disk_integral_K0(Vec2 a, int angles = kDiskQuadratureAngles) {
    double sum = 0.0;
    for (int i = 0; i < angles; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / angles;
        const double rho = detail::ray_to_circle(a, phi);
        sum += 1.0 - rho * bessel_K1(rho);
    }
    return sum * (2.0 * std::numbers::pi / angles);
}

/// Renormalized energy
///   pi sum_{i != j} d_i d_j K0(|a_i - a_j|)
///   - pi sum_j d_j (F(a_j) + h_ex - d_j (log 2 - gamma))
///   + h_ex^2 |Omega| / 2 + h_ex/2 int_Omega (F - sum_j d_j K0(|x - a_j|)).
inline double energy_W(const FieldContext& ctx) {
    const auto& cfg = ctx.config();
    const double h = ctx.h_ex();
    const double pi = std::numbers::pi;
    const double core = std::numbers::ln2 - euler_gamma;
    const std::size_t n = cfg.size();

    double pair = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double r = distance(cfg.positions[i], cfg.positions[j]);
            detail::require_distinct(r, i, j);
            pair += cfg.degrees[i] * cfg.degrees[j] * bessel_K0(r);
        }
    }

    double self = 0.0;
    double k0_mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = cfg.degrees[j];
        self += d * (ctx.helmholtz_part().eval(cfg.positions[j]).real() + h - d * core);
        if (h != 0.0) k0_mass += d * disk_integral_K0(cfg.positions[j]);
    }

    const double f_mass = ctx.helmholtz_part().disk_integral().real();
    return pi * pair - pi * self + 0.5 * h * h * pi + 0.5 * h * (f_mass - k0_mass);
}

/// Xi_p(x) = -sum_j d_j (log|x - a_j| + K0(|x - a_j|)). At a vortex centre the
/// singular self term is replaced by its finite limit when `regularize` is set.
inline double xi_p(const VortexConfig& cfg, Vec2 x, bool regularize = false) {
    double v = 0.0;
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        const double r = distance(x, cfg.positions[j]);
        if (r == 0.0 && !regularize) throw std::domain_error("xi_p: evaluation point is a vortex centre");
        v -= cfg.degrees[j] * bessel_K0_plus_log(r);
    }
    return v;
}

/// Gradient of Xi_p: -sum_j d_j (x - a_j)/|x - a_j| (1/|x - a_j| - K1(|x - a_j|)).
/// The summand tends to zero at its own centre, which is the regularized value.
inline Vec2 grad_xi_p(const VortexConfig& cfg, Vec2 x, bool regularize = false) {
    Vec2 g{};
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        const Vec2 diff = x - cfg.positions[j];
        const double r = norm(diff);
        if (r == 0.0) {
            if (!regularize) throw std::domain_error("grad_xi_p: evaluation point is a vortex centre");
            continue;
        }
        g -= (cfg.degrees[j] * (-bessel_K1_minus_inv(r)) / r) * diff;
    }
    return g;
}

/// Limiting induced field h_* = -F + sum_j d_j K0(|x - a_j|). Diverges
/// logarithmically at vortex centres; returns +-infinity exactly there.
inline double magnetic_field(const FieldContext& ctx, Vec2 x) {
    const auto& cfg = ctx.config();
    double v = -ctx.helmholtz_part().eval(x).real();
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        const double r = distance(x, cfg.positions[j]);
        if (r == 0.0) return cfg.degrees[j] * std::numeric_limits<double>::infinity();
        v += cfg.degrees[j] * bessel_K0(r);
    }
    return v;
}

/// Gradient of Xi = Xi_p + F - R + h_ex.
inline Vec2 grad_xi(const FieldContext& ctx, Vec2 x) {
    return grad_xi_p(ctx.config(), x, /*regularize=*/true) + ctx.helmholtz_part().eval_grad(x) -
           ctx.harmonic_part().eval_grad(x);
}

/// A_* = curl Xi = (d2 Xi, -d1 Xi). Continuous at vortex centres (the
/// regularized limit is returned there).
inline Vec2 vector_potential(const FieldContext& ctx, Vec2 x) { return rotate_gradient(grad_xi(ctx, x)); }

/// Xi itself; mostly useful for finite-difference checks.
inline double xi(const FieldContext& ctx, Vec2 x) {
    return xi_p(ctx.config(), x, /*regularize=*/true) + ctx.helmholtz_part().eval(x).real() -
           ctx.harmonic_part().eval(x).real() + ctx.h_ex();
}

}  // namespace vortexflow

#endif
