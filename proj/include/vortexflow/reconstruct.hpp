// Approximate order parameter, supercurrent and induced field rebuilt from
// vortex positions, sampled on a Cartesian grid over [-1, 1]^2.

#ifndef VORTEXFLOW_RECONSTRUCT_HPP
#define VORTEXFLOW_RECONSTRUCT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "vortexflow/disk_spectral.hpp"
#include "vortexflow/geometry.hpp"
#include "vortexflow/profile.hpp"
#include "vortexflow/renorm.hpp"

namespace vortexflow {

/// Neumann datum of the phase correction at the boundary point e^{i theta}:
/// sum_j d_j (x - a_j) . tau / |x - a_j|^2 with tau = (-sin theta, cos theta).
inline double phase_neumann_data(const VortexConfig& cfg, double theta) {
    const Vec2 x{std::cos(theta), std::sin(theta)};
    const Vec2 tau{-x.y, x.x};
    double g = 0.0;
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        const Vec2 d = x - cfg.positions[j];
        g += cfg.degrees[j] * dot(d, tau) / norm_sq(d);
    }
    return g;
}

/// Zero-mean harmonic phase correction making the canonical map satisfy the
/// homogeneous Neumann condition.
inline BoundaryExpansion solve_phase(const VortexConfig& cfg, int order, int samples = 0) {
    cfg.validate();
    if (order < 0) throw std::invalid_argument("solve_phase: negative order");
    const std::size_t n = samples > 0 ? static_cast<std::size_t>(samples)
                                      : static_cast<std::size_t>(default_sample_count(order));
    const auto g_hat = project_boundary([&](double theta) { return phase_neumann_data(cfg, theta); }, order, n);
    return solve_laplace_neumann(g_hat);
}

/// e^{i phi(x)} prod_j ((x - a_j)/|x - a_j|)^{d_j}. Undefined at the centers.
inline complex canonical_map(const VortexConfig& cfg, const BoundaryExpansion& phi, Vec2 x) {
    complex u = std::polar(1.0, phi.eval(x).real());
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        const Vec2 d = x - cfg.positions[j];
        const double r = norm(d);
        if (r == 0.0) throw std::domain_error("canonical_map: evaluated at a vortex center");
        complex w(d.x / r, d.y / r);
        if (cfg.degrees[j] < 0) w = std::conj(w);
        for (int k = std::abs(cfg.degrees[j]); k > 0; --k) u *= w;
    }
    return u;
}

/// Gradient of the phase of the canonical map, grad phi + sum_j d_j grad theta(x - a_j).
/// For a unit-modulus field this is the supercurrent plus the vector potential.
inline Vec2 canonical_phase_gradient(const VortexConfig& cfg, const BoundaryExpansion& phi, Vec2 x) {
    Vec2 g = phi.eval_grad(x);
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        const Vec2 d = x - cfg.positions[j];
        g += (cfg.degrees[j] / norm_sq(d)) * Vec2{-d.y, d.x};
    }
    return g;
}

/// Canonical map damped by the core profile around each vortex; exactly 0 at the centers.
inline complex order_parameter(const VortexConfig& cfg, const BoundaryExpansion& phi, const RadialProfile& profile,
                               Vec2 x) {
    double modulus = 1.0;
    for (const auto& a : cfg.positions) {
        const double r = distance(x, a);
        if (r == 0.0) return 0.0;
        modulus *= eval_profile(profile, r);
    }
    return modulus * canonical_map(cfg, phi, x);
}

/// Uniform nx-by-ny node grid on [-1, 1]^2. Nodes outside the open disk
/// (|x| >= 1 - 1e-12) are masked out. Storage is row-major: index = j * nx + i.
struct GridSpec {
    int nx = 512;
    int ny = 512;

    static constexpr double kMaskMargin = 1e-12;

    void validate() const {
        if (nx < 2 || ny < 2) throw std::invalid_argument("GridSpec: need at least 2 nodes per direction");
    }
    double hx() const { return 2.0 / (nx - 1); }
    double hy() const { return 2.0 / (ny - 1); }
    double cell_area() const { return hx() * hy(); }
    double x(int i) const { return -1.0 + 2.0 * i / (nx - 1); }
    double y(int j) const { return -1.0 + 2.0 * j / (ny - 1); }
    Vec2 point(int i, int j) const { return {x(i), y(j)}; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    bool inside(int i, int j) const { return norm(point(i, j)) < 1.0 - kMaskMargin; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Sampled fields. Vectors are either empty (field not requested) or of size spec.size();
/// entries at masked-out nodes are zero.
struct FieldGrid {
    GridSpec spec;
    double time = 0.0;
    std::vector<std::uint8_t> mask;
    std::vector<complex> u;
    std::vector<double> h;
    std::vector<Vec2> A;
    std::vector<Vec2> j;
    std::vector<std::uint8_t> j_mask;  // nodes whose four neighbours are all inside

    bool has_u() const { return !u.empty(); }
    bool has_h() const { return !h.empty(); }
    bool has_A() const { return !A.empty(); }
    bool has_j() const { return !j.empty(); }
};

struct FieldRequest {
    bool u = true;
    bool h = true;
    bool A = true;
    bool j = true;  // needs u and A; they are computed if missing
};

struct DetectedVortex {
    Vec2 position;
    int degree = 0;
};

namespace detail {

inline std::vector<std::uint8_t> disk_mask(const GridSpec& spec) {
    std::vector<std::uint8_t> mask(spec.size());
    for (int jj = 0; jj < spec.ny; ++jj)
        for (int i = 0; i < spec.nx; ++i) mask[spec.index(i, jj)] = spec.inside(i, jj) ? 1 : 0;
    return mask;
}

// Runs body(row) for every row, split into contiguous blocks across threads.
// Each row writes only its own slots, so the output does not depend on the
// thread count.
inline void for_each_row(int rows, unsigned threads, const std::function<void(int)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(rows, 1)));
    if (threads <= 1) {
        for (int r = 0; r < rows; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int block = (rows + static_cast<int>(threads) - 1) / static_cast<int>(threads);
    for (unsigned t = 0; t < threads; ++t) {
        const int begin = static_cast<int>(t) * block;
        const int end = std::min(rows, begin + block);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &body] {
            for (int r = begin; r < end; ++r) body(r);
        });
    }
    for (auto& th : pool) th.join();
}

inline double wrap_angle(double a) {
    // to (-pi, pi]
    a = std::remainder(a, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

}  // namespace detail

/// Fills grid.j = Im(conj(u) grad u) - A |u|^2 by centered differences. Nodes
/// with a neighbour outside the disk are left at zero and flagged in j_mask.
inline void compute_supercurrent(FieldGrid& grid) {
    if (!grid.has_u() || !grid.has_A()) throw std::invalid_argument("compute_supercurrent: needs u and A");
    const GridSpec& s = grid.spec;
    grid.j.assign(s.size(), Vec2{});
    grid.j_mask.assign(s.size(), 0);
    const double inv2hx = 1.0 / (2.0 * s.hx());
    const double inv2hy = 1.0 / (2.0 * s.hy());
    for (int jj = 1; jj + 1 < s.ny; ++jj) {
        for (int i = 1; i + 1 < s.nx; ++i) {
            const std::size_t c = s.index(i, jj);
            const std::size_t e = s.index(i + 1, jj), w = s.index(i - 1, jj);
            const std::size_t n = s.index(i, jj + 1), so = s.index(i, jj - 1);
            if (!(grid.mask[c] && grid.mask[e] && grid.mask[w] && grid.mask[n] && grid.mask[so])) continue;
            const complex ub = std::conj(grid.u[c]);
            const double rho = std::norm(grid.u[c]);
            const double jx = (ub * (grid.u[e] - grid.u[w])).imag() * inv2hx;
            const double jy = (ub * (grid.u[n] - grid.u[so])).imag() * inv2hy;
            grid.j[c] = Vec2{jx, jy} - rho * grid.A[c];
            grid.j_mask[c] = 1;
        }
    }
}

/// Samples the requested fields of the configuration on `spec`. Evaluation is
/// split across `threads` workers (0 = hardware concurrency).
inline FieldGrid sample_fields(const VortexConfig& cfg, double h_ex, const RadialProfile& profile, int order,
                               const GridSpec& spec, FieldRequest request = {}, double time = 0.0,
                               unsigned threads = 0) {
    cfg.validate();
    spec.validate();
    if (request.j) request.u = request.A = true;

    FieldGrid grid;
    grid.spec = spec;
    grid.time = time;
    grid.mask = detail::disk_mask(spec);

    std::optional<BoundaryExpansion> phi;
    std::optional<FieldContext> ctx;
    if (request.u) {
        phi = solve_phase(cfg, order);
        grid.u.assign(spec.size(), complex{});
    }
    if (request.h || request.A) {
        ctx = build_context(cfg, h_ex, order);
        if (request.A) (void)ctx->harmonic_part();  // build before the workers start
    }
    if (request.h) grid.h.assign(spec.size(), 0.0);
    if (request.A) grid.A.assign(spec.size(), Vec2{});

    detail::for_each_row(spec.ny, threads, [&](int jj) {
        for (int i = 0; i < spec.nx; ++i) {
            const std::size_t k = spec.index(i, jj);
            if (!grid.mask[k]) continue;
            const Vec2 x = spec.point(i, jj);
            if (request.u) grid.u[k] = order_parameter(cfg, *phi, profile, x);
            if (request.h) grid.h[k] = magnetic_field(*ctx, x);
            if (request.A) grid.A[k] = vector_potential(*ctx, x);
        }
    });
    if (request.j) compute_supercurrent(grid);
    return grid;
}

/// Multiplies u by e^{i alpha} and refreshes j if it was present.
inline void rotate_phase(FieldGrid& grid, double alpha) {
    const complex w = std::polar(1.0, alpha);
    for (auto& v : grid.u) v *= w;
    if (grid.has_j() && grid.has_A()) compute_supercurrent(grid);
}

/// Zeros of u found by plaquette winding. Each plaquette with all four corners
/// inside the disk contributes round(sum of wrapped phase increments / 2 pi)
/// along (i,j) -> (i+1,j) -> (i+1,j+1) -> (i,j+1). Nonzero plaquettes of equal
/// degree within 1.5 grid spacings are merged into their mean position.
///
/// A node where u is exactly zero has no phase, so the four plaquettes around
/// it are replaced by the winding along its ring of eight neighbours, and a
/// detection there sits on the node itself.
inline std::vector<DetectedVortex> locate_vortices(const FieldGrid& grid) {
    if (!grid.has_u()) throw std::invalid_argument("locate_vortices: grid has no order parameter");
    const GridSpec& s = grid.spec;
    auto winding_of = [&](const std::size_t* ring, int count) {
        double total = 0.0;
        for (int e = 0; e < count; ++e) {
            const complex a = grid.u[ring[e]];
            const complex b = grid.u[ring[(e + 1) % count]];
            total += detail::wrap_angle(std::arg(b) - std::arg(a));
        }
        return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
    };
    auto all_inside = [&](const std::size_t* idx, int count) {
        for (int e = 0; e < count; ++e)
            if (!grid.mask[idx[e]]) return false;
        return true;
    };

    std::vector<DetectedVortex> raw;
    std::vector<std::uint8_t> zero(s.size(), 0);
    for (int jj = 1; jj + 1 < s.ny; ++jj) {
        for (int i = 1; i + 1 < s.nx; ++i) {
            const std::size_t c = s.index(i, jj);
            if (!grid.mask[c] || grid.u[c] != complex{}) continue;
            const std::size_t ring[8] = {s.index(i + 1, jj),     s.index(i + 1, jj + 1), s.index(i, jj + 1),
                                         s.index(i - 1, jj + 1), s.index(i - 1, jj),     s.index(i - 1, jj - 1),
                                         s.index(i, jj - 1),     s.index(i + 1, jj - 1)};
            if (!all_inside(ring, 8)) continue;
            zero[c] = 1;
            const int w = winding_of(ring, 8);
            if (w != 0) raw.push_back({s.point(i, jj), w});
        }
    }
    for (int jj = 0; jj + 1 < s.ny; ++jj) {
        for (int i = 0; i + 1 < s.nx; ++i) {
            const std::size_t c[4] = {s.index(i, jj), s.index(i + 1, jj), s.index(i + 1, jj + 1), s.index(i, jj + 1)};
            if (!all_inside(c, 4) || zero[c[0]] || zero[c[1]] || zero[c[2]] || zero[c[3]]) continue;
            const int w = winding_of(c, 4);
            if (w != 0) raw.push_back({{s.x(i) + 0.5 * s.hx(), s.y(jj) + 0.5 * s.hy()}, w});
        }
    }

    // Union-find over close detections of equal degree.
    std::vector<std::size_t> parent(raw.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    const double radius = 1.5 * std::max(s.hx(), s.hy());
    for (std::size_t a = 0; a < raw.size(); ++a)
        for (std::size_t b = a + 1; b < raw.size(); ++b)
            if (raw[a].degree == raw[b].degree && distance(raw[a].position, raw[b].position) <= radius)
                parent[find(a)] = find(b);

    std::vector<DetectedVortex> out;
    std::vector<std::size_t> count;
    std::vector<std::size_t> slot(raw.size(), raw.size());
    for (std::size_t a = 0; a < raw.size(); ++a) {
        const std::size_t root = find(a);
        if (slot[root] == raw.size()) {
            slot[root] = out.size();
            out.push_back({Vec2{}, raw[a].degree});
            count.push_back(0);
        }
        out[slot[root]].position += raw[a].position;
        ++count[slot[root]];
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k].position = out[k].position / static_cast<double>(count[k]);
    return out;
}

enum class FieldSelector { u, rho, h, j, A };

namespace detail {

inline void require_same_grid(const FieldGrid& a, const FieldGrid& b) {
    if (!(a.spec == b.spec)) throw std::invalid_argument("grid_norm: grid shapes differ");
}

// |a - b| at node k for the selected field, or nullopt if not comparable there.
inline std::optional<double> pointwise_gap(const FieldGrid& a, const FieldGrid* b, std::size_t k, FieldSelector which) {
    if (!a.mask[k]) return std::nullopt;
    switch (which) {
        case FieldSelector::u: {
            if (!a.has_u() || (b && !b->has_u())) throw std::invalid_argument("grid_norm: u not sampled");
            return std::abs(a.u[k] - (b ? b->u[k] : complex{}));
        }
        case FieldSelector::rho: {
            if (!a.has_u() || (b && !b->has_u())) throw std::invalid_argument("grid_norm: u not sampled");
            return std::abs(std::norm(a.u[k]) - (b ? std::norm(b->u[k]) : 0.0));
        }
        case FieldSelector::h: {
            if (!a.has_h() || (b && !b->has_h())) throw std::invalid_argument("grid_norm: h not sampled");
            return std::abs(a.h[k] - (b ? b->h[k] : 0.0));
        }
        case FieldSelector::A: {
            if (!a.has_A() || (b && !b->has_A())) throw std::invalid_argument("grid_norm: A not sampled");
            return norm(a.A[k] - (b ? b->A[k] : Vec2{}));
        }
        case FieldSelector::j: {
            if (!a.has_j() || (b && !b->has_j())) throw std::invalid_argument("grid_norm: j not sampled");
            if (!a.j_mask[k] || (b && !b->j_mask[k])) return std::nullopt;
            return norm(a.j[k] - (b ? b->j[k] : Vec2{}));
        }
    }
    return std::nullopt;
}

inline double grid_norm_impl(const FieldGrid& a, const FieldGrid* b, double p, FieldSelector which) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("grid_norm: exponent must be finite and >= 1");
    if (b) require_same_grid(a, *b);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.spec.size(); ++k) {
        if (b && !b->mask[k]) continue;
        if (const auto gap = pointwise_gap(a, b, k, which)) sum += std::pow(*gap, p);
    }
    return std::pow(sum * a.spec.cell_area(), 1.0 / p);
}

}  // namespace detail

/// Discrete L^p norm (sum over masked nodes of |a|^p times cell area)^{1/p}.
inline double grid_norm(const FieldGrid& a, double p, FieldSelector which) {
    return detail::grid_norm_impl(a, nullptr, p, which);
}

/// Discrete L^p distance between two fields on identical grids.
inline double grid_norm(const FieldGrid& a, const FieldGrid& b, double p, FieldSelector which) {
    return detail::grid_norm_impl(a, &b, p, which);
}

/// ||a - b||_p / ||a||_p; `a` is the reference.
inline double relative_grid_norm(const FieldGrid& a, const FieldGrid& b, double p, FieldSelector which) {
    const double ref = grid_norm(a, p, which);
    const double gap = grid_norm(a, b, p, which);
    if (ref == 0.0) return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return gap / ref;
}

/// Constant phase alpha minimising ||e^{i alpha} rec - ext||_2 over the mask:
/// e^{i alpha} = <rec, ext> / |<rec, ext>|. Returns 0 when the inner product vanishes.
inline double align_phase(const FieldGrid& rec, const FieldGrid& ext) {
    detail::require_same_grid(rec, ext);
    if (!rec.has_u() || !ext.has_u()) throw std::invalid_argument("align_phase: u not sampled");
    // Extended accumulation keeps the angle accurate on large grids.
    long double re = 0.0L, im = 0.0L;
    for (std::size_t k = 0; k < rec.spec.size(); ++k) {
        if (!(rec.mask[k] && ext.mask[k])) continue;
        const complex a = rec.u[k], b = ext.u[k];
        re += static_cast<long double>(a.real()) * b.real() + static_cast<long double>(a.imag()) * b.imag();
        im += static_cast<long double>(a.real()) * b.imag() - static_cast<long double>(a.imag()) * b.real();
    }
    return (re == 0.0L && im == 0.0L) ? 0.0 : static_cast<double>(std::atan2(im, re));
}

}  // namespace vortexflow

#endif
