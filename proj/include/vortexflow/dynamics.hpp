// Limiting vortex ODE
//   (alpha0 - d_j beta0 J) da_j/dt = -(1/pi) grad_{a_j} W,   J = [[0, 1], [-1, 0]],
// integrated with classical RK4. Every stage rebuilds the spectral context at
// the stage positions.

#ifndef VORTEXFLOW_DYNAMICS_HPP
#define VORTEXFLOW_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vortexflow/geometry.hpp"
#include "vortexflow/renorm.hpp"

namespace vortexflow {

/// Relaxation constants and applied field. alpha0 >= 0 with alpha0^2 + beta0^2 > 0;
/// a negative beta0 runs the Hamiltonian part backwards in time.
struct FlowParams {
    double alpha0 = 0.0;
    double beta0 = 1.0;
    double h_ex = 0.0;

    void validate() const {
        if (!std::isfinite(alpha0) || !std::isfinite(beta0) || !std::isfinite(h_ex)) {
            throw std::invalid_argument("FlowParams: non-finite value");
        }
        if (alpha0 < 0.0) throw std::invalid_argument("FlowParams: alpha0 must be nonnegative");
        if (alpha0 * alpha0 + beta0 * beta0 <= 0.0) {
            throw std::invalid_argument("FlowParams: alpha0 and beta0 cannot both vanish");
        }
    }
};

enum class Termination { completed, guard_min_distance, guard_boundary };

inline std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::guard_min_distance: return "guard_min_distance";
        case Termination::guard_boundary: return "guard_boundary";
    }
    return "unknown";
}

struct Guards {
    double min_pair_dist = 0.01;
    double min_boundary_dist = 0.01;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<Vec2>> states;
    std::vector<double> energies;
    std::vector<int> degrees;
    FlowParams params;
    int order = 0;
    Termination termination = Termination::completed;

    std::size_t vortex_count() const { return degrees.size(); }
    VortexConfig config_at(std::size_t step) const { return {states.at(step), degrees}; }
    const std::vector<Vec2>& final_state() const { return states.back(); }

    /// Positions at time t: the recorded state if t is a step time (to within
    /// 1e-9 of the step), linear interpolation between neighbours otherwise.
    std::vector<Vec2> state_at(double t) const {
        if (times.empty()) throw std::out_of_range("Trajectory::state_at: empty trajectory");
        const double slack = 1e-9 * std::max(1.0, std::abs(times.back()));
        if (t < times.front() - slack || t > times.back() + slack) {
            throw std::out_of_range("Trajectory::state_at: time outside the recorded interval");
        }
        const auto it = std::lower_bound(times.begin(), times.end(), t - slack);
        const auto k = static_cast<std::size_t>(it - times.begin());
        if (k >= times.size() || std::abs(times[k] - t) <= slack) return states[std::min(k, times.size() - 1)];
        const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
        std::vector<Vec2> out(states[k].size());
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = (1.0 - w) * states[k - 1][j] + w * states[k][j];
        return out;
    }

    /// Polygonal arc length travelled by each vortex.
    std::vector<double> arc_lengths() const {
        std::vector<double> out(degrees.size(), 0.0);
        for (std::size_t s = 1; s < states.size(); ++s)
            for (std::size_t j = 0; j < out.size(); ++j) out[j] += distance(states[s][j], states[s - 1][j]);
        return out;
    }
};

/// (alpha0 I - d beta0 J)^{-1} v = (alpha0 I + d beta0 J) v / (alpha0^2 + beta0^2), using J^2 = -I.
inline Vec2 mobility_apply(int degree, const FlowParams& params, Vec2 v) {
    if (degree != 1 && degree != -1) throw std::invalid_argument("mobility_apply: degree must be +-1");
    const double denom = params.alpha0 * params.alpha0 + params.beta0 * params.beta0;
    if (!(denom > 0.0)) throw std::invalid_argument("mobility_apply: alpha0 and beta0 cannot both vanish");
    const double b = degree * params.beta0;
    // J v = (v.y, -v.x)
    return Vec2{params.alpha0 * v.x + b * v.y, params.alpha0 * v.y - b * v.x} / denom;
}

/// Velocities from an already built context.
inline std::vector<Vec2> velocity(const FieldContext& ctx, const FlowParams& params) {
    const auto grad = grad_W(ctx);
    std::vector<Vec2> out(grad.size());
    for (std::size_t j = 0; j < grad.size(); ++j) {
        out[j] = mobility_apply(ctx.config().degrees[j], params, (-1.0 / std::numbers::pi) * grad[j]);
    }
    return out;
}

inline std::vector<Vec2> velocity(const VortexConfig& cfg, const FlowParams& params, int order) {
    return velocity(build_context(cfg, params.h_ex, order), params);
}

namespace detail {

inline void require_unit_degrees(const VortexConfig& cfg) {
    for (int d : cfg.degrees) {
        if (d != 1 && d != -1) throw std::invalid_argument("integrate: dynamics requires degrees in {-1, +1}");
    }
}

// Which guard (if any) a state violates. Inadmissible states map to the
// matching guard as well.
inline bool guard_tripped(const VortexConfig& cfg, const Guards& g, Termination& why) {
    for (const auto& a : cfg.positions) {
        if (!(1.0 - norm(a) > g.min_boundary_dist)) {
            why = Termination::guard_boundary;
            return true;
        }
    }
    if (cfg.size() > 1 && !(cfg.min_pair_distance() > g.min_pair_dist)) {
        why = Termination::guard_min_distance;
        return true;
    }
    return false;
}

// Smallest pair distance when every vortex moves on the straight segment
// from `from` to `to` over the step. Catches pairs that pass through each
// other within one step while both endpoints stay well separated.
inline double swept_min_pair_distance(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < from.size(); ++i) {
        for (std::size_t k = i + 1; k < from.size(); ++k) {
            const Vec2 r0 = from[k] - from[i];
            const Vec2 dr = (to[k] - to[i]) - r0;
            const double dd = dot(dr, dr);
            const double s = dd > 0.0 ? std::clamp(-dot(r0, dr) / dd, 0.0, 1.0) : 0.0;
            best = std::min(best, norm(r0 + s * dr));
        }
    }
    return best;
}

inline std::vector<Vec2> axpy(const std::vector<Vec2>& base, double h, const std::vector<Vec2>& dir) {
    std::vector<Vec2> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + h * dir[i];
    return out;
}

}  // namespace detail

/// RK4 integration up to time `final_time` with step `dt`. Guards are checked
/// on step boundaries; a tripped guard ends the run with the matching tag.
/// A step along which two vortices would come closer than the pair guard,
/// judged on straight paths between its endpoints, is not taken.
inline Trajectory integrate(const VortexConfig& cfg0, const FlowParams& params, double final_time, double dt, int order,
                            const Guards& guards = {}) {
    cfg0.validate();
    params.validate();
    detail::require_unit_degrees(cfg0);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("integrate: dt must be positive");
    if (!(final_time >= 0.0) || !std::isfinite(final_time)) throw std::invalid_argument("integrate: bad final time");
    if (order < 0) throw std::invalid_argument("integrate: negative order");

    Trajectory traj;
    traj.degrees = cfg0.degrees;
    traj.params = params;
    traj.order = order;

    const auto steps = static_cast<std::size_t>(std::ceil(final_time / dt - 1e-9));
    VortexConfig cfg = cfg0;

    auto stage_config = [&](std::vector<Vec2> pos, Termination& why) -> bool {
        cfg.positions = std::move(pos);
        if (!cfg.admissible()) {
            why = Termination::guard_boundary;
            for (const auto& a : cfg.positions)
                if (!(norm_sq(a) < 1.0)) return false;
            why = Termination::guard_min_distance;
            return false;
        }
        return true;
    };

    for (std::size_t s = 0;; ++s) {
        const double t = (s == steps) ? final_time : static_cast<double>(s) * dt;
        Termination why = Termination::completed;
        const bool tripped = detail::guard_tripped(cfg, guards, why);
        const FieldContext ctx = build_context(cfg, params.h_ex, order);
        traj.times.push_back(t);
        traj.states.push_back(cfg.positions);
        traj.energies.push_back(energy_W(ctx));
        if (tripped) {
            traj.termination = why;
            return traj;
        }
        if (s == steps) break;

        const double h = (s + 1 == steps) ? final_time - t : dt;
        const std::vector<Vec2> start = cfg.positions;
        const auto k1 = velocity(ctx, params);
        std::vector<Vec2> k2, k3, k4;
        if (!stage_config(detail::axpy(start, 0.5 * h, k1), why)) {
            traj.termination = why;
            return traj;
        }
        k2 = velocity(cfg, params, order);
        if (!stage_config(detail::axpy(start, 0.5 * h, k2), why)) {
            traj.termination = why;
            return traj;
        }
        k3 = velocity(cfg, params, order);
        if (!stage_config(detail::axpy(start, h, k3), why)) {
            traj.termination = why;
            return traj;
        }
        k4 = velocity(cfg, params, order);

        std::vector<Vec2> next(start.size());
        for (std::size_t i = 0; i < start.size(); ++i) {
            next[i] = start[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (!(detail::swept_min_pair_distance(start, next) > guards.min_pair_dist)) {
            traj.termination = Termination::guard_min_distance;
            return traj;
        }
        if (!stage_config(std::move(next), why)) {
            traj.termination = why;
            return traj;
        }
    }
    traj.termination = Termination::completed;
    return traj;
}

/// Errors of a family of runs against a refined reference run.
struct ConvergenceTable {
    std::vector<double> parameter;  // dt or m
    std::vector<double> error;      // max over vortices of final-position error
    double reference_parameter = 0.0;
    double slope = std::numeric_limits<double>::quiet_NaN();
    bool completed = true;  // false if any run stopped on a guard
};

/// Least-squares slope of y against x over the finite entries.
inline double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / denom;
}

namespace detail {

inline double final_position_error(const Trajectory& a, const Trajectory& b) {
    double e = 0.0;
    for (std::size_t j = 0; j < a.vortex_count(); ++j) e = std::max(e, distance(a.final_state()[j], b.final_state()[j]));
    return e;
}

template <class Runner>
ConvergenceTable run_study(const std::vector<double>& params, double reference, Runner run) {
    // Independent runs share only immutable inputs.
    std::vector<std::future<Trajectory>> jobs;
    jobs.reserve(params.size() + 1);
    jobs.push_back(std::async(std::launch::async, run, reference));
    for (double p : params) jobs.push_back(std::async(std::launch::async, run, p));

    ConvergenceTable table;
    table.reference_parameter = reference;
    const Trajectory ref = jobs[0].get();
    table.completed = ref.termination == Termination::completed;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Trajectory tr = jobs[i + 1].get();
        table.completed = table.completed && tr.termination == Termination::completed;
        table.parameter.push_back(params[i]);
        table.error.push_back(final_position_error(tr, ref));
    }
    return table;
}

inline double log_or_nan(double v) { return v > 0.0 ? std::log(v) : std::numeric_limits<double>::quiet_NaN(); }

}  // namespace detail

/// Time-step study; the reference uses half the smallest step. The slope is
/// fitted to log(error) against log(dt).
inline ConvergenceTable convergence_study_dt(const VortexConfig& cfg0, const FlowParams& params, double final_time,
                                             const std::vector<double>& dt_list, int order,
                                             const Guards& guards = {}) {
    if (dt_list.empty()) throw std::invalid_argument("convergence_study_dt: empty step list");
    double smallest = dt_list.front();
    for (double dt : dt_list) smallest = std::min(smallest, dt);
    auto run = [&](double dt) { return integrate(cfg0, params, final_time, dt, order, guards); };
    auto table = detail::run_study(dt_list, 0.5 * smallest, run);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < table.parameter.size(); ++i) {
        lx.push_back(std::log(table.parameter[i]));
        ly.push_back(detail::log_or_nan(table.error[i]));
    }
    table.slope = fitted_slope(lx, ly);
    return table;
}

/// Mode-count study; the reference uses twice the largest order. The slope is
/// fitted to log(error) against m (negative for spectral decay).
inline ConvergenceTable convergence_study_m(const VortexConfig& cfg0, const FlowParams& params, double final_time,
                                            double dt, const std::vector<int>& m_list, const Guards& guards = {}) {
    if (m_list.empty()) throw std::invalid_argument("convergence_study_m: empty order list");
    int largest = m_list.front();
    for (int m : m_list) largest = std::max(largest, m);
    std::vector<double> params_d(m_list.begin(), m_list.end());
    auto run = [&](double m) { return integrate(cfg0, params, final_time, dt, static_cast<int>(m), guards); };
    auto table = detail::run_study(params_d, 2.0 * largest, run);
    std::vector<double> ly;
    for (double e : table.error) ly.push_back(detail::log_or_nan(e));
    table.slope = fitted_slope(table.parameter, ly);
    return table;
}

}  // namespace vortexflow

#endif
