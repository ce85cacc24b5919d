// Command-line front end: JSON run configuration, per-field overrides and the
// five subcommands. Every command writes into the output directory and
// returns a process exit code.

#ifndef VORTEXFLOW_CLI_HPP
#define VORTEXFLOW_CLI_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vortexflow/dynamics.hpp"
#include "vortexflow/errors.hpp"
#include "vortexflow/io.hpp"
#include "vortexflow/profile.hpp"
#include "vortexflow/reconstruct.hpp"
#include "vortexflow/renorm.hpp"

namespace vortexflow::cli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kInvalidConfig = 2, kGuardTermination = 3, kIoFailure = 4 };

/// Initial configurations by name: "1".."4" and "dipole" (degrees -1, +1 at (-ell, 0), (ell, 0)).
inline VortexConfig named_case(const std::string& name, double ell = 0.5) {
    if (name == "1") return {{{-0.5, 0.0}, {0.5, 0.0}}, {1, 1}};
    if (name == "2") return {{{-0.5, 0.0}, {0.5, 0.0}, {0.0, 0.0}}, {1, 1, -1}};
    if (name == "3") return {{{-0.75, 0.0}, {0.75, 0.0}}, {-1, 1}};
    if (name == "4") return {{{-0.6, -0.6}, {-0.6, 0.6}, {0.6, 0.6}, {0.6, -0.6}}, {1, -1, 1, -1}};
    if (name == "dipole") {
        if (!(ell > 0.0 && ell < 1.0)) throw ConfigError("ell must lie in (0, 1)");
        return {{{-ell, 0.0}, {ell, 0.0}}, {-1, 1}};
    }
    throw ConfigError("unknown case '" + name + "' (expected 1, 2, 3, 4 or dipole)");
}

struct RunConfig {
    std::optional<std::string> case_name;
    double ell = 0.5;
    bool has_vortices = false;  // only the profile command runs without one
    VortexConfig vortices;
    FlowParams params;
    double T = 1.0;
    double dt = 1e-3;
    int m = 64;
    double epsilon = 0.03;
    double r0 = 0.3;
    double dr = 1e-5;
    GridSpec grid;
    std::vector<double> times{0.0, 0.5, 1.0};
    std::string mode = "dt";
    std::vector<double> dt_list{4e-3, 2e-3, 1e-3, 5e-4};
    std::vector<int> m_list{8, 12, 16, 24, 32, 48, 64};
    Guards guards;
    std::string external;
    std::string profile_file;
    double compare_time = 0.0;
    int threads = 0;
    std::string out = "vortexflow_out";
    json echo;  // fully resolved JSON form; feeding it back reproduces the run
};

/// Every key with its default. "case", "positions" and "degrees" have none.
inline json default_config_json() {
    return json{{"ell", 0.5},
                {"alpha0", 0.0},
                {"beta0", 1.0},
                {"h_ex", 0.0},
                {"T", 1.0},
                {"dt", 1e-3},
                {"m", 64},
                {"epsilon", 0.03},
                {"r0", 0.3},
                {"dr", 1e-5},
                {"nx", 512},
                {"ny", 512},
                {"times", json::array({0.0, 0.5, 1.0})},
                {"mode", "dt"},
                {"dt_list", json::array({4e-3, 2e-3, 1e-3, 5e-4})},
                {"m_list", json::array({8, 12, 16, 24, 32, 48, 64})},
                {"min_pair_dist", 0.01},
                {"min_boundary_dist", 0.01},
                {"external", ""},
                {"profile_file", ""},
                {"compare_time", 0.0},
                {"threads", 0},
                {"out", "vortexflow_out"}};
}

namespace detail {

inline double get_real(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(std::string("'") + key + "' must be finite");
    return x;
}

inline int get_int(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
    return v.get<int>();
}

inline std::string get_string(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

inline std::vector<double> get_real_list(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(std::string("'") + key + "' must contain numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

inline void require_positive(double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError(std::string("'") + key + "' must be positive");
}

}  // namespace detail

/// Validates a configuration object and fills in defaults.
inline RunConfig parse_config(const json& input) {
    if (!input.is_object()) throw ConfigError("configuration must be a JSON object");
    static const std::set<std::string> extra_keys{"case", "positions", "degrees"};
    const json defaults = default_config_json();
    for (const auto& [key, value] : input.items()) {
        if (!defaults.contains(key) && !extra_keys.contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
    }
    json full = defaults;
    full.update(input);

    RunConfig rc;
    rc.ell = detail::get_real(full, "ell");
    if (full.contains("case")) {
        if (full.contains("positions") || full.contains("degrees")) {
            throw ConfigError("'case' cannot be combined with 'positions'/'degrees'");
        }
        const auto& c = full["case"];
        if (c.is_number_integer()) rc.case_name = std::to_string(c.get<int>());
        else if (c.is_string()) rc.case_name = c.get<std::string>();
        else throw ConfigError("'case' must be an integer or a string");
        rc.vortices = named_case(*rc.case_name, rc.ell);
    } else if (full.contains("positions") || full.contains("degrees")) {
        if (!full.contains("positions") || !full.contains("degrees")) {
            throw ConfigError("'positions' and 'degrees' must be given together");
        }
        const auto& pos = full["positions"];
        const auto& deg = full["degrees"];
        if (!pos.is_array() || !deg.is_array()) throw ConfigError("'positions' and 'degrees' must be arrays");
        for (const auto& p : pos) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                throw ConfigError("each position must be a pair of numbers");
            }
            rc.vortices.positions.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        for (const auto& d : deg) {
            if (!d.is_number_integer()) throw ConfigError("degrees must be integers");
            rc.vortices.degrees.push_back(d.get<int>());
        }
    }
    rc.has_vortices = full.contains("case") || full.contains("positions");
    try {
        rc.vortices.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    for (int d : rc.vortices.degrees)
        if (d != 1 && d != -1) throw ConfigError("degrees must be +1 or -1");

    rc.params = {detail::get_real(full, "alpha0"), detail::get_real(full, "beta0"), detail::get_real(full, "h_ex")};
    try {
        rc.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    rc.T = detail::get_real(full, "T");
    if (rc.T < 0.0) throw ConfigError("'T' must be nonnegative");
    rc.dt = detail::get_real(full, "dt");
    detail::require_positive(rc.dt, "dt");
    rc.m = detail::get_int(full, "m");
    if (rc.m < 1) throw ConfigError("'m' must be at least 1");
    rc.epsilon = detail::get_real(full, "epsilon");
    detail::require_positive(rc.epsilon, "epsilon");
    rc.r0 = detail::get_real(full, "r0");
    detail::require_positive(rc.r0, "r0");
    rc.dr = detail::get_real(full, "dr");
    detail::require_positive(rc.dr, "dr");
    rc.grid = {detail::get_int(full, "nx"), detail::get_int(full, "ny")};
    if (rc.grid.nx < 2 || rc.grid.ny < 2) throw ConfigError("'nx' and 'ny' must be at least 2");
    rc.times = detail::get_real_list(full, "times");
    for (double t : rc.times)
        if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("'times' entries must be nonnegative");
    rc.mode = detail::get_string(full, "mode");
    if (rc.mode != "dt" && rc.mode != "m") throw ConfigError("'mode' must be \"dt\" or \"m\"");
    rc.dt_list = detail::get_real_list(full, "dt_list");
    if (rc.dt_list.empty()) throw ConfigError("'dt_list' must not be empty");
    for (double v : rc.dt_list) detail::require_positive(v, "dt_list");
    rc.m_list.clear();
    if (!full["m_list"].is_array() || full["m_list"].empty()) throw ConfigError("'m_list' must be a nonempty array");
    for (const auto& v : full["m_list"]) {
        if (!v.is_number_integer() || v.get<int>() < 1) throw ConfigError("'m_list' must contain positive integers");
        rc.m_list.push_back(v.get<int>());
    }
    rc.guards = {detail::get_real(full, "min_pair_dist"), detail::get_real(full, "min_boundary_dist")};
    if (rc.guards.min_pair_dist < 0.0 || rc.guards.min_boundary_dist < 0.0) {
        throw ConfigError("guard distances must be nonnegative");
    }
    rc.external = detail::get_string(full, "external");
    rc.profile_file = detail::get_string(full, "profile_file");
    rc.compare_time = detail::get_real(full, "compare_time");
    if (rc.compare_time < 0.0) throw ConfigError("'compare_time' must be nonnegative");
    rc.threads = detail::get_int(full, "threads");
    if (rc.threads < 0) throw ConfigError("'threads' must be nonnegative");
    rc.out = detail::get_string(full, "out");
    if (rc.out.empty()) throw ConfigError("'out' must not be empty");
    rc.echo = std::move(full);
    return rc;
}

namespace detail {

namespace fs = std::filesystem;

inline json vec_json(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(x);
    return out;
}

inline json base_meta(const RunConfig& rc, const char* command) {
    return json{{"command", command}, {"version", kVersion}, {"config", rc.echo}};
}

inline void write_meta(const RunConfig& rc, json meta, std::chrono::steady_clock::time_point start) {
    meta["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    io::write_atomic(fs::path(rc.out) / "meta.json", meta.dump(2) + "\n");
}

inline std::string time_label(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

inline RadialProfile profile_for(const RunConfig& rc) {
    if (!rc.profile_file.empty()) return io::load_profile(rc.profile_file);
    if (rc.dr > rc.epsilon / 20.0) throw ConfigError("'dr' must not exceed epsilon/20");
    return solve_profile(rc.epsilon, rc.r0, rc.dr);
}

inline json vortices_json(const std::vector<DetectedVortex>& found) {
    json out = json::array();
    for (const auto& v : found) out.push_back({{"x", v.position.x}, {"y", v.position.y}, {"degree", v.degree}});
    return out;
}

// Trajectory long enough to cover `t_end`, or none when only t = 0 is needed.
inline std::optional<Trajectory> trajectory_until(const RunConfig& rc, double t_end) {
    if (t_end <= 0.0) return std::nullopt;
    return integrate(rc.vortices, rc.params, t_end, rc.dt, rc.m, rc.guards);
}

inline bool covers(const std::optional<Trajectory>& traj, double t) {
    if (t == 0.0) return true;
    return traj && t <= traj->times.back() + 1e-9 * std::max(1.0, t);
}

inline VortexConfig config_at(const RunConfig& rc, const std::optional<Trajectory>& traj, double t) {
    if (t == 0.0 || !traj) return rc.vortices;
    return {traj->state_at(t), rc.vortices.degrees};
}

}  // namespace detail

/// trajectory.csv (t, x_j, y_j), energy.csv (t, W), arc_length.csv, meta.json.
inline int cmd_trajectory(const RunConfig& rc) {
    const auto start = std::chrono::steady_clock::now();
    const Trajectory traj = integrate(rc.vortices, rc.params, rc.T, rc.dt, rc.m, rc.guards);
    const std::size_t n = traj.vortex_count();

    std::vector<std::string> header{"t"};
    for (std::size_t j = 1; j <= n; ++j) {
        header.push_back("x" + std::to_string(j));
        header.push_back("y" + std::to_string(j));
    }
    io::CsvBuilder positions(header);
    io::CsvBuilder energy({"t", "W"});
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        std::vector<double> row{traj.times[s]};
        for (const auto& a : traj.states[s]) {
            row.push_back(a.x);
            row.push_back(a.y);
        }
        positions.row(row);
        energy.row({traj.times[s], traj.energies[s]});
    }
    const auto arcs = traj.arc_lengths();
    io::CsvBuilder arc({"vortex", "degree", "arc_length"});
    for (std::size_t j = 0; j < n; ++j) arc.row({static_cast<double>(j + 1), static_cast<double>(traj.degrees[j]), arcs[j]});

    const std::filesystem::path out(rc.out);
    io::write_atomic(out / "trajectory.csv", positions.str());
    io::write_atomic(out / "energy.csv", energy.str());
    io::write_atomic(out / "arc_length.csv", arc.str());

    json meta = detail::base_meta(rc, "trajectory");
    meta["termination"] = std::string(to_string(traj.termination));
    meta["steps"] = traj.times.size() - 1;
    meta["final_time"] = traj.times.back();
    meta["arc_lengths"] = detail::vec_json(arcs);
    detail::write_meta(rc, std::move(meta), start);

    std::printf("trajectory: %zu steps, termination %s\n", traj.times.size() - 1,
                std::string(to_string(traj.termination)).c_str());
    return traj.termination == Termination::completed ? kOk : kGuardTermination;
}

/// fields_t<t>.csv (x, y, abs_u2, arg_u, h, j_x, j_y; nodes outside the disk
/// omitted, j = nan where its stencil leaves the disk) and vortices_t<t>.csv.
inline int cmd_reconstruct(const RunConfig& rc) {
    const auto start = std::chrono::steady_clock::now();
    if (rc.times.empty()) throw ConfigError("'times' must not be empty");
    const RadialProfile profile = detail::profile_for(rc);
    const double t_end = *std::max_element(rc.times.begin(), rc.times.end());
    const auto traj = detail::trajectory_until(rc, t_end);

    json meta = detail::base_meta(rc, "reconstruct");
    meta["termination"] = std::string(to_string(traj ? traj->termination : Termination::completed));
    meta["profile"] = {{"epsilon", profile.epsilon}, {"r0", profile.r0}, {"dr", profile.dr}};
    json frames = json::array();
    bool missing = false;
    const std::filesystem::path out(rc.out);

    for (double t : rc.times) {
        if (!detail::covers(traj, t)) {
            missing = true;
            continue;
        }
        const VortexConfig cfg = detail::config_at(rc, traj, t);
        const FieldGrid g = sample_fields(cfg, rc.params.h_ex, profile, rc.m, rc.grid, FieldRequest{}, t,
                                          static_cast<unsigned>(rc.threads));
        io::CsvBuilder fields({"x", "y", "abs_u2", "arg_u", "h", "j_x", "j_y"});
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (int jj = 0; jj < rc.grid.ny; ++jj) {
            for (int i = 0; i < rc.grid.nx; ++i) {
                const std::size_t k = rc.grid.index(i, jj);
                if (!g.mask[k]) continue;
                const bool jok = g.j_mask[k] != 0;
                fields.row({rc.grid.x(i), rc.grid.y(jj), std::norm(g.u[k]), std::arg(g.u[k]), g.h[k],
                            jok ? g.j[k].x : nan, jok ? g.j[k].y : nan});
            }
        }
        const auto found = locate_vortices(g);
        io::CsvBuilder vort({"x", "y", "degree"});
        for (const auto& v : found) vort.row({v.position.x, v.position.y, static_cast<double>(v.degree)});

        const std::string label = detail::time_label(t);
        io::write_atomic(out / ("fields_t" + label + ".csv"), fields.str());
        io::write_atomic(out / ("vortices_t" + label + ".csv"), vort.str());

        json planted = json::array();
        for (std::size_t j = 0; j < cfg.size(); ++j)
            planted.push_back({{"x", cfg.positions[j].x}, {"y", cfg.positions[j].y}, {"degree", cfg.degrees[j]}});
        frames.push_back({{"time", t}, {"planted", planted}, {"detected", detail::vortices_json(found)}});
    }
    meta["frames"] = frames;
    detail::write_meta(rc, std::move(meta), start);
    std::printf("reconstruct: %zu of %zu frames written\n", frames.size(), rc.times.size());
    return missing ? kGuardTermination : kOk;
}

/// convergence.csv (parameter, error); slope and reference in meta.json.
inline int cmd_convergence(const RunConfig& rc) {
    const auto start = std::chrono::steady_clock::now();
    const ConvergenceTable table = rc.mode == "dt"
                                       ? convergence_study_dt(rc.vortices, rc.params, rc.T, rc.dt_list, rc.m, rc.guards)
                                       : convergence_study_m(rc.vortices, rc.params, rc.T, rc.dt, rc.m_list, rc.guards);
    io::CsvBuilder csv({"parameter", "error"});
    for (std::size_t i = 0; i < table.parameter.size(); ++i) csv.row({table.parameter[i], table.error[i]});
    io::write_atomic(std::filesystem::path(rc.out) / "convergence.csv", csv.str());

    json meta = detail::base_meta(rc, "convergence");
    meta["mode"] = rc.mode;
    meta["reference_parameter"] = table.reference_parameter;
    meta["slope"] = std::isfinite(table.slope) ? json(table.slope) : json(nullptr);
    meta["completed"] = table.completed;
    detail::write_meta(rc, std::move(meta), start);
    std::printf("convergence (%s): slope %.6g\n", rc.mode.c_str(), table.slope);
    return table.completed ? kOk : kGuardTermination;
}

/// profile.csv in the cache format of io::profile_to_csv.
inline int cmd_profile(const RunConfig& rc) {
    const auto start = std::chrono::steady_clock::now();
    if (rc.dr > rc.epsilon / 20.0) throw ConfigError("'dr' must not exceed epsilon/20");
    const RadialProfile p = solve_profile(rc.epsilon, rc.r0, rc.dr);
    io::save_profile(std::filesystem::path(rc.out) / "profile.csv", p);
    json meta = detail::base_meta(rc, "profile");
    meta["nodes"] = p.values.size();
    meta["effective_dr"] = p.dr;
    meta["ratio"] = p.ratio();
    meta["newton_iterations"] = p.newton_iterations;
    meta["residual"] = p.residual;
    detail::write_meta(rc, std::move(meta), start);
    std::printf("profile: %zu nodes, %d Newton iterations\n", p.values.size(), p.newton_iterations);
    return kOk;
}

/// errors.csv with relative errors of the reconstruction against an external
/// field: u after constant-phase alignment and |u|^2 in L^2, h in L^2, j in L^{4/3}.
inline int cmd_compare(const RunConfig& rc) {
    const auto start = std::chrono::steady_clock::now();
    if (rc.external.empty()) throw ConfigError("'external' must name the field file to compare against");
    const FieldGrid ext_input = io::field_from_csv(io::read_file(rc.external), rc.grid, rc.external);

    const RadialProfile profile = detail::profile_for(rc);
    const auto traj = detail::trajectory_until(rc, rc.compare_time);
    if (!detail::covers(traj, rc.compare_time)) {
        std::fprintf(stderr, "compare: trajectory stopped (%s) before compare_time\n",
                     std::string(to_string(traj->termination)).c_str());
        return kGuardTermination;
    }
    const VortexConfig cfg = detail::config_at(rc, traj, rc.compare_time);
    FieldGrid rec = sample_fields(cfg, rc.params.h_ex, profile, rc.m, rc.grid, FieldRequest{}, rc.compare_time,
                                  static_cast<unsigned>(rc.threads));

    FieldGrid ext = ext_input;
    const bool external_h = ext.has_h();
    if (!external_h) ext.h = rec.h;
    ext.A = rec.A;
    compute_supercurrent(ext);

    const double alpha = align_phase(rec, ext);
    FieldGrid aligned = rec;
    rotate_phase(aligned, alpha);

    struct Row {
        const char* name;
        double p;
        FieldSelector which;
    };
    const Row rows[] = {{"u", 2.0, FieldSelector::u},
                        {"abs_u2", 2.0, FieldSelector::rho},
                        {"h", 2.0, FieldSelector::h},
                        {"j", 4.0 / 3.0, FieldSelector::j}};
    std::string csv = "quantity,exponent,relative_error\n";
    json errors = json::object();
    for (const auto& r : rows) {
        const double e = relative_grid_norm(ext, aligned, r.p, r.which);
        csv += std::string(r.name) + ',' + io::format_real(r.p) + ',' + io::format_real(e) + '\n';
        errors[r.name] = e;
    }

    // Vortex positions: each external detection against the nearest
    // reconstructed one of the same degree.
    const auto found_ext = locate_vortices(ext);
    const auto found_rec = locate_vortices(aligned);
    double position_error = found_ext.size() == found_rec.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (const auto& e : found_ext) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : found_rec)
            if (r.degree == e.degree) best = std::min(best, distance(r.position, e.position));
        position_error = std::max(position_error, best);
    }
    csv += "vortex_position,inf," + io::format_real(position_error) + '\n';
    io::write_atomic(std::filesystem::path(rc.out) / "errors.csv", csv);

    json meta = detail::base_meta(rc, "compare");
    meta["phase_alignment"] = alpha;
    meta["h_source"] = external_h ? "external" : "reconstruction";
    meta["errors"] = errors;
    meta["vortex_position_error"] = std::isfinite(position_error) ? json(position_error) : json(nullptr);
    meta["detected_external"] = detail::vortices_json(found_ext);
    meta["detected_reconstruction"] = detail::vortices_json(found_rec);
    detail::write_meta(rc, std::move(meta), start);
    std::printf("compare: u %.3e  h %.3e  j %.3e\n", errors["u"].get<double>(), errors["h"].get<double>(),
                errors["j"].get<double>());
    return kOk;
}

/// Command-line overrides; each mirrors one configuration key.
struct Overrides {
    std::optional<std::string> config, out, case_name, positions, degrees, times, mode, dt_list, m_list, external,
        profile_file;
    std::optional<double> ell, alpha0, beta0, h_ex, T, dt, epsilon, r0, dr, min_pair_dist, min_boundary_dist,
        compare_time;
    std::optional<int> m, nx, ny, threads;
};

namespace detail {

// "[...]" is taken as JSON, anything else as a comma-separated list.
inline json parse_list(const std::string& text, const char* flag) {
    std::string s = text;
    if (s.find('[') == std::string::npos) s = "[" + s + "]";
    try {
        json v = json::parse(s);
        if (!v.is_array()) throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("cannot parse list given to ") + flag);
    }
}

inline json merged_config(const Overrides& ov) {
    json cfg = json::object();
    if (ov.config) {
        try {
            cfg = json::parse(io::read_file(*ov.config));
        } catch (const json::parse_error& e) {
            throw ConfigError("invalid JSON in " + *ov.config + ": " + e.what());
        }
        if (!cfg.is_object()) throw ConfigError("configuration must be a JSON object");
    }
    if (ov.case_name) {
        cfg.erase("positions");
        cfg.erase("degrees");
        const std::string& c = *ov.case_name;
        if (!c.empty() && std::all_of(c.begin(), c.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            cfg["case"] = std::stoi(c);
        else
            cfg["case"] = c;
    }
    if (ov.positions || ov.degrees) cfg.erase("case");
    if (ov.positions) cfg["positions"] = parse_list(*ov.positions, "--positions");
    if (ov.degrees) cfg["degrees"] = parse_list(*ov.degrees, "--degrees");
    if (ov.times) cfg["times"] = parse_list(*ov.times, "--times");
    if (ov.dt_list) cfg["dt_list"] = parse_list(*ov.dt_list, "--dt-list");
    if (ov.m_list) cfg["m_list"] = parse_list(*ov.m_list, "--m-list");
    auto set = [&](const char* key, const auto& value) {
        if (value) cfg[key] = *value;
    };
    set("out", ov.out);
    set("mode", ov.mode);
    set("external", ov.external);
    set("profile_file", ov.profile_file);
    set("ell", ov.ell);
    set("alpha0", ov.alpha0);
    set("beta0", ov.beta0);
    set("h_ex", ov.h_ex);
    set("T", ov.T);
    set("dt", ov.dt);
    set("epsilon", ov.epsilon);
    set("r0", ov.r0);
    set("dr", ov.dr);
    set("min_pair_dist", ov.min_pair_dist);
    set("min_boundary_dist", ov.min_boundary_dist);
    set("compare_time", ov.compare_time);
    set("m", ov.m);
    set("nx", ov.nx);
    set("ny", ov.ny);
    set("threads", ov.threads);
    return cfg;
}

inline void add_override_flags(CLI::App& sub, Overrides& ov) {
    sub.add_option("--config", ov.config, "JSON configuration file");
    sub.add_option("--out", ov.out, "output directory");
    sub.add_option("--case", ov.case_name, "named initial configuration: 1, 2, 3, 4 or dipole");
    sub.add_option("--ell", ov.ell, "half separation for the dipole case");
    sub.add_option("--positions", ov.positions, "vortex positions as JSON, e.g. [[-0.5,0],[0.5,0]]");
    sub.add_option("--degrees", ov.degrees, "vortex degrees, e.g. 1,-1");
    sub.add_option("--alpha0", ov.alpha0, "dissipative mobility coefficient");
    sub.add_option("--beta0", ov.beta0, "Hamiltonian mobility coefficient");
    sub.add_option("--h-ex", ov.h_ex, "applied magnetic field");
    sub.add_option("--T", ov.T, "final time");
    sub.add_option("--dt", ov.dt, "time step");
    sub.add_option("--m", ov.m, "number of Fourier modes");
    sub.add_option("--epsilon", ov.epsilon, "core size");
    sub.add_option("--r0", ov.r0, "radius of the core profile");
    sub.add_option("--dr", ov.dr, "node spacing of the core profile");
    sub.add_option("--nx", ov.nx, "grid nodes in x");
    sub.add_option("--ny", ov.ny, "grid nodes in y");
    sub.add_option("--times", ov.times, "reconstruction times, e.g. 0,0.5,1");
    sub.add_option("--mode", ov.mode, "convergence study parameter: dt or m");
    sub.add_option("--dt-list", ov.dt_list, "time steps for the dt study");
    sub.add_option("--m-list", ov.m_list, "mode counts for the m study");
    sub.add_option("--min-pair-dist", ov.min_pair_dist, "collision guard distance");
    sub.add_option("--min-boundary-dist", ov.min_boundary_dist, "boundary guard distance");
    sub.add_option("--external", ov.external, "external field CSV for compare");
    sub.add_option("--profile-file", ov.profile_file, "precomputed profile cache");
    sub.add_option("--compare-time", ov.compare_time, "time of the compared field");
    sub.add_option("--threads", ov.threads, "worker threads for grid sampling (0 = all cores)");
}

}  // namespace detail

inline int run_command(const std::string& command, const RunConfig& rc) {
    if (command != "profile" && !rc.has_vortices) {
        throw ConfigError("give either 'case' or both 'positions' and 'degrees'");
    }
    if (command == "trajectory") return cmd_trajectory(rc);
    if (command == "reconstruct") return cmd_reconstruct(rc);
    if (command == "convergence") return cmd_convergence(rc);
    if (command == "profile") return cmd_profile(rc);
    if (command == "compare") return cmd_compare(rc);
    throw ConfigError("unknown command " + command);
}

/// Entry point of the executable.
inline int run(int argc, char** argv) {
    CLI::App app{"Singular-limit vortex dynamics and field reconstruction on the unit disk", "vortexflow"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1, 1);
    Overrides ov;
    const std::pair<const char*, const char*> commands[] = {
        {"trajectory", "integrate vortex trajectories"},
        {"reconstruct", "sample order parameter, supercurrent and field at given times"},
        {"convergence", "time-step or mode-count convergence study"},
        {"profile", "solve and store the core profile"},
        {"compare", "compare the reconstruction with an external field"}};
    for (const auto& [name, help] : commands) detail::add_override_flags(*app.add_subcommand(name, help), ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalidConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const RunConfig rc = parse_config(detail::merged_config(ov));
        return run_command(command, rc);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "vortexflow: invalid configuration: %s\n", e.what());
        return kInvalidConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "vortexflow: I/O error: %s\n", e.what());
        return kIoFailure;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "vortexflow: invalid input: %s\n", e.what());
        return kInvalidConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "vortexflow: %s\n", e.what());
        return kFailure;
    }
}

}  // namespace vortexflow::cli

#endif
