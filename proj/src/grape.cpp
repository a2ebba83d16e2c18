// Phase-only GRAPE: averaged inversion cost over an offset grid, adjoint
// gradients through the exact per-segment rotations, and backtracking
// gradient descent on the segment phases.
#include "pulses/grape.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pulses/errors.hpp"
#include "pulses/geom.hpp"

namespace pulses::grape {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Rotation vector of one segment at offset delta, in the w = (u_y, -u_x,
/// -delta) convention shared with the propagator.
Vec3 segment_rotvec(double omega, double phi, double dt, double delta) {
    return {omega * std::sin(phi) * dt, -omega * std::cos(phi) * dt, -delta * dt};
}

/// Averaged cost of a phase vector (amplitude and segment length fixed).
double phases_cost(const std::vector<double>& phi, const GrapeConfig& cfg) {
    double sum = 0.0;
    for (double d : cfg.grid) {
        Vec3 M{0.0, 0.0, 1.0};
        for (double p : phi) M = rotate(segment_rotvec(cfg.omega_max, p, cfg.dt, d), M);
        sum += 1.0 + M.z;
    }
    return sum / static_cast<double>(cfg.grid.size());
}

/// Averaged cost plus its exact phase gradient. Forward states M_0..M_K are
/// stored per offset; the costate lambda_K = z-hat (the cost is linear in
/// M_K) is pulled back through the transposed rotations, and
///   dJ/dphi_k = lambda_{k+1} . ((J_l(r_k) dr_k/dphi_k) x M_{k+1}),
/// using the left Jacobian J_l of the rotation exponential.
double phases_cost_grad(const std::vector<double>& phi, const GrapeConfig& cfg,
                        std::vector<double>& grad) {
    const std::size_t K = phi.size();
    grad.assign(K, 0.0);
    std::vector<Vec3> r(K);
    std::vector<Vec3> M(K + 1);
    double sum = 0.0;
    for (double d : cfg.grid) {
        M[0] = {0.0, 0.0, 1.0};
        for (std::size_t k = 0; k < K; ++k) {
            r[k] = segment_rotvec(cfg.omega_max, phi[k], cfg.dt, d);
            M[k + 1] = rotate(r[k], M[k]);
        }
        sum += 1.0 + M[K].z;
        Vec3 lam{0.0, 0.0, 1.0};
        for (std::size_t k = K; k-- > 0;) {
            const Vec3 a{cfg.omega_max * std::cos(phi[k]) * cfg.dt,
                         cfg.omega_max * std::sin(phi[k]) * cfg.dt, 0.0};
            grad[k] += dot(lam, cross(left_jacobian(r[k]).apply(a), M[k + 1]));
            lam = rotate(-r[k], lam);  // R(r)^T lam
        }
    }
    const double n = static_cast<double>(cfg.grid.size());
    for (double& g : grad) g /= n;
    return sum / n;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void check_config(const GrapeConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw usage_error("grape config needs dt > 0");
    if (!(cfg.omega_max > 0.0)) throw usage_error("grape config needs omega_max > 0");
    if (cfg.grid.empty()) throw usage_error("grape config needs a non-empty offset grid");
    if (cfg.max_iters < 0) throw usage_error("grape config needs max_iters >= 0");
    if (!(cfg.grad_tol >= 0.0)) throw usage_error("grape config needs grad_tol >= 0");
}

/// Extract the phase vector, checking the segment grid against the config.
std::vector<double> matched_phases(const Pulse& pulse, const GrapeConfig& cfg) {
    if (pulse.segments.empty())
        throw usage_error("grape needs a piecewise pulse (uniform segments)");
    std::vector<double> phi;
    phi.reserve(pulse.segments.size());
    for (const Segment& s : pulse.segments) {
        if (std::fabs(s.dt - cfg.dt) > 1e-9 * cfg.dt)
            throw usage_error("pulse segment length does not match the configured dt");
        if (std::fabs(s.omega - cfg.omega_max) > 1e-9 * cfg.omega_max)
            throw usage_error("pulse amplitude does not match the configured omega_max");
        phi.push_back(s.phi);
    }
    return phi;
}

Pulse phases_to_pulse(const std::vector<double>& phi, const GrapeConfig& cfg) {
    std::vector<Segment> segs;
    segs.reserve(phi.size());
    for (double p : phi) segs.push_back({cfg.dt, cfg.omega_max, p});
    return make_piecewise_pulse(std::move(segs), cfg.omega_max);
}

}  // namespace

GrapeConfig parse_grape_config(const std::string& text) {
    std::map<std::string, double> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::string key, eq, value, extra;
        std::istringstream ls(line);
        if (!(ls >> key)) continue;  // blank line
        if (!(ls >> eq) || eq != "=" || !(ls >> value) || (ls >> extra))
            throw usage_error("config line is not 'key = value': " + line);
        if (kv.count(key)) throw usage_error("duplicate config key '" + key + "'");
        try {
            std::size_t used = 0;
            kv[key] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw usage_error("config key '" + key + "' has a non-numeric value: " + value);
        }
    }
    for (const char* key : {"dt_us", "omega_max_hz", "grid_min_hz", "grid_max_hz",
                            "grid_points", "max_iters", "grad_tol"})
        if (!kv.count(key)) throw usage_error(std::string("missing config key '") + key + "'");
    for (const auto& [key, value] : kv) {
        (void)value;
        bool known = false;
        for (const char* k : {"dt_us", "omega_max_hz", "grid_min_hz", "grid_max_hz",
                              "grid_points", "max_iters", "grad_tol"})
            known = known || key == k;
        if (!known) throw usage_error("unknown config key '" + key + "'");
    }

    GrapeConfig cfg;
    cfg.dt = kv["dt_us"] * 1e-6;
    cfg.omega_max = kTwoPi * kv["omega_max_hz"];
    const double lo = kv["grid_min_hz"], hi = kv["grid_max_hz"];
    const int points = static_cast<int>(kv["grid_points"]);
    if (lo > hi) throw usage_error("grid_min_hz must be <= grid_max_hz");
    if (points < 1) throw usage_error("grid_points must be >= 1");
    if (points == 1 && lo != hi)
        throw usage_error("a single-point grid needs grid_min_hz == grid_max_hz");
    cfg.grid.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        cfg.grid.push_back(kTwoPi * (lo + (hi - lo) * f));
    }
    cfg.max_iters = static_cast<int>(kv["max_iters"]);
    cfg.grad_tol = kv["grad_tol"];
    check_config(cfg);
    return cfg;
}

GrapeConfig load_grape_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_grape_config(buf.str());
}

Pulse grape_initial_pulse(const GrapeConfig& config, double nu) {
    check_config(config);
    if (!(nu >= 0.0)) throw usage_error("oscillation parameter nu must be >= 0");
    const double root = std::sqrt(1.0 + nu * nu);
    const double T = kPi * root / config.omega_max;
    const int K = std::max(1, static_cast<int>(std::lround(T / config.dt)));
    std::vector<Segment> segs;
    segs.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const double tm = (k + 0.5) * config.dt;
        double x = config.omega_max * tm / root;
        x = std::min(std::max(x, 0.02 * kPi), 0.98 * kPi);  // truncated tails
        segs.push_back({config.dt, config.omega_max, nu * std::log(std::sin(x))});
    }
    return make_piecewise_pulse(std::move(segs), config.omega_max);
}

double average_cost(const Pulse& pulse, const std::vector<double>& grid, int n_steps) {
    if (grid.empty()) throw usage_error("offset grid must not be empty");
    double sum = 0.0;
    for (double d : grid) sum += 1.0 + propagate(pulse, d, {0.0, 0.0, 1.0}, n_steps).z;
    return sum / static_cast<double>(grid.size());
}

double cost_and_gradient(const Pulse& pulse, const GrapeConfig& config,
                         std::vector<double>& grad) {
    check_config(config);
    return phases_cost_grad(matched_phases(pulse, config), config, grad);
}

GrapeResult grape_optimize(const Pulse& initial, const GrapeConfig& config) {
    check_config(config);
    std::vector<double> phi = matched_phases(initial, config);

    GrapeResult out;
    std::vector<double> grad;
    double cost = phases_cost_grad(phi, config, grad);
    double gnorm = norm2(grad);
    if (!std::isfinite(cost) || !std::isfinite(gnorm))
        throw numeric_error("non-finite gradient at iteration 0");
    out.cost.push_back(cost);
    out.grad_norm.push_back(gnorm);

    double step = config.step0;
    std::vector<double> trial(phi.size());
    for (int it = 0; it < config.max_iters; ++it) {
        if (gnorm < config.grad_tol) {
            out.converged = true;
            break;
        }
        // Backtracking line search with sufficient decrease c * step * |g|^2.
        const double g2 = gnorm * gnorm;
        bool accepted = false;
        while (step > 1e-16) {
            for (std::size_t k = 0; k < phi.size(); ++k)
                trial[k] = phi[k] - step * grad[k];
            if (phases_cost(trial, config) <= cost - config.armijo_c * step * g2) {
                accepted = true;
                break;
            }
            step *= config.backtrack;
        }
        if (!accepted) break;  // no descent at any representable step
        phi.swap(trial);
        cost = phases_cost_grad(phi, config, grad);
        gnorm = norm2(grad);
        if (!std::isfinite(cost) || !std::isfinite(gnorm))
            throw numeric_error("non-finite gradient at iteration " + std::to_string(it + 1));
        out.cost.push_back(cost);
        out.grad_norm.push_back(gnorm);
        step *= config.step_grow;
    }
    if (gnorm < config.grad_tol) out.converged = true;
    out.pulse = phases_to_pulse(phi, config);
    return out;
}

}  // namespace pulses::grape
