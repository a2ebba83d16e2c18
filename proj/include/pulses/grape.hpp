// Phase-only gradient optimizer for piecewise-constant pulses: the averaged
// inversion cost over an offset grid, its exact adjoint gradient through the
// per-segment rotations, and deterministic backtracking gradient descent.
#pragma once

#include <string>
#include <vector>

#include "pulses/bloch.hpp"

namespace pulses::grape {

/// Optimization setup: segment length and fixed amplitude of the piecewise
/// pulse, the offset grid the cost is averaged over, and the stopping /
/// step-size rule parameters. Build directly or parse from a config file.
struct GrapeConfig {
    double dt = 0.0;           ///< segment duration (s)
    double omega_max = 0.0;    ///< fixed segment amplitude (rad/s)
    std::vector<double> grid;  ///< offsets averaged over (rad/s)
    int max_iters = 400;
    double grad_tol = 1e-8;  ///< stop once the gradient 2-norm drops below this
    double armijo_c = 1e-4;  ///< sufficient-decrease constant
    double backtrack = 0.5;  ///< trial-step shrink factor on rejection
    double step_grow = 1.3;  ///< trial-step growth factor after acceptance
    double step0 = 1.0;      ///< first trial step
};

/// Parse a flat `key = value` config (# comments and blank lines allowed).
/// Keys, all required: dt_us, omega_max_hz, grid_min_hz, grid_max_hz,
/// grid_points, max_iters, grad_tol. Frequencies are plain Hz (converted to
/// rad/s by 2 pi); durations are microseconds. Missing, unknown, duplicate,
/// or malformed keys raise usage_error naming the key. The grid is
/// grid_points evenly spaced offsets; a single-point grid needs
/// grid_min_hz == grid_max_hz.
GrapeConfig parse_grape_config(const std::string& text);

/// parse_grape_config applied to the contents of `path`.
GrapeConfig load_grape_config(const std::string& path);

/// Standard initial guess: the truncated constant-amplitude profile
/// phi(t) = nu ln sin(x), x = omega_max t / sqrt(1 + nu^2) clipped to
/// [0.02 pi, 0.98 pi], sampled at segment midpoints. Duration
/// pi sqrt(1 + nu^2) / omega_max, rounded to a whole number of segments.
Pulse grape_initial_pulse(const GrapeConfig& config, double nu);

/// Mean over the grid of the inversion cost 1 + M_z(delta, T), each offset
/// propagated from M0 = +z (exactly, segment by segment, for piecewise
/// pulses; n_steps midpoint samples otherwise).
double average_cost(const Pulse& pulse, const std::vector<double>& grid,
                    int n_steps = 4096);

/// Averaged cost and its exact gradient with respect to the segment phases,
/// via one forward pass and one backward (adjoint) pass per offset. The
/// pulse must match config.dt / config.omega_max segment-wise.
double cost_and_gradient(const Pulse& pulse, const GrapeConfig& config,
                         std::vector<double>& grad);

struct GrapeResult {
    Pulse pulse;                    ///< optimized pulse, same segment grid
    std::vector<double> cost;       ///< averaged cost per iterate; [0] = initial
    std::vector<double> grad_norm;  ///< gradient 2-norm per iterate
    bool converged = false;         ///< grad_norm reached config.grad_tol
};

/// Gradient descent on the segment phases with the amplitude pinned to
/// config.omega_max: backtracking (Armijo) line search, step carried over
/// and regrown between iterations, until the gradient norm passes grad_tol,
/// max_iters steps were taken, or the line search stalls. Deterministic:
/// no randomness, fixed evaluation order. The cost never increases across
/// accepted steps.
GrapeResult grape_optimize(const Pulse& initial, const GrapeConfig& config);

}  // namespace pulses::grape
