// Exact two-level (Bloch) dynamics: pulse representation, propagation by
// composed axis-angle rotations, toggling-frame trajectories, inversion
// cost profiles (exact / toggling-frame / first-order average Hamiltonian),
// and reconstruction of a pulse from a toggling-frame axis trajectory.
//
// Conventions: the rotating-frame equation of motion is dM/dt = w x M with
// w = (u_y, -u_x, -delta), u_x = Omega cos(phi), u_y = Omega sin(phi).
// The control-only part generates R0 (dR0/dt = [w_c]x R0, w_c = (u_y, -u_x, 0));
// the toggling axis is v(t) = third row of R0(t), with v(0) = +z.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pulses/geom.hpp"

namespace pulses {

/// One piecewise-constant control interval.
struct Segment {
    double dt;     ///< duration
    double omega;  ///< amplitude (>= 0)
    double phi;    ///< phase (radians)
};

/// A control pulse: duration plus amplitude/phase samplers. If `segments`
/// is non-empty the pulse is piecewise-constant and propagation treats each
/// segment exactly; otherwise the samplers are evaluated at step midpoints.
struct Pulse {
    double T = 0.0;
    std::function<double(double)> omega;
    std::function<double(double)> phi;
    std::vector<Segment> segments;
    std::optional<double> omega_max;  ///< physical unit scale (rad/s), if any
    /// Endpoint-singular phases (e.g. log-divergent ones) integrate better on
    /// a cosine-graded mesh t_i = T/2 (1 - cos(pi i/n)); families set this.
    bool graded_mesh = false;
};

/// Build a piecewise-constant pulse; samplers are derived from the segments.
Pulse make_piecewise_pulse(std::vector<Segment> segments,
                           std::optional<double> omega_max = std::nullopt);

/// Toggling-frame trajectory on a time grid: R0(t_i) and the axis rows
/// v(t_i) = third row of R0(t_i).
struct TogglingTrajectory {
    std::vector<double> t;
    std::vector<Mat3> R0;
    std::vector<Vec3> v;
};

enum class CostMethod { exact, toggling, aht };

/// Parse "exact" / "toggling" / "aht"; anything else is a usage error.
CostMethod parse_cost_method(const std::string& name);
std::string cost_method_name(CostMethod m);

struct CostProfile {
    std::vector<double> delta;
    std::vector<double> J;
    CostMethod method = CostMethod::exact;
};

/// Propagate M0 through the pulse at offset delta by composing one exact
/// rotation per step. Piecewise pulses use one rotation per segment (exact;
/// n_steps is ignored); analytic pulses sample (Omega, phi) at the midpoints
/// of n_steps mesh intervals. Norm is preserved to machine precision.
Vec3 propagate(const Pulse& pulse, double delta, const Vec3& M0, int n_steps = 4096);

/// Inversion cost over an offset grid.
///   exact:    J = 1 + M_z(delta, T), M(0) = +z
///   toggling: J = 1 - L_z, L = R0(T)^T M(delta, T)
///   aht:      J = 1 - L_z, L = exp(-delta [k(T)]x) z, k(T) = int_0^T v dt
/// The pulse is sampled once and reused across the grid. For analytic pulses
/// the delta-independent endpoint product R0(T) is composed on a 32x finer
/// mesh so that toggling agrees with exact to ~1e-10 for inversion pulses;
/// piecewise pulses compose R0(T) exactly per segment.
CostProfile cost_profile(const Pulse& pulse, const std::vector<double>& grid,
                         CostMethod method, int n_steps = 4096);

/// Control-only trajectory: R0 composed step by step, v rows extracted.
/// Piecewise pulses are subdivided to roughly n_steps total sub-steps
/// (exactly, since the control is constant within a segment).
TogglingTrajectory toggling_trajectory(const Pulse& pulse, int n_steps = 4096);

/// Reconstruct the generating pulse from a toggling-axis trajectory:
/// Omega = ||dv/dt|| and phi = int (v x v') . v'' / Omega^2 dt (phi(0) = 0),
/// using second-order finite differences (central inside, one-sided at the
/// ends) and trapezoidal integration on a uniform grid. The samples must be
/// unit vectors; a vanishing interior Omega or a jump between consecutive
/// samples leaves the curvature undefined and raises a numeric error.
Pulse pulse_from_v(const TogglingTrajectory& traj);

}  // namespace pulses
