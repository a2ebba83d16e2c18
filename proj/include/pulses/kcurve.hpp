// k-space curve machinery: arc-length reparameterization between the curve
// parameter s and time t, pulse synthesis from curve derivatives, the
// transfer integral ell(delta) of the shortcut-to-adiabaticity picture with
// its cost, and the local robustness moments C_n.
//
// A curve is described by its first three s-derivatives d1, d2, d3 in closed
// form. Time is arc length: dt = ||d1|| ds, so the toggling axis traced by
// the synthesized pulse is v(t) = d1/||d1|| at s(t).
#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "pulses/bloch.hpp"
#include "pulses/geom.hpp"

namespace pulses {

struct KCurve {
    double s0 = 0.0;
    double sT = 1.0;
    std::function<Vec3(double)> d1;  ///< dk/ds
    std::function<Vec3(double)> d2;  ///< d2k/ds2
    std::function<Vec3(double)> d3;  ///< d3k/ds3
    /// Closed-form k_z(s) with k_z(s0) = 0; when absent, operations fall back
    /// to cumulative quadrature of the third component of d1.
    std::function<double(double)> kz;
    double theta_T = 3.14159265358979323846;  ///< target flip angle
    std::optional<double> endpoint_scale;     ///< magnitude of d1 at sT, if fixed
};

/// Arc-length time t(s) = int_{s0}^{s} ||d1|| ds'. Fails with a numeric
/// error when ||d1|| vanishes on a subinterval (degenerate curve).
double time_of_s(const KCurve& curve, double s);

/// Inverse of time_of_s by safeguarded Newton iteration (ds/dt = 1/||d1||),
/// with |time_of_s(s_of_t(t)) - t| < 1e-10. t must lie in [0, T].
double s_of_t(const KCurve& curve, double t);

/// Synthesize the pulse generating this curve:
///   Omega(s) = ||d1 x d2|| / ||d1||^3,
///   phi(s)   = int tau ||d1|| ds,  tau = (d1 x d2) . d3 / ||d1 x d2||^2,
/// evaluated at s(t) (phi(0) = 0). n_samples sets the internal anchor
/// resolution of the s <-> t and phase tables; the returned samplers are
/// callable at any t in [0, T]. Vanishing curvature ||d1 x d2|| at an
/// interior anchor is a numeric error (the phase is undefined there).
Pulse pulse_from_kcurve(const KCurve& curve, int n_samples = 4096);

/// Transfer amplitude ell(delta) = i delta e^{-i delta k_z(sT)}
/// int (dk_x/ds + i dk_y/ds) e^{i delta k_z(s)} ds  (absolute accuracy 1e-10).
std::complex<double> sta_transfer(const KCurve& curve, double delta);

/// Same integral with the first `suppress` Taylor terms of e^{i delta k_z}
/// removed. When the curve's literal moments C_0..C_{suppress-1} vanish this
/// equals sta_transfer exactly but avoids the cancellation that otherwise
/// floors |ell| near machine epsilon; it is how O(delta^n) scaling laws are
/// measured at tiny offsets.
std::complex<double> sta_transfer_suppressed(const KCurve& curve, double delta, int suppress);

/// Transfer amplitude from a sampled toggling trajectory (k' = v), cumulative
/// trapezoid for k_z and trapezoidal quadrature for the integral.
std::complex<double> sta_transfer_from_v(const TogglingTrajectory& traj, double delta);

/// J_STA = 1 - cos(|ell|).
double sta_cost(const std::complex<double>& ell);

/// True when |ell| has left the first branch (>= 2 pi), where J_STA wraps
/// back toward zero and stops being meaningful.
bool sta_wrapped(const std::complex<double>& ell);

/// Local robustness moments C_j = int (dk_x/ds + i dk_y/ds) k_z(s)^j ds for
/// j = 0..N (quadrature tolerance 1e-12). A curve robust to order N has
/// C_0..C_{N-1} all vanishing, making ell(delta) = O(delta^{N+1}).
std::vector<std::complex<double>> local_moments(const KCurve& curve, int N);

}  // namespace pulses
