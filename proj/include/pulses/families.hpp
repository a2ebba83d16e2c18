// Closed-form pulse and curve families: oscillating inversion pulses on
// trigonometric and (generalized) Jacobi-amplitude profiles, the
// constant-amplitude log-phase pulse, polynomial locally robust inversion
// pulses, Jacobi-polynomial excitation curves for arbitrary flip angles,
// and physical-unit rescaling.
#pragma once

#include <vector>

#include "pulses/bloch.hpp"
#include "pulses/kcurve.hpp"

namespace pulses::families {

/// Oscillating inversion pulse: Omega(t) = sqrt(1 + nu^2 sin^2 t),
/// phi(t) = nu sin t + arctan(nu sin t), T = pi. nu = 0 is the square
/// pi pulse. Requires nu >= 0.
Pulse anger_weber_pulse(double nu);

/// The k-space curve of that pulse:
/// d1 = (sin s cos nu s, sin s sin nu s, cos s), k_z = sin s, s in [0, pi].
KCurve anger_weber_curve(double nu);

/// Elliptic generalization: s(t) = am(t, m), T = 2 K(m),
/// Omega = sqrt((1 - m sin^2 s)(1 + nu^2 sin^2 s)), phase law as above in s.
/// m = 0 reduces to anger_weber_pulse. Requires 0 <= m < 1.
Pulse jacobi_pulse(double nu, double m);

/// Multi-modulus version: s(t) = am_N(t, moduli), T = 2 K_N(moduli),
/// Omega = prod_i sqrt(1 - m_i sin^2 s) * sqrt(1 + nu^2 sin^2 s).
/// moduli = [m] reduces to jacobi_pulse(nu, m).
Pulse generalized_jacobi_pulse(double nu, const std::vector<double>& moduli);

/// Constant-amplitude pulse: Omega = 1, phi(t) = nu ln sin(t / sqrt(1+nu^2)),
/// T = pi sqrt(1+nu^2). The log-divergent phase is evaluated only on
/// [eps_trunc*T, (1-eps_trunc)*T] and held constant outside; eps_trunc = 0
/// keeps the full phase (clamped a hair inside the singular endpoints) and
/// is the exactly inverting instance. Requires nu >= 0, 0 <= eps_trunc < 0.5.
Pulse amplitude_fixed_pulse(double nu, double eps_trunc = 0.02);

/// Polynomial locally robust inversion pulse of order n >= 1: the curve's
/// moments C_0..C_{n-2} vanish, so the transfer scales as delta^n.
/// Closed forms: s(t) from the single real root of s^3 + 3s + (4-3t) = 0,
/// Omega = sqrt(4 + (2n+1)^2 (1-s^2)) / (1+s^2)^2,
/// phi = sqrt(2)(2n+1) artanh(sqrt((1-s^2)/2)) + arctan((2n+1) sqrt(1-s^2)/2),
/// T = 8/3.
Pulse chebyshev_pulse(int n);

/// The k-space curve of that pulse:
/// d1 = ((1-s^2)^{3/2} U_{2n}, (1-s^2) T_{2n+1}, -2s), k_z = 1 - s^2,
/// s in [-1, 1].
KCurve chebyshev_curve(int n);

/// Excitation curve for a target flip angle theta_T in (0, pi): Jacobi
/// polynomial tangent components with k_z = (1+s)^2 cos^2(theta_T/2) + 1 - s^2,
/// s in [-1, 1]. Robust to order N with n = 2N - 1; n must be odd and >= 1.
/// The pulse has no closed form; synthesize it with pulse_from_kcurve.
KCurve excitation_curve(double theta_T, int n);

/// Physical-unit rescaling by the peak amplitude omega_max (rad/s):
/// tau = t / omega_max, Omega_p(tau) = omega_max * Omega(t), T_p = T / omega_max,
/// phase unchanged. Offsets scale the same way: J(delta) of the scaled pulse
/// equals J(delta / omega_max) of the dimensionless one.
Pulse scale_pulse(const Pulse& p, double omega_max);

}  // namespace pulses::families
