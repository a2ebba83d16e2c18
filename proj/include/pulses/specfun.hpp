// Special functions used by the pulse families: complete/incomplete elliptic
// integrals and their generalized (multi-modulus) forms, the Jacobi amplitude
// and its generalized inverse, Chebyshev and Jacobi polynomials, and the
// Anger/Weber oscillatory integrals.
//
// Conventions: elliptic integrals use the parameter convention, i.e.
// K(m) = int_0^{pi/2} dphi / sqrt(1 - m sin^2 phi)  (DLMF 19.2.8 with m = k^2).
#pragma once

#include <vector>

namespace pulses::specfun {

/// Complete elliptic integral of the first kind, K(m), 0 <= m < 1,
/// by the arithmetic-geometric mean iteration. Relative accuracy ~1e-15.
double complete_elliptic_K(double m);

/// Generalized incomplete elliptic integral of the first kind:
/// F_N(phi | m_1..m_N) = int_0^phi dtheta / prod_i sqrt(1 - m_i sin^2 theta),
/// by adaptive quadrature to absolute tolerance abs_tol. Odd in phi.
double generalized_F(double phi, const std::vector<double>& moduli, double abs_tol = 1e-10);

/// Generalized complete integral K_N = F_N(pi/2 | moduli).
double generalized_K(const std::vector<double>& moduli, double abs_tol = 1e-10);

/// Generalized Jacobi amplitude am_N(t | moduli): the inverse of F_N, found
/// by safeguarded Newton iteration on the forward integral (bisection
/// fallback). Extended to all real t by the quasi-periodicity
/// am_N(t + 2 K_N) = am_N(t) + pi. |F_N(result) - t| < 1e-10.
double generalized_amplitude(double t, const std::vector<double>& moduli);

/// Jacobi amplitude am(u | m); the N = 1 case of generalized_amplitude.
double jacobi_amplitude(double u, double m);

enum class ChebKind { first, second };

/// Chebyshev polynomial T_n(x) (kind = first) or U_n(x) (kind = second)
/// via the three-term recurrence.
double chebyshev(ChebKind kind, int n, double x);

/// Jacobi polynomial P_n^{(a,b)}(x) via the standard three-term recurrence
/// (A&S 22.7.1). Requires a > -1, b > -1.
double jacobi_polynomial(int n, double a, double b, double x);

struct AngerWeber {
    double J;  ///< Anger function J_nu(z)
    double E;  ///< Weber function E_nu(z)
};

/// Anger and Weber functions by direct quadrature of their definitions:
/// J_nu(z) = (1/pi) int_0^pi cos(nu theta - z sin theta) dtheta,
/// E_nu(z) = (1/pi) int_0^pi sin(nu theta - z sin theta) dtheta.
/// Absolute accuracy 1e-10. At integer nu, J reduces to the Bessel function.
AngerWeber anger_weber(double nu, double z);

}  // namespace pulses::specfun
