// Special-function implementations: AGM elliptic integrals, generalized
// incomplete integrals by adaptive quadrature, amplitude inversion by
// safeguarded Newton, polynomial recurrences, Anger/Weber quadrature.

#include "pulses/specfun.hpp"

#include <cmath>
#include <stdexcept>

#include "pulses/errors.hpp"
#include "pulses/quad.hpp"

namespace pulses::specfun {

namespace {

void check_modulus(double m) {
    if (!(m >= 0.0)) throw std::domain_error("elliptic modulus parameter must satisfy m >= 0");
    if (!(m < 1.0)) throw std::domain_error("elliptic modulus parameter must satisfy m < 1");
}

void check_moduli(const std::vector<double>& moduli) {
    if (moduli.empty()) throw pulses::usage_error("modulus list must be non-empty");
    for (double m : moduli) check_modulus(m);
}

/// prod_i sqrt(1 - m_i sin^2 phi), the reciprocal of the F_N integrand.
double modulus_product(double phi, const std::vector<double>& moduli) {
    const double s2 = std::sin(phi) * std::sin(phi);
    double p = 1.0;
    for (double m : moduli) p *= std::sqrt(1.0 - m * s2);
    return p;
}

}  // namespace

double complete_elliptic_K(double m) {
    check_modulus(m);
    // AGM iteration: a <- (a+b)/2, b <- sqrt(ab); K = pi / (2 * limit).
    double a = 1.0;
    double b = std::sqrt(1.0 - m);
    for (int i = 0; i < 60 && std::fabs(a - b) > 2e-16 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    const double pi = 3.14159265358979323846;
    return pi / (2.0 * a);
}

double generalized_F(double phi, const std::vector<double>& moduli, double abs_tol) {
    check_moduli(moduli);
    if (!std::isfinite(phi)) throw std::domain_error("amplitude must be finite");
    if (phi < 0.0) return -generalized_F(-phi, moduli, abs_tol);
    if (phi == 0.0) return 0.0;
    const double pi = 3.14159265358979323846;
    // One panel per half-period keeps the near-singular peaks at phi = pi/2 + k*pi
    // from being averaged away before the adaptive refinement sees them.
    const int panels = 1 + static_cast<int>(phi / (0.5 * pi));
    return adaptive_integrate([&moduli](double t) { return 1.0 / modulus_product(t, moduli); },
                              0.0, phi, abs_tol, panels);
}

double generalized_K(const std::vector<double>& moduli, double abs_tol) {
    const double pi = 3.14159265358979323846;
    return generalized_F(0.5 * pi, moduli, abs_tol);
}

double generalized_amplitude(double t, const std::vector<double>& moduli) {
    check_moduli(moduli);
    if (!std::isfinite(t)) throw std::domain_error("argument must be finite");
    const double pi = 3.14159265358979323846;
    const double tol = 1e-10;  // quadrature tighter than the inversion target
    const double K2 = 2.0 * generalized_K(moduli, 1e-12);
    // Reduce by the quasi-period: am(t + 2 K_N) = am(t) + pi.
    double cycles = std::floor(t / K2);
    double r = t - cycles * K2;
    if (r < 0.0) {  // guard against floor rounding at negative multiples
        r += K2;
        cycles -= 1.0;
    }
    // Invert F_N on [0, 2 K_N] -> [0, pi] by safeguarded Newton.
    // F is strictly increasing with F' = 1 / modulus_product, so the Newton
    // step is -(F(phi) - r) * modulus_product(phi).
    double lo = 0.0, hi = pi;
    double phi = pi * r / K2;  // linear initial guess
    double f = generalized_F(phi, moduli, 1e-12) - r;
    for (int it = 0; it < 80; ++it) {
        if (std::fabs(f) < 0.5 * tol) break;
        if (f > 0.0) hi = phi; else lo = phi;
        double next = phi - f * modulus_product(phi, moduli);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
        phi = next;
        f = generalized_F(phi, moduli, 1e-12) - r;
    }
    return phi + pi * cycles;
}

double jacobi_amplitude(double u, double m) {
    return generalized_amplitude(u, {m});
}

double chebyshev(ChebKind kind, int n, double x) {
    if (n < 0) throw std::domain_error("polynomial degree must be non-negative");
    double prev = 1.0;                                       // T_0 = U_0 = 1
    double cur = (kind == ChebKind::first) ? x : 2.0 * x;    // T_1 = x, U_1 = 2x
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double jacobi_polynomial(int n, double a, double b, double x) {
    if (n < 0) throw std::domain_error("polynomial degree must be non-negative");
    if (!(a > -1.0) || !(b > -1.0)) throw std::domain_error("jacobi indices must exceed -1");
    double prev = 1.0;                                      // P_0
    double cur = 0.5 * ((a + b + 2.0) * x + (a - b));       // P_1
    if (n == 0) return prev;
    for (int k = 2; k <= n; ++k) {
        // A&S 22.7.1: c1 P_k = c2 (c3 x + c4) P_{k-1} - c5 P_{k-2}
        const double c1 = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0);
        const double c2 = 2.0 * k + a + b - 1.0;
        const double c3 = (2.0 * k + a + b) * (2.0 * k + a + b - 2.0);
        const double c4 = a * a - b * b;
        const double c5 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b);
        const double next = (c2 * (c3 * x + c4) * cur - c5 * prev) / c1;
        prev = cur;
        cur = next;
    }
    return cur;
}

AngerWeber anger_weber(double nu, double z) {
    if (!std::isfinite(nu) || !std::isfinite(z))
        throw std::domain_error("anger_weber arguments must be finite");
    const double pi = 3.14159265358979323846;
    // Phase nu*theta - z*sin(theta) sweeps at most |nu|*pi + 2|z| radians;
    // seed roughly one panel per half oscillation so the 15-point rule
    // resolves each lobe before adaptive refinement.
    const int panels = 1 + static_cast<int>((std::fabs(nu) * pi + 2.0 * std::fabs(z)) / pi);
    const double tol = 3e-11;
    const double cj = adaptive_integrate(
        [nu, z](double th) { return std::cos(nu * th - z * std::sin(th)); }, 0.0, pi, tol, panels);
    const double se = adaptive_integrate(
        [nu, z](double th) { return std::sin(nu * th - z * std::sin(th)); }, 0.0, pi, tol, panels);
    return {cj / pi, se / pi};
}

}  // namespace pulses::specfun
