// Constructors for the closed-form pulse/curve families declared in
// families.hpp. Special-function evaluation comes from specfun.hpp; the
// excitation family only builds a curve (its pulse has no closed form and
// goes through the generic kcurve synthesis).

#include "pulses/families.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "pulses/errors.hpp"
#include "pulses/specfun.hpp"

namespace pulses::families {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Common phase law of the oscillating families, as a function of sin s.
double osc_phase(double nu, double sin_s) {
    const double x = nu * sin_s;
    return x + std::atan(x);
}

void check_nu(double nu) {
    if (!(nu >= 0.0)) throw usage_error("oscillation parameter nu must be >= 0");
}

/// Single real root of s^3 + 3 s + (4 - 3 t) = 0 (Cardano; the discriminant
/// is always positive). Maps t in [0, 8/3] onto s in [-1, 1].
double cheb_s_of_t(double t) {
    const double q = 4.0 - 3.0 * t;
    const double r = std::sqrt(q * q / 4.0 + 1.0);
    const double s = std::cbrt(-q / 2.0 + r) + std::cbrt(-q / 2.0 - r);
    return std::clamp(s, -1.0, 1.0);
}

}  // namespace

Pulse anger_weber_pulse(double nu) {
    check_nu(nu);
    Pulse p;
    p.T = kPi;
    p.omega = [nu](double t) {
        const double x = nu * std::sin(t);
        return std::sqrt(1.0 + x * x);
    };
    p.phi = [nu](double t) { return osc_phase(nu, std::sin(t)); };
    return p;
}

KCurve anger_weber_curve(double nu) {
    check_nu(nu);
    KCurve c;
    c.s0 = 0.0;
    c.sT = kPi;
    c.d1 = [nu](double s) -> Vec3 {
        return {std::sin(s) * std::cos(nu * s), std::sin(s) * std::sin(nu * s),
                std::cos(s)};
    };
    c.d2 = [nu](double s) -> Vec3 {
        return {std::cos(s) * std::cos(nu * s) - nu * std::sin(s) * std::sin(nu * s),
                std::cos(s) * std::sin(nu * s) + nu * std::sin(s) * std::cos(nu * s),
                -std::sin(s)};
    };
    c.d3 = [nu](double s) -> Vec3 {
        const double a = 1.0 + nu * nu;
        return {-a * std::sin(s) * std::cos(nu * s) - 2.0 * nu * std::cos(s) * std::sin(nu * s),
                -a * std::sin(s) * std::sin(nu * s) + 2.0 * nu * std::cos(s) * std::cos(nu * s),
                -std::cos(s)};
    };
    c.kz = [](double s) { return std::sin(s); };
    return c;
}

Pulse jacobi_pulse(double nu, double m) {
    return generalized_jacobi_pulse(nu, {m});
}

Pulse generalized_jacobi_pulse(double nu, const std::vector<double>& moduli) {
    check_nu(nu);
    const double K = specfun::generalized_K(moduli);  // validates the moduli
    auto mods = std::make_shared<const std::vector<double>>(moduli);
    Pulse p;
    p.T = 2.0 * K;
    p.omega = [nu, mods](double t) {
        const double sin_s = std::sin(specfun::generalized_amplitude(t, *mods));
        double prod = 1.0;
        for (double m : *mods) prod *= std::sqrt(1.0 - m * sin_s * sin_s);
        const double x = nu * sin_s;
        return prod * std::sqrt(1.0 + x * x);
    };
    p.phi = [nu, mods](double t) {
        return osc_phase(nu, std::sin(specfun::generalized_amplitude(t, *mods)));
    };
    return p;
}

Pulse amplitude_fixed_pulse(double nu, double eps_trunc) {
    check_nu(nu);
    if (!(eps_trunc >= 0.0 && eps_trunc < 0.5))
        throw usage_error("truncation fraction must lie in [0, 0.5)");
    const double root = std::sqrt(1.0 + nu * nu);
    const double T = kPi * root;
    const double lo = eps_trunc * T;
    const double hi = (1.0 - eps_trunc) * T;
    Pulse p;
    p.T = T;
    p.omega = [](double) { return 1.0; };
    p.phi = [nu, root, lo, hi](double t) {
        const double tc = std::clamp(t, lo, hi);
        // Clamp s off the exact endpoints so ln sin s stays finite there.
        const double s = std::clamp(tc / root, 1e-12, kPi - 1e-12);
        return nu * std::log(std::sin(s));
    };
    p.graded_mesh = true;
    return p;
}

Pulse chebyshev_pulse(int n) {
    if (n < 1) throw std::domain_error("polynomial order n must be >= 1");
    const double c = 2.0 * n + 1.0;
    Pulse p;
    p.T = 8.0 / 3.0;
    p.omega = [c](double t) {
        const double s = cheb_s_of_t(t);
        const double w = std::max(0.0, 1.0 - s * s);
        const double d = 1.0 + s * s;
        return std::sqrt(4.0 + c * c * w) / (d * d);
    };
    p.phi = [c](double t) {
        const double s = cheb_s_of_t(t);
        const double w = std::max(0.0, 1.0 - s * s);
        // artanh(x) = ln((1+x)/(1-x))/2; the argument sqrt(w/2) <= sqrt(1/2),
        // the clamp guards only floating-point excursions.
        const double x = std::min(std::sqrt(0.5 * w), 1.0 - 1e-15);
        const double artanh = 0.5 * std::log((1.0 + x) / (1.0 - x));
        return std::sqrt(2.0) * c * artanh + std::atan(0.5 * c * std::sqrt(w));
    };
    return p;
}

KCurve chebyshev_curve(int n) {
    if (n < 1) throw std::domain_error("polynomial order n must be >= 1");
    using specfun::ChebKind;
    const double c = 2.0 * n + 1.0;
    auto U = [n](double s) { return specfun::chebyshev(ChebKind::second, 2 * n, s); };
    auto T = [n](double s) { return specfun::chebyshev(ChebKind::first, 2 * n + 1, s); };
    KCurve k;
    k.s0 = -1.0;
    k.sT = 1.0;
    k.d1 = [U, T](double s) -> Vec3 {
        const double w = std::max(0.0, 1.0 - s * s);
        return {std::pow(w, 1.5) * U(s), w * T(s), -2.0 * s};
    };
    // T' = (2n+1) U and U'(s) = ((2n+1) T - s U) / (s^2 - 1) give:
    k.d2 = [U, T, c](double s) -> Vec3 {
        const double w = std::max(0.0, 1.0 - s * s);
        return {std::sqrt(w) * (-2.0 * s * U(s) - c * T(s)),
                -2.0 * s * T(s) + w * c * U(s), -2.0};
    };
    k.d3 = [U, T, c](double s) -> Vec3 {
        const double w = std::max(0.0, 1.0 - s * s);
        // The x component diverges like 1/sqrt(w) at the ends; it is only
        // evaluated at interior quadrature nodes.
        return {3.0 * c * s * T(s) / std::sqrt(w) - (c * c + 2.0) * std::sqrt(w) * U(s),
                -(c * c + 2.0) * T(s) - 3.0 * c * s * U(s), 0.0};
    };
    k.kz = [](double s) { return 1.0 - s * s; };
    return k;
}

KCurve excitation_curve(double theta_T, int n) {
    if (!(theta_T > 0.0 && theta_T < kPi))
        throw std::domain_error("target flip angle must lie in (0, pi)");
    if (n < 1 || n % 2 == 0)
        throw std::domain_error("excitation order n must be odd and >= 1");
    const double st = std::sin(theta_T);
    const double c2 = std::cos(0.5 * theta_T) * std::cos(0.5 * theta_T);
    const double s2 = 1.0 - c2;
    // Jacobi polynomial with the P_{-1} = 0 convention the n = 1 case needs.
    auto P = [](int k, double a, double b, double x) {
        return k < 0 ? 0.0 : specfun::jacobi_polynomial(k, a, b, x);
    };
    KCurve c;
    c.s0 = -1.0;
    c.sT = 1.0;
    c.theta_T = theta_T;
    c.endpoint_scale = 2.0;
    c.d1 = [st, c2, s2, n, P](double s) -> Vec3 {
        const double p0 = P(n, 0, 1, s), p1 = P(n + 1, 0, 1, s);
        return {0.5 * (1.0 + s) * st * (p0 + p1),
                0.5 * (1.0 + s) * (n + 1.0) * (p0 - p1),
                2.0 * (c2 - s * s2)};
    };
    c.d2 = [st, s2, n, P](double s) -> Vec3 {
        const double p0 = P(n, 0, 1, s), p1 = P(n + 1, 0, 1, s);
        const double q0 = P(n - 1, 1, 2, s), q1 = P(n, 1, 2, s);
        return {0.5 * st * (p0 + p1) +
                    0.25 * (1.0 + s) * st * ((n + 2.0) * q0 + (n + 3.0) * q1),
                0.5 * (n + 1.0) * (p0 - p1) +
                    0.25 * (1.0 + s) * (n + 1.0) * ((n + 2.0) * q0 - (n + 3.0) * q1),
                -2.0 * s2};
    };
    // d/ds P_k^{(a,b)} = (k+a+b+1)/2 P_{k-1}^{(a+1,b+1)} (A&S 22.8), so the
    // second-derivative terms differentiate to (n+3)/2 P_{n-2}^{(2,3)} and
    // (n+4)/2 P_{n-1}^{(2,3)} respectively.
    c.d3 = [st, n, P](double s) -> Vec3 {
        const double q0 = P(n - 1, 1, 2, s), q1 = P(n, 1, 2, s);
        const double r0 = P(n - 2, 2, 3, s), r1 = P(n - 1, 2, 3, s);
        return {0.5 * st * ((n + 2.0) * q0 + (n + 3.0) * q1) +
                    0.125 * (1.0 + s) * (n + 3.0) * st *
                        ((n + 2.0) * r0 + (n + 4.0) * r1),
                0.5 * (n + 1.0) * ((n + 2.0) * q0 - (n + 3.0) * q1) +
                    0.125 * (1.0 + s) * (n + 3.0) * (n + 1.0) *
                        ((n + 2.0) * r0 - (n + 4.0) * r1),
                0.0};
    };
    c.kz = [c2](double s) { return (1.0 + s) * (1.0 + s) * c2 + 1.0 - s * s; };
    return c;
}

Pulse scale_pulse(const Pulse& p, double omega_max) {
    if (!(omega_max > 0.0)) throw usage_error("omega_max must be > 0");
    Pulse out;
    out.T = p.T / omega_max;
    const auto om = p.omega;
    const auto ph = p.phi;
    out.omega = [om, omega_max](double tau) { return omega_max * om(omega_max * tau); };
    out.phi = [ph, omega_max](double tau) { return ph(omega_max * tau); };
    out.segments = p.segments;
    for (auto& seg : out.segments) {
        seg.dt /= omega_max;
        seg.omega *= omega_max;
    }
    out.omega_max = omega_max * p.omega_max.value_or(1.0);
    out.graded_mesh = p.graded_mesh;
    return out;
}

}  // namespace pulses::families
