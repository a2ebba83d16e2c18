// Curve reparameterization, pulse synthesis, transfer integrals, moments.
// All quadrature is the adaptive Gauss-Kronrod rule from quad.hpp; s(t)
// inversions are safeguarded Newton iterations on the forward integral.

#include "pulses/kcurve.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "pulses/errors.hpp"
#include "pulses/quad.hpp"

namespace pulses {

namespace {

constexpr double kCurvatureEps = 1e-10;  // ||d1 x d2|| below this is "zero curvature"
constexpr double kSpeedEps = 1e-12;      // ||d1|| below this counts as degenerate

double speed(const KCurve& c, double s) { return norm(c.d1(s)); }

/// Reject curves whose speed ||d1|| vanishes on a whole subinterval of
/// [lo, hi]: two consecutive scan points below threshold.
void check_not_degenerate(const KCurve& c, double lo, double hi) {
    const int n = 128;
    bool prev_zero = false;
    for (int i = 0; i <= n; ++i) {
        const double s = lo + (hi - lo) * i / n;
        const bool zero = speed(c, s) < kSpeedEps;
        if (zero && prev_zero)
            throw numeric_error("degenerate curve: ||d1|| vanishes on a subinterval");
        prev_zero = zero;
    }
}

double time_integral(const KCurve& c, double lo, double hi, double tol) {
    return adaptive_integrate([&c](double s) { return speed(c, s); }, lo, hi, tol, 2);
}

double omega_of_s(const KCurve& c, double s) {
    const Vec3 v1 = c.d1(s);
    const double sp = norm(v1);
    return norm(cross(v1, c.d2(s))) / (sp * sp * sp);
}

/// Phase-rate integrand tau(s) ||d1(s)|| (torsion times speed).
double phase_rate(const KCurve& c, double s) {
    const Vec3 v1 = c.d1(s);
    const Vec3 n = cross(v1, c.d2(s));
    const double n2 = std::max(dot(n, n), kCurvatureEps * kCurvatureEps);
    return dot(n, c.d3(s)) / n2 * norm(v1);
}

/// Integrate the phase rate over [lo, hi]. Curves whose third derivative
/// blows up like 1/sqrt(s - s0) at an endpoint (polynomial inversion
/// curves do) keep the phase integrable; substituting s = end -+ u^2 on an
/// interval touching that endpoint turns the integrand into a smooth one,
/// which plain bisection cannot achieve in double precision.
double phase_integral(const KCurve& c, double lo, double hi, bool left_end, bool right_end) {
    if (hi <= lo) return 0.0;
    if (left_end) {
        const double r = std::sqrt(hi - lo);
        return adaptive_integrate(
            [&c, lo](double u) { return phase_rate(c, lo + u * u) * 2.0 * u; }, 0.0, r,
            1e-13);
    }
    if (right_end) {
        const double r = std::sqrt(hi - lo);
        return adaptive_integrate(
            [&c, hi](double u) { return phase_rate(c, hi - u * u) * 2.0 * u; }, 0.0, r,
            1e-13);
    }
    return adaptive_integrate([&c](double s) { return phase_rate(c, s); }, lo, hi, 1e-13);
}

/// Anchored prefix tables for t(s) and phi(s) plus a fast local inversion.
/// Built once per synthesized pulse and shared by its samplers.
struct CurveTables {
    KCurve c;
    std::vector<double> sa, ta, pa;  // anchors: s, t(s), phi(s)
    double T = 0.0;

    CurveTables(const KCurve& curve, int anchors) : c(curve) {
        check_not_degenerate(c, c.s0, c.sT);
        const int A = std::max(64, anchors);
        sa.resize(A + 1);
        ta.resize(A + 1);
        pa.resize(A + 1);
        const double h = (c.sT - c.s0) / A;
        sa[0] = c.s0;
        ta[0] = 0.0;
        pa[0] = 0.0;
        for (int j = 1; j <= A; ++j) {
            sa[j] = (j == A) ? c.sT : c.s0 + h * j;
            ta[j] = ta[j - 1] + time_integral(c, sa[j - 1], sa[j], 1e-13);
            pa[j] = pa[j - 1] + phase_integral(c, sa[j - 1], sa[j], j == 1, j == A);
            // The phase is undefined where the curvature vanishes inside the curve.
            if (j < A && norm(cross(c.d1(sa[j]), c.d2(sa[j]))) < kCurvatureEps)
                throw numeric_error(
                    "zero curvature: ||d1 x d2|| vanishes at an interior sample");
        }
        T = ta.back();
    }

    /// Invert t(s) within the bracketing anchor interval (Newton + bisection).
    double s_at(double t) const {
        if (t <= 0.0) return sa.front();
        if (t >= T) return sa.back();
        const auto it = std::upper_bound(ta.begin(), ta.end(), t);
        const std::size_t j = std::min<std::size_t>(
            ta.size() - 2,
            static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                0, std::distance(ta.begin(), it) - 1)));
        double lo = sa[j], hi = sa[j + 1];
        const double tl = ta[j];
        double s = lo + (hi - lo) * (t - tl) / std::max(ta[j + 1] - tl, 1e-300);
        double f = tl + time_integral(c, lo, s, 1e-13) - t;
        for (int it2 = 0; it2 < 60; ++it2) {
            if (std::fabs(f) < 1e-12 * (1.0 + T)) break;
            if (f > 0.0) hi = s; else lo = s;
            const double sp = speed(c, s);
            double next = (sp > kSpeedEps) ? s - f / sp : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            s = next;
            f = ta[j] + time_integral(c, sa[j], s, 1e-13) - t;
        }
        return s;
    }

    double phase_at(double s) const {
        if (s <= sa.front()) return pa.front();
        if (s >= sa.back()) return pa.back();
        const auto it = std::upper_bound(sa.begin(), sa.end(), s);
        const std::size_t j = std::min<std::size_t>(
            sa.size() - 2,
            static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                0, std::distance(sa.begin(), it) - 1)));
        return pa[j] + phase_integral(c, sa[j], s, j == 0, false);
    }
};

/// k_z evaluator: the closed form when present, else an anchored cumulative
/// quadrature of the third component of d1.
std::function<double(double)> make_kz(const KCurve& c) {
    if (c.kz) return c.kz;
    struct Table {
        KCurve c;
        std::vector<double> sa, ka;
    };
    auto tab = std::make_shared<Table>();
    tab->c = c;
    const int A = 1024;
    tab->sa.resize(A + 1);
    tab->ka.resize(A + 1);
    tab->sa[0] = c.s0;
    tab->ka[0] = 0.0;
    for (int j = 1; j <= A; ++j) {
        tab->sa[j] = (j == A) ? c.sT : c.s0 + (c.sT - c.s0) * j / A;
        tab->ka[j] = tab->ka[j - 1] +
                     adaptive_integrate([&c](double s) { return c.d1(s).z; },
                                        tab->sa[j - 1], tab->sa[j], 1e-13);
    }
    return [tab](double s) {
        const auto it = std::upper_bound(tab->sa.begin(), tab->sa.end(), s);
        const std::size_t j = std::min<std::size_t>(
            tab->sa.size() - 2,
            static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                0, std::distance(tab->sa.begin(), it) - 1)));
        return tab->ka[j] + adaptive_integrate([tab](double x) { return tab->c.d1(x).z; },
                                               tab->sa[j], std::max(s, tab->sa[j]), 1e-13);
    };
}

/// exp(x) minus its first `m` Taylor terms, i.e. sum_{j>=m} x^j / j!.
/// Series for small |x| (no cancellation), direct subtraction otherwise.
std::complex<double> expm_tail(const std::complex<double>& x, int m) {
    if (m <= 0) return std::exp(x);
    if (std::abs(x) <= 1.0) {
        std::complex<double> term = 1.0;
        for (int j = 1; j <= m; ++j) term *= x / static_cast<double>(j);
        std::complex<double> sum = term;
        for (int j = m + 1; j < m + 60; ++j) {
            term *= x / static_cast<double>(j);
            sum += term;
            if (std::abs(term) < 1e-20 * std::abs(sum)) break;
        }
        return sum;
    }
    std::complex<double> partial = 0.0, term = 1.0;
    for (int j = 0; j < m; ++j) {
        partial += term;
        term *= x / static_cast<double>(j + 1);
    }
    return std::exp(x) - partial;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::complex<double> transfer_core(const KCurve& curve, double delta, int suppress) {
    check_not_degenerate(curve, curve.s0, curve.sT);
    if (delta == 0.0) return {0.0, 0.0};
    const auto kz = make_kz(curve);
    // Oscillation-aware initial panel count from the k_z range.
    double kmin = 0.0, kmax = 0.0, kend = 0.0;
    for (int i = 0; i <= 128; ++i) {
        const double s = curve.s0 + (curve.sT - curve.s0) * i / 128;
        const double k = kz(s);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
        if (i == 128) kend = k;
    }
    const double range = kmax - kmin;
    const int panels =
        2 + static_cast<int>(std::fabs(delta) * range / 3.14159265358979323846);
    const std::complex<double> I(0.0, 1.0);
    // Absolute tolerance scaled to the magnitude of the suppressed integrand
    // so tiny high-order tails are still resolved to ~12 relative digits.
    double tol = 1e-10;
    if (suppress > 0) {
        const double amp = std::fabs(delta) * std::max(std::fabs(kmin), std::fabs(kmax));
        tol = std::max(1e-290, 1e-12 * std::pow(amp, suppress) / factorial(suppress));
    }
    const auto integrand = [&](double s) {
        const Vec3 v1 = curve.d1(s);
        const std::complex<double> perp(v1.x, v1.y);
        return perp * expm_tail(I * delta * kz(s), suppress);
    };
    const std::complex<double> integral =
        adaptive_integrate(integrand, curve.s0, curve.sT, tol, panels);
    return I * delta * std::exp(-I * delta * kend) * integral;
}

}  // namespace

double time_of_s(const KCurve& curve, double s) {
    if (!(s >= curve.s0 && s <= curve.sT))
        throw std::domain_error("s outside the curve's parameter interval");
    check_not_degenerate(curve, curve.s0, curve.sT);
    if (s == curve.s0) return 0.0;
    return time_integral(curve, curve.s0, s, 1e-11);
}

double s_of_t(const KCurve& curve, double t) {
    check_not_degenerate(curve, curve.s0, curve.sT);
    const double T = time_integral(curve, curve.s0, curve.sT, 1e-12);
    if (!(t >= -1e-12 * (1.0 + T) && t <= T * (1.0 + 1e-12) + 1e-12))
        throw std::domain_error("t outside the pulse duration [0, T]");
    if (t <= 0.0) return curve.s0;
    if (t >= T) return curve.sT;
    double lo = curve.s0, hi = curve.sT;
    double s = lo + (hi - lo) * (t / T);
    double f = time_integral(curve, curve.s0, s, 1e-12) - t;
    for (int it = 0; it < 80; ++it) {
        if (std::fabs(f) < 1e-11) break;
        if (f > 0.0) hi = s; else lo = s;
        const double sp = speed(curve, s);
        double next = (sp > kSpeedEps) ? s - f / sp : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
        f = time_integral(curve, curve.s0, s, 1e-12) - t;
    }
    return s;
}

Pulse pulse_from_kcurve(const KCurve& curve, int n_samples) {
    if (n_samples < 2) throw usage_error("pulse synthesis requires n_samples >= 2");
    auto tab = std::make_shared<const CurveTables>(curve, n_samples);
    Pulse p;
    p.T = tab->T;
    p.omega = [tab](double t) { return omega_of_s(tab->c, tab->s_at(t)); };
    p.phi = [tab](double t) { return tab->phase_at(tab->s_at(t)); };
    return p;
}

std::complex<double> sta_transfer(const KCurve& curve, double delta) {
    return transfer_core(curve, delta, 0);
}

std::complex<double> sta_transfer_suppressed(const KCurve& curve, double delta, int suppress) {
    if (suppress < 0) throw usage_error("suppression order must be >= 0");
    return transfer_core(curve, delta, suppress);
}

std::complex<double> sta_transfer_from_v(const TogglingTrajectory& traj, double delta) {
    const std::size_t n = traj.t.size();
    if (n < 2 || traj.v.size() != n)
        throw usage_error("transfer from trajectory requires >= 2 matching samples");
    if (delta == 0.0) return {0.0, 0.0};
    const std::complex<double> I(0.0, 1.0);
    // Cumulative trapezoid for k_z, then trapezoidal transfer integral.
    std::complex<double> integral = 0.0;
    double kz = 0.0;
    std::complex<double> prev = std::complex<double>(traj.v[0].x, traj.v[0].y);
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = traj.t[i] - traj.t[i - 1];
        kz += 0.5 * dt * (traj.v[i - 1].z + traj.v[i].z);
        const std::complex<double> cur =
            std::complex<double>(traj.v[i].x, traj.v[i].y) * std::exp(I * delta * kz);
        integral += 0.5 * dt * (prev + cur);
        prev = cur;
    }
    return I * delta * std::exp(-I * delta * kz) * integral;
}

double sta_cost(const std::complex<double>& ell) {
    // 1 - cos|ell|, written as 2 sin^2(|ell|/2) so costs ~|ell|^2/2 survive
    // down to the underflow limit instead of vanishing at |ell| ~ 1e-8.
    const double h = std::sin(0.5 * std::abs(ell));
    return 2.0 * h * h;
}

bool sta_wrapped(const std::complex<double>& ell) {
    return std::abs(ell) >= 2.0 * 3.14159265358979323846 - 1e-9;
}

std::vector<std::complex<double>> local_moments(const KCurve& curve, int N) {
    if (N < 0) throw usage_error("moment order must be >= 0");
    check_not_degenerate(curve, curve.s0, curve.sT);
    const auto kz = make_kz(curve);
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) {
        out.push_back(adaptive_integrate(
            [&](double s) {
                const Vec3 v1 = curve.d1(s);
                return std::complex<double>(v1.x, v1.y) * std::pow(kz(s), j);
            },
            curve.s0, curve.sT, 1e-12, 2));
    }
    return out;
}

}  // namespace pulses
