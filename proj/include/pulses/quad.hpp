// Adaptive panel quadrature on a Gauss-Kronrod 7/15 pair (the Kronrod rule
// extends 7-point Gauss-Legendre), with recursive interval bisection until
// the per-panel error estimate meets an absolute tolerance. Works for real-
// and complex-valued integrands; callers control the initial panel count so
// oscillatory integrands start resolved.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <tuple>
#include <utility>

#include "pulses/errors.hpp"

namespace pulses {

namespace quadrule {

// Abscissae of the 15-point Kronrod rule mapped to [0,1]; odd indices are
// the embedded 7-point Gauss-Legendre nodes.
inline constexpr double xgk15[15] = {
    0.0042723144395936940576063989283284,
    0.025446043828620756865888097308925,
    0.067567788320115451661251881887438,
    0.12923440720030276995800022632466,
    0.20695638226615442611944217787823,
    0.29707742431130140792205907018797,
    0.3961075224960507457083735971537,
    0.5,
    0.6038924775039492542916264028463,
    0.7029225756886985365667896985542,
    0.79304361773384557388055782212177,
    0.87076559279969723004199977367534,
    0.93243221167988454833874811811256,
    0.97455395617137918762296067143325,
    0.99572768556040625043124236981384};

inline constexpr double wgk15[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr double wg7[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

}  // namespace quadrule

namespace detail {

inline double abs_value(double v) { return std::fabs(v); }
inline double abs_value(const std::complex<double>& v) { return std::abs(v); }

/// One GK7/15 panel: returns {kronrod value, |kronrod - gauss| error estimate,
/// L1 magnitude of the panel (for the machine-precision acceptance floor)}.
template <typename F, typename T = std::invoke_result_t<F, double>>
std::tuple<T, double, double> gk15_panel(F&& f, double a, double b) {
    const double w = b - a;
    T k15{}, g7{};
    double resabs = 0.0;
    int ig = 0;
    for (int j = 0; j < 15; ++j) {
        T y = f(a + w * quadrule::xgk15[j]);
        k15 += quadrule::wgk15[j] * y;
        resabs += quadrule::wgk15[j] * abs_value(y);
        if (j % 2 == 1) g7 += quadrule::wg7[ig++] * y;
    }
    // Weights are the classical [-1,1] constants (they sum to 2), so the
    // change of variables onto [a,b] carries a factor (b-a)/2.
    k15 = 0.5 * w * k15;
    g7 = 0.5 * w * g7;
    resabs *= 0.5 * w;
    return {k15, abs_value(k15 - g7), resabs};
}

/// Recurse on a panel whose value/error/L1 estimates are already computed.
/// A panel is accepted when it meets the tolerance, when its estimate is at
/// the round-off floor relative to its magnitude, when it has shrunk to the
/// width resolvable in double, or — at least six bisection levels down, so an
/// under-resolved oscillation cannot trigger it — when bisecting no longer
/// reduces the error estimate (the evaluation-noise floor near singular
/// endpoints, where node rounding dominates and splitting cannot help).
template <typename F, typename T = std::invoke_result_t<F, double>>
T integrate_recursive(F&& f, double a, double b, double tol, int depth, int level,
                      long& budget, T q, double err, double resabs) {
    if (err <= tol || err <= 5e-15 * resabs ||
        b - a <= 1e-14 * (std::fabs(a) + std::fabs(b) + 1.0))
        return q;
    if (depth <= 0) throw numeric_error("adaptive quadrature failed to converge");
    budget -= 2;
    if (budget < 0)
        throw numeric_error(
            "adaptive quadrature panel budget exceeded (integrand too rough for the "
            "requested tolerance)");
    const double mid = 0.5 * (a + b);
    auto [ql, el, rl] = gk15_panel(f, a, mid);
    auto [qr, er, rr] = gk15_panel(f, mid, b);
    if (level >= 6 && el + er >= 0.99 * err) return ql + qr;
    return integrate_recursive(f, a, mid, 0.5 * tol, depth - 1, level + 1, budget, ql, el,
                               rl) +
           integrate_recursive(f, mid, b, 0.5 * tol, depth - 1, level + 1, budget, qr, er,
                               rr);
}

}  // namespace detail

/// Integrate f over [a,b] to absolute tolerance abs_tol. `initial_panels`
/// pre-splits the interval (>= 1); pass the oscillation count for integrands
/// like e^{i delta k_z}.
template <typename F, typename T = std::invoke_result_t<F, double>>
T adaptive_integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                     int initial_panels = 1, int max_depth = 60) {
    if (!(b >= a)) throw usage_error("adaptive_integrate: requires b >= a");
    if (a == b) return T{};
    if (initial_panels < 1) initial_panels = 1;
    T total{};
    double h = (b - a) / initial_panels;
    double panel_tol = abs_tol / initial_panels;
    // Caps total work so a non-convergent (e.g. noisy) integrand raises an
    // error instead of splitting panels without bound.
    long budget = 400000 + 2000L * initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        double pa = a + i * h;
        double pb = (i + 1 == initial_panels) ? b : a + (i + 1) * h;
        auto [q, err, resabs] = detail::gk15_panel(f, pa, pb);
        --budget;
        total += detail::integrate_recursive(f, pa, pb, panel_tol, max_depth, 0, budget, q,
                                             err, resabs);
    }
    return total;
}

}  // namespace pulses
