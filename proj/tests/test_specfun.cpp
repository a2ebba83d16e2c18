// Tests for the special-function layer: elliptic integrals and amplitudes,
// polynomial recurrences, Anger/Weber quadrature. Reference values were
// frozen from a high-precision arbitrary-precision computation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pulses/errors.hpp"
#include "pulses/quad.hpp"
#include "pulses/specfun.hpp"

using namespace pulses;
using namespace pulses::specfun;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Bessel J_n(z) by its ascending power series; good to ~1e-14 for the
/// moderate (n, z) used here. Independent oracle for integer-order Anger.
double bessel_j_series(int n, double z) {
    const double half = 0.5 * z;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= half / i;  // (z/2)^n / n!
    double sum = term;
    for (int k = 1; k < 80; ++k) {
        term *= -half * half / (static_cast<double>(k) * (n + k));
        sum += term;
        if (std::fabs(term) < 1e-18 * (std::fabs(sum) + 1e-30)) break;
    }
    return sum;
}

}  // namespace

TEST_CASE("complete elliptic integral by AGM") {
    SUBCASE("K(0) is pi/2") {
        CHECK(complete_elliptic_K(0.0) == doctest::Approx(kPi / 2).epsilon(1e-14));
    }
    SUBCASE("reference values in the parameter convention") {
        CHECK(complete_elliptic_K(0.5) == doctest::Approx(1.8540746773013719).epsilon(1e-13));
        CHECK(complete_elliptic_K(0.95) == doctest::Approx(2.9083372484445517).epsilon(1e-13));
        CHECK(complete_elliptic_K(0.9025) == doctest::Approx(2.5900112308745012).epsilon(1e-12));
    }
    SUBCASE("domain errors outside [0, 1)") {
        CHECK_THROWS_AS(complete_elliptic_K(-0.1), std::domain_error);
        CHECK_THROWS_AS(complete_elliptic_K(1.0), std::domain_error);
        CHECK_THROWS_AS(complete_elliptic_K(1.5), std::domain_error);
    }
    SUBCASE("monotone increasing in m") {
        double prev = complete_elliptic_K(0.0);
        for (double m = 0.1; m < 0.999; m += 0.1) {
            const double k = complete_elliptic_K(m);
            CHECK(k > prev);
            prev = k;
        }
    }
}

TEST_CASE("generalized incomplete integral") {
    SUBCASE("single modulus reduces to the classical F") {
        CHECK(generalized_F(kPi / 2, {0.5}) == doctest::Approx(1.854074677).epsilon(1e-9));
        CHECK(generalized_F(kPi / 2, {0.5}) ==
              doctest::Approx(complete_elliptic_K(0.5)).epsilon(1e-12));
        CHECK(generalized_F(kPi / 2, {0.95}) ==
              doctest::Approx(complete_elliptic_K(0.95)).epsilon(1e-12));
    }
    SUBCASE("zero modulus entries are inert") {
        CHECK(generalized_F(1.1, {0.3, 0.0}) ==
              doctest::Approx(generalized_F(1.1, {0.3})).epsilon(1e-12));
        CHECK(generalized_F(1.1, {0.0, 0.0}) == doctest::Approx(1.1).epsilon(1e-12));
    }
    SUBCASE("two-modulus complete value") {
        CHECK(generalized_K({0.3, 0.6}) == doctest::Approx(2.148867111464173).epsilon(1e-12));
    }
    SUBCASE("odd in phi and zero at zero") {
        CHECK(generalized_F(0.0, {0.5}) == 0.0);
        CHECK(generalized_F(-0.8, {0.5, 0.2}) ==
              doctest::Approx(-generalized_F(0.8, {0.5, 0.2})).epsilon(1e-13));
    }
    SUBCASE("argument past pi/2 keeps accumulating") {
        const double full = generalized_F(kPi, {0.5});
        CHECK(full == doctest::Approx(2.0 * complete_elliptic_K(0.5)).epsilon(1e-11));
    }
    SUBCASE("invalid moduli rejected") {
        CHECK_THROWS_AS(generalized_F(1.0, {}), usage_error);
        CHECK_THROWS_AS(generalized_F(1.0, {0.5, 1.0}), std::domain_error);
        CHECK_THROWS_AS(generalized_F(1.0, {-0.2}), std::domain_error);
    }
}

TEST_CASE("jacobi amplitude inverts the elliptic integral") {
    SUBCASE("m = 0 gives the identity") {
        CHECK(jacobi_amplitude(0.7, 0.0) == doctest::Approx(0.7).epsilon(1e-12));
    }
    SUBCASE("quarter period maps to pi/2") {
        const double K = complete_elliptic_K(0.5);
        CHECK(jacobi_amplitude(K, 0.5) == doctest::Approx(kPi / 2).epsilon(1e-10));
    }
    SUBCASE("reference value") {
        CHECK(jacobi_amplitude(1.0, 0.5) == doctest::Approx(0.9323150798838539).epsilon(1e-10));
    }
    SUBCASE("forward-inverse round trip") {
        for (double m : {0.0, 0.25, 0.5, 0.95}) {
            const double K2 = 2.0 * complete_elliptic_K(m);
            for (double u : {0.05, 0.4, 1.1, 0.5 * K2, 0.93 * K2, 1.7 * K2, -0.6}) {
                const double a = jacobi_amplitude(u, m);
                CHECK(generalized_F(a, {m}, 1e-12) == doctest::Approx(u).epsilon(5e-10));
            }
        }
    }
    SUBCASE("strictly increasing in u") {
        double prev = jacobi_amplitude(0.0, 0.8);
        for (int i = 1; i <= 24; ++i) {
            const double a = jacobi_amplitude(0.25 * i, 0.8);
            CHECK(a > prev);
            prev = a;
        }
    }
    SUBCASE("quasi-periodicity am(u + 2K) = am(u) + pi") {
        const double K2 = 2.0 * complete_elliptic_K(0.6);
        CHECK(jacobi_amplitude(0.8 + K2, 0.6) ==
              doctest::Approx(jacobi_amplitude(0.8, 0.6) + kPi).epsilon(1e-10));
    }
}

TEST_CASE("generalized amplitude inverts the generalized integral") {
    const std::vector<double> mods{0.3, 0.6};
    const double K2 = 2.0 * generalized_K(mods, 1e-12);
    SUBCASE("half period maps to pi/2") {
        CHECK(generalized_amplitude(0.5 * K2, mods) == doctest::Approx(kPi / 2).epsilon(1e-10));
    }
    SUBCASE("round trip across the period") {
        for (double frac : {0.05, 0.33, 0.5, 0.77, 0.98}) {
            const double t = frac * K2;
            CHECK(generalized_F(generalized_amplitude(t, mods), mods, 1e-12) ==
                  doctest::Approx(t).epsilon(5e-10));
        }
    }
}

TEST_CASE("chebyshev polynomials") {
    SUBCASE("low-order values") {
        CHECK(chebyshev(ChebKind::first, 0, 0.3) == doctest::Approx(1.0));
        CHECK(chebyshev(ChebKind::first, 1, 0.3) == doctest::Approx(0.3));
        CHECK(chebyshev(ChebKind::first, 3, 0.5) == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(chebyshev(ChebKind::second, 0, 0.3) == doctest::Approx(1.0));
        CHECK(chebyshev(ChebKind::second, 1, 0.3) == doctest::Approx(0.6));
    }
    SUBCASE("trigonometric identities") {
        const double th = 0.4;
        CHECK(chebyshev(ChebKind::first, 7, std::cos(th)) ==
              doctest::Approx(std::cos(7 * th)).epsilon(1e-12));
        CHECK(chebyshev(ChebKind::second, 6, std::cos(th)) ==
              doctest::Approx(std::sin(7 * th) / std::sin(th)).epsilon(1e-12));
    }
    SUBCASE("second-kind orthogonality") {
        // int_0^pi sin((m+1)t) sin((n+1)t) dt = (pi/2) delta_mn after x = cos t.
        auto inner = [](int m, int n) {
            return adaptive_integrate(
                [m, n](double t) {
                    return std::sin(t) * std::sin(t) * chebyshev(ChebKind::second, m, std::cos(t)) *
                           chebyshev(ChebKind::second, n, std::cos(t));
                },
                0.0, kPi, 1e-12, 4);
        };
        CHECK(inner(4, 4) == doctest::Approx(kPi / 2).epsilon(1e-10));
        CHECK(std::fabs(inner(4, 6)) < 1e-10);
        CHECK(std::fabs(inner(3, 5)) < 1e-10);
    }
    SUBCASE("negative degree rejected") {
        CHECK_THROWS_AS(chebyshev(ChebKind::first, -1, 0.5), std::domain_error);
        CHECK_THROWS_AS(chebyshev(ChebKind::second, -3, 0.5), std::domain_error);
    }
}

TEST_CASE("jacobi polynomials") {
    SUBCASE("low-order values") {
        CHECK(jacobi_polynomial(0, 0.0, 1.0, 0.9) == doctest::Approx(1.0));
        CHECK(jacobi_polynomial(1, 0.0, 1.0, 0.4) == doctest::Approx(0.1).epsilon(1e-14));
    }
    SUBCASE("legendre reduction at a = b = 0") {
        // P_2 = (3x^2 - 1)/2, P_3 = (5x^3 - 3x)/2
        const double x = 0.37;
        CHECK(jacobi_polynomial(2, 0.0, 0.0, x) ==
              doctest::Approx(0.5 * (3 * x * x - 1)).epsilon(1e-13));
        CHECK(jacobi_polynomial(3, 0.0, 0.0, x) ==
              doctest::Approx(0.5 * (5 * x * x * x - 3 * x)).epsilon(1e-13));
    }
    SUBCASE("orthogonality under the (1 + s) weight") {
        const double ip = adaptive_integrate(
            [](double s) {
                return (1.0 + s) * jacobi_polynomial(2, 0.0, 1.0, s) *
                       jacobi_polynomial(4, 0.0, 1.0, s);
            },
            -1.0, 1.0, 1e-12, 4);
        CHECK(std::fabs(ip) < 1e-10);
    }
    SUBCASE("invalid arguments rejected") {
        CHECK_THROWS_AS(jacobi_polynomial(-2, 0.0, 1.0, 0.5), std::domain_error);
        CHECK_THROWS_AS(jacobi_polynomial(2, -1.0, 1.0, 0.5), std::domain_error);
        CHECK_THROWS_AS(jacobi_polynomial(2, 0.0, -1.5, 0.5), std::domain_error);
    }
}

TEST_CASE("anger and weber functions") {
    SUBCASE("values at the origin") {
        const auto aw = anger_weber(0.0, 0.0);
        CHECK(aw.J == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::fabs(aw.E) < 1e-12);
    }
    SUBCASE("integer order reduces to Bessel J") {
        CHECK(anger_weber(3.0, 1.0).J == doctest::Approx(0.019563353982668406).epsilon(1e-9));
        for (int n = 0; n <= 6; ++n) {
            for (double z : {0.0, 1.0, 2.5, 5.0, 7.5, 10.0}) {
                CHECK(anger_weber(n, z).J ==
                      doctest::Approx(bessel_j_series(n, z)).epsilon(1e-8).scale(1.0));
            }
        }
    }
    SUBCASE("closed forms at z = 0") {
        const double nu = 1.5;
        const auto aw = anger_weber(nu, 0.0);
        CHECK(aw.J == doctest::Approx(std::sin(nu * kPi) / (nu * kPi)).epsilon(1e-11));
        CHECK(aw.E == doctest::Approx((1.0 - std::cos(nu * kPi)) / (nu * kPi)).epsilon(1e-11));
    }
    SUBCASE("frozen reference pairs") {
        auto check_pair = [](double nu, double z, double j, double e) {
            const auto aw = anger_weber(nu, z);
            CHECK(aw.J == doctest::Approx(j).epsilon(1e-9).scale(1.0));
            CHECK(aw.E == doctest::Approx(e).epsilon(1e-9).scale(1.0));
        };
        check_pair(4.0, 1.5, 0.011768132420343719, 0.07934603959840356);
        check_pair(2.0, 0.5, 0.0306040234586827, 0.10086093761439041);
        check_pair(10.0, 3.0, 1.2928351645667672e-05, 0.021480750166258288);
        check_pair(1.5, 2.5, 0.447994470720252, -0.06983714893406977);
    }
}
