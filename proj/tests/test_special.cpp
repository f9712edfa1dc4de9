#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "ouha/special.hpp"

using namespace ouha;

namespace {

// erf by its Taylor series in long double (terms all positive after the
// e^{-z^2} factorization), for |z| <= 5.
double erf_series(double z) {
    const long double x = std::abs(z), x2 = x * x;
    long double term = x, sum = x;
    for (int n = 1; n < 400; ++n) {
        term *= 2 * x2 / (2 * n + 1);
        sum += term;
        if (term < 1e-22L * sum) break;
    }
    const long double v = 2 / std::sqrt(std::numbers::pi_v<long double>) * std::exp(-x2) * sum;
    return double(z < 0 ? -v : v);
}

// erfc(z) e^{z^2} sqrt(pi) by backward evaluation of the continued fraction.
double erfc_cf(double z) {
    long double f = z;
    for (int n = 2000; n >= 1; --n) f = z + (0.5L * n) / f;
    return double(std::exp(-(long double)z * z) / std::sqrt(std::numbers::pi_v<long double>) / f);
}

}  // namespace

TEST_CASE("erf against the Taylor series") {
    for (double z = -5.0; z <= 5.0; z += 0.0137) {
        CHECK(std::abs(special::erf(z) - erf_series(z)) <= 4e-16 * std::max(std::abs(erf_series(z)), 1e-300) + 1e-300);
    }
    CHECK(special::erf(0.0) == 0.0);
    CHECK(special::erf(1.0) == doctest::Approx(0.8427007929497149).epsilon(1e-15));
}

TEST_CASE("erfc keeps relative accuracy deep in the tail") {
    for (double z = -3.0; z <= 1.0; z += 0.173) {
        CHECK(std::abs(special::erfc(z) - (1.0 - erf_series(z))) <= 1e-15);
    }
    for (double z = 2.0; z <= 26.0; z += 0.173) {
        const double ref = erfc_cf(z);
        CHECK(std::abs(special::erfc(z) - ref) <= 1e-14 * ref);
    }
}

TEST_CASE("log_erfc is finite far beyond underflow") {
    // erfc(z) ~ e^{-z^2} / (z sqrt(pi)) sum_n (-1)^n (2n-1)!! / (2z^2)^n
    for (double z : {30.0, 100.0, 1000.0}) {
        double series = 0, term = 1;
        for (int n = 1; n < 8; ++n) {
            term *= -(2.0 * n - 1.0) / (2 * z * z);
            series += term;
        }
        const double asym = -z * z - std::log(z * std::sqrt(std::numbers::pi)) + std::log1p(series);
        CHECK(special::log_erfc(z) == doctest::Approx(asym).epsilon(1e-12));
    }
    for (double z = 2.0; z < 26; z += 0.5) {
        CHECK(special::log_erfc(z) == doctest::Approx(std::log(erfc_cf(z))).epsilon(1e-14));
    }
    // both sides of the branch switch
    CHECK(special::log_erfc(std::nextafter(20.0, 0.0)) == doctest::Approx(special::log_erfc(20.0)).epsilon(1e-14));
}

TEST_CASE("complex gamma") {
    CHECK(std::abs(special::gamma(2.0) - 1.0) < 1e-13);
    CHECK(std::abs(special::gamma(0.5) - std::sqrt(std::numbers::pi)) < 1e-13);
    for (double x = 0.3; x < 12; x += 0.7) {
        CHECK(std::abs(special::gamma(x) - std::tgamma(x)) <= 1e-12 * std::tgamma(x));
    }
    for (double tau : {0.5, 1.0, 2.0, -3.0}) {
        const std::complex<double> z(2.0, -tau);
        const auto lhs = special::gamma(z + 1.0);
        const auto rhs = z * special::gamma(z);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
        // |Gamma(1 + i y)|^2 = pi y / sinh(pi y)
        const double y = tau;
        const double mod2 = std::norm(special::gamma(std::complex<double>(1.0, y)));
        CHECK(mod2 == doctest::Approx(std::numbers::pi * y / std::sinh(std::numbers::pi * y)).epsilon(1e-12));
    }
    // reflection branch
    CHECK(std::abs(special::gamma(-0.5) - (-2.0 * std::sqrt(std::numbers::pi))) < 1e-12);
}

TEST_CASE("upper incomplete gamma for integer order") {
    CHECK(special::upper_gamma_int(2, 0.0) == doctest::Approx(1.0));
    CHECK(special::upper_gamma_int(2, 3.0) == doctest::Approx(4.0 * std::exp(-3.0)));
    CHECK(special::upper_gamma_int(1, 2.5) == doctest::Approx(std::exp(-2.5)));
    CHECK(special::upper_gamma_int(4, 1.0) == doctest::Approx(6.0 * std::exp(-1.0) * (1 + 1 + 0.5 + 1.0 / 6)));
}

TEST_CASE("log-domain add and subtract") {
    CHECK(special::log_add_exp(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
    CHECK(special::log_sub_exp(std::log(5.0), std::log(3.0)) == doctest::Approx(std::log(2.0)));
    CHECK(special::log_add_exp(-1e4, -1e4) == doctest::Approx(-1e4 + std::log(2.0)));
    const double ninf = -std::numeric_limits<double>::infinity();
    CHECK(special::log_add_exp(ninf, 1.5) == 1.5);
}
