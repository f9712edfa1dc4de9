#include <cmath>
#include <complex>
#include <numbers>
#include <tuple>

#include "doctest.h"
#include "oracles.hpp"
#include "ouha/error.hpp"
#include "ouha/mehler.hpp"

using namespace ouha;
using cd = std::complex<double>;

TEST_CASE("kernel values") {
    CHECK(mehler_kernel(0.5, 0.0, 0.0) == doctest::Approx(1.0 / std::sqrt(1 - std::exp(-1.0))).epsilon(1e-14));
    CHECK(mehler_kernel(0.5, 0.0, 0.0) == doctest::Approx(1.2577666).epsilon(1e-7));
    CHECK(mehler_kernel(60.0, 1.3, -0.4) == doctest::Approx(1.0).epsilon(1e-12));
    oracle::Rng rng(8);
    for (int i = 0; i < 500; ++i) {
        const double t = std::exp(rng.uniform(-5, 2)), x = rng.uniform(-4, 4), y = rng.uniform(-4, 4);
        const double k = mehler_kernel(t, x, y);
        CHECK(k == mehler_kernel(t, y, x));
        CHECK(k >= 0.0);
        CHECK(std::isfinite(log_mehler_kernel(t, x, y)));
        if (oracle::mehler(t, x, y) > 1e-290)
            CHECK(log_mehler_kernel(t, x, y) == doctest::Approx(std::log(oracle::mehler(t, x, y))).epsilon(1e-11));
        CHECK(k == doctest::Approx(oracle::mehler(t, x, y)).epsilon(1e-11).scale(1e-300));
    }
    CHECK_THROWS_AS(mehler_kernel(0.0, 1, 1), DomainError);
    CHECK_THROWS_AS(mehler_kernel(1e-3, 40.0, 40.0), OverflowError);
    CHECK(std::isfinite(log_mehler_kernel(1e-3, 40.0, 40.0)));
}

TEST_CASE("kernel time derivative") {
    oracle::Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const double t = rng.uniform(0.05, 3.0), x = rng.uniform(-2, 2), y = rng.uniform(-2, 2);
        const double h = 1e-5;
        const double fd = (mehler_kernel(t + h, x, y) - mehler_kernel(t - h, x, y)) / (2 * h);
        CHECK(mehler_kernel_dt(t, x, y) == doctest::Approx(fd).epsilon(1e-6));
    }
    const double t = 0.7;
    const double c = 1 - std::exp(-2 * t);
    CHECK(mehler_kernel_dt(t, 0, 0) == doctest::Approx(-std::pow(c, -1.5) * std::exp(-2 * t)).epsilon(1e-13));
    CHECK(mehler_kernel_dt(t, 0, 0) < 0);
    CHECK(std::abs(mehler_kernel_dt(50.0, 0.5, 0.2)) < 1e-20);
}

TEST_CASE("conservativity") {
    const auto one = TruncatedPolynomial::whole(HermiteExpansion::basis(0));
    for (double t : {0.01, 0.1, 0.5, 1.0, 3.0}) {
        for (double x : {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0}) {
            CHECK(std::abs(kernel_apply(one, t, x) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("kernel path agrees with the spectral path") {
    const auto h1 = TruncatedPolynomial::whole(HermiteExpansion::basis(1));
    CHECK(kernel_apply(h1, 0.5, 1.0).real() == doctest::Approx(0.857763).epsilon(1e-6));
    for (int k = 0; k <= 10; ++k) {
        const auto g = TruncatedPolynomial::whole(HermiteExpansion::basis(k));
        for (double s : {0.01, 0.1, 1.0}) {
            for (double x = -4; x <= 4; x += 1.0) {
                const double ref = std::exp(-s * k) * oracle::hermite(k, x);
                const cd v = kernel_apply(g, s, x);
                CHECK(std::abs(v - ref) <= 1e-8 * std::max(std::abs(ref), 1.0));
            }
        }
    }
}

TEST_CASE("truncated inputs") {
    // h_0 on |y| < rho with large s: kernel -> 1, integral -> gamma(B(0, rho))
    for (double rho : {0.5, 1.0, 3.0}) {
        const auto g = TruncatedPolynomial::inside(HermiteExpansion::basis(0), rho);
        CHECK(kernel_apply(g, 40.0, 0.0).real() == doctest::Approx(ball_measure(0, rho)).epsilon(1e-12));
    }
    // complement plus inside is the whole integral
    const auto f = HermiteExpansion::basis(3) + HermiteExpansion::basis(1, cd(0, 2));
    for (double x : {-1.5, 0.2, 3.0}) {
        const cd in = kernel_apply(TruncatedPolynomial::inside(f, 2.0), 0.3, x);
        const cd out = kernel_apply(TruncatedPolynomial::outside(f, 2.0), 0.3, x);
        const cd all = kernel_apply(TruncatedPolynomial::whole(f), 0.3, x);
        CHECK(std::abs(in + out - all) < 1e-11 * (1 + std::abs(all)));
    }
    // against direct Simpson integration of the kernel
    const auto g = TruncatedPolynomial::inside(HermiteExpansion::basis(2), 1.5);
    const double s = 0.2, x = 0.7;
    const double ref = oracle::simpson([&](double y) { return oracle::mehler(s, x, y) * oracle::hermite(2, y) * oracle::gauss_weight(y); },
                                       -1.5, 1.5, 200000);
    CHECK(kernel_apply(g, s, x).real() == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("far supports stay representable in the log domain") {
    // M_s(0, y) d gamma(y) is the N(0, sigma^2) density with sigma^2 = (1 - e^{-2s}) / 2
    const auto g = TruncatedPolynomial::outside(HermiteExpansion::basis(0), 30.0);
    const double s = 0.01;
    const double sigma = std::sqrt(-std::expm1(-2 * s) / 2);
    const auto v = kernel_apply_scaled(g, s, 0.0);
    const double z = 30.0 / (sigma * std::sqrt(2.0));
    // log erfc(z) by the asymptotic series
    double series = 0, term = 1;
    for (int n = 0; n < 8; ++n) {
        series += term;
        term *= -(2.0 * n + 1) / (2 * z * z);
    }
    const double expected = -z * z - std::log(z * std::sqrt(std::numbers::pi)) + std::log(series);
    CHECK(v.log_abs() == doctest::Approx(expected).epsilon(1e-9));
    CHECK(v.value() == cd(0.0));
}

TEST_CASE("t^2 L e^{-delta' t^2 L} through the kernel") {
    oracle::Rng rng(10);
    std::vector<cd> c(7);
    for (auto& v : c) v = rng.disc();
    const HermiteExpansion f(c);
    const auto g = TruncatedPolynomial::whole(f);
    for (double t : {0.05, 0.5, 2.0}) {
        for (double x : {-2.0, 0.0, 1.3}) {
            const cd ref = t2L_semigroup(f, t, 1.0 / 128).eval(x);
            const cd v = kernel_apply_t2L(g, t, 1.0 / 128, x);
            CHECK(std::abs(v - ref) <= 1e-7 * std::max(1.0, std::abs(ref)));
        }
    }
    // constants are annihilated
    CHECK(std::abs(kernel_apply_t2L(TruncatedPolynomial::whole(HermiteExpansion::basis(0)), 0.3, 0.01, 0.4)) < 1e-9);
}

TEST_CASE("t^2 L through the kernel derivative near a truncation edge") {
    const auto g = TruncatedPolynomial::inside(HermiteExpansion::basis(2), 2.0);
    for (auto [t, dp, x] : {std::tuple{0.3, 1.0, 0.0}, std::tuple{0.3, 1.0 / 128, 1.98}, std::tuple{1.0, 0.5, -1.5}}) {
        const double s = dp * t * t, h = 1e-5 * s;
        const cd fd = (kernel_apply(g, s + h, x, 1e-13) - kernel_apply(g, s - h, x, 1e-13)) / (2 * h);
        const cd v = kernel_apply_t2L(g, t, dp, x);
        CHECK(std::abs(v + t * t * fd) <= 1e-5 * std::max(1.0, std::abs(v)));
    }
}

TEST_CASE("kernel_integral derivative") {
    const auto f = HermiteExpansion::basis(3) + HermiteExpansion::basis(1, cd(0, 1));
    const IntervalSet support{{-1.0, 0.5}, {1.5, 4.0}};
    for (double s : {0.05, 0.3}) {
        for (double x : {-0.8, 0.6, 2.0}) {
            const auto r = kernel_integral(f.evaluator(), support, s, x, 1e-12, true);
            const double h = 1e-5 * s;
            const cd up = kernel_integral(f.evaluator(), support, s + h, x, 1e-13, false).value.value();
            const cd dn = kernel_integral(f.evaluator(), support, s - h, x, 1e-13, false).value.value();
            const cd fd = (up - dn) / (2 * h);
            CHECK(std::abs(r.derivative.value() - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}
