#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "ouha/quadrature.hpp"

using namespace ouha;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
    for (int n : {1, 2, 5, 10, 16, 32}) {
        const auto& r = quad::gauss_legendre(n);
        for (int d = 0; d <= 2 * n - 1; ++d) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
            const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            CHECK(std::abs(s - exact) < 1e-14);
        }
    }
}

TEST_CASE("Gauss-Hermite rule for gamma") {
    for (int n : {1, 2, 8, 20, 60}) {
        const auto r = quad::gauss_hermite_gamma(n);
        double total = 0;
        for (double w : r.weights) total += w;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
        // moments (2m-1)!!/2^m
        for (int m = 0; 2 * m <= 2 * n - 1; ++m) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], 2 * m);
            double exact = 1.0;
            for (int j = 1; j <= m; ++j) exact *= (2.0 * j - 1.0) / 2.0;
            CHECK(s == doctest::Approx(exact).epsilon(1e-11));
        }
    }
}

TEST_CASE("adaptive Gauss-Kronrod") {
    auto r = quad::adaptive<double>([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-15, 1e-13);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    auto kink = quad::adaptive<double>([](double x) { return std::abs(x - 0.3); }, -1.0, 1.0, 1e-14, 1e-12);
    CHECK(kink.value == doctest::Approx(0.5 * (1.3 * 1.3 + 0.7 * 0.7)).epsilon(1e-11));
    auto osc = quad::adaptive<std::complex<double>>(
        [](double x) { return std::exp(std::complex<double>(0, 5 * x)); }, 0.0, 1.0, 1e-15, 1e-13);
    const auto exact = (std::exp(std::complex<double>(0, 5)) - 1.0) / std::complex<double>(0, 5);
    CHECK(std::abs(osc.value - exact) < 1e-13);
}

TEST_CASE("log-domain adaptive integration keeps tiny integrals") {
    // int_50^51 e^{-x^2} dx = (sqrt(pi)/2) (erfc(50) - erfc(51)), about e^{-2500}
    auto lf = [](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = -x[i] * x[i];
    };
    auto r = quad::adaptive_log(lf, {50.0, 51.0}, 1e-12);
    CHECK(r.converged);
    // asymptotics: int_a^inf e^{-x^2} = e^{-a^2}/(2a) (1 - 1/(2a^2) + 3/(4a^4) - 15/(8a^6))
    auto tail = [](double a) {
        const double a2 = a * a;
        return -a2 - std::log(2 * a) + std::log1p(-1 / (2 * a2) + 3 / (4 * a2 * a2) - 15 / (8 * a2 * a2 * a2));
    };
    const double exact = tail(50.0) + std::log1p(-std::exp(tail(51.0) - tail(50.0)));
    CHECK(r.log_value == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("composite Gauss-Legendre") {
    std::vector<double> x, w;
    quad::composite_gl(0.0, 3.0, 7, 16, x, w);
    CHECK(x.size() == 7 * 16);
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::sin(x[i]);
    CHECK(s == doctest::Approx(1.0 - std::cos(3.0)).epsilon(1e-14));
}
