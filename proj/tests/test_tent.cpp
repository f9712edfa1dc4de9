#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "ouha/error.hpp"
#include "ouha/tent.hpp"

using namespace ouha;
using cd = std::complex<double>;

namespace {

// gamma(B(c, r)) from std::erf
double ball(double c, double r) { return 0.5 * (std::erf(c + r) - std::erf(c - r)); }

// Sh_1(0)^2 by a product Simpson rule in (t, y)
double square_h1_at_zero_oracle() {
    const auto inner = [](double t) {
        const double amp2 = 2 * std::pow(t, 4) * std::exp(-2 * t * t);
        const double m = oracle::simpson([](double y) { return y * y * oracle::gauss_weight(y); }, -t, t, 400);
        return amp2 * m / ball(0, t) / t;
    };
    return oracle::simpson(inner, 1e-6, 2.0, 4000);
}

// iint_D |u|^2 d gamma dt / t for u built from f with the spectral oracle
double region_oracle(const HermiteExpansion& f, double delta) {
    double total = 0;
    for (int k = 0; k < 40; ++k) {
        const double hi = std::ldexp(1.0, -k), lo = 0.5 * hi;
        const double rho = std::min(std::ldexp(1.0, k), 12.0);
        total += oracle::simpson(
            [&](double s) {
                const double t = std::exp(s);
                double c[8] = {};
                for (int j = 0; j <= f.degree(); ++j) {
                    c[j] = std::abs(f.coefficient(j)) * t * t * j * std::exp(-delta * t * t * j);
                }
                return oracle::simpson(
                    [&](double y) {
                        double v = 0;
                        for (int j = 0; j <= f.degree(); ++j) v += c[j] * oracle::hermite(j, y);
                        return v * v * oracle::gauss_weight(y);
                    },
                    -rho, rho, 600);
            },
            std::log(lo), std::log(hi), 40);
    }
    return total;
}

}  // namespace

TEST_CASE("square function") {
    CHECK(square_function(HermiteExpansion::basis(0), 0.7) == 0.0);
    CHECK(square_function(HermiteExpansion({cd(0.0), cd(0.0)}), 0.7) == 0.0);
    const double s = square_function(HermiteExpansion::basis(1), 0.0);
    CHECK(s * s == doctest::Approx(square_h1_at_zero_oracle()).epsilon(1e-4));
    const auto f = HermiteExpansion::basis(1) + HermiteExpansion::basis(3, cd(0, 0.5));
    for (double x : {-2.0, 0.3, 4.0}) {
        const double a = square_function(f, x);
        CHECK(square_function(f * cd(2.0, -1.0), x) == doctest::Approx(std::sqrt(5.0) * a).epsilon(1e-12));
    }
    // Lipschitz-type response to a perturbation
    const auto h5 = HermiteExpansion::basis(5);
    const double base = square_function(f, 0.5);
    double lip = 0;
    for (double e : {1e-2, 1e-3}) lip = std::max(lip, std::abs(square_function(f + h5 * cd(e), 0.5) - base) / e);
    MESSAGE("Lipschitz constant at x=0.5: " << lip);
    CHECK(lip < 10.0);
}

TEST_CASE("cone integral") {
    const auto u = build_u(HermiteExpansion::basis(1), 1.0 / 128);
    const auto zero = build_u(HermiteExpansion({cd(0.0), cd(0.0)}), 1.0 / 128);
    CHECK(cone_integral(zero, ConeSpec{0.0, 1.0, 1.0}) == 0.0);
    const double c1 = cone_integral(u, ConeSpec{0.0, 1.0, 1.0}, 1e-6);
    const double c2 = cone_integral(u, ConeSpec{0.0, 1.0, 1.0}, 1e-9);
    CHECK(c1 > 0);
    CHECK(c1 == doctest::Approx(c2).epsilon(1e-4));
    for (double x : {0.0, 0.9, -3.0, 6.5}) {
        CHECK(cone_integral(u, ConeSpec{x, 2.0, 1.0}) >= cone_integral(u, ConeSpec{x, 1.0, 1.0}));
    }
    CHECK_THROWS_AS(cone_integral(u, ConeSpec{0.0, 1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(cone_integral(u, ConeSpec{0.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("tent norm") {
    const auto zero = build_u(HermiteExpansion({cd(0.0), cd(0.0)}), 1.0 / 128);
    CHECK(tent_norm(zero, 1.5) == 0.0);
    CHECK_THROWS_AS(tent_norm(zero, 3.0), DomainError);
    for (int k : {1, 2}) {
        const auto f = HermiteExpansion::basis(k);
        const auto u = build_u(f, 1.0 / 128);
        const double direct = region_oracle(f, 1.0 / 128);
        CHECK(region_integral(u) == doctest::Approx(direct).epsilon(1e-6));
        const double n2 = tent_norm(u, 2.0);
        CHECK(n2 * n2 == doctest::Approx(direct).epsilon(1e-4));
    }
    const auto u = build_u(HermiteExpansion::basis(1), 1.0 / 128);
    const double n1 = tent_norm(u, 1.0), n2 = tent_norm(u, 2.0);
    CHECK(n1 <= n2 * (1 + 1e-6));
    const auto u3 = build_u(HermiteExpansion::basis(1, cd(3.0)), 1.0 / 128);
    CHECK(tent_norm(u3, 1.5) == doctest::Approx(3 * tent_norm(u, 1.5)).epsilon(1e-10));
}

TEST_CASE("change of aperture") {
    CHECK(aperture_compare(HermiteExpansion::basis(0), 1.0, 0.0).ratio == 0.0);
    const auto a = aperture_compare(HermiteExpansion::basis(1), 1.0, 0.0, 1e-6);
    const auto b = aperture_compare(HermiteExpansion::basis(1), 1.0, 0.0, 1e-9);
    CHECK(std::isfinite(a.ratio));
    CHECK(a.ratio > 0);
    CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-2));
    CHECK_THROWS_AS(aperture_compare(HermiteExpansion::basis(1), 0.0, 0.0), DomainError);
}
