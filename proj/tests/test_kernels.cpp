#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ouha/kernels.hpp"

using namespace ouha;
using kernels::Isa;

namespace {

struct IsaGuard {
    Isa saved = kernels::active_isa();
    ~IsaGuard() { kernels::set_isa(saved); }
};

template <class F>
void for_each_isa(F&& f) {
    IsaGuard guard;
    for (Isa isa : {Isa::scalar, Isa::avx2}) {
        if (!kernels::isa_available(isa)) continue;
        REQUIRE(kernels::set_isa(isa));
        CAPTURE(kernels::isa_name(isa));
        f(isa);
    }
}

double rel(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST_CASE("ISA selection") {
    CHECK(kernels::isa_available(Isa::scalar));
    IsaGuard guard;
    CHECK(kernels::set_isa(Isa::scalar));
    CHECK(kernels::active_isa() == Isa::scalar);
    CHECK(kernels::isa_name(Isa::avx2) == "avx2");
}

TEST_CASE("hermite_series agrees with the independent recurrence on every ISA") {
    oracle::Rng rng(11);
    for (int K : {1, 2, 5, 9, 17, 40}) {
        std::vector<double> cr(K), ci(K);
        for (int k = 0; k < K; ++k) {
            cr[k] = rng.uniform(-1, 1);
            ci[k] = rng.uniform(-1, 1);
        }
        std::vector<double> x(37);
        for (auto& v : x) v = rng.uniform(-6, 6);
        for_each_isa([&](Isa) {
            std::vector<double> re(x.size()), im(x.size());
            kernels::hermite_series(cr, ci, x, re, im);
            for (std::size_t i = 0; i < x.size(); ++i) {
                double er = 0, ei = 0, scale = 0;
                for (int k = 0; k < K; ++k) {
                    const double h = oracle::hermite(k, x[i]);
                    er += cr[k] * h;
                    ei += ci[k] * h;
                    scale += (std::abs(cr[k]) + std::abs(ci[k])) * std::abs(h);
                }
                CHECK(std::abs(re[i] - er) <= 1e-12 * scale);
                CHECK(std::abs(im[i] - ei) <= 1e-12 * scale);
            }
        });
    }
}

TEST_CASE("scalar and AVX2 kernels are equivalent") {
    if (!kernels::isa_available(Isa::avx2)) {
        MESSAGE("AVX2 unavailable; equivalence test skipped");
        return;
    }
    IsaGuard guard;
    oracle::Rng rng(29);
    const std::size_t n = 1003;  // not a multiple of the vector width
    std::vector<double> x(n), lw(n), re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.uniform(-30, 30);
        lw[i] = rng.uniform(-50, 5);
        re[i] = rng.uniform(-1e3, 1e3);
        im[i] = rng.uniform(-1e3, 1e3);
    }
    re[5] = im[5] = 0.0;         // zero value
    re[6] = 1e-310;              // subnormal magnitude
    im[6] = 0.0;

    auto run_power = [&](Isa isa, double p) {
        kernels::set_isa(isa);
        std::vector<double> out(n);
        kernels::log_weighted_power(lw, re, im, x, p, out);
        return out;
    };
    for (double p : {1.0, 1.5, 2.0, 404.0}) {
        const auto a = run_power(Isa::scalar, p);
        const auto b = run_power(Isa::avx2, p);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::isinf(a[i])) {
                CHECK(a[i] == b[i]);
            } else {
                // a few ulp of the summands' magnitude
                const double terms = std::abs(lw[i]) + x[i] * x[i] +
                                     0.5 * p * std::abs(std::log(re[i] * re[i] + im[i] * im[i]));
                CHECK(std::abs(a[i] - b[i]) <= 8.0 * std::numeric_limits<double>::epsilon() * terms);
            }
        }
    }

    std::vector<double> l(n);
    for (auto& v : l) v = rng.uniform(-800, 0);
    l[3] = -std::numeric_limits<double>::infinity();
    kernels::set_isa(Isa::scalar);
    const double sa = kernels::sum_exp_shifted(l, -10.0);
    kernels::set_isa(Isa::avx2);
    const double sb = kernels::sum_exp_shifted(l, -10.0);
    CHECK(rel(sa, sb) < 1e-14);

    std::vector<double> hr(n), hi(n), ar(n), ai(n);
    std::vector<double> cr{0.3, -1.2, 0.7, 0.1, -0.05, 0.9, 0.0, 0.4, -0.3};
    std::vector<double> ci{0.0, 0.5, -0.2, 0.0, 0.3, 0.0, 0.1, 0.0, 0.2};
    kernels::set_isa(Isa::scalar);
    kernels::hermite_series(cr, ci, x, hr, hi);
    kernels::set_isa(Isa::avx2);
    kernels::hermite_series(cr, ci, x, ar, ai);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(hr[i] - ar[i]) <= 1e-13 * std::max(1.0, std::abs(hr[i]) + std::abs(hi[i])));
        CHECK(std::abs(hi[i] - ai[i]) <= 1e-13 * std::max(1.0, std::abs(hr[i]) + std::abs(hi[i])));
    }

    for (double t : {1e-6, 0.01, 0.3, 2.0}) {
        const double a = std::exp(-t), c = -std::expm1(-2 * t);
        kernels::MehlerCoefficients mc{-0.5 * std::log(c) - 0.5 * std::log(std::numbers::pi),
                                       a / c, a / (1 + a), -a * a / c,
                                       a * (1 + a * a) / (c * c), -a / ((1 + a) * (1 + a))};
        std::vector<double> y(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.uniform(-3, 3);
            w[i] = rng.uniform(-5, 0);
        }
        kernels::set_isa(Isa::scalar);
        const auto s1 = kernels::mehler_weighted_sum(mc, 0.7, y, w, re, im, true);
        kernels::set_isa(Isa::avx2);
        const auto s2 = kernels::mehler_weighted_sum(mc, 0.7, y, w, re, im, true);
        CHECK(std::abs(s1.shift - s2.shift) <= 1e-13 * (1.0 + std::abs(mc.log_c) + mc.A * 16 + 16));
        CHECK(std::abs(s1.sum - s2.sum) <= 1e-12 * s1.mass * 1e3);
        CHECK(std::abs(s1.dsum - s2.dsum) <= 1e-12 * s1.dmass * 1e3);
        CHECK(rel(s1.mass, s2.mass) < 1e-13);
        CHECK(rel(s1.dmass, s2.dmass) < 1e-13);
    }
}

TEST_CASE("kernels against direct formulas") {
    oracle::Rng rng(5);
    std::vector<double> x(64), lw(64), re(64), im(64), out(64);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.uniform(-5, 5);
        lw[i] = rng.uniform(-3, 0);
        re[i] = rng.uniform(-2, 2);
        im[i] = rng.uniform(-2, 2);
    }
    for_each_isa([&](Isa) {
        kernels::log_weighted_power(lw, re, im, x, 1.5, out);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double ref = lw[i] + 1.5 * std::log(std::hypot(re[i], im[i])) - x[i] * x[i];
            CHECK(out[i] == doctest::Approx(ref).epsilon(1e-14));
        }
        const double s = kernels::sum_exp_shifted(lw, 0.0);
        double ref = 0;
        for (double v : lw) ref += std::exp(v);
        CHECK(s == doctest::Approx(ref).epsilon(1e-14));

        // Mehler sum with g = 1 equals the direct weighted kernel sum.
        const double t = 0.4, xx = 0.9;
        const double a = std::exp(-t), c = -std::expm1(-2 * t);
        kernels::MehlerCoefficients mc{-0.5 * std::log(c) - 0.5 * std::log(std::numbers::pi),
                                       a / c, a / (1 + a), -a * a / c,
                                       a * (1 + a * a) / (c * c), -a / ((1 + a) * (1 + a))};
        std::vector<double> ones(x.size(), 1.0), zeros(x.size(), 0.0);
        const auto m = kernels::mehler_weighted_sum(mc, xx, x, lw, ones, zeros, false);
        double direct = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            direct += std::exp(lw[i]) * oracle::mehler(t, xx, x[i]) * oracle::gauss_weight(x[i]);
        }
        CHECK(std::exp(m.shift) * m.sum.real() == doctest::Approx(direct).epsilon(1e-12));
        CHECK(std::exp(m.shift) * m.mass == doctest::Approx(direct).epsilon(1e-12));
    });
}

TEST_CASE("kernel argument validation") {
    std::vector<double> a(3), b(4);
    CHECK_THROWS(kernels::log_weighted_power(a, a, a, b, 1.0, a));
    CHECK_THROWS(kernels::log_weighted_power(a, a, a, a, 0.0, a));
    std::vector<double> big(300, 0.0), x(2), o(2);
    CHECK_THROWS(kernels::hermite_series(big, big, x, o, o));
}
