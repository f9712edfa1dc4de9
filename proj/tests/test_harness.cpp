#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "ouha/error.hpp"
#include "ouha/harness.hpp"

using namespace ouha;
using cd = std::complex<double>;

namespace {

const Case& find_case(const SuiteReport& r, const std::string& label) {
    for (const auto& c : r.cases) {
        if (c.label == label) return c;
    }
    throw std::runtime_error("no case " + label);
}

int count_label(const SuiteReport& r, const std::string& label) {
    int n = 0;
    for (const auto& c : r.cases) n += c.label == label;
    return n;
}

// (int |f|^p d gamma)^{1/p} by Simpson on [-R, R].
template <class F>
double simpson_lp(F&& f, double p, double R = 14.0) {
    return std::pow(oracle::simpson([&](double x) { return std::pow(std::abs(f(x)), p) * oracle::gauss_weight(x); },
                                    -R, R, 400000),
                    1.0 / p);
}

}  // namespace

TEST_CASE("hypercontractive exponent") {
    CHECK(hypercontractive_exponent(2.0, 0.5 * std::log(3.0)) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(hypercontractive_exponent(2.0, 0.0) == 2.0);
    CHECK(hypercontractive_exponent(1.5, 1.0) == doctest::Approx(4.6945280494653).epsilon(1e-12));
    double prev = 1.5;
    for (double t : log_grid(0.01, 3.0, 12)) {
        const double q = hypercontractive_exponent(1.5, t);
        CHECK(q > prev);
        prev = q;
    }
    CHECK_THROWS_AS(hypercontractive_exponent(1.0, 0.5), DomainError);
    CHECK_THROWS_AS(hypercontractive_exponent(2.0, -0.1), DomainError);
}

TEST_CASE("spectral gap rate and chain bookkeeping") {
    CHECK(spectral_gap_rate(2.0) == 1.0);
    CHECK(spectral_gap_rate(1.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (int k = 0; k <= 8; ++k) {
        CHECK(chain_length(k, 4.0) == k + 1);
        CHECK(chain_length(k, 16.0) == k + 3);
        CHECK(chain_length(k, 64.0) == k + 5);
    }
    CHECK_THROWS_AS(chain_length(1, 8.0), DomainError);
    const double eps = 1.0 / 64;
    CHECK(chain_exponent(1.5, eps, 3, 1, 4.0) ==
          doctest::Approx(1.0 + 0.5 * std::exp(2.0 * eps / 16.0 / 16.0)).epsilon(1e-15));
    // at j = N(k) + 1 the time is eps itself
    CHECK(chain_exponent(2.0, eps, 2, chain_length(2, 4.0) + 1, 4.0) ==
          doctest::Approx(hypercontractive_exponent(2.0, eps)).epsilon(1e-15));
}

TEST_CASE("annulus distances") {
    // C_k = [2^{k-1}, 2^k) in |x|; C_0 = B(0, 1)
    auto brute = [](int k, int m) {
        const double k_hi = std::ldexp(1.0, k), m_lo = std::ldexp(1.0, m - 1);
        return std::max(0.0, m_lo - k_hi);
    };
    CHECK(annulus_distance(2, 3) == 0.0);
    CHECK(annulus_distance(2, 4) == 4.0);
    CHECK(annulus_distance(0, 3) == 3.0);
    for (int k = 0; k <= 6; ++k) {
        for (int m = k + 1; m <= 9; ++m) {
            CHECK(annulus_distance(k, m) == brute(k, m));
            if (k >= 2 && m >= k + 2) CHECK(annulus_distance(k, m) >= std::ldexp(1.0, m - 2));
        }
    }
    CHECK_THROWS_AS(annulus_distance(3, 3), DomainError);
}

TEST_CASE("seeded random bank") {
    const auto a = random_bank(7, 50, 8, false);
    const auto b = random_bank(7, 50, 8, false);
    const auto c = random_bank(8, 50, 8, false);
    REQUIRE(a.size() == 50);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].coefficients() == b[i].coefficients());
        differs = differs || a[i].coefficients() != c[i].coefficients();
        CHECK(a[i].degree() >= 1);
        CHECK(a[i].degree() <= 8);
        for (const cd& v : a[i].coefficients()) CHECK(std::abs(v) <= 1.0);
    }
    CHECK(differs);
    for (const auto& f : random_bank(3, 20, 5, true)) CHECK(f.zero_mean());
    // uniform on the disc: E|c|^2 = 1/2
    double m2 = 0;
    int n = 0;
    for (const auto& f : random_bank(11, 400, 8, false)) {
        for (const cd& v : f.coefficients()) {
            m2 += std::norm(v);
            ++n;
        }
    }
    CHECK(m2 / n == doctest::Approx(0.5).epsilon(0.05));
    const auto g = log_grid(0.01, 3.0, 12);
    CHECK(g.front() == 0.01);
    CHECK(g.back() == 3.0);
    CHECK(g[1] / g[0] == doctest::Approx(g[11] / g[10]).epsilon(1e-12));
}

TEST_CASE("report cases and serialization") {
    auto c = make_case("x", {{"a", 1}}, 1.0 + 5e-10, 1.0, 1e-9);
    CHECK(c.pass);
    CHECK(c.ratio == doctest::Approx(1.0 + 5e-10));
    auto d = make_case("y", Json::object(), 2.0, 1.0, 1e-9);
    CHECK_FALSE(d.pass);
    auto e = make_case("z", Json::object(), 3.0, 1.0, 0.0, false);
    SuiteReport r;
    r.suite = "demo";
    r.add(c);
    r.add(d);
    r.add(e);
    r.fit("C", 2.5);
    CHECK(r.pass_count() == 1);
    CHECK(r.fail_count() == 1);
    CHECK(r.worst_ratio() == 2.0);
    const Json j = r.to_json();
    CHECK(j["schema_version"] == "1");
    CHECK(j["suite"] == "demo");
    CHECK(j["cases"].size() == 3);
    CHECK(j["summary"]["fitted_constants"]["C"] == 2.5);
    CHECK(j["summary"]["pass"] == 1);
    r.add(make_case("inf", Json::object(), 1.0, std::numeric_limits<double>::infinity(), 0.0, false));
    CHECK(r.to_json()["cases"][3]["bound"].is_null());
    const std::string csv = to_csv({r});
    CHECK(csv.rfind("suite,label,computed,bound,slack,asserted,pass,ratio,inputs\n", 0) == 0);
    CHECK(csv.find("demo,x,") != std::string::npos);
    CHECK(Json::parse(to_json_text({r, r}, true)).is_array());
}

TEST_CASE("hypercontractivity suite") {
    HypercontractivityConfig cfg;
    cfg.trials = 25;
    cfg.t_grid = {0.01, 0.3, 3.0};
    const auto r = hypercontractivity_suite(cfg);
    CHECK(r.passed());
    CHECK(r.notes["violations"] == 0);
    for (const auto& c : r.cases) {
        if (c.label == "constant") CHECK(c.computed == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(count_label(r, "nelson") == 6);
    // below the threshold t < log(3)/2 with p = 2, q = 4, f = 1 + h_1/2
    int below = 0;
    for (const auto& c : r.cases) {
        if (c.label != "below_threshold") continue;
        const double t = c.inputs["t"];
        const double a = 0.5 * std::exp(-t);
        const double ref = simpson_lp([&](double x) { return 1.0 + a * oracle::hermite(1, x); }, 4.0) /
                           simpson_lp([](double x) { return 1.0 + 0.5 * oracle::hermite(1, x); }, 2.0);
        CHECK(c.computed == doctest::Approx(ref).epsilon(1e-8));
        below += !c.pass;
    }
    CHECK(below > 0);
    CHECK(r.notes["witnesses"].get<int>() > 0);
    cfg.p_list = {1.0};
    CHECK_THROWS_AS(hypercontractivity_suite(cfg), DomainError);
}

TEST_CASE("spectral gap suite") {
    SpectralGapConfig cfg;
    cfg.f_bank = random_bank(5, 30, 8, true);
    const auto r = spectral_gap_suite(cfg);
    CHECK(r.passed());
    for (const auto& c : r.cases) {
        if (c.label == "h1_saturates") CHECK(c.computed <= 1e-12);
    }
    CHECK(find_case(r, "h3_eigenvalue").computed == doctest::Approx(std::exp(-3.0)).epsilon(1e-14));
    CHECK(r.fitted_constants.size() == 1);
    cfg.f_bank.push_back(HermiteExpansion::basis(0));
    CHECK_THROWS_AS(spectral_gap_suite(cfg), DomainError);
}

TEST_CASE("annuli suites on a reduced range") {
    AnnuliConfig cfg;
    cfg.k_max = 3;
    cfg.l_max = 2;
    cfg.f_bank = {HermiteExpansion::basis(1), HermiteExpansion::basis(2) - HermiteExpansion::basis(4)};
    const auto on = ondiagonal_suite(cfg);
    CHECK(on.passed());
    CHECK(count_label(on, "partition") == 18);
    // (k + 2) values of j for k = 0..3, two functions, Hoelder and chain each
    CHECK(count_label(on, "holder") == (2 + 3 + 4 + 5) * 2);
    double c = 0, cp = 0;
    for (const auto& [name, v] : on.fitted_constants) {
        if (name == "c") c = v;
        if (name == "c_prime") cp = v;
    }
    CHECK(c > 0);
    CHECK(cp > 0);

    const auto off = offdiagonal_suite(cfg);
    CHECK(off.passed());
    CHECK(std::isfinite(off.fitted_constants.front().second));
    CHECK(count_label(off, "decay_in_l") == 4);

    AnnuliConfig bad = cfg;
    bad.params.kappa = 8.0;
    CHECK_THROWS_AS(ondiagonal_suite(bad), DomainError);
}

TEST_CASE("on-diagonal chain at k = 0 against a direct quadrature") {
    // ||1_{C_0} e^{-sL}(1_{C_0^*} h_1)||_p <= gamma(C_0)^{1/p-1/q} ||1_{C_0^*} h_1||_p
    const double p = 1.5, eps = 1.0 / 64, s = eps / 16.0;
    const double q = chain_exponent(p, eps, 0, 0, 4.0);
    auto v = [&](double x) {
        return oracle::simpson([&](double y) { return oracle::mehler(s, x, y) * oracle::hermite(1, y) * oracle::gauss_weight(y); },
                               -2.0, 2.0, 4000);
    };
    const double lhs = std::pow(oracle::simpson([&](double x) { return std::pow(std::abs(v(x)), p) * oracle::gauss_weight(x); },
                                                -1.0, 1.0, 400),
                                1.0 / p);
    const double gamma_c0 = std::erf(1.0);
    const double src = std::pow(oracle::simpson([&](double y) { return std::pow(std::abs(oracle::hermite(1, y)), p) * oracle::gauss_weight(y); },
                                                -2.0, 2.0, 4000),
                                1.0 / p);
    const double rhs = std::pow(gamma_c0, 1.0 / p - 1.0 / q) * src;
    CHECK(lhs <= rhs);

    AnnuliConfig cfg;
    cfg.k_max = 0;
    cfg.f_bank = {HermiteExpansion::basis(1)};
    const auto r = ondiagonal_suite(cfg);
    for (const auto& c : r.cases) {
        if (c.label == "chain" && c.inputs["j"] == 0) CHECK(c.computed == doctest::Approx(lhs / rhs).epsilon(1e-6));
    }
}

TEST_CASE("pi3 terms and the log-weight norm") {
    DecompositionParams params;
    const auto phi = make_damped_imaginary(1.0);
    const auto h1 = HermiteExpansion::basis(1);
    const auto t0 = pi3_terms(h1, phi, params, 0.0);
    CHECK(t0.boundary_tl == 0.0);
    CHECK(t0.boundary_e == 0.0);
    CHECK(t0.tail == 0.0);

    // ||(1 + log_+|.|) h_1||_1 = sqrt(2/pi) (1 + E_1(1)/2)
    const double e1 = 0.21938393439552027368;
    const double ref = std::sqrt(2.0 / std::numbers::pi) * (1.0 + 0.5 * e1);
    CHECK(ref == doctest::Approx(0.885406087874052516).epsilon(1e-15));
    CHECK(std::abs(log_weight_norm(h1) - ref) <= 1e-8);
    const double direct = oracle::simpson([](double x) {
        return (1.0 + std::max(0.0, std::log(std::abs(x)))) * std::abs(oracle::hermite(1, x)) * oracle::gauss_weight(x);
    }, -12.0, 12.0, 2400000);
    CHECK(direct == doctest::Approx(ref).epsilon(1e-9));

    // single eigenvalue: 2 eps^2 pi3 h_k(x) equals the integration-by-parts sum exactly
    const int k = 3;
    const double x = 0.7, eps = params.epsilon();
    const double a = std::pow(discrete_admissibility(x) / params.kappa, 2), A = eps * a;
    const auto f = HermiteExpansion::basis(k);
    const cd lhs = 2.0 * eps * eps * pi3(f, phi, params, x);
    const double hk = oracle::hermite(k, x);
    const cd boundary = eps * phi.phi(A) * (a * k * std::exp(-A * k)) * hk +
                        (phi.phi(A) + A * phi.dphi(A)) * std::exp(-A * k) * hk;
    const cd tail = oracle::simpson([&](double u) { return (2.0 * phi.dphi(u) + u * phi.d2phi(u)) * std::exp(-u * k); }, A, 1.0, 200000) +
                    oracle::simpson([&](double u) { return (2.0 * phi.dphi(u) + u * phi.d2phi(u)) * std::exp(-u * k); }, 1.0, 2.0, 20000);
    CHECK(std::abs(lhs - (boundary + tail * hk)) <= 1e-6 * std::abs(lhs));
}

TEST_CASE("pi3 suite") {
    Pi3Config cfg;
    cfg.f_bank = {HermiteExpansion::basis(1), HermiteExpansion::basis(1) + HermiteExpansion::basis(3)};
    cfg.points = {0.5, -1.7, 2.5};
    const auto r = pi3_pointwise_suite(cfg);
    CHECK(r.passed());
    CHECK(count_label(r, "explicit") == 6);
    CHECK(count_label(r, "integration_by_parts") == 6);
    CHECK(find_case(r, "log_weight_h1").pass);

    Pi3Config bad = cfg;
    bad.phi = make_imaginary_power(1.0);
    CHECK_THROWS_AS(pi3_pointwise_suite(bad), DomainError);
    bad = cfg;
    bad.f_bank = {HermiteExpansion::basis(0)};
    CHECK_THROWS_AS(pi3_pointwise_suite(bad), DomainError);
}

TEST_CASE("verify suites on defaults") {
    VerifyConfig cfg;
    const auto k = verify_kernel(cfg);
    CHECK(k.passed());
    CHECK(k.config["seed"] == 7);
    CHECK(k.config["constraint_flags"].size() == 1);
    CHECK(verify_semigroup(cfg).passed());
    const auto d = verify_decomposition(cfg);
    CHECK(d.passed());
    CHECK(count_label(d, "reconstruction") == 9);
}
