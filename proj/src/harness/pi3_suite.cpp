#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ouha/error.hpp"
#include "ouha/harness.hpp"
#include "ouha/parallel.hpp"

namespace ouha {
namespace {

using cd = std::complex<double>;

constexpr double kTailEnd = 60.0;

std::vector<double> hermite_at(const HermiteExpansion& f, double x) {
    std::vector<double> h(f.degree() + 1);
    for (int k = 0; k <= f.degree(); ++k) h[k] = hermite_orthonormal(k, x, f.context());
    return h;
}

// sum_k w(k) c_k h_k(x)
template <class W>
cd spectral_at(const HermiteExpansion& f, const std::vector<double>& h, W w) {
    cd s = 0;
    for (int k = 0; k <= f.degree(); ++k) s += w(k) * f.coefficient(k) * h[k];
    return s;
}

double tail_integral(const HermiteExpansion& f, const PhiSpec& phi, double x, double lo) {
    const auto h = hermite_at(f, x);
    std::vector<double> pts{std::log(lo)};
    std::vector<double> brk = phi.breakpoints;
    brk.push_back(1.0);
    std::sort(brk.begin(), brk.end());
    for (double b : brk) {
        if (b > lo && b < kTailEnd && std::log(b) > pts.back()) pts.push_back(std::log(b));
    }
    pts.push_back(std::log(kTailEnd));
    auto integrand = [&](double s) {
        const double u = std::exp(s);
        const double w = std::abs(phi.dphi(u)) + u * std::abs(phi.d2phi(u));
        const cd e = spectral_at(f, h, [u](int k) { return std::exp(-u * k); });
        return w * std::abs(e) * u;
    };
    const auto q = quad::adaptive<double>(integrand, pts, 1e-300, 1e-10, 20000);
    if (!q.converged) throw ConvergenceError("pi3 tail integral did not converge");
    return q.value;
}

double sup_phi(const PhiSpec& phi) {
    if (phi.magnitude_bound) return *phi.magnitude_bound;
    return check_bounds(phi, 400).sup_first;
}

}  // namespace

Pi3Terms pi3_terms(const HermiteExpansion& f, const PhiSpec& phi, const DecompositionParams& params,
                   double x) {
    params.validate();
    const double eps = params.epsilon();
    const double m = discrete_admissibility(x) / params.kappa;
    const double a = m * m;
    const auto h = hermite_at(f, x);
    const cd tl = spectral_at(f, h, [&](int k) { return a * k * std::exp(-eps * a * k); });
    const cd e = spectral_at(f, h, [&](int k) { return std::exp(-eps * a * k); });
    Pi3Terms t;
    t.boundary_tl = sup_phi(phi) * std::abs(tl);
    t.boundary_e = check_bounds(phi, 400).sup_first * std::abs(e);
    t.tail = tail_integral(f, phi, x, eps * a);
    return t;
}

double log_weight_norm(const HermiteExpansion& f, double tol) {
    const std::vector<double> pts{-40.0, -12.0, -4.0, -1.0, 0.0, 1.0, 4.0, 12.0, 40.0};
    auto integrand = [&](double x) {
        const double w = 1.0 + std::max(0.0, std::log(std::abs(x)));
        return w * std::abs(f.eval(x)) * gaussian_density(x);
    };
    const auto q = quad::adaptive<double>(integrand, pts, 1e-300, tol, 20000);
    if (!q.converged) throw ConvergenceError("log-weight norm did not converge");
    return q.value;
}

SuiteReport pi3_pointwise_suite(const Pi3Config& cfg) {
    cfg.params.validate();
    if (!check_condition_d(cfg.phi).holds) {
        throw DomainError("pi3 suite needs a profile satisfying Condition D: " + cfg.phi.label);
    }
    if (cfg.f_bank.empty() || cfg.points.empty()) throw DomainError("pi3 suite needs f_bank and points");
    for (const auto& f : cfg.f_bank) {
        if (!f.zero_mean()) throw DomainError("pi3 suite needs zero-mean f");
    }
    SuiteReport r;
    r.suite = "pi3";
    r.config = {{"delta", cfg.params.delta}, {"delta_prime", cfg.params.delta_prime},
                {"kappa", cfg.params.kappa},  {"t_tol", cfg.params.t_tol},
                {"phi", cfg.phi.label},       {"points", cfg.points},
                {"bank_size", cfg.f_bank.size()}};

    const double eps = cfg.params.epsilon();
    const std::size_t np = cfg.points.size();
    struct Out {
        double pi3 = 0;
        Pi3Terms terms;
        double sharp = 0;
    };
    std::vector<Out> out(cfg.f_bank.size() * np);
    parallel_for(out.size(), [&](std::size_t i) {
        const auto& f = cfg.f_bank[i / np];
        const double x = cfg.points[i % np];
        out[i].pi3 = std::abs(pi3(f, cfg.phi, cfg.params, x));
        out[i].terms = pi3_terms(f, cfg.phi, cfg.params, x);
        // Integration by parts in u = eps t^2 with A = eps m~(x)^2 / kappa^2:
        // 2 eps^2 pi3 = eps Phi(A) aL e^{-A L} f + (Phi + u Phi')(A) e^{-A L} f
        //             + int_A^inf (2 Phi' + u Phi'') e^{-uL} f du
        const double m = discrete_admissibility(x) / cfg.params.kappa;
        const double a = m * m, A = eps * a;
        const auto h = hermite_at(f, x);
        const cd tl = spectral_at(f, h, [&](int k) { return a * k * std::exp(-A * k); });
        const cd e = spectral_at(f, h, [&](int k) { return std::exp(-A * k); });
        out[i].sharp = (eps * std::abs(cfg.phi.phi(A)) * std::abs(tl) +
                        std::abs(cfg.phi.phi(A) + A * cfg.phi.dphi(A)) * std::abs(e) + 2.0 * out[i].terms.tail) /
                       (2.0 * eps * eps);
    });

    auto total = [](const Pi3Terms& t) { return t.boundary_tl + t.boundary_e + t.tail; };
    const double c = out[0].pi3 / total(out[0].terms);
    r.fit("anchor_C", c);
    r.fit("C", 1.0 / (eps * eps));
    const double slack_rel = 10.0 * cfg.params.t_tol;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Json in{{"f", i / np},
                      {"x", cfg.points[i % np]},
                      {"boundary_tl", out[i].terms.boundary_tl},
                      {"boundary_e", out[i].terms.boundary_e},
                      {"tail", out[i].terms.tail}};
        const double sum = total(out[i].terms);
        r.add(make_case("pointwise_anchor_fit", in, out[i].pi3, c * sum, slack_rel * c * sum, false));
        r.add(make_case("explicit", in, out[i].pi3, sum / (eps * eps), slack_rel * sum / (eps * eps)));
        r.add(make_case("integration_by_parts", in, out[i].pi3, out[i].sharp, slack_rel * out[i].sharp));
    }

    const auto h1 = HermiteExpansion::basis(1);
    const double ref = std::sqrt(2.0 / std::numbers::pi) * (1.0 + 0.5 * 0.21938393439552027368);
    r.add(make_case("log_weight_h1", {{"reference", ref}}, std::abs(log_weight_norm(h1) - ref), 0.0, 1e-8));
    for (std::size_t i = 0; i < cfg.f_bank.size(); ++i) {
        r.add(make_case("log_weight", {{"f", i}}, log_weight_norm(cfg.f_bank[i]),
                        std::numeric_limits<double>::infinity(), 0.0, false));
    }
    return r;
}

}  // namespace ouha
