#include "ouha/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ouha/error.hpp"
#include "ouha/quadrature.hpp"
#include "ouha/special.hpp"

namespace ouha {
namespace {

using cd = std::complex<double>;
constexpr cd I(0.0, 1.0);

cd tpow(double t, cd e) { return std::exp(e * std::log(t)); }

double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep_d1(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }
double smoothstep_d2(double u) { return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u); }

double chi(double t) { return t <= 1 ? 1.0 : t >= 2 ? 0.0 : 1.0 - smoothstep(t - 1.0); }
double chi_d1(double t) { return t <= 1 || t >= 2 ? 0.0 : -smoothstep_d1(t - 1.0); }
double chi_d2(double t) { return t <= 1 || t >= 2 ? 0.0 : -smoothstep_d2(t - 1.0); }

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
    return g;
}

}  // namespace

PhiSpec make_constant_phi() {
    PhiSpec s;
    s.phi = [](double) { return cd(1.0); };
    s.dphi = [](double) { return cd(0.0); };
    s.d2phi = [](double) { return cd(0.0); };
    s.label = "constant";
    s.claims_bounded = true;
    s.claims_condition_d = true;
    s.claims_condition_p = 0;
    s.magnitude_bound = 1.0;
    return s;
}

PhiSpec make_imaginary_power(double tau) {
    const cd g = special::gamma(cd(2.0, -tau));
    const cd e = -I * tau;
    PhiSpec s;
    s.phi = [e, g](double t) { return tpow(t, e) / g; };
    s.dphi = [e, g](double t) { return e * tpow(t, e - 1.0) / g; };
    s.d2phi = [e, g](double t) { return e * (e - 1.0) * tpow(t, e - 2.0) / g; };
    s.label = "imaginary_power(tau=" + std::to_string(tau) + ")";
    s.claims_bounded = true;
    s.claims_condition_p = 0;
    s.magnitude_bound = 1.0 / std::abs(g);
    return s;
}

PhiSpec make_damped_imaginary(double tau) {
    const cd e = -I * tau;
    PhiSpec s;
    s.phi = [e](double t) { return t >= 2 ? cd(0.0) : tpow(t, e) * chi(t); };
    s.dphi = [e](double t) {
        if (t >= 2) return cd(0.0);
        return e * tpow(t, e - 1.0) * chi(t) + tpow(t, e) * chi_d1(t);
    };
    s.d2phi = [e](double t) {
        if (t >= 2) return cd(0.0);
        return e * (e - 1.0) * tpow(t, e - 2.0) * chi(t) + 2.0 * e * tpow(t, e - 1.0) * chi_d1(t) +
               tpow(t, e) * chi_d2(t);
    };
    s.label = "damped_imaginary(tau=" + std::to_string(tau) + ")";
    s.claims_bounded = true;
    s.claims_condition_d = true;
    s.claims_condition_p = 0;
    s.magnitude_bound = 1.0;
    s.breakpoints = {1.0, 2.0};
    return s;
}

PhiSpec make_custom_phi(std::string label, ProfileFn phi, ProfileFn dphi, ProfileFn d2phi) {
    if (!phi || !dphi || !d2phi) throw DomainError("custom profile needs Phi, Phi' and Phi''");
    PhiSpec s;
    s.phi = std::move(phi);
    s.dphi = std::move(dphi);
    s.d2phi = std::move(d2phi);
    s.label = std::move(label);
    return s;
}

PhiSpec make_phi(PhiKind kind, double tau) {
    switch (kind) {
        case PhiKind::constant:
            return make_constant_phi();
        case PhiKind::imaginary_power:
            return make_imaginary_power(tau);
        case PhiKind::damped_imaginary:
            return make_damped_imaginary(tau);
        case PhiKind::custom:
            break;
    }
    throw DomainError("custom profiles are built with make_custom_phi");
}

BoundsReport check_bounds(const PhiSpec& spec, int samples) {
    if (samples < 2) throw DomainError("check_bounds needs at least two samples");
    BoundsReport r;
    auto first = [&](double t) { return std::abs(spec.phi(t)) + t * std::abs(spec.dphi(t)); };
    auto second = [&](double t) { return t * t * std::abs(spec.d2phi(t)); };
    auto sup = [&](auto&& fn, double lo, double hi, double& arg) {
        double best = 0;
        for (double t : log_grid(lo, hi, samples)) {
            const double v = fn(t);
            if (!std::isfinite(v)) {
                arg = t;
                return std::numeric_limits<double>::infinity();
            }
            if (v > best) {
                best = v;
                arg = t;
            }
        }
        return best;
    };
    double unused = 0;
    r.sup_first = sup(first, 1e-6, 1e6, r.argsup_first);
    r.sup_second = sup(second, 1e-6, 1.0, r.argsup_second);
    r.sup_first_extended = sup(first, 1e-8, 1e8, unused);
    r.sup_second_extended = sup(second, 1e-8, 1.0, unused);
    auto grows = [](double base, double ext) {
        return !std::isfinite(ext) || ext > base * (1.0 + 1e-2) + 1e-12;
    };
    r.finite = !grows(r.sup_first, r.sup_first_extended) &&
               !grows(r.sup_second, r.sup_second_extended);
    return r;
}

ConditionDReport check_condition_d(const PhiSpec& spec, double tol) {
    ConditionDReport r;
    // integrand in sigma = log t: e^sigma (|Phi'| + e^sigma |Phi''|)
    auto f = [&](double s) {
        const double t = std::exp(s);
        return t * (std::abs(spec.dphi(t)) + t * std::abs(spec.d2phi(t)));
    };
    double T = 1.0;
    int small = 0;
    for (int i = 0; i < 40; ++i) {
        std::vector<double> pts{std::log(T)};
        for (double b : spec.breakpoints) {
            if (b > T && b < 2 * T) pts.push_back(std::log(b));
        }
        pts.push_back(std::log(2 * T));
        const auto q = quad::adaptive<double>(f, pts, tol * 1e-3, 1e-10);
        if (!std::isfinite(q.value)) break;
        r.increments.push_back(q.value);
        r.integral_estimate += q.value;
        small = q.value < tol ? small + 1 : 0;
        T *= 2;
        if (small >= 2) {
            r.holds = true;
            break;
        }
    }
    return r;
}

ConditionPReport check_condition_p(const PhiSpec& spec, int N) {
    ConditionPReport r;
    auto ratio = [&](double t) {
        return (std::abs(spec.dphi(t)) + t * std::abs(spec.d2phi(t))) / std::pow(t, N);
    };
    auto sup = [&](double hi, int n) {
        double best = 0;
        for (double t : log_grid(1.0, hi, n)) {
            const double v = ratio(t);
            if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
            best = std::max(best, v);
        }
        return best;
    };
    r.fitted_constant = sup(1e4, 400);
    r.extended_constant = sup(1e8, 800);
    r.holds = std::isfinite(r.extended_constant) &&
              r.extended_constant <= r.fitted_constant * (1.0 + 1e-6) + 1e-300;
    return r;
}

std::complex<double> phi_lambda(const PhiSpec& spec, double lambda, double tol) {
    if (!(lambda >= 0)) throw DomainError("phi_lambda needs lambda >= 0");
    if (lambda == 0) return 0.0;
    // r = t lambda, sigma = log r: int Phi(e^sigma / lambda) e^{2 sigma} e^{-e^sigma} d sigma
    auto f = [&](double s) {
        const double r = std::exp(s);
        return spec.phi(r / lambda) * std::exp(2.0 * s - r);
    };
    constexpr double lo = -40.0, hi = 4.5;
    std::vector<double> pts{lo};
    for (double b : spec.breakpoints) {
        const double s = std::log(b * lambda);
        if (s > lo && s < hi) pts.push_back(s);
    }
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    const auto q = quad::adaptive<cd>(f, pts, tol * 1e-3, tol * 1e-2);
    if (!q.converged) {
        throw ConvergenceError("phi_lambda did not converge at lambda=" + std::to_string(lambda));
    }
    return q.value;
}

HermiteExpansion apply_multiplier(const HermiteExpansion& f, const PhiSpec& spec, double tol) {
    std::vector<cd> c(f.coefficients());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= phi_lambda(spec, double(k), tol);
    return HermiteExpansion(std::move(c), f.context());
}

}  // namespace ouha
