#include "ouha/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ouha/error.hpp"
#include "ouha/quadrature.hpp"
#include "ouha/special.hpp"

namespace ouha {
namespace {

using cd = std::complex<double>;
constexpr int kOuterNodes = 16;
constexpr int kMaxOuterPanels = 64;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Breakpoints in sigma = log t on (lo, hi): dyadic jumps of rho(t) and
// the profile's breakpoints b at (delta + delta') t^2 = b.
std::vector<double> sigma_breaks(double t_lo, double t_hi, const PhiSpec& phi, double eps) {
    std::vector<double> pts{std::log(t_lo), std::log(t_hi)};
    for (int k = 0; k < 1100; ++k) {
        const double t = std::ldexp(1.0, -k);
        if (t <= t_lo) break;
        if (t < t_hi) pts.push_back(std::log(t));
    }
    for (double b : phi.breakpoints) {
        const double t = std::sqrt(b / eps);
        if (t > t_lo && t < t_hi) pts.push_back(std::log(t));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Composite Gauss-Legendre in sigma over every piece, panel count doubled
// until successive totals agree.  `slice(t)` gives the truncated inner input.
template <class Slice>
cd outer_kernel_integral(const Slice& slice, const PhiSpec& phi, const DecompositionParams& params,
                         double x, const char* name) {
    const double a = discrete_admissibility(x) / params.kappa;
    const double t_min = a * std::pow(params.t_tol / 10.0, 0.25);
    const double eps = params.epsilon();
    const auto pts = sigma_breaks(t_min, a, phi, eps);
    const quad::Rule& rule = quad::gauss_legendre(kOuterNodes);

    // Second component: |Phi~| sum_k |c_k| e^{x^2/2}, a size scale of the
    // integrand that stays meaningful where the integral itself vanishes.
    const double envelope = std::exp(0.5 * x * x);
    auto integrand = [&](double s) -> std::pair<cd, double> {
        const double t = std::exp(s);
        const TruncatedPolynomial g = slice(t);
        const cd inner = kernel_apply_t2L(g, t, params.delta_prime, x, params.kernel_tol);
        const cd ph = phi.phi(eps * t * t);
        double coef = 0;
        for (const cd& c : g.poly.coefficients()) coef += std::abs(c);
        return {ph * inner, std::abs(ph) * coef * envelope};
    };
    auto level = [&](int panels, double& abs_total) {
        cd total = 0;
        abs_total = 0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double width = (pts[i + 1] - pts[i]) / panels;
            for (int p = 0; p < panels; ++p) {
                const double c = pts[i] + (p + 0.5) * width, h = 0.5 * width;
                for (int j = 0; j < kOuterNodes; ++j) {
                    const auto [v, av] = integrand(c + h * rule.nodes[j]);
                    total += h * rule.weights[j] * v;
                    abs_total += h * rule.weights[j] * av;
                }
            }
        }
        return total;
    };
    double abs_prev = 0, abs_cur = 0;
    cd prev = level(1, abs_prev);
    for (int panels = 2; panels <= kMaxOuterPanels; panels *= 2) {
        const cd cur = level(panels, abs_cur);
        if (std::abs(cur - prev) <= params.t_tol * std::max(std::abs(cur), 1e-3 * abs_cur)) {
            return cur;
        }
        prev = cur;
    }
    throw ConvergenceError(std::string(name) + ": dt/t quadrature did not converge on t in [" +
                           fmt(t_min) + ", " + fmt(a) + "] at x=" + fmt(x));
}

void require_zero_mean(const HermiteExpansion& f, const char* who) {
    if (!f.zero_mean()) throw DomainError(std::string(who) + " needs a zero-mean expansion");
}

double profile_bound(const PhiSpec& phi) {
    if (phi.magnitude_bound) return *phi.magnitude_bound;
    const auto b = check_bounds(phi, 400);
    if (!b.finite) throw TailBoundError("profile declares no magnitude bound and is unbounded");
    return b.sup_first;
}

}  // namespace

void DecompositionParams::validate() const {
    if (!(delta > 0)) throw DomainError("delta must be positive");
    if (!(delta_prime > 0)) throw DomainError("delta' must be positive");
    if (!(kappa >= 1)) throw DomainError("kappa must be >= 1");
    if (!(t_tol > 0) || !(kernel_tol > 0)) throw DomainError("tolerances must be positive");
}

bool is_power_of_four(double kappa) {
    if (!(kappa >= 1) || !std::isfinite(kappa)) return false;
    int e = 0;
    const double m = std::frexp(kappa, &e);  // kappa = m 2^e
    return m == 0.5 && (e - 1) % 2 == 0;
}

std::vector<std::string> DecompositionParams::constraint_flags() const {
    std::vector<std::string> flags;
    const double q = 1.0 / 64.0;
    if (!(delta_prime < q)) flags.push_back("delta_prime_lt_4^-3");
    if (!(8.0 * (delta + delta_prime) <= q)) flags.push_back("8(delta+delta_prime)_le_4^-3");
    if (!is_power_of_four(kappa)) flags.push_back("kappa_power_of_4");
    return flags;
}

double scaling_constant(double delta, double delta_prime) {
    if (!(delta > 0) || !(delta_prime > 0)) throw DomainError("scaling_constant needs positive deltas");
    const double e = delta + delta_prime;
    return 2.0 * e * e;
}

UField::UField(HermiteExpansion f, double delta) : f_(std::move(f)), delta_(delta) {
    require_zero_mean(f_, "build_u");
    if (!(delta > 0)) throw DomainError("build_u needs delta > 0");
}

std::complex<double> UField::operator()(double y, double t) const {
    if (!(t > 0)) throw DomainError("u(y, t) needs t > 0");
    if (!(t < discrete_admissibility(y))) return 0.0;
    return t2L_semigroup(f_, t, delta_).eval(y);
}

TruncatedPolynomial UField::slice(double t) const {
    return TruncatedPolynomial::inside(untruncated(t), region_slice(t).radius);
}

HermiteExpansion UField::untruncated(double t) const { return t2L_semigroup(f_, t, delta_); }

UField build_u(const HermiteExpansion& f, double delta) { return UField(f, delta); }

std::complex<double> pi1(const UField& u, const PhiSpec& phi, const DecompositionParams& params,
                         double x) {
    params.validate();
    auto slice = [&](double t) { return u.slice(t); };
    return outer_kernel_integral(slice, phi, params, x, "pi1");
}

std::complex<double> pi2(const HermiteExpansion& f, const PhiSpec& phi,
                         const DecompositionParams& params, double x) {
    params.validate();
    require_zero_mean(f, "pi2");
    auto slice = [&](double t) {
        return TruncatedPolynomial::outside(t2L_semigroup(f, t, params.delta),
                                            region_slice(t).radius);
    };
    return outer_kernel_integral(slice, phi, params, x, "pi2");
}

std::complex<double> pi3(const HermiteExpansion& f, const PhiSpec& phi,
                         const DecompositionParams& params, double x) {
    params.validate();
    require_zero_mean(f, "pi3");
    const double eps = params.epsilon();
    const double a = discrete_admissibility(x) / params.kappa;
    const double B = profile_bound(phi);
    const int N = phi.claims_condition_p.value_or(0);
    if (N < 0) throw DomainError("Condition P power must be >= 0");
    cd total = 0;
    for (int k = 1; k <= f.degree(); ++k) {
        const cd ck = f.coefficient(k);
        if (ck == 0.0) continue;
        // Tail beyond T: B k^{-N} Gamma(N + 2, eps k T^2) / (2 eps^2); make it
        // at most 1e-3 t_tol on the scale 1/(2 eps^2).
        const double target = 1e-3 * params.t_tol * std::pow(double(k), N);
        double v = std::max(1.0, eps * k * a * a);
        while (special::upper_gamma_int(N + 2, v) > target) v += 0.5;
        const double T = std::max(a, std::sqrt(v / (eps * k)));
        for (int i = 0; i <= 64; ++i) {
            const double t = a * std::pow(2.0 * T / a, i / 64.0);
            const double r = eps * t * t;
            const double allowed = B * std::pow(std::max(1.0, r), N) * (1.0 + 1e-9);
            if (std::abs(phi.phi(r)) > allowed) {
                throw TailBoundError("pi3: |Phi(" + fmt(r) + ")| exceeds the declared bound " +
                                     fmt(B) + " (N=" + std::to_string(N) + ")");
            }
        }
        std::vector<double> pts{std::log(a), std::log(T)};
        for (double b : phi.breakpoints) {
            const double t = std::sqrt(b / eps);
            if (t > a && t < T) pts.insert(pts.end() - 1, std::log(t));
        }
        const double kk = k;
        auto integrand = [&](double s) {
            const double t2 = std::exp(2.0 * s);
            const double lam = t2 * kk;
            return phi.phi(eps * t2) * (lam * lam * std::exp(-eps * lam));
        };
        const double scale = B / (2.0 * eps * eps);
        const auto q = quad::adaptive<cd>(integrand, pts, 1e-3 * params.t_tol * scale,
                                          1e-2 * params.t_tol);
        if (!q.converged) {
            throw ConvergenceError("pi3: quadrature did not converge on t in [" + fmt(a) + ", " +
                                   fmt(T) + "] for k=" + std::to_string(k));
        }
        total += ck * hermite_orthonormal(k, x, f.context()) * q.value;
    }
    return total;
}

std::complex<double> truncated_spectral(const HermiteExpansion& f, const PhiSpec& phi,
                                        const DecompositionParams& params, double x) {
    params.validate();
    const double eps = params.epsilon();
    const double a = discrete_admissibility(x) / params.kappa;
    const double t_lo = a * 1e-4;
    cd total = 0;
    for (int k = 1; k <= f.degree(); ++k) {
        const cd ck = f.coefficient(k);
        if (ck == 0.0) continue;
        std::vector<double> pts{std::log(t_lo), std::log(a)};
        for (double b : phi.breakpoints) {
            const double t = std::sqrt(b / eps);
            if (t > t_lo && t < a) pts.insert(pts.end() - 1, std::log(t));
        }
        const double kk = k;
        auto integrand = [&](double s) {
            const double t2 = std::exp(2.0 * s);
            const double lam = t2 * kk;
            return phi.phi(eps * t2) * (lam * lam * std::exp(-eps * lam));
        };
        const auto q = quad::adaptive<cd>(integrand, pts, 1e-16, 1e-13);
        total += ck * hermite_orthonormal(k, x, f.context()) * q.value;
    }
    return total;
}

ResidualReport reconstruction_report(const HermiteExpansion& f, const PhiSpec& phi,
                                     const DecompositionParams& params,
                                     const std::vector<double>& grid) {
    params.validate();
    require_zero_mean(f, "reconstruction_residual");
    const double c = scaling_constant(params.delta, params.delta_prime);
    const HermiteExpansion target = apply_multiplier(f, phi, 1e-12);
    const UField u = build_u(f, params.delta);
    ResidualReport r;
    for (double x : grid) {
        ResidualPoint p;
        p.x = x;
        p.target = target.eval(x);
        p.pi1 = pi1(u, phi, params, x);
        p.pi2 = pi2(f, phi, params, x);
        p.pi3 = pi3(f, phi, params, x);
        p.residual = std::abs(p.target - c * (p.pi1 + p.pi2 + p.pi3));
        r.max_residual = std::max(r.max_residual, p.residual);
        r.points.push_back(p);
    }
    return r;
}

double reconstruction_residual(const HermiteExpansion& f, const PhiSpec& phi,
                               const DecompositionParams& params, const std::vector<double>& grid) {
    return reconstruction_report(f, phi, params, grid).max_residual;
}

}  // namespace ouha
