#include "ouha/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ouha/error.hpp"
#include "ouha/kernels.hpp"
#include "ouha/special.hpp"

namespace ouha {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogSqrtPi = 0.5 * std::log(std::numbers::pi);

}  // namespace

void GaussianContext::validate() const {
    if (dimension != 1) throw DomainError("only dimension 1 is supported");
    if (degree_max < 1) throw DomainError("degree_max must be >= 1");
    if (!(tol > 0)) throw DomainError("tol must be positive");
}

double gaussian_density(double x) { return std::exp(-x * x) / std::sqrt(std::numbers::pi); }

double ball_measure(double center, double radius) {
    if (!(radius > 0)) throw DomainError("ball radius must be positive");
    if (std::isinf(radius)) return 1.0;
    const double lo = center - radius;
    const double hi = center + radius;
    if (lo >= 0) return 0.5 * (special::erfc(lo) - special::erfc(hi));
    if (hi <= 0) return 0.5 * (special::erfc(-hi) - special::erfc(-lo));
    return 0.5 * (special::erf(hi) - special::erf(lo));
}

double log_ball_measure(double center, double radius) {
    if (!(radius > 0)) throw DomainError("ball radius must be positive");
    if (std::isinf(radius)) return 0.0;
    double lo = center - radius;
    double hi = center + radius;
    if (hi <= 0) {
        std::swap(lo, hi);
        lo = -lo;
        hi = -hi;
    }
    if (lo >= 0) {
        return std::log(0.5) + special::log_sub_exp(special::log_erfc(lo), special::log_erfc(hi));
    }
    return std::log(0.5 * (special::erf(hi) + special::erf(-lo)));
}

Annulus Annulus::unstarred(int k) {
    if (k < 0) throw DomainError("annulus index must be >= 0");
    Annulus a;
    a.k = k;
    a.starred = false;
    a.inner = k == 0 ? 0.0 : std::ldexp(1.0, k - 1);
    a.outer = std::ldexp(1.0, k);
    return a;
}

Annulus Annulus::star(int k) {
    if (k < 0) throw DomainError("annulus index must be >= 0");
    Annulus a;
    a.k = k;
    a.starred = true;
    if (k == 0) {
        a.inner = 0.0;
        a.outer = 2.0;
    } else if (k == 1) {
        a.inner = 0.0;
        a.outer = 4.0;
    } else {
        a.inner = std::ldexp(1.0, k - 2);
        a.outer = std::ldexp(1.0, k + 1);
    }
    return a;
}

bool Annulus::contains(double x) const {
    const double r = std::abs(x);
    return r < outer && (inner == 0.0 || r >= inner);
}

double annulus_measure(const Annulus& a) { return std::exp(log_annulus_measure(a)); }

double log_annulus_measure(const Annulus& a) {
    if (a.inner == 0.0) return log_ball_measure(0.0, a.outer);
    // gamma(inner <= |x| < outer) = erfc(inner) - erfc(outer)
    return special::log_sub_exp(special::log_erfc(a.inner), special::log_erfc(a.outer));
}

double admissibility(double x) {
    const double r = std::abs(x);
    return r <= 1.0 ? 1.0 : 1.0 / r;
}

double discrete_admissibility(double x) {
    const double r = std::abs(x);
    if (r < 1.0) return 1.0;
    int e = 0;
    std::frexp(r, &e);  // 2^{e-1} <= r < 2^e
    return std::ldexp(1.0, -e);
}

RegionSlice region_slice(double t) {
    if (!(t > 0)) throw DomainError("region_slice needs t > 0");
    RegionSlice s;
    s.t = t;
    if (t >= 1.0) return s;
    int e = 0;
    std::frexp(t, &e);  // t = m 2^e, m in [1/2, 1): largest k with 2^{-k} > t is -e
    s.radius = std::ldexp(1.0, -e);
    return s;
}

double hermite_orthonormal(int k, double x, const GaussianContext& ctx) {
    if (k < 0 || k > ctx.degree_max) {
        throw DomainError("Hermite degree " + std::to_string(k) + " outside [0, " +
                          std::to_string(ctx.degree_max) + "]");
    }
    double prev = 0.0, cur = 1.0;
    for (int j = 0; j < k; ++j) {
        const double next =
            std::sqrt(2.0 / (j + 1)) * x * cur - std::sqrt(double(j) / (j + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

quad::Rule gamma_quadrature(int N) {
    if (N < 1) throw DomainError("gamma_quadrature needs N >= 1");
    return quad::gauss_hermite_gamma(N);
}

BatchEvaluator pointwise(std::function<std::complex<double>(double)> f) {
    return [f = std::move(f)](std::span<const double> x, std::span<double> re,
                              std::span<double> im) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto v = f(x[i]);
            re[i] = v.real();
            im[i] = v.imag();
        }
    };
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kNodes = 16;
constexpr double kRootWindow = 12.0;
constexpr int kRootSamples = 6144;
constexpr double kGradeStart = 0.125;

// Points where |f|^p is not smooth at the panel scale: zeros of real-valued f
// (sign changes) and near-zeros of complex f (local minima of |f|^2).  Each
// gets panel breakpoints graded geometrically toward it, down to the
// estimated distance of the nearby complex root.
std::vector<double> graded_breakpoints(const BatchEvaluator& f) {
    std::vector<double> x(kRootSamples + 1), re(x.size()), im(x.size());
    const double h = 2.0 * kRootWindow / kRootSamples;
    for (int i = 0; i <= kRootSamples; ++i) x[i] = -kRootWindow + i * h;
    f(x, re, im);
    double one_x[1], one_re[1], one_im[1];
    auto eval = [&](double v) {
        one_x[0] = v;
        f(std::span<const double>(one_x, 1), std::span<double>(one_re, 1),
          std::span<double>(one_im, 1));
        return std::complex<double>(one_re[0], one_im[0]);
    };
    auto m2 = [&](double v) { return std::norm(eval(v)); };

    struct Critical {
        double x0;
        double eps;
    };
    std::vector<Critical> crit;
    for (int i = 0; i < kRootSamples; ++i) {
        const bool real_pair = im[i] == 0.0 && im[i + 1] == 0.0;
        if (real_pair && re[i] != 0.0 && re[i + 1] != 0.0 && (re[i] < 0) != (re[i + 1] < 0)) {
            double a = x[i], b = x[i + 1], fa = re[i];
            for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
                const double m = 0.5 * (a + b);
                const double fm = eval(m).real();
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((fm < 0) == (fa < 0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            crit.push_back({0.5 * (a + b), 0.0});
            continue;
        }
        if (i == 0) continue;
        const double l = re[i - 1] * re[i - 1] + im[i - 1] * im[i - 1];
        const double c = re[i] * re[i] + im[i] * im[i];
        const double r = re[i + 1] * re[i + 1] + im[i + 1] * im[i + 1];
        if (!(c <= l && c < r)) continue;
        if (c == 0.0) {
            crit.push_back({x[i], 0.0});
            continue;
        }
        // golden section on [x_{i-1}, x_{i+1}]
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = x[i - 1], b = x[i + 1];
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        double f1 = m2(x1), f2 = m2(x2);
        for (int it = 0; it < 100 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = m2(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = m2(x2);
            }
        }
        const double x0 = 0.5 * (a + b);
        const double v0 = m2(x0);
        const double d = 1e-3;
        const double curv = (m2(x0 + d) - 2.0 * v0 + m2(x0 - d)) / (2.0 * d * d);
        if (!(curv > 0)) continue;
        const double eps = std::sqrt(v0 / curv);
        if (eps < kGradeStart) crit.push_back({x0, eps});
    }
    std::vector<double> breaks;
    for (const auto& c : crit) {
        breaks.push_back(c.x0);
        const double floor = std::max(0.25 * c.eps, 1e-12 * std::max(1.0, std::abs(c.x0)));
        for (double w = kGradeStart; w > floor; w *= 0.5) {
            breaks.push_back(c.x0 - w);
            breaks.push_back(c.x0 + w);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return breaks;
}

// log of the composite rule on [-R, R] with `panels` equal panels, each split
// further at the given breakpoints.
double log_composite(const BatchEvaluator& f, double p, double R, int panels,
                     const std::vector<double>& breaks) {
    std::vector<double> x, w;
    x.reserve(std::size_t(panels + breaks.size()) * kNodes);
    w.reserve(x.capacity());
    const double width = 2.0 * R / panels;
    auto it = std::lower_bound(breaks.begin(), breaks.end(), -R);
    for (int i = 0; i < panels; ++i) {
        double lo = -R + i * width;
        const double hi = i + 1 == panels ? R : lo + width;
        while (it != breaks.end() && *it < hi) {
            if (*it > lo) {
                quad::composite_gl(lo, *it, 1, kNodes, x, w);
                lo = *it;
            }
            ++it;
        }
        quad::composite_gl(lo, hi, 1, kNodes, x, w);
    }
    std::vector<double> re(x.size()), im(x.size()), lw(x.size()), out(x.size());
    f(x, re, im);
    for (std::size_t i = 0; i < x.size(); ++i) lw[i] = std::log(w[i]) - kLogSqrtPi;
    kernels::log_weighted_power(lw, re, im, x, p, out);
    double shift = kNegInf;
    for (double v : out) shift = std::max(shift, v);
    if (shift == kNegInf) return kNegInf;
    return shift + std::log(kernels::sum_exp_shifted(out, shift));
}

bool close_in_norm(double l1, double l2, double p, double tol) {
    if (l1 == kNegInf && l2 == kNegInf) return true;
    if (l1 == kNegInf || l2 == kNegInf) return false;
    return std::abs(std::expm1((l1 - l2) / p)) <= tol;
}

}  // namespace

double log_lp_integral(const BatchEvaluator& f, double p, double tol) {
    if (!(p >= 1.0)) throw DomainError("lp_norm needs p >= 1");
    if (!(tol > 0)) throw DomainError("lp_norm needs tol > 0");
    const std::vector<double> breaks = graded_breakpoints(f);
    double R = 8.0;
    int panels = 64;
    double prev = log_composite(f, p, R, panels, breaks);
    bool converged = false;
    double cur = prev;
    for (int i = 0; i < 4; ++i) {
        R *= 2.0;
        panels *= 2;
        cur = log_composite(f, p, R, panels, breaks);
        if (close_in_norm(prev, cur, p, tol)) {
            converged = true;
            break;
        }
        prev = cur;
    }
    if (!converged) {
        throw ConvergenceError("lp_norm: truncation radius did not converge up to R = " +
                               std::to_string(R));
    }
    for (int i = 0; i < 4; ++i) {
        panels *= 2;
        const double next = log_composite(f, p, R, panels, breaks);
        if (close_in_norm(cur, next, p, tol)) return next;
        cur = next;
    }
    throw ConvergenceError("lp_norm: panel refinement did not converge at R = " +
                           std::to_string(R));
}

double lp_norm(const BatchEvaluator& f, double p, double tol) {
    const double l = log_lp_integral(f, p, tol);
    return l == kNegInf ? 0.0 : std::exp(l / p);
}

IntervalSet interval_set(const Annulus& a) {
    if (a.inner == 0.0) return {{-a.outer, a.outer}};
    return {{-a.outer, -a.inner}, {a.inner, a.outer}};
}

IntervalSet centered_ball_set(double radius) { return {{-radius, radius}}; }

double log_lp_integral_on(const LogAbsEvaluator& log_abs, double p, const IntervalSet& set,
                          double tol) {
    if (!(p > 0)) throw DomainError("log_lp_integral_on needs p > 0");
    double total = kNegInf;
    for (const auto& iv : set) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
            throw DomainError("log_lp_integral_on needs bounded intervals");
        }
        if (!(iv.hi > iv.lo)) continue;
        const int pieces = std::clamp(int(std::ceil((iv.hi - iv.lo) / 0.5)), 1, 256);
        std::vector<double> pts(pieces + 1);
        for (int i = 0; i <= pieces; ++i) pts[i] = iv.lo + (iv.hi - iv.lo) * i / pieces;
        pts.back() = iv.hi;
        auto integrand = [&](std::span<const double> x, std::span<double> out) {
            log_abs(x, out);
            for (std::size_t i = 0; i < x.size(); ++i) {
                out[i] = out[i] == kNegInf ? kNegInf : p * out[i] - x[i] * x[i] - kLogSqrtPi;
            }
        };
        const auto r = quad::adaptive_log(integrand, pts, tol, 20000);
        if (!r.converged) {
            throw ConvergenceError("restricted L^p integral did not converge on [" +
                                   std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + "]");
        }
        total = special::log_add_exp(total, r.log_value);
    }
    return total;
}

}  // namespace ouha
