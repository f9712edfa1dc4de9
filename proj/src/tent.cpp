#include "ouha/tent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "ouha/error.hpp"
#include "ouha/parallel.hpp"
#include "ouha/quadrature.hpp"

namespace ouha {
namespace {

constexpr int kNodes = 16;
constexpr int kMaxPanels = 64;
constexpr double kSpaceCut = 12.0;  // |y| beyond this carries < e^{-140} of gamma
constexpr double kOuterRadius = 8.0;
const double kLogInvSqrtPi = -0.5 * std::log(std::numbers::pi);

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Composite GL16 over the pieces of `pts`, panel count doubled until two
// successive totals agree to rel_tol.  eval(nodes) returns the integrand at
// every node (batched so callers can parallelize).
template <class Eval>
double doubling_gl(const std::vector<double>& pts, const Eval& eval, double rel_tol,
                   const std::string& what) {
    auto level = [&](int panels) {
        std::vector<double> x, w;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (pts[i + 1] > pts[i]) quad::composite_gl(pts[i], pts[i + 1], panels, kNodes, x, w);
        }
        const std::vector<double> v = eval(x);
        double s = 0;
        for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i];
        return s;
    };
    double prev = level(1);
    for (int panels = 2; panels <= kMaxPanels; panels *= 2) {
        const double cur = level(panels);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur) || (cur == 0 && prev == 0)) return cur;
        prev = cur;
    }
    throw ConvergenceError(what + " did not converge");
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// int_lo^hi |g(y)|^2 e^{log_weight(y)} dy
template <class LogWeight>
double weighted_square(const HermiteExpansion& g, double lo, double hi, const LogWeight& log_weight,
                       double tol) {
    if (!(hi > lo)) return 0.0;
    const auto ev = g.evaluator();
    auto eval = [&](const std::vector<double>& y) {
        std::vector<double> re(y.size()), im(y.size()), out(y.size());
        ev(y, re, im);
        for (std::size_t i = 0; i < y.size(); ++i) {
            out[i] = (re[i] * re[i] + im[i] * im[i]) * std::exp(log_weight(y[i]));
        }
        return out;
    };
    return doubling_gl({lo, hi}, eval, tol, "spatial quadrature on [" + fmt(lo) + ", " + fmt(hi) + "]");
}

double radius_at(double t, double height) { return region_slice(t / height).radius; }

// Slice of the cone at height t.
std::pair<double, double> cone_slice(const ConeSpec& c, double t) {
    const double rho = std::min(radius_at(t, c.height), kSpaceCut);
    return {std::max(c.vertex - c.aperture * t, -rho), std::min(c.vertex + c.aperture * t, rho)};
}

// log t breakpoints where the cone slice changes shape.
std::vector<double> cone_breaks(const ConeSpec& c, double t_min) {
    std::vector<double> t{t_min, c.height};
    const double ax = std::abs(c.vertex);
    for (int k = 0;; ++k) {
        const double top = c.height * std::ldexp(1.0, -k), bottom = 0.5 * top;
        if (top <= t_min) break;
        t.push_back(top);
        const double rho = std::ldexp(1.0, k);
        for (double cand : {(rho - ax) / c.aperture, (rho + ax) / c.aperture, (ax - rho) / c.aperture}) {
            if (cand > bottom && cand < top) t.push_back(cand);
        }
    }
    std::vector<double> s;
    for (double v : t) {
        if (v >= t_min && v <= c.height) s.push_back(std::log(v));
    }
    return sorted_unique(s);
}

}  // namespace

void ConeSpec::validate() const {
    if (!(aperture > 0) || !(height > 0) || !std::isfinite(vertex)) {
        throw DomainError("cone needs a finite vertex and positive aperture and height");
    }
}

double square_function(const HermiteExpansion& f, double x, double tol) {
    if (!(tol > 0)) throw DomainError("square_function needs tol > 0");
    const double top = 2.0 * admissibility(x);
    const double t_min = top * std::pow(tol / 10.0, 0.25) / 4.0;
    auto eval = [&](const std::vector<double>& s) {
        std::vector<double> out(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double t = std::exp(s[i]);
            const double log_ball = log_ball_measure(x, t);
            out[i] = weighted_square(t2L_semigroup(f, t, 1.0), x - t, x + t,
                                     [&](double y) { return -y * y + kLogInvSqrtPi - log_ball; },
                                     tol / 10.0);
        }
        return out;
    };
    const double v = doubling_gl({std::log(t_min), std::log(top)}, eval, tol,
                                 "square function at x=" + fmt(x));
    return std::sqrt(std::max(v, 0.0));
}

double cone_integral(const FieldSlice& field, const ConeSpec& cone, double tol) {
    cone.validate();
    if (!(tol > 0)) throw DomainError("cone_integral needs tol > 0");
    const double t_min =
        cone.height * discrete_admissibility(cone.vertex) * std::pow(tol / 10.0, 0.25) / 4.0;
    const auto pts = cone_breaks(cone, t_min);
    auto eval = [&](const std::vector<double>& s) {
        std::vector<double> out(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double t = std::exp(s[i]);
            const auto [lo, hi] = cone_slice(cone, t);
            if (!(hi > lo)) continue;
            out[i] = weighted_square(
                field(t), lo, hi, [&](double y) { return -y * y + kLogInvSqrtPi - log_ball_measure(y, t); },
                tol / 10.0);
        }
        return out;
    };
    return doubling_gl(pts, eval, tol, "cone integral at x=" + fmt(cone.vertex));
}

double cone_integral(const UField& u, const ConeSpec& cone, double tol) {
    if (cone.height > 1) throw DomainError("cone height above the admissible region");
    return cone_integral([&](double t) { return u.untruncated(t); }, cone, tol);
}

double tent_norm(const UField& u, double p, double tol) {
    if (!(p >= 1 && p <= 2)) throw DomainError("tent_norm needs 1 <= p <= 2");
    if (!(tol > 0)) throw DomainError("tent_norm needs tol > 0");
    if (u.f().l2_norm() == 0) return 0.0;
    std::vector<double> pts{-kOuterRadius, 0.0, kOuterRadius};
    for (int k = 0; k <= 4; ++k) {
        const double rho = std::ldexp(1.0, k);
        for (double band : {std::ldexp(1.0, -k), std::ldexp(1.0, -k - 1)}) {
            for (double v : {rho, rho - band, rho + band}) {
                if (v < kOuterRadius) {
                    pts.push_back(v);
                    pts.push_back(-v);
                }
            }
        }
    }
    pts = sorted_unique(pts);
    const double inner_tol = tol / 10.0;
    auto eval = [&](const std::vector<double>& x) {
        std::vector<double> out(x.size());
        parallel_for(x.size(), [&](std::size_t i) {
            const double c = cone_integral(u, ConeSpec{x[i], 1.0, 1.0}, inner_tol);
            out[i] = std::pow(c, 0.5 * p) * gaussian_density(x[i]);
        });
        return out;
    };
    const double integral = doubling_gl(pts, eval, tol, "tent norm");
    return std::pow(integral, 1.0 / p);
}

double region_integral(const UField& u, double tol) {
    if (!(tol > 0)) throw DomainError("region_integral needs tol > 0");
    const double t_min = std::pow(tol / 10.0, 0.25) / 4.0;
    std::vector<double> pts{std::log(t_min), 0.0};
    for (int k = 1; std::ldexp(1.0, -k) > t_min; ++k) pts.push_back(std::log(std::ldexp(1.0, -k)));
    pts = sorted_unique(pts);
    auto eval = [&](const std::vector<double>& s) {
        std::vector<double> out(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double t = std::exp(s[i]);
            const double rho = std::min(region_slice(t).radius, kSpaceCut);
            out[i] = weighted_square(u.untruncated(t), -rho, rho,
                                     [](double y) { return -y * y + kLogInvSqrtPi; }, tol / 10.0);
        }
        return out;
    };
    return doubling_gl(pts, eval, tol, "region integral");
}

ApertureComparison aperture_compare(const HermiteExpansion& f, double delta, double x, double tol) {
    if (!(delta > 0 && delta <= 1)) throw DomainError("aperture_compare needs 0 < delta <= 1");
    ApertureComparison r;
    r.left = cone_integral([&](double s) { return t2L_semigroup(f, s, 1.0); },
                           ConeSpec{x, 1.0, std::sqrt(delta)}, tol);
    const double s = square_function(f, x, tol);
    r.right = s * s;
    r.ratio = r.right > 0 ? r.left / r.right : 0.0;
    return r;
}

}  // namespace ouha
