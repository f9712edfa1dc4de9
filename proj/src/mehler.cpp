#include "ouha/mehler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ouha/error.hpp"
#include "ouha/quadrature.hpp"

namespace ouha {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -kInf;
constexpr double kWindow = 12.0;   // half-width of the central window in sigma
constexpr double kCore = 6.0;      // support covering +-6 sigma makes tails negligible
constexpr int kNodes = 16;
constexpr int kMaxPanels = 256;
constexpr double kTailU = 48.0;
constexpr double kTailPanelU = 4.0;
constexpr int kTailNodes = 10;

void require_positive_time(double t) {
    if (!(t > 0)) throw DomainError("Mehler kernel needs t > 0");
}

// Running log-scaled accumulation of MehlerSum pieces.
struct Acc {
    double shift = kNegInf;
    std::complex<double> sum{}, dsum{};
    double mass = 0, dmass = 0;

    void add(const kernels::MehlerSum& m) {
        if (m.shift == kNegInf) return;
        if (shift == kNegInf) {
            shift = m.shift;
            sum = m.sum;
            dsum = m.dsum;
            mass = m.mass;
            dmass = m.dmass;
            return;
        }
        const double s = std::max(shift, m.shift);
        const double fa = std::exp(shift - s);
        const double fb = std::exp(m.shift - s);
        sum = sum * fa + m.sum * fb;
        dsum = dsum * fa + m.dsum * fb;
        mass = mass * fa + m.mass * fb;
        dmass = dmass * fa + m.dmass * fb;
        shift = s;
    }
    void add(const Acc& o) {
        kernels::MehlerSum m;
        m.shift = o.shift;
        m.sum = o.sum;
        m.dsum = o.dsum;
        m.mass = o.mass;
        m.dmass = o.dmass;
        add(m);
    }
};

struct NodeSet {
    std::vector<double> y, log_w;
};

struct Evaluated {
    Acc acc;
    double gmax = 0;
};

Evaluated evaluate(const kernels::MehlerCoefficients& mc, double x, const BatchEvaluator& g,
                   const NodeSet& nodes, bool with_derivative) {
    Evaluated out;
    if (nodes.y.empty()) return out;
    std::vector<double> re(nodes.y.size()), im(nodes.y.size());
    g(nodes.y, re, im);
    for (std::size_t i = 0; i < re.size(); ++i) {
        out.gmax = std::max(out.gmax, std::hypot(re[i], im[i]));
    }
    out.acc.add(kernels::mehler_weighted_sum(mc, x, nodes.y, nodes.log_w, re, im, with_derivative));
    return out;
}

// |a - b| compared at a common scale.
// The exponent B(x^2 + y^2) - y^2 cancels terms of size x^2, so the roundoff
// floor grows with x^2.
bool agrees(const Acc& a, const Acc& b, double gmax, double tol, bool with_derivative, double x) {
    const double floor = 1e-13 * (1.0 + x * x);
    if (a.shift == kNegInf && b.shift == kNegInf) return true;
    if (a.shift == kNegInf || b.shift == kNegInf) return false;
    const double s = std::max(a.shift, b.shift);
    const double fa = std::exp(a.shift - s), fb = std::exp(b.shift - s);
    const double scale = std::max(a.mass * fa, b.mass * fb) * gmax;
    if (std::abs(a.sum * fa - b.sum * fb) > tol * std::abs(b.sum * fb) + floor * scale) {
        return false;
    }
    if (with_derivative) {
        const double dscale = std::max(a.dmass * fa, b.dmass * fb) * gmax;
        if (std::abs(a.dsum * fa - b.dsum * fb) > tol * std::abs(b.dsum * fb) + floor * dscale) {
            return false;
        }
    }
    return true;
}

}  // namespace

kernels::MehlerCoefficients mehler_coefficients(double t) {
    require_positive_time(t);
    const double a = std::exp(-t);
    const double one_m_a2 = -std::expm1(-2.0 * t);
    kernels::MehlerCoefficients mc;
    mc.log_c = -0.5 * std::log(one_m_a2) - 0.5 * std::log(std::numbers::pi);
    mc.A = a / one_m_a2;
    mc.B = a / (1.0 + a);
    mc.dlog_c = -a * a / one_m_a2;
    mc.dA = a * (1.0 + a * a) / (one_m_a2 * one_m_a2);
    mc.dB = -a / ((1.0 + a) * (1.0 + a));
    return mc;
}

double log_mehler_kernel(double t, double x, double y) {
    require_positive_time(t);
    const double a = std::exp(-t);
    const double one_m_a2 = -std::expm1(-2.0 * t);
    const double d = x - y;
    return -0.5 * std::log(one_m_a2) - a / one_m_a2 * d * d + a / (1.0 + a) * (x * x + y * y);
}

double mehler_kernel(double t, double x, double y) {
    const double l = log_mehler_kernel(t, x, y);
    if (l > std::log(std::numeric_limits<double>::max())) {
        throw OverflowError("Mehler kernel overflows at t=" + std::to_string(t) +
                            ", x=" + std::to_string(x) + ", y=" + std::to_string(y));
    }
    return std::exp(l);
}

double mehler_log_dt(double t, double x, double y) {
    require_positive_time(t);
    const double a = std::exp(-t);
    const double one_m_a2 = -std::expm1(-2.0 * t);
    const double d = x - y;
    return -a * a / one_m_a2 + a * (1.0 + a * a) / (one_m_a2 * one_m_a2) * d * d -
           a / ((1.0 + a) * (1.0 + a)) * (x * x + y * y);
}

double mehler_kernel_dt(double t, double x, double y) {
    return mehler_kernel(t, x, y) * mehler_log_dt(t, x, y);
}

// ---------------------------------------------------------------------------

TruncatedPolynomial TruncatedPolynomial::whole(HermiteExpansion p) {
    return {std::move(p), kInf, Support::inside};
}

TruncatedPolynomial TruncatedPolynomial::inside(HermiteExpansion p, double rho) {
    if (!(rho >= 0)) throw DomainError("truncation radius must be >= 0");
    return {std::move(p), rho, Support::inside};
}

TruncatedPolynomial TruncatedPolynomial::outside(HermiteExpansion p, double rho) {
    if (!(rho >= 0)) throw DomainError("truncation radius must be >= 0");
    return {std::move(p), rho, Support::outside};
}

bool TruncatedPolynomial::contains(double y) const {
    const bool in = std::abs(y) < rho;
    return support == Support::inside ? in : !in;
}

std::complex<double> TruncatedPolynomial::eval(double y) const {
    return contains(y) ? poly.eval(y) : 0.0;
}

IntervalSet TruncatedPolynomial::support_set() const {
    if (support == Support::inside) {
        if (rho == 0) return {};
        return {{-rho, rho}};
    }
    if (rho == 0) return {{-kInf, kInf}};
    if (std::isinf(rho)) return {};
    return {{-kInf, -rho}, {rho, kInf}};
}

std::complex<double> ScaledValue::value() const {
    if (log_scale == kNegInf || mantissa == 0.0) return 0.0;
    if (log_scale > std::log(std::numeric_limits<double>::max())) {
        const double l = log_abs();
        if (l > std::log(std::numeric_limits<double>::max())) {
            throw OverflowError("kernel integral overflows double range");
        }
    }
    return mantissa * std::exp(log_scale);
}

double ScaledValue::log_abs() const {
    const double m = std::abs(mantissa);
    return m > 0 ? std::log(m) + log_scale : kNegInf;
}

KernelIntegral kernel_integral(const BatchEvaluator& g, const IntervalSet& support, double s,
                               double x, double tol, bool with_derivative) {
    const auto mc = mehler_coefficients(s);
    const double mu = std::exp(-s) * x;
    const double sigma = std::sqrt(-std::expm1(-2.0 * s) / 2.0);
    const double w_lo = mu - kWindow * sigma, w_hi = mu + kWindow * sigma;

    bool covers_core = false;
    std::vector<Interval> central;
    struct Tail {
        double near, far;  // distance from mu, far may be inf
        int side;          // +1 right of mu, -1 left
    };
    std::vector<Tail> tails;
    for (const auto& iv : support) {
        if (!(iv.hi > iv.lo)) continue;
        if (iv.lo <= mu - kCore * sigma && iv.hi >= mu + kCore * sigma) covers_core = true;
        const double lo = std::max(iv.lo, w_lo), hi = std::min(iv.hi, w_hi);
        if (hi > lo) central.push_back({lo, hi});
        if (iv.lo < w_lo) tails.push_back({mu - std::min(iv.hi, w_lo), mu - iv.lo, -1});
        if (iv.hi > w_hi) tails.push_back({std::max(iv.lo, w_hi) - mu, iv.hi - mu, +1});
    }

    auto central_nodes = [&](int panels) {
        NodeSet n;
        std::vector<double> w;
        for (const auto& iv : central) quad::composite_gl(iv.lo, iv.hi, panels, kNodes, n.y, w);
        n.log_w.resize(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) n.log_w[i] = std::log(w[i]);
        return n;
    };

    Acc total;
    double gmax = 0;
    if (!central.empty()) {
        int panels = 2;
        Evaluated prev = evaluate(mc, x, g, central_nodes(panels), with_derivative);
        for (;;) {
            panels *= 2;
            if (panels > kMaxPanels) {
                throw ConvergenceError("kernel quadrature did not converge (s=" +
                                       std::to_string(s) + ", x=" + std::to_string(x) + ")");
            }
            Evaluated cur = evaluate(mc, x, g, central_nodes(panels), with_derivative);
            gmax = std::max(prev.gmax, cur.gmax);
            const bool done = agrees(prev.acc, cur.acc, gmax, tol, with_derivative, x);
            prev = cur;
            if (done) break;
        }
        total.add(prev.acc);
    }

    if (!covers_core) {
        const quad::Rule& rule = quad::gauss_legendre(kTailNodes);
        NodeSet n;
        const double two_s2 = 2.0 * sigma * sigma;
        for (const auto& tl : tails) {
            const double u_far =
                std::isinf(tl.far) ? kTailU
                                   : std::min(kTailU, (tl.far * tl.far - tl.near * tl.near) / two_s2);
            if (!(u_far > 0)) continue;
            const int panels = std::max(1, int(std::ceil(u_far / kTailPanelU)));
            const double width = u_far / panels;
            for (int p = 0; p < panels; ++p) {
                const double c = (p + 0.5) * width, h = 0.5 * width;
                for (int j = 0; j < kTailNodes; ++j) {
                    const double u = c + h * rule.nodes[j];
                    const double d = std::sqrt(tl.near * tl.near + two_s2 * u);
                    n.y.push_back(mu + tl.side * d);
                    n.log_w.push_back(std::log(h * rule.weights[j] * sigma * sigma / d));
                }
            }
        }
        Evaluated e = evaluate(mc, x, g, n, with_derivative);
        total.add(e.acc);
    }

    KernelIntegral out;
    out.value = {total.sum, total.shift};
    out.derivative = {total.dsum, total.shift};
    return out;
}

ScaledValue kernel_apply_scaled(const TruncatedPolynomial& g, double s, double x, double tol) {
    return kernel_integral(g.poly.evaluator(), g.support_set(), s, x, tol, false).value;
}

std::complex<double> kernel_apply(const TruncatedPolynomial& g, double s, double x, double tol) {
    return kernel_apply_scaled(g, s, x, tol).value();
}

ScaledValue kernel_apply_t2L_scaled(const TruncatedPolynomial& g, double t, double delta_prime,
                                    double x, double tol) {
    if (!(t > 0) || !(delta_prime > 0)) {
        throw DomainError("kernel_apply_t2L needs t > 0 and delta' > 0");
    }
    const double s = delta_prime * t * t;
    const auto support = g.support_set();
    const double mu = std::exp(-s) * x;
    const double sigma = std::sqrt(-std::expm1(-2.0 * s) / 2.0);
    const bool interior = std::any_of(support.begin(), support.end(), [&](const Interval& iv) {
        return iv.lo <= mu - kWindow * sigma && iv.hi >= mu + kWindow * sigma;
    });
    if (interior) {
        // Boundary terms of L(g 1_S) are below e^{-72}; use t^2 e^{-sL}((Lg) 1_S).
        std::vector<std::complex<double>> c = g.poly.coefficients();
        for (std::size_t k = 0; k < c.size(); ++k) c[k] *= double(k);
        const HermiteExpansion lg(std::move(c), g.poly.context());
        auto r = kernel_integral(lg.evaluator(), support, s, x, tol, false);
        r.value.mantissa *= t * t;
        return r.value;
    }
    auto r = kernel_integral(g.poly.evaluator(), support, s, x, tol, true);
    r.derivative.mantissa *= -t * t;
    return r.derivative;
}

std::complex<double> kernel_apply_t2L(const TruncatedPolynomial& g, double t, double delta_prime,
                                      double x, double tol) {
    return kernel_apply_t2L_scaled(g, t, delta_prime, x, tol).value();
}

}  // namespace ouha
