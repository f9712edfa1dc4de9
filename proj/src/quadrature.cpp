#include "ouha/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "ouha/error.hpp"
#include "ouha/special.hpp"

namespace ouha::quad {

namespace detail {
const double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                        0.207784955007898467600689403773245, 0.0};
const double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace detail

namespace {

Rule make_gauss_legendre(int n) {
    Rule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
    if (n < 1 || n > 512) throw DomainError("Gauss-Legendre order out of range");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Rule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(make_gauss_legendre(n));
    return *slot;
}

Rule gauss_hermite_gamma(int n) {
    if (n < 1 || n > 200) throw DomainError("Gauss-Hermite order out of range");
    Rule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    // Orthonormal recurrence; h_n' = sqrt(2n) h_{n-1}.
    auto eval = [n](double x, double& hn, double& hn1) {
        double prev = 0.0, cur = 1.0;
        for (int k = 0; k < n; ++k) {
            const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
            prev = cur;
            cur = next;
        }
        hn = cur;
        hn1 = prev;
    };
    std::vector<double> roots(m);
    double z = 0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(double(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * roots[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * roots[1];
        } else {
            z = 2.0 * z - roots[i - 2];
        }
        double hn = 0, hn1 = 0;
        for (int it = 0; it < 200; ++it) {
            eval(z, hn, hn1);
            const double dz = hn / (std::sqrt(2.0 * n) * hn1);
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        eval(z, hn, hn1);
        roots[i] = z;
        const double w = 1.0 / (n * hn1 * hn1);
        r.nodes[n - 1 - i] = z;
        r.nodes[i] = -z;
        r.weights[n - 1 - i] = w;
        r.weights[i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

void composite_gl(double a, double b, int panels, int n, std::vector<double>& x,
                  std::vector<double>& w) {
    const Rule& rule = gauss_legendre(n);
    const double width = (b - a) / panels;
    x.reserve(x.size() + std::size_t(panels) * n);
    w.reserve(w.size() + std::size_t(panels) * n);
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double hi = p + 1 == panels ? b : lo + width;
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        for (int j = 0; j < n; ++j) {
            x.push_back(c + h * rule.nodes[j]);
            w.push_back(h * rule.weights[j]);
        }
    }
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct LogSeg {
    double a, b;
    double log_value;
    double log_error;
};

LogSeg log_gk15(const LogIntegrand& log_f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double x[15];
    double l[15];
    for (int j = 0; j < 7; ++j) {
        x[2 * j] = c - h * detail::kXgk[j];
        x[2 * j + 1] = c + h * detail::kXgk[j];
    }
    x[14] = c;
    log_f(std::span<const double>(x, 15), std::span<double>(l, 15));
    double m = kNegInf;
    for (double v : l) m = std::max(m, v);
    if (m == kNegInf) return {a, b, kNegInf, kNegInf};
    double k = std::exp(l[14] - m) * detail::kWgk[7];
    double g = std::exp(l[14] - m) * detail::kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double s = std::exp(l[2 * j] - m) + std::exp(l[2 * j + 1] - m);
        k += s * detail::kWgk[j];
        if (j % 2 == 1) g += s * detail::kWg[j / 2];
    }
    const double lh = std::log(h);
    const double err = std::abs(k - g);
    return {a, b, m + lh + std::log(k), err > 0 ? m + lh + std::log(err) : kNegInf};
}

}  // namespace

LogResult adaptive_log(const LogIntegrand& log_f, const std::vector<double>& points,
                       double rel_tol, int max_segments) {
    std::vector<LogSeg> heap;
    auto cmp = [](const LogSeg& l, const LogSeg& r) { return l.log_error < r.log_error; };
    LogResult out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) continue;
        heap.push_back(log_gk15(log_f, points[i], points[i + 1]));
        out.evaluations += 15;
    }
    std::make_heap(heap.begin(), heap.end(), cmp);
    const double log_tol = std::log(rel_tol);
    auto totals = [&] {
        double v = kNegInf, e = kNegInf;
        for (const auto& s : heap) {
            v = special::log_add_exp(v, s.log_value);
            e = special::log_add_exp(e, s.log_error);
        }
        return std::pair<double, double>(v, e);
    };
    auto [value, error] = totals();
    while (error != kNegInf && error > log_tol + value) {
        if (int(heap.size()) >= max_segments) {
            out.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), cmp);
        const LogSeg s = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) {
            heap.push_back(s);
            std::push_heap(heap.begin(), heap.end(), cmp);
            out.converged = false;
            break;
        }
        heap.push_back(log_gk15(log_f, s.a, mid));
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(log_gk15(log_f, mid, s.b));
        std::push_heap(heap.begin(), heap.end(), cmp);
        out.evaluations += 30;
        // Log-domain running sums cannot subtract reliably; recompute.
        std::tie(value, error) = totals();
    }
    std::tie(value, error) = totals();
    out.log_value = value;
    out.log_error = error;
    return out;
}

}  // namespace ouha::quad
