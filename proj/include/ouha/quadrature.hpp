#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace ouha::quad {

// Nodes and weights of an interpolatory rule.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]; cached, thread safe.
const Rule& gauss_legendre(int n);

// n-point Gauss-Hermite rule normalized to the probability measure
// pi^{-1/2} e^{-x^2} dx (weights sum to 1).
Rule gauss_hermite_gamma(int n);

// Appends the nodes and weights of `panels` equal n-point Gauss-Legendre
// panels on [a, b] to x and w.
void composite_gl(double a, double b, int panels, int n, std::vector<double>& x,
                  std::vector<double>& w);

namespace detail {
extern const double kXgk[8];
extern const double kWgk[8];
extern const double kWg[4];
inline double abs_value(double v) { return std::abs(v); }
inline double abs_value(const std::complex<double>& v) { return std::abs(v); }
}  // namespace detail

template <class T>
struct Result {
    T value{};
    double error = 0;
    int evaluations = 0;
    bool converged = true;
};

// 15-point Gauss-Kronrod estimate on [a, b]; error is |K15 - G7|.
template <class T, class F>
Result<T> gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T k = fc * detail::kWgk[7];
    T g = fc * detail::kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * detail::kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        k += (f1 + f2) * detail::kWgk[j];
        if (j % 2 == 1) g += (f1 + f2) * detail::kWg[j / 2];
    }
    Result<T> r;
    r.value = k * h;
    r.error = detail::abs_value((k - g) * h);
    r.evaluations = 15;
    return r;
}

// Globally adaptive Gauss-Kronrod integration over the pieces delimited by
// `points` (sorted, at least two entries).  Stops once the summed error is
// below max(abs_tol, rel_tol |value|); sets converged = false if the segment
// budget runs out first.
template <class T, class F>
Result<T> adaptive(F&& f, const std::vector<double>& points, double abs_tol, double rel_tol,
                   int max_segments = 4000) {
    struct Seg {
        double a, b;
        T value;
        double error;
    };
    std::vector<Seg> heap;
    auto cmp = [](const Seg& l, const Seg& r) { return l.error < r.error; };
    Result<T> out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) continue;
        auto r = gk15<T>(f, points[i], points[i + 1]);
        out.evaluations += r.evaluations;
        heap.push_back({points[i], points[i + 1], r.value, r.error});
    }
    std::make_heap(heap.begin(), heap.end(), cmp);
    auto totals = [&] {
        T v{};
        double e = 0;
        for (const auto& s : heap) {
            v += s.value;
            e += s.error;
        }
        return std::pair<T, double>(v, e);
    };
    auto [value, error] = totals();
    while (error > std::max(abs_tol, rel_tol * detail::abs_value(value))) {
        if (int(heap.size()) >= max_segments) {
            out.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Seg s = heap.back();
        heap.pop_back();
        const double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b)) {
            heap.push_back(s);
            std::push_heap(heap.begin(), heap.end(), cmp);
            out.converged = false;
            break;
        }
        auto l = gk15<T>(f, s.a, m);
        auto r = gk15<T>(f, m, s.b);
        out.evaluations += 30;
        value += l.value + r.value - s.value;
        error += l.error + r.error - s.error;
        heap.push_back({s.a, m, l.value, l.error});
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back({m, s.b, r.value, r.error});
        std::push_heap(heap.begin(), heap.end(), cmp);
    }
    std::tie(value, error) = totals();
    out.value = value;
    out.error = error;
    return out;
}

template <class T, class F>
Result<T> adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                   int max_segments = 4000) {
    return adaptive<T>(std::forward<F>(f), std::vector<double>{a, b}, abs_tol, rel_tol,
                       max_segments);
}

// Batch evaluator of log f for a nonnegative integrand f.
using LogIntegrand = std::function<void(std::span<const double> x, std::span<double> log_f)>;

struct LogResult {
    double log_value = 0;      // log of the integral (-inf if it is zero)
    double log_error = 0;      // log of the absolute error estimate
    int evaluations = 0;
    bool converged = true;
};

// Adaptive Gauss-Kronrod in the log domain: integrals far below the double
// range (e.g. e^{-5000}) keep full relative accuracy.
LogResult adaptive_log(const LogIntegrand& log_f, const std::vector<double>& points,
                       double rel_tol, int max_segments = 4000);

}  // namespace ouha::quad
