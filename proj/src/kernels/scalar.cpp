#include <algorithm>
#include <cmath>
#include <limits>

#include "kernels/hermite_table.hpp"
#include "ouha/kernels.hpp"

namespace ouha::kernels::detail {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void hermite_series_scalar(std::span<const double> coef_re, std::span<const double> coef_im,
                           std::span<const double> x, std::span<double> out_re,
                           std::span<double> out_im) {
    const std::size_t K = coef_re.size();
    const auto& rec = hermite_recurrence();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        double h_prev = 0.0;
        double h = 1.0;
        double re = coef_re[0];
        double im = coef_im[0];
        for (std::size_t k = 0; k + 1 < K; ++k) {
            const double h_next = rec.a[k] * xi * h - rec.b[k] * h_prev;
            h_prev = h;
            h = h_next;
            re += coef_re[k + 1] * h;
            im += coef_im[k + 1] * h;
        }
        out_re[i] = re;
        out_im[i] = im;
    }
}

void log_weighted_power_scalar(std::span<const double> log_w, std::span<const double> re,
                               std::span<const double> im, std::span<const double> x, double p,
                               std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m2 = re[i] * re[i] + im[i] * im[i];
        const double lm = m2 > 0.0 ? 0.5 * p * std::log(m2) : kNegInf;
        out[i] = log_w[i] + lm - x[i] * x[i];
    }
}

double sum_exp_shifted_scalar(std::span<const double> l, double shift) {
    double s = 0.0;
    for (double v : l) s += std::exp(v - shift);
    return s;
}

MehlerSum mehler_weighted_sum_scalar(const MehlerCoefficients& mc, double x,
                                     std::span<const double> y, std::span<const double> log_w,
                                     std::span<const double> g_re, std::span<const double> g_im,
                                     bool with_derivative) {
    MehlerSum out;
    if (y.empty()) {
        out.shift = kNegInf;
        return out;
    }
    const double x2 = x * x;
    double shift = kNegInf;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = x - y[i];
        const double term = mc.log_c - mc.A * d * d + mc.B * (x2 + y[i] * y[i]) - y[i] * y[i];
        shift = std::max(shift, term + log_w[i]);
    }
    out.shift = shift;
    double sr = 0, si = 0, dr = 0, di = 0, m = 0, dm = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = x - y[i];
        const double s2 = x2 + y[i] * y[i];
        const double term = mc.log_c - mc.A * d * d + mc.B * s2 - y[i] * y[i];
        const double e = std::exp(term + log_w[i] - shift);
        sr += e * g_re[i];
        si += e * g_im[i];
        m += e;
        if (with_derivative) {
            const double dt = mc.dlog_c + mc.dA * d * d + mc.dB * s2;
            dr += e * dt * g_re[i];
            di += e * dt * g_im[i];
            dm += e * std::abs(dt);
        }
    }
    out.sum = {sr, si};
    out.dsum = {dr, di};
    out.mass = m;
    out.dmass = dm;
    return out;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{hermite_series_scalar, log_weighted_power_scalar,
                                   sum_exp_shifted_scalar, mehler_weighted_sum_scalar};
    return table;
}

}  // namespace ouha::kernels::detail
