// AVX2/FMA variants of the kernels in ouha/kernels.hpp.
// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kernels/hermite_table.hpp"
#include "ouha/kernels.hpp"

namespace ouha::kernels::detail {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ============================================================================
// Vector exp / log, within ~2 ulp of libm on the ranges used here
// ============================================================================

inline __m256d pow2_int(__m256d n) {
    // n holds integers in [-1100, 1100]; returns 2^n as a product of two
    // normal powers so that subnormal results are still produced.
    const __m256d half = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
    const __m256d rest = _mm256_sub_pd(n, half);
    auto build = [](__m256d e) {
        __m128i e32 = _mm256_cvtpd_epi32(e);
        __m256i e64 = _mm256_cvtepi32_epi64(e32);
        e64 = _mm256_add_epi64(e64, _mm256_set1_epi64x(1023));
        return _mm256_castsi256_pd(_mm256_slli_epi64(e64, 52));
    };
    return _mm256_mul_pd(build(half), build(rest));
}

inline __m256d vexp(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d hi_lim = _mm256_set1_pd(709.782712893384);
    const __m256d lo_lim = _mm256_set1_pd(-745.2);

    const __m256d too_big = _mm256_cmp_pd(x, hi_lim, _CMP_GT_OQ);
    const __m256d too_small = _mm256_cmp_pd(x, lo_lim, _CMP_LT_OQ);
    const __m256d is_nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
    __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo_lim), hi_lim);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xc);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    // Taylor polynomial through r^13 on |r| <= ln2/2.
    static constexpr double c[] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
        1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
        1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
        1.0,                1.0};
    __m256d p = _mm256_set1_pd(c[0]);
    for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[i]));

    __m256d y = _mm256_mul_pd(p, pow2_int(n));
    y = _mm256_blendv_pd(y, _mm256_set1_pd(std::numeric_limits<double>::infinity()), too_big);
    y = _mm256_blendv_pd(y, _mm256_setzero_pd(), too_small);
    y = _mm256_blendv_pd(y, x, is_nan);
    return y;
}

inline __m256d vlog(__m256d x) {
    // x > 0 expected; x == 0 gives -inf.
    const __m256d dbl_min = _mm256_set1_pd(std::numeric_limits<double>::min());
    const __m256d is_zero = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LE_OQ);
    const __m256d is_sub = _mm256_cmp_pd(x, dbl_min, _CMP_LT_OQ);
    x = _mm256_blendv_pd(x, _mm256_mul_pd(x, _mm256_set1_pd(0x1p54)), is_sub);
    __m256d e_adj = _mm256_and_pd(is_sub, _mm256_set1_pd(-54.0));

    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
    // Exponent to double via the 2^52 magic constant.
    const __m256d magic = _mm256_set1_pd(0x1p52);
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(exp_bits, _mm256_castpd_si256(magic))), magic);
    e = _mm256_add_pd(_mm256_sub_pd(e, _mm256_set1_pd(1023.0)), e_adj);

    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d s = _mm256_mul_pd(f, f);
    // 2 atanh(f) = 2 f sum_{k>=0} s^k / (2k+1)
    __m256d q = _mm256_set1_pd(1.0 / 23.0);
    for (int k = 10; k >= 0; --k) q = _mm256_fmadd_pd(q, s, _mm256_set1_pd(1.0 / (2 * k + 1)));
    const __m256d logm = _mm256_mul_pd(_mm256_add_pd(f, f), q);

    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    __m256d y = _mm256_fmadd_pd(e, ln2_lo, logm);
    y = _mm256_fmadd_pd(e, ln2_hi, y);
    return _mm256_blendv_pd(y, _mm256_set1_pd(kNegInf), is_zero);
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return std::max(_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo)));
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

// ============================================================================
// Kernels
// ============================================================================

void hermite_series_avx2(std::span<const double> coef_re, std::span<const double> coef_im,
                         std::span<const double> x, std::span<double> out_re,
                         std::span<double> out_im) {
    const std::size_t K = coef_re.size();
    const auto& rec = hermite_recurrence();
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x.data() + i);
        __m256d h_prev = _mm256_setzero_pd();
        __m256d h = _mm256_set1_pd(1.0);
        __m256d re = _mm256_set1_pd(coef_re[0]);
        __m256d im = _mm256_set1_pd(coef_im[0]);
        for (std::size_t k = 0; k + 1 < K; ++k) {
            const __m256d ax = _mm256_mul_pd(_mm256_set1_pd(rec.a[k]), xv);
            const __m256d h_next =
                _mm256_fnmadd_pd(_mm256_set1_pd(rec.b[k]), h_prev, _mm256_mul_pd(ax, h));
            h_prev = h;
            h = h_next;
            re = _mm256_fmadd_pd(_mm256_set1_pd(coef_re[k + 1]), h, re);
            im = _mm256_fmadd_pd(_mm256_set1_pd(coef_im[k + 1]), h, im);
        }
        _mm256_storeu_pd(out_re.data() + i, re);
        _mm256_storeu_pd(out_im.data() + i, im);
    }
    if (i < n) {
        scalar_table().hermite_series(coef_re, coef_im, x.subspan(i), out_re.subspan(i),
                                      out_im.subspan(i));
    }
}

void log_weighted_power_avx2(std::span<const double> log_w, std::span<const double> re,
                             std::span<const double> im, std::span<const double> x, double p,
                             std::span<double> out) {
    const std::size_t n = x.size();
    const __m256d half_p = _mm256_set1_pd(0.5 * p);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_loadu_pd(re.data() + i);
        const __m256d m = _mm256_loadu_pd(im.data() + i);
        const __m256d m2 = _mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m));
        const __m256d xv = _mm256_loadu_pd(x.data() + i);
        const __m256d lw = _mm256_loadu_pd(log_w.data() + i);
        // 0 * -inf would be NaN; vlog(0) = -inf and half_p > 0 keep it -inf.
        __m256d v = _mm256_mul_pd(half_p, vlog(m2));
        v = _mm256_add_pd(lw, _mm256_fnmadd_pd(xv, xv, v));
        _mm256_storeu_pd(out.data() + i, v);
    }
    if (i < n) {
        scalar_table().log_weighted_power(log_w.subspan(i), re.subspan(i), im.subspan(i),
                                          x.subspan(i), p, out.subspan(i));
    }
}

double sum_exp_shifted_avx2(std::span<const double> l, double shift) {
    const std::size_t n = l.size();
    const __m256d sv = _mm256_set1_pd(shift);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, vexp(_mm256_sub_pd(_mm256_loadu_pd(l.data() + i), sv)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += std::exp(l[i] - shift);
    return s;
}

MehlerSum mehler_weighted_sum_avx2(const MehlerCoefficients& mc, double x,
                                   std::span<const double> y, std::span<const double> log_w,
                                   std::span<const double> g_re, std::span<const double> g_im,
                                   bool with_derivative) {
    const std::size_t n = y.size();
    if (n < 4) {
        return scalar_table().mehler_weighted_sum(mc, x, y, log_w, g_re, g_im, with_derivative);
    }
    const double x2 = x * x;
    const __m256d xv = _mm256_set1_pd(x);
    const __m256d x2v = _mm256_set1_pd(x2);
    const __m256d log_c = _mm256_set1_pd(mc.log_c);
    const __m256d Av = _mm256_set1_pd(mc.A);
    const __m256d Bm1 = _mm256_set1_pd(mc.B - 1.0);
    const __m256d Bv = _mm256_set1_pd(mc.B);

    auto term_at = [&](std::size_t i) {
        const __m256d yv = _mm256_loadu_pd(y.data() + i);
        const __m256d d = _mm256_sub_pd(xv, yv);
        // log_c - A d^2 + B x^2 + (B - 1) y^2
        __m256d t = _mm256_fmadd_pd(Bv, x2v, log_c);
        t = _mm256_fnmadd_pd(Av, _mm256_mul_pd(d, d), t);
        t = _mm256_fmadd_pd(Bm1, _mm256_mul_pd(yv, yv), t);
        return _mm256_add_pd(t, _mm256_loadu_pd(log_w.data() + i));
    };
    auto scalar_term = [&](std::size_t i) {
        const double d = x - y[i];
        return mc.log_c - mc.A * d * d + mc.B * (x2 + y[i] * y[i]) - y[i] * y[i] + log_w[i];
    };

    __m256d mx = _mm256_set1_pd(kNegInf);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) mx = _mm256_max_pd(mx, term_at(i));
    double shift = hmax(mx);
    for (std::size_t j = i; j < n; ++j) shift = std::max(shift, scalar_term(j));

    MehlerSum out;
    out.shift = shift;
    const __m256d sv = _mm256_set1_pd(shift);
    const __m256d dlog_c = _mm256_set1_pd(mc.dlog_c);
    const __m256d dA = _mm256_set1_pd(mc.dA);
    const __m256d dB = _mm256_set1_pd(mc.dB);
    __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
    __m256d dr = _mm256_setzero_pd(), di = _mm256_setzero_pd();
    __m256d ms = _mm256_setzero_pd(), dms = _mm256_setzero_pd();
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
    for (i = 0; i + 4 <= n; i += 4) {
        const __m256d e = vexp(_mm256_sub_pd(term_at(i), sv));
        const __m256d gr = _mm256_loadu_pd(g_re.data() + i);
        const __m256d gi = _mm256_loadu_pd(g_im.data() + i);
        sr = _mm256_fmadd_pd(e, gr, sr);
        si = _mm256_fmadd_pd(e, gi, si);
        ms = _mm256_add_pd(ms, e);
        if (with_derivative) {
            const __m256d yv = _mm256_loadu_pd(y.data() + i);
            const __m256d d = _mm256_sub_pd(xv, yv);
            const __m256d s2 = _mm256_fmadd_pd(yv, yv, x2v);
            __m256d dt = _mm256_fmadd_pd(dA, _mm256_mul_pd(d, d), dlog_c);
            dt = _mm256_fmadd_pd(dB, s2, dt);
            const __m256d ed = _mm256_mul_pd(e, dt);
            dr = _mm256_fmadd_pd(ed, gr, dr);
            di = _mm256_fmadd_pd(ed, gi, di);
            dms = _mm256_fmadd_pd(e, _mm256_and_pd(dt, abs_mask), dms);
        }
    }
    double s_re = hsum(sr), s_im = hsum(si), d_re = hsum(dr), d_im = hsum(di);
    double m = hsum(ms), dm = hsum(dms);
    for (; i < n; ++i) {
        const double e = std::exp(scalar_term(i) - shift);
        s_re += e * g_re[i];
        s_im += e * g_im[i];
        m += e;
        if (with_derivative) {
            const double d = x - y[i];
            const double dt = mc.dlog_c + mc.dA * d * d + mc.dB * (x2 + y[i] * y[i]);
            d_re += e * dt * g_re[i];
            d_im += e * dt * g_im[i];
            dm += e * std::abs(dt);
        }
    }
    out.sum = {s_re, s_im};
    out.dsum = {d_re, d_im};
    out.mass = m;
    out.dmass = dm;
    return out;
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{hermite_series_avx2, log_weighted_power_avx2,
                                   sum_exp_shifted_avx2, mehler_weighted_sum_avx2};
    return &table;
}

}  // namespace ouha::kernels::detail
