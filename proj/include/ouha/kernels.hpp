#pragma once

// Data-parallel inner loops shared by the quadrature-heavy modules.
//
// Every kernel has a scalar reference implementation and (on x86-64) an
// AVX2/FMA variant.  The variant is chosen once at first use from the CPU
// features; setting OUHA_ISA=scalar in the environment, or calling
// set_isa(), forces the reference path.  The two paths agree to a few ulp,
// which tests/test_kernels.cpp checks on randomized inputs.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace ouha::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
bool isa_available(Isa isa);
// Returns false (and leaves the selection unchanged) if `isa` is not supported.
bool set_isa(Isa isa);
std::string_view isa_name(Isa isa);

// out[i] = sum_k c_k h_k(x[i]) with c_k = coef_re[k] + i*coef_im[k] and h_k
// the L2(gamma)-orthonormal Hermite polynomials.
void hermite_series(std::span<const double> coef_re, std::span<const double> coef_im,
                    std::span<const double> x, std::span<double> out_re, std::span<double> out_im);

// out[i] = log_w[i] + (p/2) * log(re[i]^2 + im[i]^2) - x[i]^2.
// A zero value gives -inf.
void log_weighted_power(std::span<const double> log_w, std::span<const double> re,
                        std::span<const double> im, std::span<const double> x, double p,
                        std::span<double> out);

// Returns sum_i exp(l[i] - shift); entries equal to -inf contribute zero.
double sum_exp_shifted(std::span<const double> l, double shift);

// Log-domain Mehler quadrature for fixed (t, x).
//
// With a = e^{-t}, the logarithm of M_t(x, y) * pi^{-1/2} e^{-y^2} is
//   log_c - A (x - y)^2 + B (x^2 + y^2) - y^2
// and its t-derivative is
//   dlog_c + dA (x - y)^2 + dB (x^2 + y^2).
// The kernel returns shift = max_i(log term_i + log w_i) and the scaled sums
//   sum   = sum_i w_i exp(term_i - shift) g_i
//   dsum  = sum_i w_i exp(term_i - shift) dterm_i g_i
//   mass  = sum_i w_i exp(term_i - shift)
//   dmass = sum_i w_i exp(term_i - shift) |dterm_i|
struct MehlerCoefficients {
    double log_c = 0;   // -(1/2) log(1 - a^2) - (1/2) log(pi)
    double A = 0;       // a / (1 - a^2)
    double B = 0;       // a / (1 + a)
    double dlog_c = 0;  // -a^2 / (1 - a^2)
    double dA = 0;      // a (1 + a^2) / (1 - a^2)^2
    double dB = 0;      // -a / (1 + a)^2
};

struct MehlerSum {
    double shift = 0;
    std::complex<double> sum{};
    std::complex<double> dsum{};
    double mass = 0;
    double dmass = 0;
};

MehlerSum mehler_weighted_sum(const MehlerCoefficients& mc, double x, std::span<const double> y,
                              std::span<const double> log_w, std::span<const double> g_re,
                              std::span<const double> g_im, bool with_derivative);

namespace detail {

// Table of function pointers one ISA provides.
struct KernelTable {
    void (*hermite_series)(std::span<const double>, std::span<const double>, std::span<const double>,
                           std::span<double>, std::span<double>);
    void (*log_weighted_power)(std::span<const double>, std::span<const double>,
                               std::span<const double>, std::span<const double>, double,
                               std::span<double>);
    double (*sum_exp_shifted)(std::span<const double>, double);
    MehlerSum (*mehler_weighted_sum)(const MehlerCoefficients&, double, std::span<const double>,
                                     std::span<const double>, std::span<const double>,
                                     std::span<const double>, bool);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in

}  // namespace detail

}  // namespace ouha::kernels
