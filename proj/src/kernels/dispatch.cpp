#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels/hermite_table.hpp"
#include "ouha/error.hpp"
#include "ouha/kernels.hpp"

namespace ouha::kernels {
namespace detail {
#ifndef OUHA_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(OUHA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() {
    if (const char* env = std::getenv("OUHA_ISA")) {
        if (std::string(env) == "scalar") return Isa::scalar;
    }
    return cpu_has_avx2() && detail::avx2_table() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& selected() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

const detail::KernelTable& table() {
    return selected().load(std::memory_order_relaxed) == Isa::avx2 ? *detail::avx2_table()
                                                                   : detail::scalar_table();
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw DomainError(std::string("kernel argument size mismatch: ") + what);
}

}  // namespace

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) {
    return isa == Isa::scalar || (cpu_has_avx2() && detail::avx2_table() != nullptr);
}

bool set_isa(Isa isa) {
    if (!isa_available(isa)) return false;
    selected().store(isa, std::memory_order_relaxed);
    return true;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void hermite_series(std::span<const double> coef_re, std::span<const double> coef_im,
                    std::span<const double> x, std::span<double> out_re, std::span<double> out_im) {
    require_same_size(coef_re.size(), coef_im.size(), "coefficients");
    require_same_size(x.size(), out_re.size(), "hermite output");
    require_same_size(x.size(), out_im.size(), "hermite output");
    if (coef_re.empty()) {
        std::fill(out_re.begin(), out_re.end(), 0.0);
        std::fill(out_im.begin(), out_im.end(), 0.0);
        return;
    }
    if (coef_re.size() > detail::kMaxHermiteTerms) throw DomainError("Hermite degree too large");
    table().hermite_series(coef_re, coef_im, x, out_re, out_im);
}

void log_weighted_power(std::span<const double> log_w, std::span<const double> re,
                        std::span<const double> im, std::span<const double> x, double p,
                        std::span<double> out) {
    require_same_size(x.size(), log_w.size(), "weights");
    require_same_size(x.size(), re.size(), "values");
    require_same_size(x.size(), im.size(), "values");
    require_same_size(x.size(), out.size(), "output");
    if (!(p > 0)) throw DomainError("log_weighted_power needs p > 0");
    table().log_weighted_power(log_w, re, im, x, p, out);
}

double sum_exp_shifted(std::span<const double> l, double shift) {
    return table().sum_exp_shifted(l, shift);
}

MehlerSum mehler_weighted_sum(const MehlerCoefficients& mc, double x, std::span<const double> y,
                              std::span<const double> log_w, std::span<const double> g_re,
                              std::span<const double> g_im, bool with_derivative) {
    require_same_size(y.size(), log_w.size(), "weights");
    require_same_size(y.size(), g_re.size(), "values");
    require_same_size(y.size(), g_im.size(), "values");
    return table().mehler_weighted_sum(mc, x, y, log_w, g_re, g_im, with_derivative);
}

}  // namespace ouha::kernels
