#include "ouha/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ouha/error.hpp"
#include "ouha/kernels.hpp"

namespace ouha {

HermiteExpansion::HermiteExpansion(std::vector<std::complex<double>> coefficients,
                                   GaussianContext ctx)
    : coef_(std::move(coefficients)), ctx_(ctx) {
    ctx_.validate();
    if (degree() > ctx_.degree_max) {
        throw DomainError("expansion degree " + std::to_string(degree()) + " exceeds degree_max " +
                          std::to_string(ctx_.degree_max));
    }
    split();
}

HermiteExpansion HermiteExpansion::basis(int k, std::complex<double> scale, GaussianContext ctx) {
    if (k < 0) throw DomainError("negative Hermite index");
    std::vector<std::complex<double>> c(k + 1, 0.0);
    c[k] = scale;
    return HermiteExpansion(std::move(c), ctx);
}

void HermiteExpansion::split() {
    re_.resize(coef_.size());
    im_.resize(coef_.size());
    for (std::size_t k = 0; k < coef_.size(); ++k) {
        re_[k] = coef_[k].real();
        im_[k] = coef_[k].imag();
    }
}

std::complex<double> HermiteExpansion::coefficient(int k) const {
    return k >= 0 && k < int(coef_.size()) ? coef_[k] : 0.0;
}

double HermiteExpansion::l2_norm() const {
    double s = 0;
    for (const auto& c : coef_) s += std::norm(c);
    return std::sqrt(s);
}

std::complex<double> HermiteExpansion::eval(double x) const {
    double re = 0, im = 0;
    eval(std::span<const double>(&x, 1), std::span<double>(&re, 1), std::span<double>(&im, 1));
    return {re, im};
}

void HermiteExpansion::eval(std::span<const double> x, std::span<double> re,
                            std::span<double> im) const {
    kernels::hermite_series(re_, im_, x, re, im);
}

BatchEvaluator HermiteExpansion::evaluator() const {
    return [self = *this](std::span<const double> x, std::span<double> re, std::span<double> im) {
        self.eval(x, re, im);
    };
}

LogAbsEvaluator HermiteExpansion::log_abs_evaluator() const {
    return [self = *this](std::span<const double> x, std::span<double> out) {
        std::vector<double> im(x.size());
        self.eval(x, out, im);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double m2 = out[i] * out[i] + im[i] * im[i];
            out[i] = m2 > 0 ? 0.5 * std::log(m2) : -std::numeric_limits<double>::infinity();
        }
    };
}

HermiteExpansion HermiteExpansion::operator+(const HermiteExpansion& o) const {
    std::vector<std::complex<double>> c(std::max(coef_.size(), o.coef_.size()), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = coefficient(int(k)) + o.coefficient(int(k));
    return HermiteExpansion(std::move(c), ctx_);
}

HermiteExpansion HermiteExpansion::operator-(const HermiteExpansion& o) const {
    return *this + o * -1.0;
}

HermiteExpansion HermiteExpansion::operator*(std::complex<double> a) const {
    std::vector<std::complex<double>> c(coef_);
    for (auto& v : c) v *= a;
    return HermiteExpansion(std::move(c), ctx_);
}

HermiteExpansion operator*(std::complex<double> a, const HermiteExpansion& f) { return f * a; }

// ---------------------------------------------------------------------------

SpectralSymbol SpectralSymbol::identity() {
    return {[](int) { return std::complex<double>(1.0); }, "identity"};
}

SpectralSymbol SpectralSymbol::projection_e0() {
    return {[](int k) { return std::complex<double>(k == 0 ? 1.0 : 0.0); }, "E0"};
}

SpectralSymbol SpectralSymbol::semigroup(double t) {
    return {[t](int k) { return std::complex<double>(std::exp(-t * k)); },
            "exp(-" + std::to_string(t) + "k)"};
}

SpectralSymbol SpectralSymbol::tl_semigroup(double t) {
    return {[t](int k) { return std::complex<double>(t * k * std::exp(-t * k)); },
            "tk exp(-tk), t=" + std::to_string(t)};
}

SpectralSymbol SpectralSymbol::t2l_semigroup(double t, double s) {
    const double t2 = t * t;
    return {[t2, s](int k) { return std::complex<double>(t2 * k * std::exp(-s * t2 * k)); },
            "t^2k exp(-s t^2 k), t=" + std::to_string(t) + ", s=" + std::to_string(s)};
}

SpectralSymbol SpectralSymbol::compose(SpectralSymbol a, SpectralSymbol b) {
    std::string label = a.label + " * " + b.label;
    return {[a = std::move(a), b = std::move(b)](int k) { return a(k) * b(k); }, std::move(label)};
}

HermiteExpansion apply_symbol(const HermiteExpansion& f, const SpectralSymbol& psi) {
    std::vector<std::complex<double>> c(f.coefficients());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= psi(int(k));
    return HermiteExpansion(std::move(c), f.context());
}

HermiteExpansion semigroup(const HermiteExpansion& f, double t) {
    if (!(t >= 0)) throw DomainError("semigroup needs t >= 0");
    return apply_symbol(f, SpectralSymbol::semigroup(t));
}

HermiteExpansion t2L_semigroup(const HermiteExpansion& f, double t, double s) {
    if (!(t > 0) || !(s > 0)) throw DomainError("t2L_semigroup needs t > 0 and s > 0");
    return apply_symbol(f, SpectralSymbol::t2l_semigroup(t, s));
}

double maximal_function(const HermiteExpansion& f, double x, double eps) {
    if (!(eps > 0) || eps > 1) throw DomainError("maximal_function needs 0 < eps <= 1");
    const int K = f.degree() + 1;
    if (K <= 0) return 0.0;
    std::vector<std::complex<double>> b(K);
    const GaussianContext& ctx = f.context();
    for (int k = 0; k < K; ++k) b[k] = f.coefficient(k) * hermite_orthonormal(k, x, ctx);
    auto F = [&](double t) {
        std::complex<double> s = 0;
        const double q = std::exp(-t);
        double pk = 1.0;
        for (int k = 0; k < K; ++k) {
            s += b[k] * pk;
            pk *= q;
        }
        return std::abs(s);
    };
    const double m = admissibility(x);
    const double lo = std::log(eps * m * m);
    const double hi = 0.0;
    constexpr int G = 256;
    std::vector<double> grid(G), val(G);
    for (int i = 0; i < G; ++i) {
        grid[i] = i + 1 == G ? hi : lo + (hi - lo) * i / (G - 1);
        val[i] = F(std::exp(grid[i]));
    }
    const int best = int(std::max_element(val.begin(), val.end()) - val.begin());
    double result = std::max({val[best], val.front(), val.back()});
    double a = grid[std::max(best - 1, 0)];
    double c = grid[std::min(best + 1, G - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = c - inv_phi * (c - a);
    double x2 = a + inv_phi * (c - a);
    double f1 = F(std::exp(x1)), f2 = F(std::exp(x2));
    while (std::exp(c) - std::exp(a) > 1e-10) {
        if (f1 > f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - inv_phi * (c - a);
            f1 = F(std::exp(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (c - a);
            f2 = F(std::exp(x2));
        }
    }
    return std::max({result, f1, f2});
}

}  // namespace ouha
