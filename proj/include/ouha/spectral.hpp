#pragma once

// Functional calculus of the Ornstein-Uhlenbeck operator L on finite Hermite
// expansions: L h_k = k h_k, so any function of L acts coefficient-wise.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ouha/gaussian_core.hpp"

namespace ouha {

class HermiteExpansion {
public:
    HermiteExpansion() = default;
    // Throws DomainError if the degree exceeds ctx.degree_max.
    explicit HermiteExpansion(std::vector<std::complex<double>> coefficients,
                              GaussianContext ctx = {});

    // scale * h_k
    static HermiteExpansion basis(int k, std::complex<double> scale = 1.0,
                                  GaussianContext ctx = {});

    const std::vector<std::complex<double>>& coefficients() const { return coef_; }
    std::complex<double> coefficient(int k) const;
    int degree() const { return int(coef_.size()) - 1; }
    const GaussianContext& context() const { return ctx_; }

    // int f d gamma = c_0
    std::complex<double> mean() const { return coefficient(0); }
    bool zero_mean() const { return coefficient(0) == 0.0; }
    // Parseval: (sum |c_k|^2)^{1/2}
    double l2_norm() const;

    std::complex<double> eval(double x) const;
    void eval(std::span<const double> x, std::span<double> re, std::span<double> im) const;
    BatchEvaluator evaluator() const;
    LogAbsEvaluator log_abs_evaluator() const;

    HermiteExpansion operator+(const HermiteExpansion& o) const;
    HermiteExpansion operator-(const HermiteExpansion& o) const;
    HermiteExpansion operator*(std::complex<double> a) const;

private:
    void split();

    std::vector<std::complex<double>> coef_;
    std::vector<double> re_, im_;
    GaussianContext ctx_;
};

HermiteExpansion operator*(std::complex<double> a, const HermiteExpansion& f);

// A map k -> psi(k) on the spectrum {0, 1, 2, ...}.
struct SpectralSymbol {
    std::function<std::complex<double>(int)> psi;
    std::string label;

    std::complex<double> operator()(int k) const { return psi(k); }

    static SpectralSymbol identity();
    static SpectralSymbol projection_e0();
    static SpectralSymbol semigroup(double t);          // e^{-tk}
    static SpectralSymbol tl_semigroup(double t);       // t k e^{-tk}
    static SpectralSymbol t2l_semigroup(double t, double s);  // t^2 k e^{-s t^2 k}
    // Pointwise product (composition of the operators).
    static SpectralSymbol compose(SpectralSymbol a, SpectralSymbol b);
};

HermiteExpansion apply_symbol(const HermiteExpansion& f, const SpectralSymbol& psi);

// e^{-tL} f; t >= 0.
HermiteExpansion semigroup(const HermiteExpansion& f, double t);
// t^2 L e^{-s t^2 L} f; t > 0, s > 0.
HermiteExpansion t2L_semigroup(const HermiteExpansion& f, double t, double s);

// sup over t in (eps m(x)^2, 1] of |e^{-tL} f(x)|: 256-point log grid, then
// golden-section refinement around the best cell.
double maximal_function(const HermiteExpansion& f, double x, double eps = 1.0 / 64.0);

}  // namespace ouha
