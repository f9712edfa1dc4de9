#pragma once

// The Mehler kernel of e^{-tL} with respect to gamma (n = 1),
//   M_t(x, y) = (1 - e^{-2t})^{-1/2}
//               exp(-e^{-t}/(1 - e^{-2t}) |x - y|^2 + e^{-t}/(1 + e^{-t}) (x^2 + y^2)),
// evaluated in the log domain, and kernel-side application of e^{-sL} and
// t^2 L e^{-s t^2 L} to functions that are not polynomials (truncations).

#include <complex>
#include <limits>

#include "ouha/gaussian_core.hpp"
#include "ouha/kernels.hpp"
#include "ouha/spectral.hpp"

namespace ouha {

double log_mehler_kernel(double t, double x, double y);
// Throws OverflowError instead of returning inf.
double mehler_kernel(double t, double x, double y);
// d/dt log M_t(x, y)
double mehler_log_dt(double t, double x, double y);
double mehler_kernel_dt(double t, double x, double y);

kernels::MehlerCoefficients mehler_coefficients(double t);

// poly restricted to {|y| < rho} (inside) or {|y| >= rho} (outside).
struct TruncatedPolynomial {
    enum class Support { inside, outside };

    HermiteExpansion poly;
    double rho = std::numeric_limits<double>::infinity();
    Support support = Support::inside;

    static TruncatedPolynomial whole(HermiteExpansion p);
    static TruncatedPolynomial inside(HermiteExpansion p, double rho);
    static TruncatedPolynomial outside(HermiteExpansion p, double rho);

    bool contains(double y) const;
    std::complex<double> eval(double y) const;
    IntervalSet support_set() const;
};

// value = mantissa * e^{log_scale}
struct ScaledValue {
    std::complex<double> mantissa{};
    double log_scale = -std::numeric_limits<double>::infinity();

    std::complex<double> value() const;
    double log_abs() const;
};

struct KernelIntegral {
    ScaledValue value;       // int M_s(x, y) g(y) d gamma(y)
    ScaledValue derivative;  // d/ds of the above
};

// Integral of M_s(x, .) g against gamma over `support` (intervals may be
// unbounded).  Composite Gauss-Legendre on the window a x +- 12 sigma,
// sigma^2 = (1 - e^{-2s})/2, refined by panel doubling; support outside the
// window is integrated in the variable u = ((y - ax)^2 - d0^2) / (2 sigma^2).
KernelIntegral kernel_integral(const BatchEvaluator& g, const IntervalSet& support, double s,
                               double x, double tol, bool with_derivative);

ScaledValue kernel_apply_scaled(const TruncatedPolynomial& g, double s, double x,
                                double tol = 1e-10);
std::complex<double> kernel_apply(const TruncatedPolynomial& g, double s, double x,
                                  double tol = 1e-10);

// [t^2 L e^{-delta' t^2 L} g](x) = -t^2 d/ds [e^{-sL} g](x) at s = delta' t^2.
ScaledValue kernel_apply_t2L_scaled(const TruncatedPolynomial& g, double t, double delta_prime,
                                    double x, double tol = 1e-10);
std::complex<double> kernel_apply_t2L(const TruncatedPolynomial& g, double t, double delta_prime,
                                      double x, double tol = 1e-10);

}  // namespace ouha
