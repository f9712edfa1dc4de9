#pragma once

// The admissible decomposition
//   phi(L) f = c (pi1 u + pi2 f + pi3 f),   c = 2 (delta + delta')^2,
// with u(., t) = 1_D(., t) t^2 L e^{-delta t^2 L} f, D = {(y, t) : t < m~(y)}.

#include <complex>
#include <string>
#include <vector>

#include "ouha/mehler.hpp"
#include "ouha/multipliers.hpp"
#include "ouha/spectral.hpp"

namespace ouha {

struct DecompositionParams {
    double delta = 1.0 / 128.0;
    double delta_prime = 1.0 / 128.0;
    double kappa = 4.0;
    double t_tol = 1e-7;       // relative tolerance of every dt/t integral
    double kernel_tol = 1e-10; // inner kernel quadrature tolerance

    // Throws DomainError on delta, delta' <= 0, kappa < 1 or nonpositive tolerances.
    void validate() const;
    // Names of the smallness hypotheses the parameters violate:
    // "delta_prime_lt_4^-3", "8(delta+delta_prime)_le_4^-3", "kappa_power_of_4".
    std::vector<std::string> constraint_flags() const;
    double epsilon() const { return delta + delta_prime; }
};

bool is_power_of_four(double kappa);

double scaling_constant(double delta, double delta_prime);

class UField {
public:
    // Throws DomainError unless f has zero mean and delta > 0.
    UField(HermiteExpansion f, double delta);

    const HermiteExpansion& f() const { return f_; }
    double delta() const { return delta_; }

    // u(y, t)
    std::complex<double> operator()(double y, double t) const;
    // t^2 L e^{-delta t^2 L} f restricted to the slice of D at height t.
    TruncatedPolynomial slice(double t) const;
    // t^2 L e^{-delta t^2 L} f without truncation.
    HermiteExpansion untruncated(double t) const;

private:
    HermiteExpansion f_;
    double delta_;
};

UField build_u(const HermiteExpansion& f, double delta);

// int_0^{m~(x)/kappa} Phi~(t^2) t^2 L e^{-delta' t^2 L} u(., t)(x) dt / t, kernel path.
std::complex<double> pi1(const UField& u, const PhiSpec& phi, const DecompositionParams& params,
                         double x);
// Same with 1_{D^c} t^2 L e^{-delta t^2 L} f in place of u.
std::complex<double> pi2(const HermiteExpansion& f, const PhiSpec& phi,
                         const DecompositionParams& params, double x);
// int_{m~(x)/kappa}^inf Phi~(t^2) (t^2 L)^2 e^{-(delta + delta') t^2 L} f(x) dt / t, spectral.
std::complex<double> pi3(const HermiteExpansion& f, const PhiSpec& phi,
                         const DecompositionParams& params, double x);
// Spectral value of pi1 u + pi2 f:
// int_0^{m~(x)/kappa} Phi~(t^2) (t^2 L)^2 e^{-(delta + delta') t^2 L} f(x) dt / t.
std::complex<double> truncated_spectral(const HermiteExpansion& f, const PhiSpec& phi,
                                        const DecompositionParams& params, double x);

struct ResidualPoint {
    double x = 0;
    std::complex<double> target;  // phi(L) f (x)
    std::complex<double> pi1, pi2, pi3;
    double residual = 0;
};

struct ResidualReport {
    double max_residual = 0;
    std::vector<ResidualPoint> points;
};

ResidualReport reconstruction_report(const HermiteExpansion& f, const PhiSpec& phi,
                                     const DecompositionParams& params,
                                     const std::vector<double>& grid);
// max over grid of |phi(L) f(x) - c (pi1 u + pi2 f + pi3 f)(x)|
double reconstruction_residual(const HermiteExpansion& f, const PhiSpec& phi,
                               const DecompositionParams& params, const std::vector<double>& grid);

}  // namespace ouha
