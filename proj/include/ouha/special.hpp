#pragma once

#include <complex>

namespace ouha::special {

double erf(double z);
double erfc(double z);
// log(erfc(z)); finite for arbitrarily large positive z (continued fraction
// for erfc(z) e^{z^2} once erfc itself would underflow).
double log_erfc(double z);

// Gamma function for complex arguments (Lanczos, g = 7, nine terms, with
// reflection for Re z < 1/2).
std::complex<double> gamma(std::complex<double> z);

// Upper incomplete gamma Gamma(n, x) for integer n >= 1.
double upper_gamma_int(int n, double x);

// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);
// log(exp(a) - exp(b)) for a >= b.
double log_sub_exp(double a, double b);

}  // namespace ouha::special
