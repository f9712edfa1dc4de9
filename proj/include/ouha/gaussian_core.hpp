#pragma once

// Geometry of the one-dimensional Gaussian measure
//   d gamma(x) = pi^{-1/2} e^{-x^2} dx,
// the admissibility functions m and m~, Hermite polynomials, and L^p(gamma)
// norms of evaluable functions.

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "ouha/quadrature.hpp"

namespace ouha {

struct GaussianContext {
    int dimension = 1;
    int degree_max = 16;
    double tol = 1e-10;

    // Throws DomainError unless dimension == 1, degree_max >= 1 and tol > 0.
    void validate() const;
};

double gaussian_density(double x);

// gamma(B(center, radius)) = (erf(center + radius) - erf(center - radius)) / 2.
double ball_measure(double center, double radius);
// Logarithm of the above; accurate when the ball is far in the tail.
double log_ball_measure(double center, double radius);

struct Annulus {
    int k = 0;
    bool starred = false;
    double inner = 0;  // 0 means a centred ball
    double outer = 1;

    static Annulus unstarred(int k);  // C_k
    static Annulus star(int k);       // C_k^*
    bool contains(double x) const;
};

double annulus_measure(const Annulus& a);
double log_annulus_measure(const Annulus& a);

// m(x) = min(1, 1/|x|)
double admissibility(double x);
// m~(x) = 1 on |x| < 1 and 2^{-k} on 2^{k-1} <= |x| < 2^k.
double discrete_admissibility(double x);

// {y : m~(y) > t} = {|y| < radius}.
struct RegionSlice {
    double t = 0;
    double radius = 0;
    bool empty() const { return radius == 0; }
    bool contains(double y) const { return std::abs(y) < radius; }
};
RegionSlice region_slice(double t);

// h_k(x) = H_k(x) / sqrt(2^k k!); throws DomainError for k outside [0, degree_max].
double hermite_orthonormal(int k, double x, const GaussianContext& ctx = {});

// Gauss-Hermite rule for d gamma; exact for polynomials of degree <= 2N - 1.
quad::Rule gamma_quadrature(int N);

// ---------------------------------------------------------------------------
// L^p(gamma) norms
// ---------------------------------------------------------------------------

// Evaluates f at every x, writing real and imaginary parts.
using BatchEvaluator =
    std::function<void(std::span<const double> x, std::span<double> re, std::span<double> im)>;
// Evaluates log|f| at every x (-inf where f vanishes).
using LogAbsEvaluator = std::function<void(std::span<const double> x, std::span<double> log_abs)>;

BatchEvaluator pointwise(std::function<std::complex<double>(double)> f);

// (int |f|^p d gamma)^{1/p} over the whole line.  Composite Gauss-Legendre on
// [-R, R] (R = 8 doubled up to four times, 64 panels of 16 nodes with the panel
// count doubled along with R), followed by panel doubling at the final R.
// Zeros and near-zeros of f on [-12, 12] get geometrically graded panel
// breakpoints, since |f|^p is not smooth there.
// Throws ConvergenceError if successive estimates never agree to `tol`.
double lp_norm(const BatchEvaluator& f, double p, double tol = 1e-10);
// log int |f|^p d gamma, same algorithm; survives huge or tiny integrals.
double log_lp_integral(const BatchEvaluator& f, double p, double tol = 1e-10);

struct Interval {
    double lo;
    double hi;
};
using IntervalSet = std::vector<Interval>;

// The annulus as a union of closed intervals of the real line.
IntervalSet interval_set(const Annulus& a);
IntervalSet centered_ball_set(double radius);

// log int_S |f|^p d gamma for a finite union S of bounded intervals,
// by log-domain adaptive Gauss-Kronrod.
double log_lp_integral_on(const LogAbsEvaluator& log_abs, double p, const IntervalSet& set,
                          double tol = 1e-10);

}  // namespace ouha
