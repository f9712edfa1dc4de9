#pragma once

// Admissible cones, the Gaussian tent-space norm and the admissible conical
// square function.

#include <functional>

#include "ouha/decomposition.hpp"
#include "ouha/spectral.hpp"

namespace ouha {

// Gamma(x) = {(y, t) : |y - x| < aperture t, t < height m~(y)}.
// height = 1 is the admissible region D; height = sqrt(delta) gives D'.
struct ConeSpec {
    double vertex = 0;
    double aperture = 1;
    double height = 1;

    void validate() const;
};

// Polynomial whose values at height t are integrated over the cone.
using FieldSlice = std::function<HermiteExpansion(double t)>;

// Sf(x)^2 integrand uses t^2 L e^{-t^2 L} f on B(x, t), t < 2 m(x).
double square_function(const HermiteExpansion& f, double x, double tol = 1e-8);

// iint_{Gamma(x)} |F(t)(y)|^2 d gamma(y) dt / (t gamma(B(y, t))).
double cone_integral(const FieldSlice& field, const ConeSpec& cone, double tol = 1e-8);
// Same with F(t) = u(., t); the cone height must be <= 1 so that u's
// own truncation to D is implied by the cone.
double cone_integral(const UField& u, const ConeSpec& cone, double tol = 1e-8);

// (int (cone integral at x)^{p/2} d gamma(x))^{1/p}, 1 <= p <= 2.
double tent_norm(const UField& u, double p, double tol = 1e-6);

// iint_D |u|^2 d gamma dt / t computed directly over D (equals tent_norm(u, 2)^2).
double region_integral(const UField& u, double tol = 1e-8);

struct ApertureComparison {
    double left = 0;   // cone integral of |s^2 L e^{-s^2 L} f|^2 over Gamma(x) cap D'
    double right = 0;  // Sf(x)^2
    double ratio = 0;  // left / right, 0 when both vanish
};
ApertureComparison aperture_compare(const HermiteExpansion& f, double delta, double x,
                                    double tol = 1e-8);

}  // namespace ouha
