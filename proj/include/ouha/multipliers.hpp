#pragma once

// Laplace-transform-type multipliers
//   phi(lambda) = int_0^inf Phi(t) (t lambda)^2 e^{-t lambda} dt / t
// and numerical checks of the conditions on the profile Phi.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ouha/spectral.hpp"

namespace ouha {

using ProfileFn = std::function<std::complex<double>(double)>;

struct PhiSpec {
    ProfileFn phi, dphi, d2phi;
    std::string label;
    bool claims_bounded = false;
    bool claims_condition_d = false;
    std::optional<int> claims_condition_p;  // the power N
    // Declared sup |Phi| (times max(1, t)^N under Condition P); used to
    // truncate infinite t-ranges.
    std::optional<double> magnitude_bound;
    // Points where Phi is only C^2; quadrature splits there.
    std::vector<double> breakpoints;
};

enum class PhiKind { constant, imaginary_power, damped_imaginary, custom };

PhiSpec make_constant_phi();
// Phi(t) = t^{-i tau} / Gamma(2 - i tau)
PhiSpec make_imaginary_power(double tau);
// Phi(t) = t^{-i tau} chi(t), chi = 1 on (0, 1], 1 - S(t - 1) on [1, 2], 0 on [2, inf),
// S(u) = 10u^3 - 15u^4 + 6u^5.
PhiSpec make_damped_imaginary(double tau);
// Throws DomainError if any of the three maps is missing.
PhiSpec make_custom_phi(std::string label, ProfileFn phi, ProfileFn dphi, ProfileFn d2phi);
PhiSpec make_phi(PhiKind kind, double tau = 0.0);

struct BoundsReport {
    double sup_first = 0;        // sup over [1e-6, 1e6] of |Phi| + t |Phi'|
    double argsup_first = 0;
    double sup_second = 0;       // sup over [1e-6, 1] of t^2 |Phi''|
    double argsup_second = 0;
    // The same suprema on the grid extended by two decades at each end.
    double sup_first_extended = 0;
    double sup_second_extended = 0;
    bool finite = true;          // false if the suprema grow with the grid
};
BoundsReport check_bounds(const PhiSpec& spec, int samples = 2000);

struct ConditionDReport {
    bool holds = false;
    double integral_estimate = 0;    // int_1^T (|Phi'| + t |Phi''|) dt at the last T
    std::vector<double> increments;  // int over [T, 2T] for T = 1, 2, 4, ...
};
ConditionDReport check_condition_d(const PhiSpec& spec, double tol = 1e-8);

struct ConditionPReport {
    bool holds = false;
    double fitted_constant = 0;   // sup over [1, 1e4] of (|Phi'| + t|Phi''|) / t^N
    double extended_constant = 0; // same over [1, 1e8]
};
ConditionPReport check_condition_p(const PhiSpec& spec, int N);

std::complex<double> phi_lambda(const PhiSpec& spec, double lambda, double tol = 1e-10);

// c_k -> phi(k) c_k (so c_0 -> 0).
HermiteExpansion apply_multiplier(const HermiteExpansion& f, const PhiSpec& spec,
                                  double tol = 1e-10);

}  // namespace ouha
