#pragma once

// Verification suites: each returns a SuiteReport whose asserted cases are
// exact-constant inequalities (or inequalities with a constant fitted once on
// a designated anchor case and reused unchanged).

#include <cstdint>
#include <random>
#include <vector>

#include "ouha/decomposition.hpp"
#include "ouha/multipliers.hpp"
#include "ouha/report.hpp"
#include "ouha/spectral.hpp"

namespace ouha {

// mt19937_64 with u = (bits >> 11) 2^-53.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }
    int uniform_int(int lo, int hi);  // inclusive
    // Uniform on the complex unit disc.
    std::complex<double> disc();

private:
    std::mt19937_64 gen_;
};

// count polynomials of degree uniform in [1, max_degree], coefficients
// uniform on the unit disc; c_0 = 0 when zero_mean.
std::vector<HermiteExpansion> random_bank(std::uint64_t seed, int count, int max_degree,
                                          bool zero_mean, const GaussianContext& ctx = {});

// n points log-spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

// q(t) = 1 + (p - 1) e^{2t}
double hypercontractive_exponent(double p, double t);

struct HypercontractivityConfig {
    std::uint64_t seed = 7;
    int trials = 1000;
    int max_degree = 8;
    std::vector<double> p_list{1.5, 2.0};
    std::vector<double> t_grid = log_grid(0.01, 3.0, 12);
    double slack = 1e-9;
    double tol = 1e-10;
};
SuiteReport hypercontractivity_suite(const HypercontractivityConfig& cfg);

struct AnnuliConfig {
    DecompositionParams params;
    double p = 1.5;
    int k_max = 6;
    int l_max = 3;
    std::vector<HermiteExpansion> f_bank;
    std::uint64_t seed = 7;
};
// Partition identity, Hoelder step, Hoelder + hypercontractivity chain,
// decay fit (A, c), exponent gap c', empirical alpha.
SuiteReport ondiagonal_suite(const AnnuliConfig& cfg);
// Kernel-path ratios between annuli against the off-diagonal bound, with the
// constant fitted on (k, l) = (2, 1); exact set distances.
SuiteReport offdiagonal_suite(const AnnuliConfig& cfg);

// N(k) = k - 1 + 2 log_4 kappa
int chain_length(int k, double kappa);
// q(k, j) = 1 + (p - 1) e^{2 eps 4^{-k+j} / kappa^2}
double chain_exponent(double p, double eps, int k, int j, double kappa);
// Exact distance between the unstarred annuli C_k and C_m (k < m).
double annulus_distance(int k, int m);

// theta_p = 2 - 2/p
double spectral_gap_rate(double p);

struct SpectralGapConfig {
    std::vector<double> p_list{1.5, 2.0};
    std::vector<double> t_grid{0.1, 0.3, 1.0, 3.0};
    std::vector<HermiteExpansion> f_bank;
    double anchor_t = 0.1;
};
SuiteReport spectral_gap_suite(const SpectralGapConfig& cfg);

struct Pi3Config {
    DecompositionParams params;
    PhiSpec phi = make_damped_imaginary(1.0);
    std::vector<HermiteExpansion> f_bank;
    std::vector<double> points{0.5, -0.3, 1.2, -1.7, 2.5, -3.5};
};
// The three terms of the pointwise estimate for |pi3 f(x)| and the
// logarithmic-weight L^1 norm.  Throws DomainError unless the profile
// satisfies Condition D.
SuiteReport pi3_pointwise_suite(const Pi3Config& cfg);

struct Pi3Terms {
    double boundary_tl = 0;   // sup|Phi| |(a L e^{-eps a L} f)(x)|
    double boundary_e = 0;    // sup(|Phi| + t|Phi'|) |(e^{-eps a L} f)(x)|
    double tail = 0;          // int_{eps a}^inf (|Phi'(u)| + u|Phi''(u)|) |(e^{-uL} f)(x)| du
};
// a = m~(x)^2 / kappa^2
Pi3Terms pi3_terms(const HermiteExpansion& f, const PhiSpec& phi, const DecompositionParams& params,
                   double x);
// ||(1 + log_+ |.|) f||_1
double log_weight_norm(const HermiteExpansion& f, double tol = 1e-10);

// Shared run configuration of the verify suites.
struct VerifyConfig {
    DecompositionParams params;
    std::vector<double> tau_list{1.0};
    std::vector<double> p_list{1.5, 2.0};
    std::uint64_t seed = 7;
    double eps_maximal = 1.0 / 64;
    int deg_max = 8;
    int trials = 1000;
};

SuiteReport verify_semigroup(const VerifyConfig& cfg);
SuiteReport verify_kernel(const VerifyConfig& cfg);
SuiteReport verify_hypercontractivity(const VerifyConfig& cfg);
SuiteReport verify_decomposition(const VerifyConfig& cfg);
SuiteReport verify_tent(const VerifyConfig& cfg);
std::vector<SuiteReport> verify_annuli(const VerifyConfig& cfg);
SuiteReport verify_spectral_gap(const VerifyConfig& cfg);
SuiteReport verify_pi3(const VerifyConfig& cfg);

// Parameter record shared by every report's config block.
Json config_json(const VerifyConfig& cfg);

}  // namespace ouha
