#include <cmath>
#include <numbers>

#include "ouha/error.hpp"
#include "ouha/harness.hpp"

namespace ouha {

int Rng::uniform_int(int lo, int hi) {
    const int v = lo + int(uniform() * double(hi - lo + 1));
    return std::min(v, hi);
}

std::complex<double> Rng::disc() {
    const double r = std::sqrt(uniform());
    const double theta = 2.0 * std::numbers::pi * uniform();
    return std::polar(r, theta);
}

std::vector<HermiteExpansion> random_bank(std::uint64_t seed, int count, int max_degree,
                                          bool zero_mean, const GaussianContext& ctx) {
    if (max_degree < 1 || max_degree > ctx.degree_max) {
        throw DomainError("bank degree must lie in [1, degree_max]");
    }
    Rng rng(seed);
    std::vector<HermiteExpansion> bank;
    bank.reserve(count);
    for (int i = 0; i < count; ++i) {
        const int d = rng.uniform_int(1, max_degree);
        std::vector<std::complex<double>> c(d + 1);
        for (auto& v : c) v = rng.disc();
        if (zero_mean) c[0] = 0.0;
        bank.emplace_back(std::move(c), ctx);
    }
    return bank;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0) || !(hi >= lo) || n < 1) throw DomainError("log_grid needs 0 < lo <= hi, n >= 1");
    if (n == 1) return {lo};
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    g.back() = hi;
    return g;
}

double hypercontractive_exponent(double p, double t) {
    if (!(p > 1)) throw DomainError("hypercontractive exponent needs p > 1");
    if (!(t >= 0)) throw DomainError("hypercontractive exponent needs t >= 0");
    return 1.0 + (p - 1.0) * std::exp(2.0 * t);
}

double spectral_gap_rate(double p) {
    if (!(p >= 1)) throw DomainError("theta_p needs p >= 1");
    return 2.0 - 2.0 / p;
}

Json config_json(const VerifyConfig& cfg) {
    Json j;
    j["delta"] = cfg.params.delta;
    j["delta_prime"] = cfg.params.delta_prime;
    j["kappa"] = cfg.params.kappa;
    j["t_tol"] = cfg.params.t_tol;
    j["kernel_tol"] = cfg.params.kernel_tol;
    j["tau"] = cfg.tau_list;
    j["p"] = cfg.p_list;
    j["seed"] = cfg.seed;
    j["eps_maximal"] = cfg.eps_maximal;
    j["deg_max"] = cfg.deg_max;
    j["constraint_flags"] = cfg.params.constraint_flags();
    return j;
}

}  // namespace ouha
