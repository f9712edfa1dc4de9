#include <algorithm>
#include <cmath>

#include "ouha/error.hpp"
#include "ouha/harness.hpp"
#include "ouha/parallel.hpp"

namespace ouha {

SuiteReport spectral_gap_suite(const SpectralGapConfig& cfg) {
    for (const auto& f : cfg.f_bank) {
        if (!f.zero_mean()) throw DomainError("spectral gap suite needs zero-mean f");
    }
    for (double p : cfg.p_list) {
        if (!(p > 1 && p <= 2)) throw DomainError("spectral gap suite needs p in (1, 2]");
    }
    SuiteReport r;
    r.suite = "spectral-gap";
    r.config = {{"p", cfg.p_list}, {"t", cfg.t_grid}, {"bank_size", cfg.f_bank.size()},
                {"anchor_t", cfg.anchor_t}};
    for (double p : cfg.p_list) r.notes["theta_" + std::to_string(p).substr(0, 4)] = spectral_gap_rate(p);

    const auto h1 = HermiteExpansion::basis(1);
    for (double t : {0.1, 1.0, 3.0}) {
        const double v = semigroup(h1, t).l2_norm() * std::exp(t);
        r.add(make_case("h1_saturates", {{"t", t}}, std::abs(v - 1.0), 0.0, 1e-12));
    }
    const auto h3 = HermiteExpansion::basis(3);
    r.add(make_case("h3_eigenvalue", {{"t", 1.0}}, semigroup(h3, 1.0).l2_norm() / h3.l2_norm(),
                    std::exp(-1.0), 0.0));

    for (double t : cfg.t_grid) {
        double worst = 0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < cfg.f_bank.size(); ++i) {
            const auto& f = cfg.f_bank[i];
            const double v = semigroup(f, t).l2_norm() / (std::exp(-t) * f.l2_norm());
            if (v > worst) {
                worst = v;
                arg = i;
            }
        }
        r.add(make_case("l2_gap", {{"t", t}, {"worst_f", arg}}, worst, 1.0, 1e-10));
    }

    for (double p : cfg.p_list) {
        if (p == 2.0) continue;
        const double theta = spectral_gap_rate(p);
        std::vector<double> times{cfg.anchor_t};
        for (double t : cfg.t_grid) {
            if (t > cfg.anchor_t) times.push_back(t);
        }
        const std::size_t nt = times.size();
        std::vector<double> ratio(cfg.f_bank.size() * nt);
        parallel_for(cfg.f_bank.size(), [&](std::size_t i) {
            const auto& f = cfg.f_bank[i];
            const double fp = lp_norm(f.evaluator(), p);
            for (std::size_t b = 0; b < nt; ++b) {
                ratio[i * nt + b] = lp_norm(semigroup(f, times[b]).evaluator(), p) * std::exp(theta * times[b]) / fp;
            }
        });
        double c = 0;
        for (std::size_t i = 0; i < cfg.f_bank.size(); ++i) c = std::max(c, ratio[i * nt]);
        r.fit("C_p" + std::to_string(p).substr(0, 4), c);
        for (std::size_t b = 1; b < nt; ++b) {
            double worst = 0;
            std::size_t arg = 0;
            for (std::size_t i = 0; i < cfg.f_bank.size(); ++i) {
                if (ratio[i * nt + b] > worst) {
                    worst = ratio[i * nt + b];
                    arg = i;
                }
            }
            r.add(make_case("lp_gap", {{"p", p}, {"t", times[b]}, {"theta", theta}, {"worst_f", arg}},
                            worst, c, 1e-9 * c));
        }
    }
    return r;
}

}  // namespace ouha
