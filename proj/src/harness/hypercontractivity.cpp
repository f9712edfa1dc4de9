#include <algorithm>
#include <cmath>

#include "ouha/error.hpp"
#include "ouha/harness.hpp"
#include "ouha/parallel.hpp"

namespace ouha {
namespace {

double norm_ratio(const HermiteExpansion& f, double p, double t, double q, double tol) {
    return lp_norm(semigroup(f, t).evaluator(), q, tol) / lp_norm(f.evaluator(), p, tol);
}

}  // namespace

SuiteReport hypercontractivity_suite(const HypercontractivityConfig& cfg) {
    for (double p : cfg.p_list) {
        if (!(p > 1)) throw DomainError("hypercontractivity needs p > 1");
    }
    SuiteReport r;
    r.suite = "hypercontractivity";
    r.config = {{"seed", cfg.seed},     {"trials", cfg.trials}, {"max_degree", cfg.max_degree},
                {"p", cfg.p_list},      {"t", cfg.t_grid},      {"slack", cfg.slack},
                {"tol", cfg.tol}};
    GaussianContext ctx;
    ctx.degree_max = std::max(ctx.degree_max, cfg.max_degree);
    const auto bank = random_bank(cfg.seed, cfg.trials, cfg.max_degree, false, ctx);
    const std::size_t np = cfg.p_list.size(), nt = cfg.t_grid.size();

    // ratio[i][a][b] = ||e^{-tL} f_i||_{q(t)} / ||f_i||_p
    std::vector<double> ratio(bank.size() * np * nt);
    parallel_for(bank.size(), [&](std::size_t i) {
        for (std::size_t a = 0; a < np; ++a) {
            const double p = cfg.p_list[a];
            const double fp = lp_norm(bank[i].evaluator(), p, cfg.tol);
            for (std::size_t b = 0; b < nt; ++b) {
                const double t = cfg.t_grid[b];
                const double q = hypercontractive_exponent(p, t);
                ratio[(i * np + a) * nt + b] =
                    lp_norm(semigroup(bank[i], t).evaluator(), q, cfg.tol) / fp;
            }
        }
    });

    int violations = 0;
    for (std::size_t a = 0; a < np; ++a) {
        for (std::size_t b = 0; b < nt; ++b) {
            const double p = cfg.p_list[a], t = cfg.t_grid[b];
            double worst = 0;
            std::size_t arg = 0;
            for (std::size_t i = 0; i < bank.size(); ++i) {
                const double v = ratio[(i * np + a) * nt + b];
                if (v > 1.0 + cfg.slack) ++violations;
                if (v > worst) {
                    worst = v;
                    arg = i;
                }
            }
            r.add(make_case("nelson", {{"p", p}, {"t", t}, {"q", hypercontractive_exponent(p, t)},
                                       {"trials", bank.size()}, {"worst_trial", arg}},
                            worst, 1.0, cfg.slack));
        }
    }
    const auto one = HermiteExpansion::basis(0);
    for (double p : cfg.p_list) {
        for (double t : cfg.t_grid) {
            const double q = hypercontractive_exponent(p, t);
            r.add(make_case("constant", {{"p", p}, {"t", t}, {"q", q}},
                            norm_ratio(one, p, t, q, cfg.tol), 1.0, cfg.slack));
        }
    }

    // Sharpness evidence: exponents beyond q(t) should admit violations.
    int witnesses = 0;
    for (double p : cfg.p_list) {
        for (double t : cfg.t_grid) {
            const double q = 1.1 * hypercontractive_exponent(p, t);
            for (double e : {0.5, 0.1, 0.02}) {
                const auto f = one + HermiteExpansion::basis(1, e);
                auto c = make_case("witness", {{"p", p}, {"t", t}, {"q", q}, {"epsilon", e}},
                                   norm_ratio(f, p, t, q, cfg.tol), 1.0, 0.0, false);
                if (!c.pass) ++witnesses;
                r.add(std::move(c));
            }
        }
    }
    const double threshold = 0.5 * std::log(3.0);
    for (double t : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        const auto f = one + HermiteExpansion::basis(1, 0.5);
        auto c = make_case("below_threshold", {{"p", 2.0}, {"q", 4.0}, {"t", t}, {"threshold", threshold}},
                           norm_ratio(f, 2.0, t, 4.0, cfg.tol), 1.0, 0.0, false);
        if (!c.pass) ++witnesses;
        r.add(std::move(c));
    }
    r.notes["violations"] = violations;
    r.notes["witnesses"] = witnesses;
    return r;
}

}  // namespace ouha
