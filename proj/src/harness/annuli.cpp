#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ouha/error.hpp"
#include "ouha/harness.hpp"
#include "ouha/mehler.hpp"
#include "ouha/parallel.hpp"

namespace ouha {
namespace {

constexpr double kOuterTol = 1e-11;
// log|w| reaches -1e6 for distant supports, where rounding of the logarithm
// alone is a relative error near 1e-10.
constexpr double kFarTol = 1e-8;

double log4(double v) { return std::log(v) / std::log(4.0); }

LogAbsEvaluator semigroup_log_abs(const HermiteExpansion& f, const IntervalSet& source, double s,
                                  double tol) {
    const BatchEvaluator g = f.evaluator();
    return [g, source, s, tol](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            out[i] = kernel_integral(g, source, s, x[i], tol, false).value.log_abs();
        }
    };
}

// log |[t L e^{-tL}(1_S g)](x)| = log |t d/ds e^{-sL}(1_S g)(x)| at s = t
LogAbsEvaluator tl_log_abs(const HermiteExpansion& f, const IntervalSet& source, double t,
                           double tol) {
    const BatchEvaluator g = f.evaluator();
    return [g, source, t, tol](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            out[i] = std::log(t) + kernel_integral(g, source, t, x[i], tol, true).derivative.log_abs();
        }
    };
}

double set_distance(const IntervalSet& a, const IntervalSet& b) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& u : a) {
        for (const auto& v : b) {
            d = std::min(d, std::max({0.0, v.lo - u.hi, u.lo - v.hi}));
        }
    }
    return d;
}

double sup_abs(const IntervalSet& s) {
    double r = 0;
    for (const auto& iv : s) r = std::max({r, std::abs(iv.lo), std::abs(iv.hi)});
    return r;
}

// Least-squares slope and intercept of y against x.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

Json params_json(const DecompositionParams& p) {
    return {{"delta", p.delta}, {"delta_prime", p.delta_prime}, {"kappa", p.kappa},
            {"kernel_tol", p.kernel_tol}};
}

void check_bank(const AnnuliConfig& cfg) {
    cfg.params.validate();
    if (cfg.f_bank.empty()) throw DomainError("annuli suites need a nonempty f_bank");
    if (!(cfg.p > 1 && cfg.p <= 2)) throw DomainError("annuli suites need p in (1, 2]");
    if (cfg.k_max < 0 || cfg.l_max < 1) throw DomainError("annuli suites need k_max >= 0, l_max >= 1");
}

}  // namespace

int chain_length(int k, double kappa) {
    if (!is_power_of_four(kappa)) throw DomainError("chain length needs kappa a power of 4");
    return k - 1 + int(std::lround(2.0 * log4(kappa)));
}

double chain_exponent(double p, double eps, int k, int j, double kappa) {
    const double s = eps * std::ldexp(1.0, 2 * (j - k)) / (kappa * kappa);
    return hypercontractive_exponent(p, s);
}

double annulus_distance(int k, int m) {
    if (k < 0 || m <= k) throw DomainError("annulus distance needs 0 <= k < m");
    return std::ldexp(1.0, m - 1) - std::ldexp(1.0, k);
}

SuiteReport ondiagonal_suite(const AnnuliConfig& cfg) {
    check_bank(cfg);
    if (!is_power_of_four(cfg.params.kappa)) throw DomainError("on-diagonal suite needs kappa a power of 4");
    const double p = cfg.p, eps = cfg.params.epsilon(), kappa = cfg.params.kappa;
    const double tol = cfg.params.kernel_tol;

    SuiteReport r;
    r.suite = "annuli-ondiagonal";
    r.config = params_json(cfg.params);
    r.config["p"] = p;
    r.config["k_max"] = cfg.k_max;
    r.config["bank_size"] = cfg.f_bank.size();
    r.config["seed"] = cfg.seed;

    // (a) time partition
    for (double kap : {4.0, 16.0}) {
        for (int k = 0; k <= 8; ++k) {
            const int n = chain_length(k, kap);
            const double v = std::ldexp(1.0, 2 * (n + 1 - k)) / (kap * kap);
            r.add(make_case("partition", {{"kappa", kap}, {"k", k}, {"N", n}}, std::abs(v - 1.0), 0.0, 0.0));
        }
    }

    struct Item {
        int k, j;
        std::size_t f;
    };
    std::vector<Item> items;
    for (int k = 0; k <= cfg.k_max; ++k) {
        for (int j = 0; j <= chain_length(k, kappa); ++j) {
            for (std::size_t f = 0; f < cfg.f_bank.size(); ++f) items.push_back({k, j, f});
        }
    }
    // log int_{C_k^*} |f|^p d gamma, per (k, f)
    std::vector<double> log_source((cfg.k_max + 1) * cfg.f_bank.size());
    parallel_for(log_source.size(), [&](std::size_t i) {
        const int k = int(i / cfg.f_bank.size());
        const auto& f = cfg.f_bank[i % cfg.f_bank.size()];
        log_source[i] = log_lp_integral_on(f.log_abs_evaluator(), p, interval_set(Annulus::star(k)), kOuterTol);
    });
    struct Out {
        double log_p = 0, log_q = 0;
    };
    std::vector<Out> out(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        const auto [k, j, fi] = items[i];
        const double s = eps * std::ldexp(1.0, 2 * (j - k)) / (kappa * kappa);
        const double q = chain_exponent(p, eps, k, j, kappa);
        const auto v = semigroup_log_abs(cfg.f_bank[fi], interval_set(Annulus::star(k)), s, tol);
        const IntervalSet target = interval_set(Annulus::unstarred(k));
        out[i].log_p = log_lp_integral_on(v, p, target, kOuterTol);
        out[i].log_q = log_lp_integral_on(v, q, target, kOuterTol);
    });

    std::vector<double> fit_x, fit_y;
    double gap_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto [k, j, fi] = items[i];
        const double q = chain_exponent(p, eps, k, j, kappa);
        const double gap = 1.0 / p - 1.0 / q;
        const double log_gamma = log_annulus_measure(Annulus::unstarred(k));
        const Json in{{"k", k}, {"j", j}, {"f", fi}, {"q", q}};
        // (b) ||1_C g||_p <= gamma(C)^{1/p - 1/q} ||1_C g||_q
        const double lhs = out[i].log_p / p;
        const double holder = gap * log_gamma + out[i].log_q / q;
        r.add(make_case("holder", in, std::exp(lhs - holder), 1.0, 1e-9));
        // (c) ... <= gamma(C)^{1/p - 1/q} ||1_{C^*} f||_p
        const double chain = gap * log_gamma + log_source[k * cfg.f_bank.size() + fi] / p;
        r.add(make_case("chain", in, std::exp(lhs - chain), 1.0, 1e-9));
        if (fi == 0) {
            fit_x.push_back(std::ldexp(1.0, 2 * j));
            fit_y.push_back(gap * log_gamma);
            gap_min = std::min(gap_min, gap / std::ldexp(1.0, 2 * (j - k)));
        }
    }

    // (d) gamma(C_k)^{1/p - 1/q(k,j)} <= A e^{-c 4^j}
    const auto [slope, intercept] = line_fit(fit_x, fit_y);
    const double c = -slope;
    double log_a = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fit_x.size(); ++i) log_a = std::max(log_a, fit_y[i] + c * fit_x[i]);
    auto decay = make_case("decay_rate", {{"fit_points", fit_x.size()}, {"ls_intercept", intercept}}, -c, 0.0, 0.0);
    decay.pass = c > 0;
    r.add(std::move(decay));
    std::size_t idx = 0;
    for (int k = 0; k <= cfg.k_max; ++k) {
        for (int j = 0; j <= chain_length(k, kappa); ++j, ++idx) {
            r.add(make_case("decay", {{"k", k}, {"j", j}}, std::exp(fit_y[idx]),
                            std::exp(log_a - c * fit_x[idx]), 0.0, false));
        }
    }
    r.fit("A", std::exp(log_a));
    r.fit("c", c);

    // 1/p - 1/q(k,j) >= c' 4^{-k+j}
    auto gap_case = make_case("exponent_gap", {{"p", p}}, -gap_min, 0.0, 0.0);
    gap_case.pass = gap_min > 0;
    r.add(std::move(gap_case));
    r.fit("c_prime", gap_min);

    // Empirical alpha in ||1_{C_k} e^{-tL}(1_{C_k^*} f)||_1 <~ j^{-alpha} ||1_{C_k^*} f||_1
    const int k_alpha = std::min(cfg.k_max, 4);
    std::vector<Item> alpha_items;
    for (int k = 0; k <= k_alpha; ++k) {
        for (int j = 1; j <= chain_length(k, kappa); ++j) {
            for (std::size_t f = 0; f < cfg.f_bank.size(); ++f) alpha_items.push_back({k, j, f});
        }
    }
    std::vector<double> log_ratio(alpha_items.size());
    parallel_for(alpha_items.size(), [&](std::size_t i) {
        const auto [k, j, fi] = alpha_items[i];
        const double t = std::ldexp(1.0, 2 * (j - k)) / (kappa * kappa);
        const IntervalSet star = interval_set(Annulus::star(k));
        const auto v = semigroup_log_abs(cfg.f_bank[fi], star, t, tol);
        log_ratio[i] = log_lp_integral_on(v, 1.0, interval_set(Annulus::unstarred(k)), kOuterTol) -
                       log_lp_integral_on(cfg.f_bank[fi].log_abs_evaluator(), 1.0, star, kOuterTol);
    });
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < alpha_items.size(); ++i) {
        lx.push_back(std::log(double(alpha_items[i].j)));
        ly.push_back(log_ratio[i]);
        r.add(make_case("l1_decay", {{"k", alpha_items[i].k}, {"j", alpha_items[i].j}, {"f", alpha_items[i].f}},
                        std::exp(log_ratio[i]), 1.0, 0.0, false));
    }
    const double alpha = lx.size() > 1 ? -line_fit(lx, ly).first : 0.0;
    r.notes["alpha"] = alpha;
    r.notes["alpha_asserted"] = false;
    return r;
}

SuiteReport offdiagonal_suite(const AnnuliConfig& cfg) {
    check_bank(cfg);
    const double p = cfg.p, eps = cfg.params.epsilon(), tol = cfg.params.kernel_tol;
    const int k_lo = 2, k_hi = std::max(2, cfg.k_max);

    SuiteReport r;
    r.suite = "annuli-offdiagonal";
    r.config = params_json(cfg.params);
    r.config["p"] = p;
    r.config["k_max"] = cfg.k_max;
    r.config["l_max"] = cfg.l_max;
    r.config["bank_size"] = cfg.f_bank.size();
    r.config["seed"] = cfg.seed;

    // Set distances.
    for (int k = 0; k <= k_hi; ++k) {
        for (int l = 1; l <= cfg.l_max; ++l) {
            const double exact = set_distance(interval_set(Annulus::unstarred(k)),
                                              interval_set(Annulus::unstarred(k + l)));
            const double formula = annulus_distance(k, k + l);
            const Json in{{"k", k}, {"l", l}, {"distance", exact}};
            r.add(make_case("distance_formula", in, std::abs(formula - exact), 0.0, 0.0));
            if (k >= 2) {
                const double claimed = std::ldexp(1.0, k + l - 2);
                r.add(make_case("distance_lower", in, claimed, exact, 0.0, l >= 2));
            }
        }
        if (k >= 2) {
            const IntervalSet ball = centered_ball_set(std::ldexp(1.0, k - 2));
            const double d = set_distance(interval_set(Annulus::unstarred(k)), ball);
            r.add(make_case("distance_ball", {{"k", k}, {"distance", d}},
                            std::abs(d - std::ldexp(1.0, k - 2)), 0.0, 0.0));
            for (int l = 1; l <= cfg.l_max; ++l) {
                const double dl = set_distance(interval_set(Annulus::unstarred(k + l - 1)), ball);
                r.add(make_case("distance_ball_far", {{"k", k}, {"l", l}, {"distance", dl}},
                                std::ldexp(1.0, k + l - 3), dl, 0.0));
            }
        }
    }

    struct Item {
        int k;
        int l;  // 0: ball B(0, 2^{k-2}); -1: ball B(0, 1)
        int ti;
        std::size_t f;
        IntervalSet source, target;
        double t;
    };
    std::vector<Item> items;
    for (int k = k_lo; k <= k_hi; ++k) {
        std::vector<std::pair<int, IntervalSet>> sources;
        for (int l = 1; l <= cfg.l_max; ++l) sources.emplace_back(l, interval_set(Annulus::unstarred(k + l)));
        sources.emplace_back(0, centered_ball_set(std::ldexp(1.0, k - 2)));
        if (k == 4) sources.emplace_back(-1, centered_ball_set(1.0));
        for (const auto& [l, src] : sources) {
            for (int ti = 0; ti < 2; ++ti) {
                const double t = std::ldexp(1.0, -k - 1 + ti) * eps;
                for (std::size_t f = 0; f < cfg.f_bank.size(); ++f) {
                    items.push_back({k, l, ti, f, src, interval_set(Annulus::unstarred(k)), t});
                }
            }
        }
    }
    std::vector<double> log_ratio(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        const Item& it = items[i];
        const auto& f = cfg.f_bank[it.f];
        const double num = log_lp_integral_on(tl_log_abs(f, it.source, it.t, tol), p, it.target, kFarTol);
        const double den = log_lp_integral_on(f.log_abs_evaluator(), p, it.source, kFarTol);
        log_ratio[i] = (num - den) / p;
    });
    auto log_bound = [](const Item& it) {
        const double d = set_distance(it.source, it.target);
        const double rs = sup_abs(it.source), rt = sup_abs(it.target);
        return -0.5 * std::log(it.t) - d * d / (8.0 * it.t) + 0.5 * (rs * rs + rt * rt);
    };

    double log_c = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].k == 2 && items[i].l == 1) log_c = std::max(log_c, log_ratio[i] - log_bound(items[i]));
    }
    r.fit("log_C", log_c);
    auto find = [&](int k, int l, int ti, std::size_t f) {
        for (std::size_t i = 0; i < items.size(); ++i) {
            const auto& it = items[i];
            if (it.k == k && it.l == l && it.ti == ti && it.f == f) return i;
        }
        throw DomainError("off-diagonal item missing");
    };
    for (std::size_t i = 0; i < items.size(); ++i) {
        const Item& it = items[i];
        const double lb = log_bound(it);
        const Json in{{"k", it.k},
                      {"source", it.l > 0 ? "C_" + std::to_string(it.k + it.l)
                                          : "B(0," + std::to_string(sup_abs(it.source)) + ")"},
                      {"t", it.t},
                      {"f", it.f},
                      {"log_ratio", log_ratio[i]},
                      {"log_bound", lb}};
        r.add(make_case("kernel_bound", in, std::exp(log_ratio[i] - lb - log_c), 1.0, 1e-9));
        if (it.l == -1) {
            r.add(make_case("ball_to_far_annulus", in, std::exp(log_ratio[i] - log_c + 256.0), 1.0, 1e-9));
        }
    }
    if (cfg.l_max >= 2) {
        for (int ti = 0; ti < 2; ++ti) {
            for (std::size_t f = 0; f < cfg.f_bank.size(); ++f) {
                const std::size_t a = find(2, 1, ti, f), b = find(2, 2, ti, f);
                r.add(make_case("decay_in_l", {{"t", items[a].t}, {"f", f}},
                                std::exp(log_ratio[b] - log_ratio[a]), 1.0, 0.0));
            }
        }
    }
    return r;
}

}  // namespace ouha
