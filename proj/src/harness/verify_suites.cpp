#include <algorithm>
#include <cmath>

#include "ouha/error.hpp"
#include "ouha/harness.hpp"
#include "ouha/mehler.hpp"
#include "ouha/parallel.hpp"
#include "ouha/tent.hpp"

namespace ouha {
namespace {

using cd = std::complex<double>;

const std::vector<double> kResidualGrid{0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0};

GaussianContext context_for(const VerifyConfig& cfg) {
    GaussianContext ctx;
    ctx.degree_max = std::max(ctx.degree_max, cfg.deg_max);
    return ctx;
}

std::vector<HermiteExpansion> fixed_bank() {
    using H = HermiteExpansion;
    return {H::basis(1), H::basis(1) + H::basis(3), H::basis(2) - H::basis(4)};
}

std::vector<HermiteExpansion> mixed_bank(const VerifyConfig& cfg, int random, bool zero_mean) {
    auto bank = fixed_bank();
    for (auto& f : random_bank(cfg.seed, random, cfg.deg_max, zero_mean, context_for(cfg))) {
        bank.push_back(std::move(f));
    }
    return bank;
}

double coefficient_distance(const HermiteExpansion& a, const HermiteExpansion& b) {
    return (a - b).l2_norm();
}

SuiteReport start(std::string name, const VerifyConfig& cfg) {
    cfg.params.validate();
    if (cfg.deg_max < 1) throw DomainError("deg-max must be >= 1");
    SuiteReport r;
    r.suite = std::move(name);
    r.config = config_json(cfg);
    return r;
}

void attach(SuiteReport& r, const VerifyConfig& cfg) {
    Json inner = std::move(r.config);
    r.config = config_json(cfg);
    r.config["suite"] = std::move(inner);
}

}  // namespace

SuiteReport verify_semigroup(const VerifyConfig& cfg) {
    auto r = start("semigroup", cfg);
    const std::vector<double> xs = [] {
        std::vector<double> v;
        for (int i = 0; i <= 8; ++i) v.push_back(-4.0 + i);
        return v;
    }();
    for (int k = 0; k <= 10; ++k) {
        const auto g = TruncatedPolynomial::whole(HermiteExpansion::basis(k));
        for (double s : {0.01, 0.1, 1.0}) {
            double worst = 0;
            for (double x : xs) {
                const double ref = std::exp(-s * k) * hermite_orthonormal(k, x);
                const double err = std::abs(kernel_apply(g, s, x) - ref) / std::max(std::abs(ref), 1.0);
                worst = std::max(worst, err);
            }
            r.add(make_case("kernel_vs_spectral", {{"k", k}, {"s", s}}, worst, 1e-8, 0.0));
        }
    }

    const auto bank = random_bank(cfg.seed, 50, cfg.deg_max, false, context_for(cfg));
    const std::vector<double> times = log_grid(0.01, 3.0, 6);
    double law = 0, mean = 0;
    for (const auto& f : bank) {
        for (double s : {0.1, 0.7}) {
            for (double t : times) {
                law = std::max(law, coefficient_distance(semigroup(semigroup(f, t), s), semigroup(f, s + t)));
            }
        }
        mean = std::max(mean, std::abs(semigroup(f, 1.0).mean() - f.mean()));
    }
    r.add(make_case("semigroup_law", {{"bank", bank.size()}}, law, 0.0, 1e-12));
    r.add(make_case("mean_preserved", {{"bank", bank.size()}}, mean, 0.0, 1e-15));

    std::vector<double> l1(bank.size() * times.size());
    parallel_for(bank.size(), [&](std::size_t i) {
        const double base = lp_norm(bank[i].evaluator(), 1.0);
        for (std::size_t b = 0; b < times.size(); ++b) {
            l1[i * times.size() + b] = lp_norm(semigroup(bank[i], times[b]).evaluator(), 1.0) / base;
        }
    });
    for (std::size_t b = 0; b < times.size(); ++b) {
        double worst = 0;
        for (std::size_t i = 0; i < bank.size(); ++i) worst = std::max(worst, l1[i * times.size() + b]);
        r.add(make_case("l1_contraction", {{"t", times[b]}}, worst, 1.0, 1e-9));
    }

    const double eps = cfg.eps_maximal;
    for (std::size_t i = 0; i < std::min<std::size_t>(bank.size(), 10); ++i) {
        const auto& f = bank[i];
        for (double x : {-2.5, -1.0, 0.0, 0.3, 1.7}) {
            const double mf = maximal_function(f, x, eps);
            const double m = admissibility(x);
            const double lo = std::abs(semigroup(f, eps * m * m).eval(x));
            const double hi = std::abs(semigroup(f, 1.0).eval(x));
            double envelope = 0;
            for (int k = 0; k <= f.degree(); ++k) envelope += std::abs(f.coefficient(k) * hermite_orthonormal(k, x, f.context()));
            const Json in{{"f", i}, {"x", x}, {"eps", eps}};
            r.add(make_case("maximal_left_end", in, lo, mf, 1e-12 * mf));
            r.add(make_case("maximal_right_end", in, hi, mf, 1e-12 * mf));
            r.add(make_case("maximal_envelope", in, mf, envelope, 1e-12 * envelope));
        }
    }
    const double h1 = maximal_function(HermiteExpansion::basis(1), 1.0, 0.01);
    r.add(make_case("maximal_h1", {{"x", 1.0}, {"eps", 0.01}},
                    std::abs(h1 - std::exp(-0.01) * std::sqrt(2.0)), 0.0, 1e-9));
    return r;
}

SuiteReport verify_kernel(const VerifyConfig& cfg) {
    auto r = start("kernel", cfg);
    const std::vector<double> ts{0.01, 0.1, 0.5, 1.0, 3.0};
    const std::vector<double> xs{0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0};
    const auto one = TruncatedPolynomial::whole(HermiteExpansion::basis(0));
    for (double t : ts) {
        double worst = 0;
        for (double x : xs) worst = std::max(worst, std::abs(kernel_apply(one, t, x) - 1.0));
        r.add(make_case("conservativity", {{"t", t}}, worst, 0.0, 1e-10));
    }
    double asym = 0;
    bool positive = true;
    for (double t : ts) {
        for (double x : xs) {
            for (double y : xs) {
                asym = std::max(asym, std::abs(log_mehler_kernel(t, x, y) - log_mehler_kernel(t, y, x)));
                positive = positive && std::isfinite(log_mehler_kernel(t, x, y));
            }
        }
    }
    r.add(make_case("symmetry", {{"points", ts.size() * xs.size() * xs.size()}}, asym, 0.0, 0.0));
    r.add(make_case("positivity", Json::object(), positive ? 0.0 : 1.0, 0.0, 0.0));

    Rng rng(cfg.seed);
    double worst = 0;
    Json at;
    for (int i = 0; i < 100; ++i) {
        const double t = 0.05 + 1.95 * rng.uniform();
        const double x = -2.0 + 4.0 * rng.uniform();
        const double y = -2.0 + 4.0 * rng.uniform();
        const double h = 1e-5 * t;
        const double fd = (mehler_kernel(t + h, x, y) - mehler_kernel(t - h, x, y)) / (2.0 * h);
        const double d = mehler_kernel_dt(t, x, y);
        const double err = std::abs(d - fd) / std::max(std::abs(d), 1e-300);
        if (err > worst) {
            worst = err;
            at = {{"t", t}, {"x", x}, {"y", y}};
        }
    }
    r.add(make_case("derivative", {{"samples", 100}, {"worst_at", at}}, worst, 1e-6, 0.0));
    return r;
}

SuiteReport verify_hypercontractivity(const VerifyConfig& cfg) {
    HypercontractivityConfig h;
    h.seed = cfg.seed;
    h.trials = cfg.trials;
    h.max_degree = cfg.deg_max;
    h.p_list = cfg.p_list;
    auto r = hypercontractivity_suite(h);
    attach(r, cfg);
    return r;
}

SuiteReport verify_decomposition(const VerifyConfig& cfg) {
    auto r = start("decomposition", cfg);
    for (double tau : cfg.tau_list) {
        const auto ip = make_imaginary_power(tau);
        for (int k = 1; k <= 8; ++k) {
            const cd want = std::exp(cd(0, tau * std::log(double(k))));
            r.add(make_case("imaginary_power_closed_form", {{"tau", tau}, {"k", k}},
                            std::abs(phi_lambda(ip, k) - want), 0.0, 1e-8));
        }
    }
    const auto cst = make_constant_phi();
    for (int k = 1; k <= 8; ++k) {
        r.add(make_case("constant_closed_form", {{"k", k}}, std::abs(phi_lambda(cst, k) - 1.0), 0.0, 1e-8));
    }

    struct Item {
        std::size_t f;
        PhiSpec phi;
        double tau;
    };
    const auto bank = fixed_bank();
    std::vector<Item> items;
    for (std::size_t f = 0; f < bank.size(); ++f) {
        items.push_back({f, cst, 0.0});
        for (double tau : cfg.tau_list) {
            items.push_back({f, make_imaginary_power(tau), tau});
            items.push_back({f, make_damped_imaginary(tau), tau});
        }
    }
    std::vector<double> res(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        res[i] = reconstruction_residual(bank[items[i].f], items[i].phi, cfg.params, kResidualGrid);
    });
    const double c = scaling_constant(cfg.params.delta, cfg.params.delta_prime);
    r.fit("scaling_constant", c);
    for (std::size_t i = 0; i < items.size(); ++i) {
        r.add(make_case("reconstruction", {{"f", items[i].f}, {"phi", items[i].phi.label}, {"tau", items[i].tau}},
                        res[i], 1e-5, 0.0));
    }
    return r;
}

SuiteReport verify_tent(const VerifyConfig& cfg) {
    auto r = start("tent", cfg);
    using H = HermiteExpansion;
    const std::vector<H> fs{H::basis(1), H::basis(2)};
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const UField u = build_u(fs[i], cfg.params.delta);
        const double lhs = std::pow(tent_norm(u, 2.0, 1e-6), 2);
        const double rhs = region_integral(u, 1e-8);
        r.add(make_case("fubini", {{"f", i == 0 ? "h_1" : "h_2"}, {"tent_norm_sq", lhs}, {"region", rhs}},
                        std::abs(lhs - rhs) / rhs, 1e-4, 0.0));
    }

    const std::vector<H> af{H::basis(1), H::basis(2), H::basis(1) + H::basis(3)};
    const std::vector<double> xs{0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0};
    std::vector<ApertureComparison> ac(af.size() * xs.size());
    parallel_for(ac.size(), [&](std::size_t i) {
        ac[i] = aperture_compare(af[i / xs.size()], cfg.params.delta, xs[i % xs.size()]);
    });
    double c = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isfinite(ac[i].ratio)) c = std::max(c, ac[i].ratio);
    }
    r.fit("aperture_C", c);
    for (std::size_t i = 0; i < ac.size(); ++i) {
        const Json in{{"f", i / xs.size()}, {"x", xs[i % xs.size()]}, {"left", ac[i].left}, {"right", ac[i].right}};
        r.add(make_case("aperture_finite", in, std::isfinite(ac[i].ratio) ? 0.0 : 1.0, 0.0, 0.0));
        r.add(make_case("aperture_fitted", in, ac[i].ratio, c, 0.0, false));
    }
    return r;
}

std::vector<SuiteReport> verify_annuli(const VerifyConfig& cfg) {
    cfg.params.validate();
    AnnuliConfig a;
    a.params = cfg.params;
    a.p = cfg.p_list.empty() ? 1.5 : cfg.p_list.front();
    a.f_bank = mixed_bank(cfg, 2, false);
    a.seed = cfg.seed;
    auto on = ondiagonal_suite(a);
    auto off = offdiagonal_suite(a);
    attach(on, cfg);
    attach(off, cfg);
    return {std::move(on), std::move(off)};
}

SuiteReport verify_spectral_gap(const VerifyConfig& cfg) {
    cfg.params.validate();
    SpectralGapConfig s;
    s.p_list = cfg.p_list;
    s.f_bank = random_bank(cfg.seed, 200, cfg.deg_max, true, context_for(cfg));
    auto r = spectral_gap_suite(s);
    attach(r, cfg);
    return r;
}

SuiteReport verify_pi3(const VerifyConfig& cfg) {
    cfg.params.validate();
    Pi3Config p;
    p.params = cfg.params;
    p.phi = make_damped_imaginary(cfg.tau_list.empty() ? 1.0 : cfg.tau_list.front());
    p.f_bank = mixed_bank(cfg, 2, true);
    auto r = pi3_pointwise_suite(p);
    attach(r, cfg);
    return r;
}

}  // namespace ouha
