#include "ouha/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ouha/error.hpp"
#include "ouha/harness.hpp"

namespace ouha::cli {
namespace {

const std::vector<std::string> kSuites{"semigroup",     "kernel", "hypercontractivity",
                                       "decomposition", "tent",   "annuli",
                                       "spectral-gap",  "pi3"};

std::vector<SuiteReport> run_suite(const std::string& name, const VerifyConfig& cfg) {
    if (name == "semigroup") return {verify_semigroup(cfg)};
    if (name == "kernel") return {verify_kernel(cfg)};
    if (name == "hypercontractivity") return {verify_hypercontractivity(cfg)};
    if (name == "decomposition") return {verify_decomposition(cfg)};
    if (name == "tent") return {verify_tent(cfg)};
    if (name == "annuli") return verify_annuli(cfg);
    if (name == "spectral-gap") return {verify_spectral_gap(cfg)};
    if (name == "pi3") return {verify_pi3(cfg)};
    throw DomainError("unknown suite: " + name);
}

void validate(const VerifyConfig& cfg) {
    cfg.params.validate();
    if (cfg.p_list.empty()) throw DomainError("--p needs at least one value");
    for (double p : cfg.p_list) {
        if (!(p > 1 && p <= 2)) throw DomainError("--p values must lie in (1, 2]");
    }
    if (cfg.tau_list.empty()) throw DomainError("--tau needs at least one value");
    for (double t : cfg.tau_list) {
        if (!std::isfinite(t)) throw DomainError("--tau values must be finite");
    }
    if (!(cfg.eps_maximal > 0 && cfg.eps_maximal <= 1)) throw DomainError("--eps-maximal must lie in (0, 1]");
    if (cfg.deg_max < 1 || cfg.deg_max > 32) throw DomainError("--deg-max must lie in [1, 32]");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    VerifyConfig cfg;
    std::string out_path, format = "json";

    CLI::App app{"Numerical verification of Ornstein-Uhlenbeck multiplier estimates", "ouha"};
    app.require_subcommand(1);
    app.add_option("--delta", cfg.params.delta, "Damping of the u-field")->capture_default_str();
    app.add_option("--delta-prime", cfg.params.delta_prime, "Damping of the outer operator")->capture_default_str();
    app.add_option("--kappa", cfg.params.kappa, "Admissibility scale (a power of 4)")->capture_default_str();
    app.add_option("--tau", cfg.tau_list, "Imaginary-power exponents")->delimiter(',')->capture_default_str();
    app.add_option("--p", cfg.p_list, "Exponents p in (1, 2]")->delimiter(',')->capture_default_str();
    app.add_option("--eps-maximal", cfg.eps_maximal, "Lower time factor of the maximal function")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--tol", cfg.params.t_tol, "Relative tolerance of the dt/t integrals")->capture_default_str();
    app.add_option("--deg-max", cfg.deg_max, "Maximal degree of random polynomials")->capture_default_str();
    app.add_option("--out", out_path, "Output file (default: standard output)");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    std::vector<std::string> selected;
    auto* verify = app.add_subcommand("verify", "Run one verification suite")->fallthrough();
    verify->require_subcommand(1);
    for (const auto& s : kSuites) {
        verify->add_subcommand(s, "Suite " + s)->fallthrough()->callback([&selected, s] { selected = {s}; });
    }
    auto* report = app.add_subcommand("report", "Run several suites")->fallthrough();
    report->require_subcommand(1);
    report->add_subcommand("all", "Every suite in order")->fallthrough()->callback([&selected] { selected = kSuites; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        validate(cfg);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }
    for (const auto& flag : cfg.params.constraint_flags()) {
        err << "warning: parameters violate the proof-side constraint " << flag << "\n";
    }

    std::vector<SuiteReport> reports;
    try {
        for (const auto& s : selected) {
            for (auto& r : run_suite(s, cfg)) reports.push_back(std::move(r));
        }
    } catch (const ConvergenceError& e) {
        err << "error: numerical non-convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternal;
    }

    const std::string text = format == "csv" ? to_csv(reports) : to_json_text(reports, selected.size() > 1);
    if (out_path.empty()) {
        out << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << text;
        if (!f) {
            err << "error: cannot write " << out_path << "\n";
            return kUsage;
        }
    }
    int failures = 0;
    for (const auto& r : reports) {
        failures += r.fail_count();
        err << r.suite << ": " << r.pass_count() << " passed, " << r.fail_count() << " failed\n";
    }
    return failures == 0 ? kPass : kAssertionFailure;
}

}  // namespace ouha::cli
