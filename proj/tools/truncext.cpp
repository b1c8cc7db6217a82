#include <cstdint>
#include <exception>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "truncext/k_select.hpp"
#include "truncext/lynden_bell.hpp"
#include "truncext/sample.hpp"
#include "truncext/simulation.hpp"
#include "truncext/tail_estimation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

constexpr std::size_t kMaxKRetries = 10;

truncext::TruncatedSample load_sample(const std::string& path) {
    return truncext::TruncatedSample::from_pairs(truncext::read_pairs_csv(path));
}

// "auto" or a positive integer.
std::optional<std::size_t> parse_k_spec(const std::string& spec) {
    if (spec == "auto") {
        return std::nullopt;
    }
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(spec, &pos);
    if (pos != spec.size() || v < 2) {
        throw std::invalid_argument("--k must be 'auto' or an integer >= 2");
    }
    return static_cast<std::size_t>(v);
}

std::size_t choose_k(const truncext::TruncatedSample& sample,
                     const std::optional<std::size_t>& k_fixed, double rt_beta) {
    if (k_fixed) {
        if (*k_fixed >= sample.size()) {
            throw std::invalid_argument("--k must be smaller than the sample size");
        }
        return *k_fixed;
    }
    return truncext::reiss_thomas_k(sample, rt_beta).k_star;
}

nlohmann::json report_to_json(const truncext::InferenceReport& r) {
    return nlohmann::json{
        {"k", r.estimate.k},
        {"gamma_hat", r.estimate.gamma_hat},
        {"gamma2_hat", r.estimate.gamma2_hat},
        {"gamma1_hat", r.estimate.gamma1_hat},
        {"tau_hat", r.tau_hat},
        {"tau2_hat", r.tau2_hat},
        {"lambda_hat", r.lambda_hat},
        {"lambda2_hat", r.lambda2_hat},
        {"c_hat", r.c_hat},
        {"c2_hat", r.c2_hat},
        {"delta_hat", r.delta_hat},
        {"delta_std_error", r.delta_std_error},
        {"mu_hat", r.mu_hat},
        {"sigma2_hat", r.sigma2_hat},
        {"ci",
         {{"lcb", r.ci.lcb}, {"ucb", r.ci.ucb}, {"level", r.ci.level}}}};
}

int run_simulate(const std::string& mode, const truncext::StudyConfig& config,
                 const std::string& format) {
    const truncext::StudyResult result = (mode == "ci")
                                             ? truncext::run_ci_study(config)
                                             : truncext::run_point_study(config);
    if (format == "csv") {
        std::cout << truncext::format_csv(result);
    } else if (format == "json") {
        std::cout << truncext::format_json(result);
    } else {
        std::cout << truncext::format_markdown(result);
    }
    return kExitOk;
}

int run_estimate(const std::string& input, const std::string& k_spec, double level,
                 double rt_beta, std::optional<double> tau_fixed, std::uint64_t seed,
                 std::size_t mc_points) {
    const truncext::TruncatedSample sample = load_sample(input);
    std::size_t k = choose_k(sample, parse_k_spec(k_spec), rt_beta);
    for (std::size_t attempt = 0; attempt <= kMaxKRetries && k >= 2; ++attempt, --k) {
        truncext::TailIndexEstimate est;
        try {
            est = truncext::truncated_tail_index(sample, k);
        } catch (const truncext::degenerate_fraction_error&) {
            continue;
        }
        nlohmann::json doc;
        std::string ci_text = "unavailable";
        try {
            const truncext::InferenceReport report = truncext::confidence_interval(
                sample, k, level, mc_points, truncext::RngSeed{seed}, tau_fixed);
            doc = report_to_json(report);
            std::ostringstream ci;
            ci << std::fixed << std::setprecision(4) << '[' << report.ci.lcb << ", "
               << report.ci.ucb << ']';
            ci_text = ci.str();
        } catch (const std::exception& e) {
            // Plug-in pipeline unavailable (e.g. sample too small for the
            // second-order estimate); report the point estimate alone.
            std::cerr << "warning: confidence interval unavailable: " << e.what()
                      << '\n';
            doc = nlohmann::json{{"k", est.k},
                                 {"gamma_hat", est.gamma_hat},
                                 {"gamma2_hat", est.gamma2_hat},
                                 {"gamma1_hat", est.gamma1_hat},
                                 {"ci", nullptr}};
        }
        std::cout << doc.dump(2) << '\n';
        std::cerr << std::fixed << std::setprecision(4)
                  << "n          " << sample.size() << '\n'
                  << "k          " << est.k << '\n'
                  << "gamma1_hat " << est.gamma1_hat << '\n'
                  << "gamma_hat  " << est.gamma_hat << '\n'
                  << "gamma2_hat " << est.gamma2_hat << '\n'
                  << (level * 100) << "% CI    " << ci_text << '\n';
        return kExitOk;
    }
    std::cerr << "estimation degenerate at every attempted fraction\n";
    return kExitDegenerate;
}

int run_premium(const std::string& input, double retention, const std::string& k_spec,
                double level, double rt_beta, std::uint64_t seed,
                std::size_t mc_points, bool with_ci) {
    const truncext::TruncatedSample sample = load_sample(input);
    const std::size_t k = choose_k(sample, parse_k_spec(k_spec), rt_beta);
    const truncext::TailIndexEstimate est = truncext::truncated_tail_index(sample, k);
    if (!(est.gamma1_hat > 0.0 && est.gamma1_hat < 1.0)) {
        std::cerr << "gamma1_hat = " << est.gamma1_hat
                  << " lies outside (0, 1): the premium (mean excess) is not finite\n";
        return kExitDegenerate;
    }
    const double pivot =
        sample.order_stat(truncext::Margin::X, sample.size() - k);
    if (retention < pivot) {
        std::cerr << "retention " << retention
                  << " lies below the extrapolation pivot X_{n-k:n} = " << pivot
                  << '\n';
        return kExitInput;
    }

    truncext::PremiumEstimate premium;
    if (with_ci && est.gamma2_hat > est.gamma1_hat) {
        truncext::PremiumCiOptions opts;
        opts.level = level;
        opts.mc_points = mc_points;
        opts.seed = truncext::RngSeed{seed};
        premium = truncext::premium_confidence_interval(
            sample, k, retention, est.gamma1_hat, est.gamma2_hat, opts);
    } else {
        if (with_ci) {
            std::cerr << "warning: gamma2_hat <= gamma1_hat, interval unavailable\n";
        }
        premium = truncext::premium_estimate(sample, k, retention, est.gamma1_hat);
    }

    nlohmann::json doc{{"u", premium.u},
                       {"k", premium.k},
                       {"gamma1_hat", est.gamma1_hat},
                       {"gamma2_hat", est.gamma2_hat},
                       {"pi_hat", premium.pi_hat},
                       {"lb_survival_at_pivot", premium.lb_survival_at_pivot},
                       {"survival_mass_exhausted", premium.survival_mass_exhausted}};
    if (premium.ci) {
        doc["ci"] = {{"lcb", premium.ci->lcb},
                     {"ucb", premium.ci->ucb},
                     {"level", premium.ci->level}};
    }
    std::cout << doc.dump(2) << '\n';
    std::cerr << std::fixed << std::setprecision(6) << "pi_hat(" << retention
              << ") = " << premium.pi_hat << " at k = " << premium.k << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail-index and reinsurance-premium estimation for randomly "
                 "right-truncated heavy-tailed data"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run the Monte-Carlo study");
    simulate->require_subcommand(1);
    truncext::StudyConfig config;
    std::uint64_t sim_seed = 0;
    std::string format = "md";
    auto add_sim_options = [&](CLI::App* cmd) {
        cmd->add_option("--p", config.p_values, "Truncation probabilities")
            ->expected(-1);
        cmd->add_option("--gamma1", config.gamma1_values, "True tail indices")
            ->expected(-1);
        cmd->add_option("--N", config.N_values, "Latent sample sizes")->expected(-1);
        cmd->add_option("--replicates", config.replicates, "Replicates per cell");
        cmd->add_option("--delta", config.delta, "Burr shape parameter");
        cmd->add_option("--level", config.level, "Confidence level");
        cmd->add_option("--seed", sim_seed, "Master seed");
        cmd->add_option("--threads", config.threads,
                        "Worker threads (0 = hardware)");
        cmd->add_option("--mc-points", config.ci_mc_points,
                        "Monte-Carlo points per interval");
        cmd->add_option("--rt-beta", config.rt_beta,
                        "Fraction-selection tuning exponent");
        cmd->add_option("--tau-fixed", config.tau_fixed,
                        "Fixed second-order parameter");
        cmd->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"csv", "md", "json"}));
        cmd->add_option("--dump-replicates", config.dump_dir,
                        "Directory for per-replicate CSV dumps");
    };
    add_sim_options(simulate->add_subcommand("point", "Point-estimation study"));
    add_sim_options(simulate->add_subcommand("ci", "Confidence-interval study"));

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Estimate from a CSV sample");
    std::string est_input;
    std::string est_k = "auto";
    double est_level = 0.95;
    double est_beta = 0.3;
    std::optional<double> est_tau;
    std::uint64_t est_seed = 0;
    std::size_t est_mc = 100000;
    estimate->add_option("--input", est_input, "CSV file with header x,y")
        ->required();
    estimate->add_option("--k", est_k, "Sample fraction: auto or integer");
    estimate->add_option("--level", est_level, "Confidence level");
    estimate->add_option("--rt-beta", est_beta, "Fraction-selection exponent");
    estimate->add_option("--tau-fixed", est_tau, "Fixed second-order parameter");
    estimate->add_option("--seed", est_seed, "Monte-Carlo seed");
    estimate->add_option("--mc-points", est_mc, "Monte-Carlo points");

    // premium
    auto* premium = app.add_subcommand("premium", "Excess-of-loss premium from CSV");
    std::string prem_input;
    double prem_u = 0.0;
    std::string prem_k = "auto";
    double prem_level = 0.95;
    double prem_beta = 0.3;
    std::uint64_t prem_seed = 0;
    std::size_t prem_mc = 100000;
    bool prem_no_ci = false;
    premium->add_option("--input", prem_input, "CSV file with header x,y")
        ->required();
    premium->add_option("--retention", prem_u, "Retention level u")->required();
    premium->add_option("--k", prem_k, "Sample fraction: auto or integer");
    premium->add_option("--level", prem_level, "Confidence level");
    premium->add_option("--rt-beta", prem_beta, "Fraction-selection exponent");
    premium->add_option("--seed", prem_seed, "Monte-Carlo seed");
    premium->add_option("--mc-points", prem_mc, "Monte-Carlo points");
    premium->add_flag("--no-ci", prem_no_ci, "Skip the confidence interval");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            config.seed = truncext::RngSeed{sim_seed};
            const std::string mode =
                simulate->get_subcommands().front()->get_name();
            return run_simulate(mode, config, format);
        }
        if (estimate->parsed()) {
            return run_estimate(est_input, est_k, est_level, est_beta, est_tau,
                                est_seed, est_mc);
        }
        return run_premium(prem_input, prem_u, prem_k, prem_level, prem_beta,
                           prem_seed, prem_mc, !prem_no_ci);
    } catch (const truncext::degenerate_fraction_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const truncext::negative_variance_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const std::runtime_error& e) {
        // Parse failures, unreadable files, degenerate-selection exhaustion.
        const std::string what = e.what();
        std::cerr << "error: " << what << '\n';
        return what.find("degenerate") != std::string::npos ? kExitDegenerate
                                                            : kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
}
