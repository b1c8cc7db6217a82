#include "truncext/simulation.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "truncext/k_select.hpp"
#include "truncext/model.hpp"
#include "truncext/sample.hpp"
#include "truncext/tail_estimation.hpp"

namespace truncext {

namespace {

struct ReplicateResult {
    bool degenerate = true;
    std::size_t n = 0;
    std::size_t k = 0;
    double gamma1_hat = 0.0;
    double lcb = 0.0;
    double ucb = 0.0;
};

constexpr std::size_t kMaxKRetries = 10;

ReplicateResult run_replicate(const BurrTruncationModel& model, std::size_t N,
                              RngSeed rep_seed, bool with_ci,
                              const StudyConfig& config) {
    ReplicateResult out;
    const TruncatedSample sample =
        sample_truncated_pairs(model, N, derive_stream(rep_seed, 0));
    out.n = sample.size();
    if (sample.size() < 20) {
        return out;
    }
    std::size_t k;
    try {
        k = reiss_thomas_k(sample, config.rt_beta).k_star;
    } catch (const std::runtime_error&) {
        return out;
    }
    // Fall back to the next smaller fraction when the estimator degenerates.
    for (std::size_t attempt = 0; attempt <= kMaxKRetries && k >= 2; ++attempt, --k) {
        try {
            if (with_ci) {
                const InferenceReport report = confidence_interval(
                    sample, k, config.level, config.ci_mc_points,
                    derive_stream(rep_seed, 1), config.tau_fixed);
                out.gamma1_hat = report.estimate.gamma1_hat;
                out.lcb = report.ci.lcb;
                out.ucb = report.ci.ucb;
            } else {
                out.gamma1_hat = truncated_tail_index(sample, k).gamma1_hat;
            }
            out.k = k;
            out.degenerate = false;
            return out;
        } catch (const degenerate_fraction_error&) {
            continue;
        } catch (const negative_variance_error&) {
            return out;
        } catch (const std::domain_error&) {
            return out;
        }
    }
    return out;
}

void dump_cell(const std::string& dir, double p, double gamma1, std::size_t N,
               bool with_ci, const std::vector<ReplicateResult>& reps) {
    std::filesystem::create_directories(dir);
    std::ostringstream name;
    name << "cell_p" << p << "_g" << gamma1 << "_N" << N << ".csv";
    std::ofstream out(std::filesystem::path(dir) / name.str());
    if (!out) {
        throw std::runtime_error("simulation: cannot write replicate dump in " + dir);
    }
    out << "replicate,degenerate,n,k,gamma1_hat";
    if (with_ci) {
        out << ",lcb,ucb";
    }
    out << '\n';
    out << std::setprecision(17);
    for (std::size_t r = 0; r < reps.size(); ++r) {
        const auto& rep = reps[r];
        out << r << ',' << (rep.degenerate ? 1 : 0) << ',' << rep.n << ',' << rep.k
            << ',' << rep.gamma1_hat;
        if (with_ci) {
            out << ',' << rep.lcb << ',' << rep.ucb;
        }
        out << '\n';
    }
}

StudyResult run_study(const StudyConfig& config, bool with_ci) {
    if (config.replicates == 0) {
        throw std::invalid_argument("run_study: replicates must be positive");
    }
    if (config.p_values.empty() || config.gamma1_values.empty() ||
        config.N_values.empty()) {
        throw std::invalid_argument("run_study: empty parameter grid");
    }
    StudyResult result;
    result.with_ci = with_ci;

    std::size_t threads = config.threads;
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }

    std::size_t cell_id = 0;
    for (double gamma1 : config.gamma1_values) {
        for (double p : config.p_values) {
            for (std::size_t N : config.N_values) {
                const BurrTruncationModel model =
                    BurrTruncationModel::from_truncation_probability(p, gamma1,
                                                                     config.delta);
                std::vector<ReplicateResult> reps(config.replicates);
                auto worker_body = [&](std::atomic<std::size_t>& next) {
                    for (std::size_t r = next.fetch_add(1); r < config.replicates;
                         r = next.fetch_add(1)) {
                        reps[r] = run_replicate(
                            model, N, derive_stream(config.seed, cell_id, r),
                            with_ci, config);
                    }
                };
                std::atomic<std::size_t> next{0};
                if (threads == 1) {
                    worker_body(next);
                } else {
                    std::vector<std::thread> pool;
                    pool.reserve(threads);
                    for (std::size_t t = 0; t < threads; ++t) {
                        pool.emplace_back([&] { worker_body(next); });
                    }
                    for (auto& th : pool) {
                        th.join();
                    }
                }

                // Reduce in replicate-index order.
                SimulationRow row;
                row.p = p;
                row.gamma1 = gamma1;
                row.N = N;
                double se_sum = 0.0;
                double cover = 0.0;
                for (const auto& rep : reps) {
                    if (rep.degenerate) {
                        ++row.degenerate;
                        continue;
                    }
                    ++row.completed;
                    row.mean_n += static_cast<double>(rep.n);
                    row.mean_k += static_cast<double>(rep.k);
                    row.mean_gamma1_hat += rep.gamma1_hat;
                    se_sum += (rep.gamma1_hat - gamma1) * (rep.gamma1_hat - gamma1);
                    if (with_ci) {
                        row.mean_lcb += rep.lcb;
                        row.mean_ucb += rep.ucb;
                        row.mean_length += rep.ucb - rep.lcb;
                        if (rep.lcb <= gamma1 && gamma1 <= rep.ucb) {
                            cover += 1.0;
                        }
                    }
                }
                row.incomplete = 2 * row.degenerate > config.replicates;
                if (row.completed > 0) {
                    const double m = static_cast<double>(row.completed);
                    row.mean_n /= m;
                    row.mean_k /= m;
                    row.mean_gamma1_hat /= m;
                    row.bias = row.mean_gamma1_hat - gamma1;
                    row.rmse = std::sqrt(se_sum / m);
                    if (with_ci) {
                        row.mean_lcb /= m;
                        row.mean_ucb /= m;
                        row.mean_length /= m;
                        row.coverage = cover / m;
                    }
                }
                result.rows.push_back(row);

                if (!config.dump_dir.empty()) {
                    dump_cell(config.dump_dir, p, gamma1, N, with_ci, reps);
                }
                ++cell_id;
            }
        }
    }
    return result;
}

} // namespace

StudyResult run_point_study(const StudyConfig& config) {
    return run_study(config, false);
}

StudyResult run_ci_study(const StudyConfig& config) {
    return run_study(config, true);
}

std::string format_csv(const StudyResult& result) {
    std::ostringstream out;
    out << "p,gamma1,N,mean_n,mean_k,mean_gamma1_hat,bias,rmse,"
           "mean_lcb,mean_ucb,coverage,mean_length\n";
    out << std::setprecision(10);
    for (const auto& r : result.rows) {
        out << r.p << ',' << r.gamma1 << ',' << r.N << ',' << r.mean_n << ','
            << r.mean_k << ',' << r.mean_gamma1_hat << ',' << r.bias << ','
            << r.rmse << ',' << r.mean_lcb << ',' << r.mean_ucb << ','
            << r.coverage << ',' << r.mean_length << '\n';
    }
    return out.str();
}

std::string format_markdown(const StudyResult& result) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3);
    if (result.with_ci) {
        out << "| p | gamma1 | N | n | k | lcb | ucb | covpr | length |\n";
        out << "|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& r : result.rows) {
            out << "| " << r.p << " | " << r.gamma1 << " | " << r.N << " | "
                << std::setprecision(1) << r.mean_n << " | " << r.mean_k
                << std::setprecision(3) << " | " << r.mean_lcb << " | " << r.mean_ucb
                << " | " << std::setprecision(2) << r.coverage
                << std::setprecision(3) << " | " << r.mean_length << " |"
                << (r.incomplete ? " (incomplete)" : "") << '\n';
        }
    } else {
        out << "| p | gamma1 | N | n | k | gamma1_hat | bias | rmse |\n";
        out << "|---|---|---|---|---|---|---|---|\n";
        for (const auto& r : result.rows) {
            out << "| " << r.p << " | " << r.gamma1 << " | " << r.N << " | "
                << std::setprecision(1) << r.mean_n << " | " << r.mean_k
                << std::setprecision(3) << " | " << r.mean_gamma1_hat << " | "
                << r.bias << " | " << r.rmse << " |"
                << (r.incomplete ? " (incomplete)" : "") << '\n';
        }
    }
    return out.str();
}

std::string format_json(const StudyResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.rows) {
        nlohmann::json row{{"p", r.p},
                           {"gamma1", r.gamma1},
                           {"N", r.N},
                           {"mean_n", r.mean_n},
                           {"mean_k", r.mean_k},
                           {"mean_gamma1_hat", r.mean_gamma1_hat},
                           {"bias", r.bias},
                           {"rmse", r.rmse},
                           {"completed", r.completed},
                           {"degenerate", r.degenerate},
                           {"incomplete", r.incomplete}};
        if (result.with_ci) {
            row["mean_lcb"] = r.mean_lcb;
            row["mean_ucb"] = r.mean_ucb;
            row["coverage"] = r.coverage;
            row["mean_length"] = r.mean_length;
        }
        rows.push_back(std::move(row));
    }
    nlohmann::json doc{{"study", result.with_ci ? "ci" : "point"}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

} // namespace truncext
