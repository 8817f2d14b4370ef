#include "experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ctah/errors.hpp"
#include "ctah/forecaster.hpp"
#include "ctah/math_util.hpp"

namespace ctah {

namespace {

constexpr double kSlackPerRound = 1e-6;
constexpr std::uint64_t kSampleSeedOffset = 0x53414D50; // "SAMP"

double bound_radius(double variance_cum) {
    return std::sqrt(variance_cum * kLn2) + (2.0 / 3.0) * kLn2 + 1.0;
}

} // namespace

AlgorithmSpec parse_algorithm(const std::string& text) {
    AlgorithmSpec spec;
    if (text == "ctah") {
        spec.kind = AlgorithmKind::ctah;
        return spec;
    }
    if (text.rfind("ftl:", 0) == 0) {
        spec.kind = AlgorithmKind::follow_leader;
        try {
            spec.leader_order = std::stoi(text.substr(4));
        } catch (const std::exception&) {
            throw ConfigError("bad leader order in algorithm '" + text + "'");
        }
        if (spec.leader_order < 0) throw ConfigError("leader order must be nonnegative");
        return spec;
    }
    if (text == "fixed-eta") { // default rate 1
        spec.kind = AlgorithmKind::fixed_eta;
        return spec;
    }
    if (text.rfind("fixed-eta:", 0) == 0) {
        spec.kind = AlgorithmKind::fixed_eta;
        try {
            spec.eta = std::stod(text.substr(10));
        } catch (const std::exception&) {
            throw ConfigError("bad learning rate in algorithm '" + text + "'");
        }
        if (!(spec.eta > 0.0) || std::isinf(spec.eta)) {
            throw ConfigError("fixed learning rate must be finite positive");
        }
        return spec;
    }
    throw ConfigError("unknown algorithm '" + text + "' (expected ctah, ftl:<h> or fixed-eta:<eta>)");
}

std::string algorithm_name(const AlgorithmSpec& spec) {
    switch (spec.kind) {
        case AlgorithmKind::ctah: return "ctah";
        case AlgorithmKind::follow_leader: return "ftl:" + std::to_string(spec.leader_order);
        case AlgorithmKind::fixed_eta: return "fixed-eta:" + format_double(spec.eta);
    }
    return "?";
}

ProcessSelector parse_process(const std::string& text) {
    if (text == "xor3") return {ProcessKind::xor3, {}};
    if (text == "iid07") return {ProcessKind::iid07, {}};
    if (text == "adversary") return {ProcessKind::adversary, {}};
    if (text.rfind("file:", 0) == 0) return {ProcessKind::file, text.substr(5)};
    throw ConfigError("unknown process '" + text + "' (expected xor3, iid07, file:<path> or adversary)");
}

std::string process_name(const ProcessSelector& sel) {
    switch (sel.kind) {
        case ProcessKind::xor3: return "xor3";
        case ProcessKind::iid07: return "iid07";
        case ProcessKind::adversary: return "adversary";
        case ProcessKind::file: return "file:" + sel.path.string();
    }
    return "?";
}

PriorSelector parse_prior(const std::string& text) {
    if (text == "uniform") return {PriorKind::uniform, {}};
    if (text == "prop") return {PriorKind::proportional, {}};
    if (text.rfind("table:", 0) == 0) return {PriorKind::custom, text.substr(6)};
    throw ConfigError("unknown prior '" + text + "' (expected uniform, prop or table:<path>)");
}

std::string prior_name(const PriorSelector& sel) {
    switch (sel.kind) {
        case PriorKind::uniform: return "uniform";
        case PriorKind::proportional: return "prop";
        case PriorKind::custom: return "table:" + sel.table_path.string();
    }
    return "?";
}

PriorSpec build_prior(const PriorSelector& sel, int depth) {
    if (sel.kind != PriorKind::custom) return make_prior(sel.kind, depth);

    std::ifstream in(sel.table_path);
    if (!in) throw IoError("cannot open prior table: " + sel.table_path.string());
    std::vector<double> g;
    double value;
    while (in >> value) g.push_back(value);
    if (!in.eof()) throw IoError("malformed prior table: " + sel.table_path.string());
    if (static_cast<int>(g.size()) != depth + 1) {
        throw ConfigError("prior table has " + std::to_string(g.size()) + " entries, expected " +
                          std::to_string(depth + 1));
    }
    return make_custom_prior(g);
}

void validate(const ExperimentConfig& config) {
    if (config.depth < 0 || config.depth > ContextWindow::kMaxDepth) {
        throw ConfigError("depth out of range: " + std::to_string(config.depth));
    }
    const int algo_depth = config.effective_algo_depth();
    if (algo_depth < 0 || algo_depth > config.depth) {
        throw ConfigError("forecaster depth must lie in [0, depth]");
    }
    if (config.horizon < 1) throw ConfigError("horizon must be at least 1");
    if (config.repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (config.algorithm.kind == AlgorithmKind::follow_leader &&
        config.algorithm.leader_order > algo_depth) {
        throw ConfigError("leader order exceeds forecaster depth");
    }
    if (config.process.kind == ProcessKind::xor3 && config.depth < 3) {
        throw ConfigError("xor3 needs depth >= 3");
    }
}

namespace {

struct SharedInputs {
    std::optional<PriorSpec> prior;
    std::optional<StochasticSpec> process_spec;
    std::vector<std::pair<ContextWindow, Symbol>> file_rounds;
};

SharedInputs prepare_inputs(const ExperimentConfig& config) {
    SharedInputs shared;
    if (config.algorithm.kind != AlgorithmKind::follow_leader) {
        shared.prior = build_prior(config.prior, config.effective_algo_depth());
    }
    switch (config.process.kind) {
        case ProcessKind::xor3:
            shared.process_spec = xor3_spec(config.depth);
            break;
        case ProcessKind::iid07:
            shared.process_spec = iid07_spec(config.depth);
            break;
        case ProcessKind::file: {
            shared.file_rounds = read_sequence_file(config.process.path);
            if (shared.file_rounds.empty()) {
                throw ConfigError("sequence file is empty: " + config.process.path.string());
            }
            if (shared.file_rounds.front().first.depth() != config.depth) {
                throw ConfigError("sequence file context width " +
                                  std::to_string(shared.file_rounds.front().first.depth()) +
                                  " does not match depth " + std::to_string(config.depth));
            }
            if (shared.file_rounds.size() < config.horizon) {
                throw ConfigError("sequence file holds " + std::to_string(shared.file_rounds.size()) +
                                  " rounds, fewer than the horizon");
            }
            break;
        }
        case ProcessKind::adversary:
            break;
    }
    return shared;
}

struct BandTracker {
    double margin = kPosInf;
    std::uint64_t round = 0;
    int level = -1;

    void observe(const PosteriorBandMargin& m, std::uint64_t t) {
        if (m.margin < margin) {
            margin = m.margin;
            round = t;
            level = m.level;
        }
    }
};

RunResult run_single(const ExperimentConfig& config, const SharedInputs& shared, unsigned rep) {
    const int algo_depth = config.effective_algo_depth();
    const std::uint64_t seed = config.base_seed + rep;
    const std::uint64_t horizon = config.horizon;

    ContextStatsTable stats(algo_depth);
    HedgeState hedge;
    std::optional<StochasticStream> stream;
    if (shared.process_spec) stream.emplace(*shared.process_spec, seed);

    // Adversarial runs still consume an exogenous covariate stream.
    SplitMix64 covariate_rng(seed);
    ContextWindow adversary_window(config.depth, 0);
    if (config.process.kind == ProcessKind::adversary) {
        for (int i = 0; i < config.depth; ++i) {
            adversary_window = adversary_window.shifted(Symbol(covariate_rng.next_bit()));
        }
    }

    const std::uint64_t sample_base =
        config.sample_seed != 0 ? config.sample_seed : config.base_seed + kSampleSeedOffset;
    SplitMix64 sample_rng(sample_base + rep);

    const bool uses_prior = config.algorithm.kind != AlgorithmKind::follow_leader;
    const PriorSpec* prior = uses_prior ? &*shared.prior : nullptr;

    RunResult result;
    result.trace.reserve(horizon);
    BandTracker band;

    for (std::uint64_t t = 1; t <= horizon; ++t) {
        ContextWindow full_context(config.depth, 0);
        Symbol outcome;
        bool outcome_known = false;
        switch (config.process.kind) {
            case ProcessKind::xor3:
            case ProcessKind::iid07: {
                auto [c, y] = stream->next();
                full_context = c;
                outcome = y;
                outcome_known = true;
                break;
            }
            case ProcessKind::file: {
                const auto& [c, y] = shared.file_rounds[t - 1];
                full_context = c;
                outcome = y;
                outcome_known = true;
                break;
            }
            case ProcessKind::adversary:
                full_context = adversary_window;
                adversary_window = adversary_window.shifted(Symbol(covariate_rng.next_bit()));
                break;
        }
        const ContextWindow context = full_context.truncated(algo_depth);

        TraceRow row;
        row.t = t;
        Prediction w;

        switch (config.algorithm.kind) {
            case AlgorithmKind::ctah: {
                const double eta = hedge.eta();
                band.observe(posterior_band_margin(stats, eta, *prior), t);
                if (!outcome_known) {
                    outcome = adversary_next(predict(stats, context, eta, *prior));
                }
                const StepResult res = step(stats, hedge, *prior, context, outcome);
                w = res.prediction;
                row.eta = res.trace.eta;
                row.expected_loss = res.trace.expected;
                row.gap = res.trace.gap;
                row.variance = res.trace.variance;
                row.posterior = res.trace.posterior.q;
                break;
            }
            case AlgorithmKind::fixed_eta: {
                const double eta = config.algorithm.eta;
                band.observe(posterior_band_margin(stats, eta, *prior), t);
                w = fixed_eta_predict(stats, context, eta, *prior);
                if (!outcome_known) outcome = adversary_next(w);
                const RoundLosses losses = round_losses(w, outcome, eta);
                row.eta = eta;
                row.expected_loss = losses.expected;
                row.variance = losses.variance;
                row.posterior = model_posterior(stats, eta, *prior).q;
                stats.record(context, outcome);
                row.gap = hedge.advance(losses);
                break;
            }
            case AlgorithmKind::follow_leader: {
                w = ftl_predict(stats, context, config.algorithm.leader_order, config.ftl_ties);
                if (!outcome_known) outcome = adversary_next(w);
                const RoundLosses losses = round_losses(w, outcome, kPosInf);
                row.eta = kPosInf;
                row.expected_loss = losses.expected;
                row.variance = losses.variance;
                row.posterior.assign(static_cast<std::size_t>(algo_depth) + 1, 0.0);
                row.posterior[static_cast<std::size_t>(config.algorithm.leader_order)] = 1.0;
                stats.record(context, outcome);
                row.gap = hedge.advance(losses);
                break;
            }
        }

        if (config.sampled_predictions) {
            const int drawn = sample_rng.next_unit() < w.w0 ? 0 : 1;
            if (drawn != outcome.value()) result.sampled_loss_cum += 1.0;
        }

        row.expected_cum = hedge.expected_cum();
        row.gap_cum = hedge.gap_cum();
        row.variance_cum = hedge.variance_cum();
        row.regret_to_order.resize(static_cast<std::size_t>(algo_depth) + 1);
        for (int d = 0; d <= algo_depth; ++d) {
            row.regret_to_order[static_cast<std::size_t>(d)] =
                row.expected_cum - static_cast<double>(stats.best_order_loss(d));
        }
        result.trace.push_back(std::move(row));
    }

    result.final_best_loss.resize(static_cast<std::size_t>(algo_depth) + 1);
    result.final_pi_hat.resize(static_cast<std::size_t>(algo_depth) + 1);
    for (int d = 0; d <= algo_depth; ++d) {
        result.final_best_loss[static_cast<std::size_t>(d)] = stats.best_order_loss(d);
        result.final_pi_hat[static_cast<std::size_t>(d)] = stats.estimated_unpredictability(d);
    }

    // Bound report: the posterior band for any exponential-weights run, the
    // second-order, gap-variance and worst-case bounds for the adaptive rate.
    const double slack = kSlackPerRound * static_cast<double>(horizon);
    if (uses_prior) {
        BoundVerdict v;
        v.name = "posterior-band";
        v.margin = band.margin;
        v.holds = band.margin >= -slack;
        v.worst_round = band.round;
        v.detail = "order " + std::to_string(band.level);
        result.verdicts.push_back(std::move(v));
    }
    if (config.algorithm.kind == AlgorithmKind::ctah) {
        const double radius = bound_radius(hedge.variance_cum());

        BoundVerdict second;
        second.name = "second-order";
        second.margin = kPosInf;
        second.worst_round = horizon;
        for (int d = 0; d <= algo_depth; ++d) {
            const double log_g = prior->log_g_at(d);
            if (log_g == kNegInf) continue;
            const double complexity = 1.0 + (prior->log_z - log_g) / kLn2;
            const double regret = hedge.expected_cum() -
                                  static_cast<double>(result.final_best_loss[static_cast<std::size_t>(d)]);
            const double margin = radius * complexity + slack - regret;
            if (margin < second.margin) {
                second.margin = margin;
                second.detail = "order " + std::to_string(d);
            }
        }
        second.holds = second.margin >= 0.0;
        result.verdicts.push_back(std::move(second));

        BoundVerdict gapvar;
        gapvar.name = "gap-variance";
        gapvar.margin = radius + slack - hedge.gap_cum();
        gapvar.holds = gapvar.margin >= 0.0;
        gapvar.worst_round = horizon;
        result.verdicts.push_back(std::move(gapvar));

        if (prior->kind == PriorKind::proportional) {
            BoundVerdict worst;
            worst.name = "worst-case";
            worst.margin = kPosInf;
            worst.worst_round = horizon;
            const double wc_radius =
                0.5 * std::sqrt(static_cast<double>(horizon) * kLn2) + (2.0 / 3.0) * kLn2 + 1.0;
            for (int d = 0; d <= algo_depth; ++d) {
                const double bound = wc_radius * (2.0 + std::ldexp(1.0, d + 1));
                const double regret = hedge.expected_cum() -
                                      static_cast<double>(result.final_best_loss[static_cast<std::size_t>(d)]);
                const double margin = bound + slack - regret;
                if (margin < worst.margin) {
                    worst.margin = margin;
                    worst.detail = "order " + std::to_string(d);
                }
            }
            worst.holds = worst.margin >= 0.0;
            result.verdicts.push_back(std::move(worst));
        }
    }
    return result;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate(config);
    const SharedInputs shared = prepare_inputs(config);

    ExperimentResult result;
    result.runs.resize(config.repetitions);

    unsigned jobs = config.jobs != 0 ? config.jobs : std::thread::hardware_concurrency();
    if (jobs == 0) jobs = 1;
    if (jobs > config.repetitions) jobs = config.repetitions;

    if (jobs == 1) {
        for (unsigned rep = 0; rep < config.repetitions; ++rep) {
            result.runs[rep] = run_single(config, shared, rep);
        }
        return result;
    }

    std::atomic<unsigned> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const unsigned rep = next.fetch_add(1);
            if (rep >= config.repetitions) return;
            try {
                result.runs[rep] = run_single(config, shared, rep);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (unsigned i = 0; i < jobs; ++i) threads.emplace_back(worker);
    for (std::thread& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return result;
}

bool all_bounds_hold(const ExperimentResult& result) {
    for (const RunResult& run : result.runs) {
        for (const BoundVerdict& v : run.verdicts) {
            if (!v.holds) return false;
        }
    }
    return true;
}

AggregateSummary aggregate(const ExperimentResult& result) {
    if (result.runs.empty()) throw UsageError("cannot aggregate zero runs");
    const std::size_t horizon = result.runs.front().trace.size();
    const std::size_t orders = result.runs.front().trace.front().regret_to_order.size();
    const double n = static_cast<double>(result.runs.size());

    AggregateSummary agg;
    agg.t.resize(horizon);
    agg.loss_mean.assign(horizon, 0.0);
    agg.loss_std.assign(horizon, 0.0);
    agg.regret_mean.assign(orders, std::vector<double>(horizon, 0.0));
    agg.regret_std.assign(orders, std::vector<double>(horizon, 0.0));

    for (std::size_t i = 0; i < horizon; ++i) {
        agg.t[i] = result.runs.front().trace[i].t;
        double sum = 0.0, sum_sq = 0.0;
        for (const RunResult& run : result.runs) {
            const double x = run.trace[i].expected_cum;
            sum += x;
            sum_sq += x * x;
        }
        agg.loss_mean[i] = sum / n;
        agg.loss_std[i] = n > 1.0 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0))) : 0.0;
        for (std::size_t d = 0; d < orders; ++d) {
            double rsum = 0.0, rsum_sq = 0.0;
            for (const RunResult& run : result.runs) {
                const double x = run.trace[i].regret_to_order[d];
                rsum += x;
                rsum_sq += x * x;
            }
            agg.regret_mean[d][i] = rsum / n;
            agg.regret_std[d][i] =
                n > 1.0 ? std::sqrt(std::max(0.0, (rsum_sq - rsum * rsum / n) / (n - 1.0))) : 0.0;
        }
    }
    return agg;
}

void write_aggregate_csv(const std::filesystem::path& path, const AggregateSummary& agg) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open aggregate file for writing: " + path.string());
    out << "# ctah-aggregate v1\n";
    out << "t,H_mean,H_std";
    for (std::size_t d = 0; d < agg.regret_mean.size(); ++d) {
        out << ",R" << d << "_mean,R" << d << "_std,R" << d << "_mean_norm";
    }
    out << '\n';
    for (std::size_t i = 0; i < agg.t.size(); ++i) {
        out << agg.t[i] << ',' << format_double(agg.loss_mean[i]) << ','
            << format_double(agg.loss_std[i]);
        for (std::size_t d = 0; d < agg.regret_mean.size(); ++d) {
            out << ',' << format_double(agg.regret_mean[d][i]) << ','
                << format_double(agg.regret_std[d][i]) << ','
                << format_double(agg.regret_mean[d][i] / static_cast<double>(agg.t[i]));
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing aggregate file: " + path.string());
}

std::string summary_text(const ExperimentConfig& config, const ExperimentResult& result) {
    std::ostringstream out;
    out << "ctah run summary\n";
    out << "algorithm = " << algorithm_name(config.algorithm) << '\n';
    if (config.algorithm.kind != AlgorithmKind::follow_leader) {
        out << "prior = " << prior_name(config.prior) << '\n';
    }
    out << "depth = " << config.depth << '\n';
    if (config.effective_algo_depth() != config.depth) {
        out << "forecaster_depth = " << config.effective_algo_depth() << '\n';
    }
    out << "horizon = " << config.horizon << '\n';
    out << "process = " << process_name(config.process) << '\n';
    out << "seed = " << config.base_seed << '\n';
    out << "reps = " << config.repetitions << '\n';
    out << "rng = " << SplitMix64::kName << '\n';
    if (config.sampled_predictions) {
        out << "sample = on (seed offset " << kSampleSeedOffset << ")\n";
    }

    for (std::size_t rep = 0; rep < result.runs.size(); ++rep) {
        const RunResult& run = result.runs[rep];
        out << "rep " << rep << ": H_T = " << format_double(run.trace.back().expected_cum);
        if (config.sampled_predictions) {
            out << ", sampled_loss = " << format_double(run.sampled_loss_cum);
        }
        for (const BoundVerdict& v : run.verdicts) {
            out << ", " << v.name << ' ' << (v.holds ? "pass" : "FAIL") << " (margin "
                << format_double(v.margin);
            if (!v.detail.empty()) out << ", " << v.detail;
            if (!v.holds) out << ", round " << v.worst_round;
            out << ')';
        }
        out << '\n';
    }

    const AggregateSummary agg = aggregate(result);
    out << "mean H_T = " << format_double(agg.loss_mean.back()) << '\n';
    for (std::size_t d = 0; d < agg.regret_mean.size(); ++d) {
        out << "mean R_{T," << d << "} = " << format_double(agg.regret_mean[d].back()) << '\n';
    }
    return out.str();
}

void write_summary(const std::filesystem::path& path, const ExperimentConfig& config,
                   const ExperimentResult& result) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open summary file for writing: " + path.string());
    out << summary_text(config, result);
    if (!out) throw IoError("failed writing summary file: " + path.string());
}

std::vector<SweepRow> sweep_model_order(const ExperimentConfig& base, int h_min, int h_max) {
    if (base.process.kind != ProcessKind::xor3 && base.process.kind != ProcessKind::iid07) {
        throw ConfigError("sweep needs a stochastic process with a known true order");
    }
    if (h_min < 0 || h_max > base.depth || h_min > h_max) {
        throw ConfigError("sweep order range must lie within [0, depth]");
    }

    const StochasticSpec spec =
        base.process.kind == ProcessKind::xor3 ? xor3_spec(base.depth) : iid07_spec(base.depth);
    const ProcessAnalytics truth = analytics(spec);
    const double horizon = static_cast<double>(base.horizon);

    std::vector<SweepRow> rows;
    for (int h = h_min; h <= h_max; ++h) {
        ExperimentConfig config = base;
        config.algorithm = AlgorithmSpec{}; // ctah
        config.prior = PriorSelector{PriorKind::uniform, {}};
        config.algo_depth = h;
        const ExperimentResult result = run_experiment(config);
        if (!all_bounds_hold(result)) {
            throw NumericsError("bound check failed during the order-" + std::to_string(h) +
                                " sweep run");
        }

        SweepRow row;
        row.order = h;
        const double n = static_cast<double>(result.runs.size());
        double sum = 0.0, sum_sq = 0.0, pi_sum = 0.0;
        for (const RunResult& run : result.runs) {
            const double loss = run.trace.back().expected_cum;
            sum += loss;
            sum_sq += loss * loss;
            pi_sum += run.final_pi_hat[static_cast<std::size_t>(h)];
        }
        row.mean_total_loss = sum / n;
        row.std_total_loss =
            n > 1.0 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0))) : 0.0;
        row.mean_normalized_loss = row.mean_total_loss / horizon;
        row.mean_pi_hat = pi_sum / n;
        row.mean_estimation_err =
            row.mean_total_loss - horizon * truth.pi_star[static_cast<std::size_t>(h)];
        rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open sweep file for writing: " + path.string());
    out << "# ctah-sweep v1\n";
    out << "h,mean_total_loss,std_total_loss,mean_normalized_loss,mean_pi_hat,mean_estimation_err\n";
    for (const SweepRow& row : rows) {
        out << row.order << ',' << format_double(row.mean_total_loss) << ','
            << format_double(row.std_total_loss) << ',' << format_double(row.mean_normalized_loss)
            << ',' << format_double(row.mean_pi_hat) << ',' << format_double(row.mean_estimation_err)
            << '\n';
    }
    if (!out) throw IoError("failed writing sweep file: " + path.string());
}

} // namespace ctah
