#ifndef CTAH_TOOLS_EXPERIMENT_HPP
#define CTAH_TOOLS_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ctah/baselines.hpp"
#include "ctah/prior.hpp"
#include "ctah/processes.hpp"
#include "trace.hpp"

namespace ctah {

enum class AlgorithmKind { ctah, follow_leader, fixed_eta };

struct AlgorithmSpec {
    AlgorithmKind kind = AlgorithmKind::ctah;
    int leader_order = 0; // follow_leader
    double eta = 1.0;     // fixed_eta
};
AlgorithmSpec parse_algorithm(const std::string& text); // ctah | ftl:<h> | fixed-eta:<eta>
std::string algorithm_name(const AlgorithmSpec& spec);

enum class ProcessKind { xor3, iid07, file, adversary };

struct ProcessSelector {
    ProcessKind kind = ProcessKind::xor3;
    std::filesystem::path path; // for file
};
ProcessSelector parse_process(const std::string& text); // xor3 | iid07 | file:<path> | adversary
std::string process_name(const ProcessSelector& sel);

struct PriorSelector {
    PriorKind kind = PriorKind::proportional;
    std::filesystem::path table_path; // for custom tables
};
PriorSelector parse_prior(const std::string& text); // uniform | prop | table:<path>
std::string prior_name(const PriorSelector& sel);
PriorSpec build_prior(const PriorSelector& sel, int depth);

struct ExperimentConfig {
    AlgorithmSpec algorithm;
    PriorSelector prior;
    int depth = 8;              // covariate window length of the process
    int algo_depth = -1;        // forecaster depth; -1 means same as depth
    std::uint64_t horizon = 1500;
    ProcessSelector process;
    std::uint64_t base_seed = 1;
    unsigned repetitions = 1;
    bool sampled_predictions = false;
    std::uint64_t sample_seed = 0; // 0 derives one from base_seed
    FtlTieRule ftl_ties = FtlTieRule::uniform;
    unsigned jobs = 0; // 0 uses hardware concurrency

    int effective_algo_depth() const { return algo_depth < 0 ? depth : algo_depth; }
};
void validate(const ExperimentConfig& config);

struct BoundVerdict {
    std::string name;
    bool holds = true;
    double margin = 0.0;           // minimum slack observed; negative on violation
    std::uint64_t worst_round = 0; // round attaining the minimum (T for final-only checks)
    std::string detail;            // human-readable location, e.g. the order attaining the minimum
};

// One repetition of a run: the full trace plus end-of-run statistics.
struct RunResult {
    std::vector<TraceRow> trace;
    std::vector<std::uint64_t> final_best_loss; // bestLoss(d) at T, d in 0..algo_depth
    std::vector<double> final_pi_hat;           // bestLoss(d)/T
    std::vector<BoundVerdict> verdicts;
    double sampled_loss_cum = 0.0; // populated when sampling is on
};

struct ExperimentResult {
    std::vector<RunResult> runs; // ordered by repetition index
};

ExperimentResult run_experiment(const ExperimentConfig& config);

bool all_bounds_hold(const ExperimentResult& result);

// Cross-repetition mean/std of H_t and the regret columns, in repetition order.
struct AggregateSummary {
    std::vector<std::uint64_t> t;
    std::vector<double> loss_mean, loss_std;
    std::vector<std::vector<double>> regret_mean, regret_std; // [d][t]
};
AggregateSummary aggregate(const ExperimentResult& result);

void write_aggregate_csv(const std::filesystem::path& path, const AggregateSummary& agg);
void write_summary(const std::filesystem::path& path, const ExperimentConfig& config,
                   const ExperimentResult& result);
std::string summary_text(const ExperimentConfig& config, const ExperimentResult& result);

struct SweepRow {
    int order = 0;
    double mean_total_loss = 0.0;
    double std_total_loss = 0.0;
    double mean_normalized_loss = 0.0;
    double mean_pi_hat = 0.0;        // approximation proxy at the sweep order
    double mean_estimation_err = 0.0; // mean(H_T - T * pi*_h)
};

// Uniform-prior runs restricted to each order h in [h_min, h_max]; the data
// keeps coming from the full-depth process.
std::vector<SweepRow> sweep_model_order(const ExperimentConfig& base, int h_min, int h_max);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

} // namespace ctah

#endif // CTAH_TOOLS_EXPERIMENT_HPP
