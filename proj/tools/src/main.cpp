#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctah/errors.hpp"
#include "ctah/oracle_naive.hpp"
#include "experiment.hpp"
#include "svg_plot.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCheckFailed = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
    std::string algorithm = "ctah";
    std::string prior = "prop";
    std::string process = "xor3";
    int depth = 8;
    std::uint64_t horizon = 1500;
    std::uint64_t seed = 1;
    unsigned reps = 1;
    bool sample = false;
    std::uint64_t sample_seed = 0;
    std::string ftl_ties = "uniform";
    unsigned jobs = 0;
    std::string out;
    std::string config;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--algorithm", flags.algorithm, "ctah, ftl:<h> or fixed-eta:<eta>");
    cmd->add_option("--prior", flags.prior, "uniform, prop or table:<path>");
    cmd->add_option("--process", flags.process, "xor3, iid07, file:<path> or adversary");
    cmd->add_option("--depth", flags.depth, "covariate window length D");
    cmd->add_option("--horizon", flags.horizon, "number of rounds T");
    cmd->add_option("--seed", flags.seed, "base seed; repetition i uses seed+i");
    cmd->add_option("--reps", flags.reps, "number of repetitions");
    cmd->add_flag("--sample", flags.sample, "also draw predictions from w_t (separate seed)");
    cmd->add_option("--sample-seed", flags.sample_seed, "base seed for drawn predictions");
    cmd->add_option("--ftl-ties", flags.ftl_ties, "FTL tie rule: uniform or zero");
    cmd->add_option("--jobs", flags.jobs, "parallel repetitions (0 = hardware)");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--config", flags.config, "flat key = value file; command-line flags win");
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Flat `key = value` config file. Values apply only to flags the command line
// left untouched; unknown keys are rejected.
void apply_config_file(const CLI::App* cmd, CommonFlags& flags) {
    if (flags.config.empty()) return;
    std::ifstream in(flags.config);
    if (!in) throw ctah::IoError("cannot open config file: " + flags.config);

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ctah::ConfigError("config line " + std::to_string(lineno) +
                                    " is not of the form key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        static const std::set<std::string> known{"algorithm", "prior",       "process",
                                                 "depth",     "horizon",     "seed",
                                                 "reps",      "sample",      "sample-seed",
                                                 "ftl-ties",  "jobs",        "out"};
        if (!known.count(key)) {
            throw ctah::ConfigError("unknown config key '" + key + "' at line " +
                                    std::to_string(lineno));
        }
        if (cmd->count("--" + key) > 0) continue; // command line wins

        try {
            if (key == "algorithm") {
                flags.algorithm = value;
            } else if (key == "prior") {
                flags.prior = value;
            } else if (key == "process") {
                flags.process = value;
            } else if (key == "depth") {
                flags.depth = std::stoi(value);
            } else if (key == "horizon") {
                flags.horizon = std::stoull(value);
            } else if (key == "seed") {
                flags.seed = std::stoull(value);
            } else if (key == "reps") {
                flags.reps = static_cast<unsigned>(std::stoul(value));
            } else if (key == "sample") {
                if (value == "true" || value == "1" || value == "on") {
                    flags.sample = true;
                } else if (value == "false" || value == "0" || value == "off") {
                    flags.sample = false;
                } else {
                    throw ctah::ConfigError("bad boolean '" + value + "' for sample");
                }
            } else if (key == "sample-seed") {
                flags.sample_seed = std::stoull(value);
            } else if (key == "ftl-ties") {
                flags.ftl_ties = value;
            } else if (key == "jobs") {
                flags.jobs = static_cast<unsigned>(std::stoul(value));
            } else if (key == "out") {
                flags.out = value;
            } else {
                throw ctah::ConfigError("unknown config key '" + key + "' at line " +
                                        std::to_string(lineno));
            }
        } catch (const std::invalid_argument&) {
            throw ctah::ConfigError("bad value '" + value + "' for config key '" + key + "'");
        } catch (const std::out_of_range&) {
            throw ctah::ConfigError("bad value '" + value + "' for config key '" + key + "'");
        }
    }
}

ctah::ExperimentConfig to_config(const CommonFlags& flags) {
    ctah::ExperimentConfig config;
    config.algorithm = ctah::parse_algorithm(flags.algorithm);
    config.prior = ctah::parse_prior(flags.prior);
    config.process = ctah::parse_process(flags.process);
    config.depth = flags.depth;
    config.horizon = flags.horizon;
    config.base_seed = flags.seed;
    config.repetitions = flags.reps;
    config.sampled_predictions = flags.sample;
    config.sample_seed = flags.sample_seed;
    config.jobs = flags.jobs;
    if (flags.ftl_ties == "uniform") {
        config.ftl_ties = ctah::FtlTieRule::uniform;
    } else if (flags.ftl_ties == "zero") {
        config.ftl_ties = ctah::FtlTieRule::zero;
    } else {
        throw ctah::ConfigError("unknown FTL tie rule '" + flags.ftl_ties + "'");
    }
    return config;
}

std::filesystem::path ensure_out_dir(const std::string& out) {
    if (out.empty()) throw ctah::ConfigError("--out directory is required");
    std::filesystem::path dir(out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ctah::IoError("cannot create output directory: " + dir.string());
    return dir;
}

int cmd_run(const CommonFlags& flags) {
    const ctah::ExperimentConfig config = to_config(flags);
    const std::filesystem::path dir = ensure_out_dir(flags.out);

    const ctah::ExperimentResult result = ctah::run_experiment(config);
    for (std::size_t rep = 0; rep < result.runs.size(); ++rep) {
        char name[32];
        std::snprintf(name, sizeof(name), "trace_rep%03zu.csv", rep);
        ctah::write_trace_csv(dir / name, result.runs[rep].trace);
    }
    ctah::write_aggregate_csv(dir / "aggregate.csv", ctah::aggregate(result));
    ctah::write_summary(dir / "summary.txt", config, result);
    std::cout << ctah::summary_text(config, result);

    if (!ctah::all_bounds_hold(result)) {
        for (std::size_t rep = 0; rep < result.runs.size(); ++rep) {
            for (const ctah::BoundVerdict& v : result.runs[rep].verdicts) {
                if (!v.holds) {
                    std::cerr << "bound check '" << v.name << "' failed in rep " << rep
                              << " at round " << v.worst_round << " (margin "
                              << ctah::format_double(v.margin) << ", " << v.detail << ")\n";
                }
            }
        }
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_sweep(const CommonFlags& flags, int h_min, int h_max) {
    ctah::ExperimentConfig config = to_config(flags);
    if (h_max < 0) h_max = config.depth;
    const std::filesystem::path dir = ensure_out_dir(flags.out);
    const std::vector<ctah::SweepRow> rows = ctah::sweep_model_order(config, h_min, h_max);
    ctah::write_sweep_csv(dir / "sweep.csv", rows);
    std::cout << "h,mean_total_loss,mean_pi_hat,mean_estimation_err\n";
    for (const ctah::SweepRow& row : rows) {
        std::cout << row.order << ',' << ctah::format_double(row.mean_total_loss) << ','
                  << ctah::format_double(row.mean_pi_hat) << ','
                  << ctah::format_double(row.mean_estimation_err) << '\n';
    }
    return kExitOk;
}

int cmd_equivalence(int depth, const std::string& prior, std::uint64_t horizon, std::uint64_t seed) {
    const ctah::PriorSpec spec = ctah::build_prior(ctah::parse_prior(prior), depth);
    const double deviation = ctah::equivalence_check(depth, spec, horizon, seed);
    std::printf("max per-round sup deviation: %.6e\n", deviation);
    return deviation <= 1e-9 ? kExitOk : kExitCheckFailed;
}

int cmd_generate(const CommonFlags& flags) {
    const ctah::ExperimentConfig config = to_config(flags);
    if (config.process.kind != ctah::ProcessKind::xor3 &&
        config.process.kind != ctah::ProcessKind::iid07) {
        throw ctah::ConfigError("generate needs a stochastic process (xor3 or iid07)");
    }
    if (flags.out.empty()) throw ctah::ConfigError("--out file is required");
    const ctah::StochasticSpec spec = config.process.kind == ctah::ProcessKind::xor3
                                          ? ctah::xor3_spec(config.depth)
                                          : ctah::iid07_spec(config.depth);
    ctah::write_sequence_file(flags.out,
                              ctah::generate_stochastic(spec, config.horizon, config.base_seed));
    std::cout << "wrote " << config.horizon << " rounds to " << flags.out << '\n';
    return kExitOk;
}

int cmd_plot(const std::vector<std::string>& csvs, const std::string& out,
             const std::string& column, bool normalize) {
    if (csvs.empty()) throw ctah::UsageError("plot needs at least one CSV");
    if (out.empty()) throw ctah::ConfigError("--out file is required");

    std::vector<ctah::PlotSeries> series;
    for (const std::string& file : csvs) {
        const ctah::CsvTable table = ctah::read_csv(file);
        const int tcol = table.column_index("t");
        const int vcol = table.column_index(column);
        if (tcol < 0) throw ctah::IoError("CSV has no t column: " + file);
        if (vcol < 0) throw ctah::IoError("CSV has no column '" + column + "': " + file);
        ctah::PlotSeries s;
        s.label = std::filesystem::path(file).stem().string();
        for (const std::vector<double>& row : table.rows) {
            const double t = row[static_cast<std::size_t>(tcol)];
            double v = row[static_cast<std::size_t>(vcol)];
            if (normalize && t > 0.0) v /= t;
            s.x.push_back(t);
            s.y.push_back(v);
        }
        series.push_back(std::move(s));
    }
    const std::string y_label = normalize ? column + " / t" : column;
    const std::string svg = ctah::render_line_plot(series, "t", y_label);
    std::ofstream file(out, std::ios::binary);
    if (!file) throw ctah::IoError("cannot open SVG output: " + out);
    file << svg;
    if (!file) throw ctah::IoError("failed writing SVG output: " + out);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"context-tree forecaster with an adaptive learning rate: experiment harness"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "run an experiment and emit traces");
    add_common_flags(run, run_flags);

    CommonFlags sweep_flags;
    int h_min = 0, h_max = -1;
    CLI::App* sweep = app.add_subcommand("sweep", "uniform-prior runs across model orders");
    add_common_flags(sweep, sweep_flags);
    sweep->add_option("--h-min", h_min, "lowest order");
    sweep->add_option("--h-max", h_max, "highest order (default depth)");

    int eq_depth = 2;
    std::string eq_prior = "prop";
    std::uint64_t eq_horizon = 50, eq_seed = 1;
    CLI::App* eq = app.add_subcommand("equivalence-check",
                                      "compare the efficient update against the naive ensemble");
    eq->add_option("--depth", eq_depth, "tree depth (<= 3)");
    eq->add_option("--prior", eq_prior, "uniform, prop or table:<path>");
    eq->add_option("--horizon", eq_horizon, "rounds (<= 200)");
    eq->add_option("--seed", eq_seed, "stream seed");

    CommonFlags gen_flags;
    CLI::App* gen = app.add_subcommand("generate", "emit a sequence file for file: replays");
    add_common_flags(gen, gen_flags);

    std::vector<std::string> plot_csvs;
    std::string plot_out, plot_column = "H_t";
    bool plot_normalize = false;
    CLI::App* plot = app.add_subcommand("plot", "render CSV columns as an SVG line plot");
    plot->add_option("csv", plot_csvs, "input CSV files sharing a t column");
    plot->add_option("--out", plot_out, "output SVG path");
    plot->add_option("--column", plot_column, "column to plot (default H_t)");
    plot->add_flag("--normalize", plot_normalize, "divide the column by t");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) {
            apply_config_file(run, run_flags);
            return cmd_run(run_flags);
        }
        if (sweep->parsed()) {
            apply_config_file(sweep, sweep_flags);
            return cmd_sweep(sweep_flags, h_min, h_max);
        }
        if (eq->parsed()) return cmd_equivalence(eq_depth, eq_prior, eq_horizon, eq_seed);
        if (gen->parsed()) {
            apply_config_file(gen, gen_flags);
            return cmd_generate(gen_flags);
        }
        if (plot->parsed()) return cmd_plot(plot_csvs, plot_out, plot_column, plot_normalize);
    } catch (const ctah::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ctah::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ctah::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitOk;
}
