#ifndef CTAH_PROCESSES_HPP
#define CTAH_PROCESSES_HPP

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "ctah/hedge.hpp"
#include "ctah/rng.hpp"
#include "ctah/symbol.hpp"

namespace ctah {

// A process whose outcome depends on the covariate window only through its
// `true_order` most recent bits: Y_t ~ Ber(cond_table[X_t(true_order)]).
// Covariates are an exogenous i.i.d. bit stream with the given bias.
struct StochasticSpec {
    int depth = 0;
    int true_order = 0;
    double covariate_bias = 0.5;
    std::vector<double> cond_table; // size 2^true_order, P(Y=1 | x(true_order))
};

// Throws ConfigError on malformed specs. With require_unique_best set, a
// conditional probability of exactly 1/2 (no unique best prediction at some
// context) is also rejected.
void validate(const StochasticSpec& spec, bool require_unique_best = false);

// Y_t ~ Ber(0.8) when the three most recent covariate bits have odd parity,
// Ber(0.2) otherwise; a 3rd-order process.
StochasticSpec xor3_spec(int depth);

// Y_t i.i.d. Ber(0.7), independent of the covariates; a 0th-order process.
StochasticSpec iid07_spec(int depth);

// Population quantities of a stochastic spec, computed exactly by
// marginalizing the conditional table over the covariate distribution.
struct ProcessAnalytics {
    std::vector<double> pi_star;        // unpredictability per order 0..depth
    double beta_star = 0.0;             // min over contexts of the best-prediction probability
    std::vector<double> alpha;          // alpha[h] = (pi*_h - pi*_d) / 2 for h < d
    std::vector<Symbol> best_predictor; // argmax_y P(y | x(d)) per context key
};
ProcessAnalytics analytics(const StochasticSpec& spec);

// Deterministic stream of (context, outcome) pairs. The warm-up covariates
// are drawn first so the first context window is fully populated; each round
// then draws the outcome followed by the next covariate bit.
class StochasticStream {
public:
    StochasticStream(StochasticSpec spec, std::uint64_t seed);

    std::pair<ContextWindow, Symbol> next();

private:
    StochasticSpec spec_;
    SplitMix64 rng_;
    ContextWindow window_;
};

std::vector<std::pair<ContextWindow, Symbol>> generate_stochastic(const StochasticSpec& spec,
                                                                  std::uint64_t horizon,
                                                                  std::uint64_t seed);

// Adaptive worst-case outcome: the symbol carrying less predictive mass
// (maximizing the forecaster's expected loss); ties resolve to 1.
Symbol adversary_next(const Prediction& w);

// Sequence files: one round per line, "<depth covariate bits, oldest first> <outcome>".
void write_sequence_file(const std::filesystem::path& path,
                         const std::vector<std::pair<ContextWindow, Symbol>>& rounds);
std::vector<std::pair<ContextWindow, Symbol>> read_sequence_file(const std::filesystem::path& path);

} // namespace ctah

#endif // CTAH_PROCESSES_HPP
