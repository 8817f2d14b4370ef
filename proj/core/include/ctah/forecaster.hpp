#ifndef CTAH_FORECASTER_HPP
#define CTAH_FORECASTER_HPP

#include <cstdint>
#include <vector>

#include "ctah/context_stats.hpp"
#include "ctah/hedge.hpp"
#include "ctah/prior.hpp"
#include "ctah/symbol.hpp"

namespace ctah {

// Distribution over model orders 0..D.
struct ModelPosterior {
    std::vector<double> q;
};

// Predictive distribution of the context-tree forecaster at learning rate
// `eta` under the prior `prior`, computed from counts recorded so far.
// For each order h the update aggregates
//   g(h) * [prod over contexts x(h) of sum_y e^{-eta L_{x,y}}] * e^{-eta L_{cur,y}} / (sum_y e^{-eta L_{cur,y}})
// entirely in the log domain; eta = +inf is evaluated exactly in the
// (min-exponent, log-coefficient) limit algebra.
Prediction predict(const ContextStatsTable& stats, const ContextWindow& context, double eta,
                   const PriorSpec& prior);

// Posterior on model orders: q(h) proportional to g(h) * prod_x sum_y e^{-eta L_{x,y}}.
ModelPosterior model_posterior(const ContextStatsTable& stats, double eta, const PriorSpec& prior);

// Slack of the two-sided band on the unnormalized log posterior mass:
// for every order h with g(h) > 0,
//   -eta * bestLoss(h) + ln g(h)  <=  ln Q(h)  <=  -eta * bestLoss(h) + ln g(h) + 2^h ln 2,
// where bestLoss(h) is the hindsight loss of the best order-h expert.
// Returns the minimum slack over orders and sides; negative means a violation.
struct PosteriorBandMargin {
    double margin = 0.0;
    int level = -1; // order attaining the minimum slack
};
PosteriorBandMargin posterior_band_margin(const ContextStatsTable& stats, double eta,
                                          const PriorSpec& prior);

// One full round: predict at the current AdaHedge rate using counts through
// t-1, evaluate the losses for the revealed outcome, then record the outcome
// and advance the rate. The posterior in the trace is evaluated on the same
// pre-record counts as the prediction.
struct StepTrace {
    double eta = 0.0;      // rate used for this round
    double expected = 0.0; // h_t
    double mix = 0.0;      // m_t
    double variance = 0.0; // v_t
    double gap = 0.0;      // clamped delta_t
    ModelPosterior posterior;
};
struct StepResult {
    Prediction prediction;
    StepTrace trace;
};
StepResult step(ContextStatsTable& stats, HedgeState& hedge, const PriorSpec& prior,
                const ContextWindow& context, Symbol outcome);

// Context slots touched per call: predict scans every slot of every order
// with positive prior weight (2^{D+1} - 1 for a full-support prior), record
// touches one slot per order.
std::uint64_t predict_slot_visits(const PriorSpec& prior);
constexpr std::uint64_t predict_slot_visits(int depth) {
    return (std::uint64_t{1} << (depth + 1)) - 1;
}
constexpr std::uint64_t record_slot_visits(int depth) {
    return static_cast<std::uint64_t>(depth) + 1;
}

} // namespace ctah

#endif // CTAH_FORECASTER_HPP
