#ifndef CTAH_BASELINES_HPP
#define CTAH_BASELINES_HPP

#include "ctah/context_stats.hpp"
#include "ctah/hedge.hpp"
#include "ctah/prior.hpp"
#include "ctah/symbol.hpp"

namespace ctah {

enum class FtlTieRule {
    uniform, // split mass evenly on a tie
    zero,    // deterministically predict 0 on a tie
};

// Follow-the-Context-Leader(h): all mass on the symbol with the smaller
// cumulative loss at the current length-h context; unseen contexts are ties.
Prediction ftl_predict(const ContextStatsTable& stats, const ContextWindow& context, int h,
                       FtlTieRule tie_rule = FtlTieRule::uniform);

// Tree-expert forecaster with a constant learning rate; identical to the
// adaptive forecaster's update evaluated at the fixed eta.
Prediction fixed_eta_predict(const ContextStatsTable& stats, const ContextWindow& context,
                             double eta, const PriorSpec& prior);

} // namespace ctah

#endif // CTAH_BASELINES_HPP
