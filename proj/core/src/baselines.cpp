#include "ctah/baselines.hpp"

#include <cmath>

#include "ctah/errors.hpp"
#include "ctah/forecaster.hpp"

namespace ctah {

Prediction ftl_predict(const ContextStatsTable& stats, const ContextWindow& context, int h,
                       FtlTieRule tie_rule) {
    if (h < 0 || h > stats.depth()) throw UsageError("leader order exceeds table depth");
    if (context.depth() != stats.depth()) throw UsageError("context depth does not match table");
    const LossCounts counts = stats.loss_counts(h, context.suffix(h));
    if (counts.loss_predict[0] < counts.loss_predict[1]) return Prediction{1.0, 0.0};
    if (counts.loss_predict[1] < counts.loss_predict[0]) return Prediction{0.0, 1.0};
    return tie_rule == FtlTieRule::zero ? Prediction{1.0, 0.0} : Prediction{0.5, 0.5};
}

Prediction fixed_eta_predict(const ContextStatsTable& stats, const ContextWindow& context,
                             double eta, const PriorSpec& prior) {
    if (!(eta > 0.0) || std::isinf(eta)) throw UsageError("fixed learning rate must be finite positive");
    return predict(stats, context, eta, prior);
}

} // namespace ctah
