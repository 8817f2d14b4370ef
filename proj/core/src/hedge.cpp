#include "ctah/hedge.hpp"

#include <cmath>
#include <string>

#include "ctah/errors.hpp"

namespace ctah {

RoundLosses round_losses(const Prediction& w, Symbol outcome, double eta) {
    if (std::abs(w.w0 + w.w1 - 1.0) > 1e-9 || w.w0 < 0.0 || w.w1 < 0.0) {
        throw UsageError("prediction weights must form a distribution");
    }
    if (!(eta > 0.0)) throw UsageError("learning rate must be positive or +inf");

    const double w_right = w.mass_on(outcome);
    const double w_wrong = w.mass_on(outcome.complement());

    RoundLosses out;
    out.expected = w_wrong;
    out.variance = w_wrong * (1.0 - w_wrong);
    if (std::isinf(eta)) {
        out.mix = w_right > 0.0 ? 0.0 : 1.0;
    } else {
        // -(1/eta) ln(w_right + w_wrong e^{-eta}), evaluated in log domain so a
        // zero weight on either side stays exact. Lies in [0, expected].
        const double log_right = w_right > 0.0 ? std::log(w_right) : kNegInf;
        const double log_wrong = w_wrong > 0.0 ? std::log(w_wrong) - eta : kNegInf;
        out.mix = -log_add(log_right, log_wrong) / eta;
    }
    return out;
}

double HedgeState::advance(const RoundLosses& losses) {
    double gap = losses.expected - losses.mix;
    if (gap < -kGapTolerance) {
        throw NumericsError("negative mixability gap " + std::to_string(gap) +
                            ": expected and mix losses are inconsistent");
    }
    if (gap < 0.0) gap = 0.0;
    if (gap > 1.0) gap = 1.0;

    delta_cum_ += gap;
    expected_cum_ += losses.expected;
    mix_cum_ += losses.mix;
    variance_cum_ += losses.variance;
    ++round_;
    eta_ = delta_cum_ > 0.0 ? kLn2 / delta_cum_ : kPosInf;
    return gap;
}

} // namespace ctah
