#ifndef CTAH_HEDGE_HPP
#define CTAH_HEDGE_HPP

#include <cstdint>

#include "ctah/math_util.hpp"
#include "ctah/symbol.hpp"

namespace ctah {

// Per-round predictive distribution on the two symbols.
struct Prediction {
    double w0 = 0.5;
    double w1 = 0.5;

    double mass_on(Symbol y) const { return y.value() == 0 ? w0 : w1; }
};

// Per-round loss components at the learning rate in force:
//   expected = <w, l>, the mass on the wrong symbol,
//   mix      = (1/eta) ln <w, e^{-eta l}>,
//   variance = Var of the 0-1 loss of a prediction drawn from w.
struct RoundLosses {
    double expected = 0.0;
    double mix = 0.0;
    double variance = 0.0;
};

// Evaluate the three loss components. `eta` may be +inf, in which case the
// mix loss takes its limit value: 0 when w places mass on the outcome, else -1.
RoundLosses round_losses(const Prediction& w, Symbol outcome, double eta);

// AdaHedge accumulators. The learning rate follows eta_{t+1} = ln2 / Delta_t,
// starting at +inf while the cumulative mixability gap is zero.
class HedgeState {
public:
    HedgeState() = default;

    std::uint64_t round() const { return round_; }
    double gap_cum() const { return delta_cum_; }          // Delta_t
    double expected_cum() const { return expected_cum_; }  // H_t
    double mix_cum() const { return mix_cum_; }            // M_t
    double variance_cum() const { return variance_cum_; }  // V_t
    double eta() const { return eta_; }                    // rate for the next round

    // Fold in one round. The gap h - m is clamped to [0, 1]; a gap below
    // -kGapTolerance signals a broken mix-loss computation and throws
    // NumericsError. Returns the clamped gap.
    double advance(const RoundLosses& losses);

    static constexpr double kGapTolerance = 1e-12;

private:
    std::uint64_t round_ = 0;
    double delta_cum_ = 0.0;
    double expected_cum_ = 0.0;
    double mix_cum_ = 0.0;
    double variance_cum_ = 0.0;
    double eta_ = kPosInf;
};

} // namespace ctah

#endif // CTAH_HEDGE_HPP
