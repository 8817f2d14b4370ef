#include "ctah/forecaster.hpp"

#include <cmath>
#include <string>

#include "ctah/errors.hpp"
#include "ctah/math_util.hpp"

namespace ctah {

namespace {

// One term b * e^{-eta a} of the eta -> +inf limit algebra. `loss` stays an
// exact integer (sums and differences of counts), so ties are detected
// exactly; the coefficient is carried in the log domain.
struct LimitTerm {
    double loss = 0.0;
    double log_coeff = 0.0;
};

LimitTerm lim_mul(const LimitTerm& a, const LimitTerm& b) {
    return {a.loss + b.loss, a.log_coeff + b.log_coeff};
}

LimitTerm lim_add(const LimitTerm& a, const LimitTerm& b) {
    if (a.log_coeff == kNegInf) return b;
    if (b.log_coeff == kNegInf) return a;
    if (a.loss < b.loss) return a;
    if (b.loss < a.loss) return b;
    return {a.loss, log_add(a.log_coeff, b.log_coeff)};
}

// sum_y e^{-eta L_y} at one context in the limit: the smaller loss wins,
// a tie keeps coefficient 2.
LimitTerm limit_pair_mass(const LossCounts& c) {
    const std::uint32_t l0 = c.loss_predict[0];
    const std::uint32_t l1 = c.loss_predict[1];
    if (l0 == l1) return {static_cast<double>(l0), kLn2};
    return {static_cast<double>(l0 < l1 ? l0 : l1), 0.0};
}

// log sum_y e^{-eta L_y} at one context, finite eta.
double log_pair_mass(const LossCounts& c, double eta) {
    return log_add(-eta * c.loss_predict[0], -eta * c.loss_predict[1]);
}

void check_predict_args(const ContextStatsTable& stats, const ContextWindow& context, double eta,
                        const PriorSpec& prior) {
    if (context.depth() != stats.depth()) {
        throw UsageError("context depth does not match the stats table");
    }
    if (prior.depth != stats.depth()) {
        throw UsageError("prior depth does not match the stats table");
    }
    if (!(eta > 0.0)) throw UsageError("learning rate must be positive or +inf");
}

// Product over all contexts of one order of the per-context pair mass.
double level_log_mass(const ContextStatsTable& stats, int h, double eta) {
    double acc = 0.0;
    for (const LossCounts& c : stats.level(h)) acc += log_pair_mass(c, eta);
    return acc;
}

LimitTerm level_limit_mass(const ContextStatsTable& stats, int h) {
    LimitTerm acc{0.0, 0.0};
    for (const LossCounts& c : stats.level(h)) acc = lim_mul(acc, limit_pair_mass(c));
    return acc;
}

Prediction normalize(double mass0, double mass1) {
    return Prediction{mass0 / (mass0 + mass1), mass1 / (mass0 + mass1)};
}

} // namespace

Prediction predict(const ContextStatsTable& stats, const ContextWindow& context, double eta,
                   const PriorSpec& prior) {
    check_predict_args(stats, context, eta, prior);
    const int depth = stats.depth();

    if (std::isinf(eta)) {
        LimitTerm score[2] = {{0.0, kNegInf}, {0.0, kNegInf}};
        for (int h = 0; h <= depth; ++h) {
            const double log_g = prior.log_g_at(h);
            if (log_g == kNegInf) continue;
            const LimitTerm all = level_limit_mass(stats, h);
            const LossCounts cur = stats.loss_counts(h, context.suffix(h));
            const LimitTerm cur_mass = limit_pair_mass(cur);
            for (int y = 0; y < 2; ++y) {
                LimitTerm term{all.loss - cur_mass.loss + cur.loss_predict[y],
                               log_g + all.log_coeff - cur_mass.log_coeff};
                score[y] = lim_add(score[y], term);
            }
        }
        if (score[0].loss < score[1].loss) return Prediction{1.0, 0.0};
        if (score[1].loss < score[0].loss) return Prediction{0.0, 1.0};
        const double total = log_add(score[0].log_coeff, score[1].log_coeff);
        return Prediction{std::exp(score[0].log_coeff - total),
                          std::exp(score[1].log_coeff - total)};
    }

    double score[2] = {kNegInf, kNegInf};
    for (int h = 0; h <= depth; ++h) {
        const double log_g = prior.log_g_at(h);
        if (log_g == kNegInf) continue;
        const double all = level_log_mass(stats, h, eta);
        const LossCounts cur = stats.loss_counts(h, context.suffix(h));
        const double cur_mass = log_pair_mass(cur, eta);
        for (int y = 0; y < 2; ++y) {
            score[y] = log_add(score[y], log_g + all - cur_mass - eta * cur.loss_predict[y]);
        }
    }
    const double total = log_add(score[0], score[1]);
    return normalize(std::exp(score[0] - total), std::exp(score[1] - total));
}

ModelPosterior model_posterior(const ContextStatsTable& stats, double eta, const PriorSpec& prior) {
    if (prior.depth != stats.depth()) {
        throw UsageError("prior depth does not match the stats table");
    }
    if (!(eta > 0.0)) throw UsageError("learning rate must be positive or +inf");
    const int depth = stats.depth();
    ModelPosterior out;
    out.q.assign(static_cast<std::size_t>(depth) + 1, 0.0);

    if (std::isinf(eta)) {
        std::vector<LimitTerm> mass(static_cast<std::size_t>(depth) + 1, LimitTerm{0.0, kNegInf});
        double best_loss = kPosInf;
        for (int h = 0; h <= depth; ++h) {
            const double log_g = prior.log_g_at(h);
            if (log_g == kNegInf) continue;
            LimitTerm m = level_limit_mass(stats, h);
            m.log_coeff += log_g;
            mass[static_cast<std::size_t>(h)] = m;
            if (m.loss < best_loss) best_loss = m.loss;
        }
        double total = kNegInf;
        for (int h = 0; h <= depth; ++h) {
            const LimitTerm& m = mass[static_cast<std::size_t>(h)];
            if (m.log_coeff > kNegInf && m.loss == best_loss) total = log_add(total, m.log_coeff);
        }
        for (int h = 0; h <= depth; ++h) {
            const LimitTerm& m = mass[static_cast<std::size_t>(h)];
            if (m.log_coeff > kNegInf && m.loss == best_loss) {
                out.q[static_cast<std::size_t>(h)] = std::exp(m.log_coeff - total);
            }
        }
        return out;
    }

    std::vector<double> log_mass(static_cast<std::size_t>(depth) + 1, kNegInf);
    for (int h = 0; h <= depth; ++h) {
        const double log_g = prior.log_g_at(h);
        if (log_g == kNegInf) continue;
        log_mass[static_cast<std::size_t>(h)] = log_g + level_log_mass(stats, h, eta);
    }
    const double total = log_sum_exp(log_mass);
    for (int h = 0; h <= depth; ++h) {
        const double lm = log_mass[static_cast<std::size_t>(h)];
        if (lm > kNegInf) out.q[static_cast<std::size_t>(h)] = std::exp(lm - total);
    }
    return out;
}

PosteriorBandMargin posterior_band_margin(const ContextStatsTable& stats, double eta,
                                          const PriorSpec& prior) {
    if (prior.depth != stats.depth()) {
        throw UsageError("prior depth does not match the stats table");
    }
    if (!(eta > 0.0)) throw UsageError("learning rate must be positive or +inf");

    PosteriorBandMargin out{kPosInf, -1};
    for (int h = 0; h <= stats.depth(); ++h) {
        const double log_g = prior.log_g_at(h);
        if (log_g == kNegInf) continue;
        const double width = std::ldexp(1.0, h) * kLn2; // 2^h ln 2
        const double best = static_cast<double>(stats.best_order_loss(h));

        double lo, hi;
        if (std::isinf(eta)) {
            // ln Q(h) ~ -eta * m.loss + (log_g + coeff); the exponent must match
            // the independently maintained best-order loss exactly.
            const LimitTerm m = level_limit_mass(stats, h);
            if (m.loss != best) {
                return PosteriorBandMargin{kNegInf, h};
            }
            lo = m.log_coeff;
            hi = width - m.log_coeff;
        } else {
            const double value = log_g + level_log_mass(stats, h, eta);
            lo = value - (-eta * best + log_g);
            hi = (-eta * best + log_g + width) - value;
        }
        if (lo < out.margin) out = {lo, h};
        if (hi < out.margin) out = {hi, h};
    }
    return out;
}

StepResult step(ContextStatsTable& stats, HedgeState& hedge, const PriorSpec& prior,
                const ContextWindow& context, Symbol outcome) {
    const double eta = hedge.eta();
    StepResult result;
    result.prediction = predict(stats, context, eta, prior);
    const RoundLosses losses = round_losses(result.prediction, outcome, eta);
    result.trace.eta = eta;
    result.trace.expected = losses.expected;
    result.trace.mix = losses.mix;
    result.trace.variance = losses.variance;
    result.trace.posterior = model_posterior(stats, eta, prior);
    stats.record(context, outcome);
    result.trace.gap = hedge.advance(losses);
    return result;
}

std::uint64_t predict_slot_visits(const PriorSpec& prior) {
    std::uint64_t visits = 0;
    for (int h = 0; h <= prior.depth; ++h) {
        if (prior.log_g_at(h) > kNegInf) visits += std::uint64_t{1} << h;
    }
    return visits;
}

} // namespace ctah
