#include "ctah/oracle_naive.hpp"

#include <cmath>
#include <string>

#include "ctah/context_stats.hpp"
#include "ctah/errors.hpp"
#include "ctah/forecaster.hpp"
#include "ctah/math_util.hpp"
#include "ctah/rng.hpp"

namespace ctah {

int order_of(const TreeExpert& expert) {
    for (int d = 0; d < expert.depth; ++d) {
        // Depends only on the d most recent symbols iff every key agrees with
        // its low-d-bit representative.
        const std::uint32_t mask = (std::uint32_t{1} << d) - 1;
        bool invariant = true;
        const std::uint32_t keys = std::uint32_t{1} << expert.depth;
        for (std::uint32_t k = 0; k < keys && invariant; ++k) {
            invariant = expert.output(k) == expert.output(k & mask);
        }
        if (invariant) return d;
    }
    return expert.depth;
}

NaiveEnsemble::NaiveEnsemble(int depth, const PriorSpec& prior) : depth_(depth) {
    if (depth < 0 || depth > kMaxDepth) {
        throw ConfigError("naive ensemble depth must be in [0, " + std::to_string(kMaxDepth) +
                          "], got " + std::to_string(depth));
    }
    if (prior.depth != depth) throw UsageError("prior depth does not match ensemble depth");

    const std::size_t count = std::size_t{1} << (std::size_t{1} << depth);
    orders_.resize(count);
    log_prior_.resize(count);
    cum_loss_.assign(count, 0);
    for (std::size_t f = 0; f < count; ++f) {
        const int order = order_of(TreeExpert{depth, static_cast<std::uint32_t>(f)});
        orders_[f] = order;
        // log( sum_{h >= order} g(h) ) - log Z(g)
        double mass = kNegInf;
        for (int h = order; h <= depth; ++h) mass = log_add(mass, prior.log_g_at(h));
        log_prior_[f] = mass - prior.log_z;
    }
}

Prediction NaiveEnsemble::predict(const ContextWindow& context, double eta) const {
    if (context.depth() != depth_) throw UsageError("context depth does not match ensemble");
    if (!(eta > 0.0)) throw UsageError("learning rate must be positive or +inf");
    const std::uint32_t key = context.suffix(depth_);

    if (std::isinf(eta)) {
        // All prior mass concentrates on minimal-loss experts; aggregate the
        // prior-weighted mass of the argmin set per output symbol.
        std::uint32_t best[2] = {UINT32_MAX, UINT32_MAX};
        double log_mass[2] = {kNegInf, kNegInf};
        for (std::size_t f = 0; f < cum_loss_.size(); ++f) {
            if (log_prior_[f] == kNegInf) continue;
            const int y = expert(f).output(key).value();
            if (cum_loss_[f] < best[y]) {
                best[y] = cum_loss_[f];
                log_mass[y] = log_prior_[f];
            } else if (cum_loss_[f] == best[y]) {
                log_mass[y] = log_add(log_mass[y], log_prior_[f]);
            }
        }
        if (best[0] < best[1]) return Prediction{1.0, 0.0};
        if (best[1] < best[0]) return Prediction{0.0, 1.0};
        const double total = log_add(log_mass[0], log_mass[1]);
        return Prediction{std::exp(log_mass[0] - total), std::exp(log_mass[1] - total)};
    }

    double score[2] = {kNegInf, kNegInf};
    for (std::size_t f = 0; f < cum_loss_.size(); ++f) {
        const int y = expert(f).output(key).value();
        score[y] = log_add(score[y], log_prior_[f] - eta * cum_loss_[f]);
    }
    const double total = log_add(score[0], score[1]);
    return Prediction{std::exp(score[0] - total), std::exp(score[1] - total)};
}

double NaiveEnsemble::expert_weight(std::size_t index, double eta) const {
    if (!(eta > 0.0) || std::isinf(eta)) throw UsageError("expert_weight needs a finite rate");
    double total = kNegInf;
    for (std::size_t f = 0; f < cum_loss_.size(); ++f) {
        total = log_add(total, log_prior_[f] - eta * cum_loss_[f]);
    }
    return std::exp(log_prior_[index] - eta * cum_loss_[index] - total);
}

void NaiveEnsemble::record(const ContextWindow& context, Symbol outcome) {
    if (context.depth() != depth_) throw UsageError("context depth does not match ensemble");
    const std::uint32_t key = context.suffix(depth_);
    for (std::size_t f = 0; f < cum_loss_.size(); ++f) {
        if (expert(f).output(key) != outcome) ++cum_loss_[f];
    }
}

double equivalence_check(int depth, const PriorSpec& prior, std::uint64_t horizon,
                         std::uint64_t seed) {
    if (depth > 3) throw ConfigError("equivalence check supports depth <= 3");
    if (horizon > 200) throw ConfigError("equivalence check supports horizon <= 200");
    ContextStatsTable stats(depth);
    HedgeState hedge;
    NaiveEnsemble ensemble(depth, prior);
    SplitMix64 rng(seed);

    ContextWindow window(depth, 0);
    for (int i = 0; i < depth; ++i) window = window.shifted(Symbol(rng.next_bit()));

    double max_dev = 0.0;
    for (std::uint64_t t = 0; t < horizon; ++t) {
        const Symbol outcome(rng.next_bit());
        const double eta = hedge.eta(); // the naive path consumes this trajectory
        const Prediction naive = ensemble.predict(window, eta);
        const StepResult res = step(stats, hedge, prior, window, outcome);
        const double dev = std::max(std::abs(naive.w0 - res.prediction.w0),
                                    std::abs(naive.w1 - res.prediction.w1));
        if (dev > max_dev) max_dev = dev;
        ensemble.record(window, outcome);
        window = window.shifted(Symbol(rng.next_bit()));
    }
    return max_dev;
}

} // namespace ctah
