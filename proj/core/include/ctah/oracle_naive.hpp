#ifndef CTAH_ORACLE_NAIVE_HPP
#define CTAH_ORACLE_NAIVE_HPP

#include <cstdint>
#include <vector>

#include "ctah/hedge.hpp"
#include "ctah/prior.hpp"
#include "ctah/symbol.hpp"

namespace ctah {

// A tree expert as a packed truth table: bit k holds the output for the full
// context whose key is k.
struct TreeExpert {
    int depth = 0;
    std::uint32_t truth_table = 0;

    Symbol output(std::uint32_t context_key) const {
        return Symbol(static_cast<int>((truth_table >> context_key) & 1u));
    }
};

// Smallest d such that the expert's output depends only on the d most recent
// context symbols.
int order_of(const TreeExpert& expert);

// All 2^{2^D} tree experts with their prior log weights and cumulative losses,
// maintained by the direct exponential-weights update. Exists as a correctness
// oracle for the efficient forecaster; guarded to depth <= 4.
class NaiveEnsemble {
public:
    static constexpr int kMaxDepth = 4;

    NaiveEnsemble(int depth, const PriorSpec& prior);

    int depth() const { return depth_; }
    std::size_t expert_count() const { return cum_loss_.size(); }

    const TreeExpert expert(std::size_t index) const {
        return TreeExpert{depth_, static_cast<std::uint32_t>(index)};
    }
    int expert_order(std::size_t index) const { return orders_[index]; }
    double log_prior(std::size_t index) const { return log_prior_[index]; }
    std::uint32_t cum_loss(std::size_t index) const { return cum_loss_[index]; }

    // Exponential-weights mass aggregated by each expert's output on the
    // current context; supports eta = +inf via the limit rule (prior-weighted
    // mass split among minimal-loss experts).
    Prediction predict(const ContextWindow& context, double eta) const;

    // Current weight of one expert at learning rate eta (finite eta only).
    double expert_weight(std::size_t index, double eta) const;

    void record(const ContextWindow& context, Symbol outcome);

private:
    int depth_;
    std::vector<int> orders_;
    std::vector<double> log_prior_;
    std::vector<std::uint32_t> cum_loss_;
};

// Run the efficient and naive updates in lockstep on a random covariate/outcome
// stream, sharing the AdaHedge learning-rate trajectory produced by the
// efficient path, and return the maximum per-round sup-norm deviation of the
// two predictive distributions.
double equivalence_check(int depth, const PriorSpec& prior, std::uint64_t horizon,
                         std::uint64_t seed);

} // namespace ctah

#endif // CTAH_ORACLE_NAIVE_HPP
