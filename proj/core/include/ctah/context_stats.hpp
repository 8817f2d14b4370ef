#ifndef CTAH_CONTEXT_STATS_HPP
#define CTAH_CONTEXT_STATS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ctah/symbol.hpp"

namespace ctah {

// Cumulative losses of the two constant predictions at one context:
// loss_predict[y] counts the arrivals of this context whose outcome was not y.
struct LossCounts {
    std::uint32_t loss_predict[2] = {0, 0};

    std::uint64_t total() const {
        return std::uint64_t{loss_predict[0]} + std::uint64_t{loss_predict[1]};
    }
    std::uint32_t min_loss() const {
        return loss_predict[0] < loss_predict[1] ? loss_predict[0] : loss_predict[1];
    }
    friend bool operator==(const LossCounts&, const LossCounts&) = default;
};

// Per-suffix-length loss counts for every context length h in {0..D}, stored
// as dense arrays of 2^h slots. One record() touches exactly D+1 slots.
class ContextStatsTable {
public:
    static constexpr int kMaxDepth = 24; // memory guard: 2^{depth+1} count pairs

    explicit ContextStatsTable(int depth);

    int depth() const { return depth_; }
    std::uint64_t round() const { return round_; }

    // Record one outcome under `context`: for every h, the slot at
    // context.suffix(h) has loss_predict[1 - outcome] incremented.
    void record(const ContextWindow& context, Symbol outcome);

    // Counts at one context key; unseen keys read as (0,0).
    LossCounts loss_counts(int level, std::uint32_t key) const;

    // Number of arrivals of a context key.
    std::uint64_t appearance_count(int level, std::uint32_t key) const;

    // Number of length-h contexts seen at least once.
    std::uint64_t seen_contexts(int level) const;

    // Hindsight loss of the best tree expert of the given order:
    // sum over contexts of min_y loss_predict[y].
    std::uint64_t best_order_loss(int order) const;

    // best_order_loss(order) / t; undefined before the first round.
    double estimated_unpredictability(int order) const;

    // Read-only view of one level's slots (size 2^level).
    std::span<const LossCounts> level(int h) const;

private:
    void check_level(int level) const;

    int depth_;
    std::uint64_t round_ = 0;
    std::vector<std::vector<LossCounts>> levels_;
    std::vector<std::uint64_t> seen_;     // per level: contexts with any arrival
    std::vector<std::uint64_t> sum_min_;  // per level: sum over slots of min_y
};

} // namespace ctah

#endif // CTAH_CONTEXT_STATS_HPP
