#include "ctah/context_stats.hpp"

#include <string>

#include "ctah/errors.hpp"

namespace ctah {

ContextStatsTable::ContextStatsTable(int depth) : depth_(depth) {
    if (depth < 0 || depth > kMaxDepth) {
        throw ConfigError("context depth must be in [0, " + std::to_string(kMaxDepth) +
                          "], got " + std::to_string(depth));
    }
    levels_.resize(static_cast<std::size_t>(depth) + 1);
    for (int h = 0; h <= depth; ++h) {
        levels_[static_cast<std::size_t>(h)].resize(std::size_t{1} << h);
    }
    seen_.assign(static_cast<std::size_t>(depth) + 1, 0);
    sum_min_.assign(static_cast<std::size_t>(depth) + 1, 0);
}

void ContextStatsTable::record(const ContextWindow& context, Symbol outcome) {
    if (context.depth() != depth_) {
        throw UsageError("context depth " + std::to_string(context.depth()) +
                         " does not match table depth " + std::to_string(depth_));
    }
    const int wrong = 1 - outcome.value();
    for (int h = 0; h <= depth_; ++h) {
        LossCounts& slot = levels_[static_cast<std::size_t>(h)][context.suffix(h)];
        if (slot.total() == 0) ++seen_[static_cast<std::size_t>(h)];
        const std::uint32_t old_min = slot.min_loss();
        ++slot.loss_predict[wrong];
        sum_min_[static_cast<std::size_t>(h)] += slot.min_loss() - old_min;
    }
    ++round_;
}

void ContextStatsTable::check_level(int level) const {
    if (level < 0 || level > depth_) {
        throw UsageError("context length " + std::to_string(level) + " out of range [0, " +
                         std::to_string(depth_) + "]");
    }
}

LossCounts ContextStatsTable::loss_counts(int level, std::uint32_t key) const {
    check_level(level);
    if (level < 32 && (key >> level) != 0) throw UsageError("context key exceeds level width");
    return levels_[static_cast<std::size_t>(level)][key];
}

std::uint64_t ContextStatsTable::appearance_count(int level, std::uint32_t key) const {
    return loss_counts(level, key).total();
}

std::uint64_t ContextStatsTable::seen_contexts(int level) const {
    check_level(level);
    return seen_[static_cast<std::size_t>(level)];
}

std::uint64_t ContextStatsTable::best_order_loss(int order) const {
    check_level(order);
    return sum_min_[static_cast<std::size_t>(order)];
}

double ContextStatsTable::estimated_unpredictability(int order) const {
    check_level(order);
    if (round_ == 0) throw EmptyDataError("estimated unpredictability is undefined before any round");
    return static_cast<double>(sum_min_[static_cast<std::size_t>(order)]) /
           static_cast<double>(round_);
}

std::span<const LossCounts> ContextStatsTable::level(int h) const {
    check_level(h);
    return levels_[static_cast<std::size_t>(h)];
}

} // namespace ctah
