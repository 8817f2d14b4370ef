#ifndef CTAH_SYMBOL_HPP
#define CTAH_SYMBOL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ctah/errors.hpp"

namespace ctah {

// One binary outcome/covariate value.
class Symbol {
public:
    constexpr Symbol() = default;
    explicit constexpr Symbol(int value) : value_(static_cast<std::uint8_t>(value)) {
        if (value != 0 && value != 1) throw UsageError("Symbol value must be 0 or 1");
    }

    constexpr int value() const { return value_; }
    constexpr Symbol complement() const { return Symbol(1 - value_); }

    friend constexpr bool operator==(Symbol, Symbol) = default;

private:
    std::uint8_t value_ = 0;
};

// The covariate window (c_1, ..., c_D) with c_D most recent, packed so that
// bit i of the key holds c_{D-i}. Truncation to the h most recent bits is a
// mask of the low h bits.
class ContextWindow {
public:
    static constexpr int kMaxDepth = 24;

    constexpr ContextWindow() = default;

    ContextWindow(int depth, std::uint32_t bits) : depth_(depth), bits_(bits) {
        if (depth < 0 || depth > kMaxDepth) throw UsageError("context depth out of range");
        if (depth < 32 && (bits >> depth) != 0) throw UsageError("context bits exceed depth");
    }

    // Symbols ordered oldest first, most recent last.
    static ContextWindow from_symbols(std::span<const Symbol> symbols) {
        std::uint32_t bits = 0;
        int depth = static_cast<int>(symbols.size());
        for (int i = 0; i < depth; ++i) {
            // symbols[depth-1] is the most recent and lands in bit 0
            bits |= static_cast<std::uint32_t>(symbols[i].value()) << (depth - 1 - i);
        }
        return ContextWindow(depth, bits);
    }

    int depth() const { return depth_; }
    std::uint32_t bits() const { return bits_; }

    // Key of the h most recent symbols; suffix(0) is the empty context.
    std::uint32_t suffix(int h) const {
        if (h < 0 || h > depth_) throw UsageError("suffix length out of range");
        return h == 0 ? 0u : bits_ & ((std::uint32_t{1} << h) - 1);
    }

    ContextWindow truncated(int h) const { return ContextWindow(h, suffix(h)); }

    // Slide the window one step: `newest` enters, the oldest symbol drops out.
    ContextWindow shifted(Symbol newest) const {
        std::uint32_t mask = depth_ == 0 ? 0u : (std::uint32_t{1} << depth_) - 1;
        return ContextWindow(depth_, ((bits_ << 1) | static_cast<std::uint32_t>(newest.value())) & mask);
    }

    std::vector<Symbol> symbols() const {
        std::vector<Symbol> out(static_cast<std::size_t>(depth_));
        for (int i = 0; i < depth_; ++i) {
            out[static_cast<std::size_t>(i)] = Symbol(static_cast<int>((bits_ >> (depth_ - 1 - i)) & 1u));
        }
        return out;
    }

    friend bool operator==(const ContextWindow&, const ContextWindow&) = default;

private:
    int depth_ = 0;
    std::uint32_t bits_ = 0;
};

} // namespace ctah

#endif // CTAH_SYMBOL_HPP
