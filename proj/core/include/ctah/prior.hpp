#ifndef CTAH_PRIOR_HPP
#define CTAH_PRIOR_HPP

#include <span>
#include <vector>

namespace ctah {

enum class PriorKind { uniform, proportional, custom };

// Weight function g over model orders 0..D, kept as log values (-inf allowed),
// together with log Z(g) where Z(g) = sum_h 2^{2^h} g(h) normalizes the induced
// distribution on tree experts.
struct PriorSpec {
    PriorKind kind = PriorKind::uniform;
    int depth = 0;
    std::vector<double> log_g; // size depth + 1
    double log_z = 0.0;

    double log_g_at(int h) const { return log_g[static_cast<std::size_t>(h)]; }
};

// uniform: g(h) = [h == D], the prior-free weighting on full-order experts.
// proportional: g(h) = 2^{-2^{h+1}}, downweighting orders by class size.
PriorSpec make_prior(PriorKind kind, int depth);

// Arbitrary nonnegative table g(0..D); all-zero tables are rejected.
PriorSpec make_custom_prior(std::span<const double> g);

// Same, from log-domain values (-inf entries allowed).
PriorSpec make_custom_prior_log(std::span<const double> log_g);

} // namespace ctah

#endif // CTAH_PRIOR_HPP
