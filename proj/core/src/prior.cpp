#include "ctah/prior.hpp"

#include <cmath>
#include <string>

#include "ctah/errors.hpp"
#include "ctah/math_util.hpp"
#include "ctah/symbol.hpp"

namespace ctah {

namespace {

double compute_log_z(std::span<const double> log_g) {
    // log Z = logsumexp_h (2^h ln2 + log g(h))
    double acc = kNegInf;
    for (std::size_t h = 0; h < log_g.size(); ++h) {
        acc = log_add(acc, std::ldexp(1.0, static_cast<int>(h)) * kLn2 + log_g[h]);
    }
    return acc;
}

PriorSpec finalize(PriorKind kind, std::vector<double> log_g) {
    const int depth = static_cast<int>(log_g.size()) - 1;
    if (depth < 0 || depth > ContextWindow::kMaxDepth) {
        throw ConfigError("prior depth out of range: " + std::to_string(depth));
    }
    bool any_positive = false;
    for (double lg : log_g) {
        if (lg > kNegInf) any_positive = true;
    }
    if (!any_positive) throw ConfigError("prior table must have at least one positive entry");

    PriorSpec spec;
    spec.kind = kind;
    spec.depth = depth;
    spec.log_z = compute_log_z(log_g);
    spec.log_g = std::move(log_g);
    return spec;
}

} // namespace

PriorSpec make_prior(PriorKind kind, int depth) {
    if (depth < 0 || depth > ContextWindow::kMaxDepth) {
        throw ConfigError("prior depth out of range: " + std::to_string(depth));
    }
    std::vector<double> log_g(static_cast<std::size_t>(depth) + 1, kNegInf);
    switch (kind) {
        case PriorKind::uniform:
            log_g[static_cast<std::size_t>(depth)] = 0.0;
            break;
        case PriorKind::proportional:
            // g(h) = 2^{-2^{h+1}}
            for (int h = 0; h <= depth; ++h) {
                log_g[static_cast<std::size_t>(h)] = -std::ldexp(1.0, h + 1) * kLn2;
            }
            break;
        case PriorKind::custom:
            throw UsageError("custom priors are built from a table");
    }
    return finalize(kind, std::move(log_g));
}

PriorSpec make_custom_prior(std::span<const double> g) {
    std::vector<double> log_g(g.size());
    for (std::size_t h = 0; h < g.size(); ++h) {
        if (g[h] < 0.0) throw ConfigError("prior table entries must be nonnegative");
        log_g[h] = g[h] > 0.0 ? std::log(g[h]) : kNegInf;
    }
    return finalize(PriorKind::custom, std::move(log_g));
}

PriorSpec make_custom_prior_log(std::span<const double> log_g) {
    return finalize(PriorKind::custom, std::vector<double>(log_g.begin(), log_g.end()));
}

} // namespace ctah
