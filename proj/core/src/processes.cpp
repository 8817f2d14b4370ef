#include "ctah/processes.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <string>

#include "ctah/errors.hpp"

namespace ctah {

void validate(const StochasticSpec& spec, bool require_unique_best) {
    if (spec.depth < 0 || spec.depth > ContextWindow::kMaxDepth) {
        throw ConfigError("process depth out of range: " + std::to_string(spec.depth));
    }
    if (spec.true_order < 0 || spec.true_order > spec.depth) {
        throw ConfigError("true order must lie in [0, depth]");
    }
    if (!(spec.covariate_bias >= 0.0 && spec.covariate_bias <= 1.0)) {
        throw ConfigError("covariate bias must lie in [0, 1]");
    }
    if (spec.cond_table.size() != (std::size_t{1} << spec.true_order)) {
        throw ConfigError("conditional table must have 2^order entries");
    }
    for (double p : spec.cond_table) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("conditional probabilities must lie in [0, 1]");
        if (require_unique_best && p == 0.5) {
            throw ConfigError("conditional probability of exactly 1/2 has no unique best prediction");
        }
    }
}

StochasticSpec xor3_spec(int depth) {
    if (depth < 3) throw ConfigError("xor3 needs depth >= 3");
    StochasticSpec spec;
    spec.depth = depth;
    spec.true_order = 3;
    spec.cond_table.resize(8);
    for (std::uint32_t key = 0; key < 8; ++key) {
        const bool odd = (std::popcount(key) & 1) != 0;
        spec.cond_table[key] = odd ? 0.8 : 0.2;
    }
    validate(spec, true);
    return spec;
}

StochasticSpec iid07_spec(int depth) {
    StochasticSpec spec;
    spec.depth = depth;
    spec.true_order = 0;
    spec.cond_table = {0.7};
    validate(spec, true);
    return spec;
}

ProcessAnalytics analytics(const StochasticSpec& spec) {
    validate(spec);
    const int d = spec.true_order;
    ProcessAnalytics out;
    out.pi_star.assign(static_cast<std::size_t>(spec.depth) + 1, 0.0);
    out.best_predictor.resize(std::size_t{1} << d);

    // Probability of one packed key under the i.i.d. covariate stream.
    auto key_prob = [&](std::uint32_t key, int bits) {
        double p = 1.0;
        for (int i = 0; i < bits; ++i) {
            p *= ((key >> i) & 1u) ? spec.covariate_bias : 1.0 - spec.covariate_bias;
        }
        return p;
    };

    out.beta_star = 1.0;
    for (std::uint32_t key = 0; key < (std::uint32_t{1} << d); ++key) {
        const double p1 = spec.cond_table[key];
        const double best = std::max(p1, 1.0 - p1);
        out.best_predictor[key] = Symbol(p1 > 0.5 ? 1 : 0);
        if (best < out.beta_star) out.beta_star = best;
    }

    for (int h = 0; h <= d; ++h) {
        // Marginalize the conditional over the d-h covariates older than the
        // h retained ones: extensions occupy the high bits of the d-bit key.
        double pi = 0.0;
        for (std::uint32_t low = 0; low < (std::uint32_t{1} << h); ++low) {
            double p1 = 0.0;
            for (std::uint32_t high = 0; high < (std::uint32_t{1} << (d - h)); ++high) {
                const std::uint32_t key = low | (high << h);
                p1 += key_prob(high, d - h) * spec.cond_table[key];
            }
            pi += key_prob(low, h) * (1.0 - std::max(p1, 1.0 - p1));
        }
        out.pi_star[static_cast<std::size_t>(h)] = pi;
    }
    for (int h = d + 1; h <= spec.depth; ++h) {
        out.pi_star[static_cast<std::size_t>(h)] = out.pi_star[static_cast<std::size_t>(d)];
    }

    out.alpha.resize(static_cast<std::size_t>(d));
    for (int h = 0; h < d; ++h) {
        out.alpha[static_cast<std::size_t>(h)] =
            (out.pi_star[static_cast<std::size_t>(h)] - out.pi_star[static_cast<std::size_t>(d)]) / 2.0;
    }
    return out;
}

StochasticStream::StochasticStream(StochasticSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), rng_(seed), window_(spec_.depth, 0) {
    validate(spec_);
    for (int i = 0; i < spec_.depth; ++i) {
        window_ = window_.shifted(Symbol(rng_.next_bernoulli(spec_.covariate_bias) ? 1 : 0));
    }
}

std::pair<ContextWindow, Symbol> StochasticStream::next() {
    const ContextWindow context = window_;
    const Symbol outcome(rng_.next_bernoulli(spec_.cond_table[context.suffix(spec_.true_order)]) ? 1 : 0);
    window_ = window_.shifted(Symbol(rng_.next_bernoulli(spec_.covariate_bias) ? 1 : 0));
    return {context, outcome};
}

std::vector<std::pair<ContextWindow, Symbol>> generate_stochastic(const StochasticSpec& spec,
                                                                  std::uint64_t horizon,
                                                                  std::uint64_t seed) {
    if (horizon < 1) throw ConfigError("horizon must be at least 1");
    StochasticStream stream(spec, seed);
    std::vector<std::pair<ContextWindow, Symbol>> out;
    out.reserve(horizon);
    for (std::uint64_t t = 0; t < horizon; ++t) out.push_back(stream.next());
    return out;
}

Symbol adversary_next(const Prediction& w) {
    if (w.w0 < w.w1) return Symbol(0);
    if (w.w1 < w.w0) return Symbol(1);
    return Symbol(1);
}

void write_sequence_file(const std::filesystem::path& path,
                         const std::vector<std::pair<ContextWindow, Symbol>>& rounds) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open sequence file for writing: " + path.string());
    for (const auto& [context, outcome] : rounds) {
        std::string bits;
        for (Symbol s : context.symbols()) bits.push_back(s.value() ? '1' : '0');
        out << bits << ' ' << outcome.value() << '\n';
    }
    if (!out) throw IoError("failed writing sequence file: " + path.string());
}

std::vector<std::pair<ContextWindow, Symbol>> read_sequence_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sequence file: " + path.string());
    std::vector<std::pair<ContextWindow, Symbol>> rounds;
    std::string bits;
    int outcome;
    int depth = -1;
    std::size_t line = 0;
    while (in >> bits >> outcome) {
        ++line;
        if (depth < 0) {
            depth = static_cast<int>(bits.size());
            if (depth > ContextWindow::kMaxDepth) {
                throw ConfigError("sequence file context wider than the supported depth");
            }
        }
        if (static_cast<int>(bits.size()) != depth || (outcome != 0 && outcome != 1)) {
            throw IoError("malformed sequence file line " + std::to_string(line) + " in " +
                          path.string());
        }
        std::vector<Symbol> symbols;
        symbols.reserve(bits.size());
        for (char c : bits) {
            if (c != '0' && c != '1') {
                throw IoError("malformed sequence file line " + std::to_string(line) + " in " +
                              path.string());
            }
            symbols.push_back(Symbol(c == '1' ? 1 : 0));
        }
        rounds.emplace_back(ContextWindow::from_symbols(symbols), Symbol(outcome));
    }
    if (!in.eof() && in.fail()) {
        throw IoError("malformed sequence file: " + path.string());
    }
    return rounds;
}

} // namespace ctah
