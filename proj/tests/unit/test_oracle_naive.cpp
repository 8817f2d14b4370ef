#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "ctah/errors.hpp"
#include "ctah/math_util.hpp"
#include "ctah/oracle_naive.hpp"
#include "ctah/rng.hpp"

using namespace ctah;

TEST_CASE("expert order by truth-table collapse") {
    CHECK(order_of(TreeExpert{2, 0b0000}) == 0); // constant 0
    CHECK(order_of(TreeExpert{2, 0b1111}) == 0); // constant 1
    CHECK(order_of(TreeExpert{2, 0b1010}) == 1); // f(x) = most recent bit
    CHECK(order_of(TreeExpert{2, 0b0010}) == 2); // entries differ in the oldest bit
    CHECK(order_of(TreeExpert{0, 0b1}) == 0);
    CHECK(order_of(TreeExpert{3, 0b10101010}) == 1);
    CHECK(order_of(TreeExpert{3, 0b11001100}) == 2); // second-most-recent bit
}

TEST_CASE("order histogram counts collapse classes") {
    const int depth = 3;
    const PriorSpec prior = make_prior(PriorKind::proportional, depth);
    const NaiveEnsemble ensemble(depth, prior);
    CHECK(ensemble.expert_count() == 256);

    std::map<int, std::size_t> cumulative;
    for (std::size_t f = 0; f < ensemble.expert_count(); ++f) {
        for (int d = ensemble.expert_order(f); d <= depth; ++d) ++cumulative[d];
    }
    // experts of order <= d are exactly the 2^{2^d} functions of the low d bits
    CHECK(cumulative[0] == 2);
    CHECK(cumulative[1] == 4);
    CHECK(cumulative[2] == 16);
    CHECK(cumulative[3] == 256);
}

TEST_CASE("prior masses sum to one and group by order") {
    const int depth = 3;
    for (PriorKind kind : {PriorKind::uniform, PriorKind::proportional}) {
        const PriorSpec prior = make_prior(kind, depth);
        const NaiveEnsemble ensemble(depth, prior);
        double total = 0.0;
        std::vector<double> mass_by_max_order(static_cast<std::size_t>(depth) + 1, 0.0);
        for (std::size_t f = 0; f < ensemble.expert_count(); ++f) {
            const double w = std::exp(ensemble.log_prior(f));
            total += w;
            for (int d = ensemble.expert_order(f); d <= depth; ++d) {
                mass_by_max_order[static_cast<std::size_t>(d)] += w;
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        // mass of {order <= d} = sum_h g(h) 2^{2^min(h,d)} / Z
        for (int d = 0; d <= depth; ++d) {
            double expected = kNegInf;
            for (int h = 0; h <= depth; ++h) {
                const int m = h < d ? h : d;
                expected = log_add(expected,
                                   prior.log_g_at(h) + std::ldexp(1.0, m) * kLn2);
            }
            CHECK(mass_by_max_order[static_cast<std::size_t>(d)] ==
                  doctest::Approx(std::exp(expected - prior.log_z)).epsilon(1e-12));
        }
    }
}

TEST_CASE("fresh ensembles predict a fair coin") {
    for (int depth : {0, 1, 2}) {
        for (PriorKind kind : {PriorKind::uniform, PriorKind::proportional}) {
            const NaiveEnsemble ensemble(depth, make_prior(kind, depth));
            const ContextWindow window(depth, 0);
            for (double eta : {0.5, 3.0, kPosInf}) {
                const Prediction w = ensemble.predict(window, eta);
                CHECK(w.w0 == doctest::Approx(0.5).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("complementary experts split the rounds") {
    const int depth = 2;
    NaiveEnsemble ensemble(depth, make_prior(PriorKind::proportional, depth));
    SplitMix64 rng(3);
    ContextWindow window(depth, 0);
    const int horizon = 25;
    for (int t = 0; t < horizon; ++t) {
        window = window.shifted(Symbol(rng.next_bit()));
        ensemble.record(window, Symbol(rng.next_bit()));
    }
    const std::uint32_t full = (std::uint32_t{1} << (std::uint32_t{1} << depth)) - 1;
    for (std::size_t f = 0; f < ensemble.expert_count(); ++f) {
        const std::size_t complement = f ^ full;
        CHECK(ensemble.cum_loss(f) + ensemble.cum_loss(complement) ==
              static_cast<std::uint32_t>(horizon));
    }
    // constant-0 expert after outcomes [0,0,1] loses exactly once
    NaiveEnsemble small(0, make_prior(PriorKind::uniform, 0));
    for (int y : {0, 0, 1}) small.record(ContextWindow(0, 0), Symbol(y));
    CHECK(small.cum_loss(0) == 1);
}

TEST_CASE("expert weights stay normalized along a run") {
    NaiveEnsemble ensemble(2, make_prior(PriorKind::proportional, 2));
    SplitMix64 rng(8);
    ContextWindow window(2, 0);
    for (int t = 0; t < 10; ++t) {
        window = window.shifted(Symbol(rng.next_bit()));
        ensemble.record(window, Symbol(rng.next_bit()));
        double total = 0.0;
        for (std::size_t f = 0; f < ensemble.expert_count(); ++f) {
            total += ensemble.expert_weight(f, 0.7);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("efficient and naive updates agree to 1e-9") {
    for (int depth : {1, 2, 3}) {
        for (PriorKind kind : {PriorKind::uniform, PriorKind::proportional}) {
            const double dev = equivalence_check(depth, make_prior(kind, depth), 50, 7);
            CHECK(dev <= 1e-9);
        }
    }
    // arbitrary prior tables, including one with a zero entry
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(equivalence_check(2, make_custom_prior(ones), 50, 11) <= 1e-9);
    const std::vector<double> gapped{0.0, 1.0, 0.5};
    CHECK(equivalence_check(2, make_custom_prior(gapped), 50, 12) <= 1e-9);
}

TEST_CASE("oracle guards") {
    CHECK_THROWS_AS(NaiveEnsemble(5, make_prior(PriorKind::uniform, 5)), ConfigError);
    CHECK_THROWS_AS((void)equivalence_check(4, make_prior(PriorKind::uniform, 4), 50, 1),
                    ConfigError);
    CHECK_THROWS_AS((void)equivalence_check(2, make_prior(PriorKind::uniform, 2), 500, 1),
                    ConfigError);
}
