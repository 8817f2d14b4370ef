#include <doctest.h>

#include <cmath>

#include "ctah/errors.hpp"
#include "ctah/hedge.hpp"
#include "ctah/math_util.hpp"
#include "ctah/rng.hpp"

using namespace ctah;

TEST_CASE("fresh state starts at rate +inf with zero accumulators") {
    const HedgeState state;
    CHECK(std::isinf(state.eta()));
    CHECK(state.gap_cum() == 0.0);
    CHECK(state.round() == 0);
    CHECK(state.expected_cum() == 0.0);
    CHECK(state.variance_cum() == 0.0);
}

TEST_CASE("round losses at a finite rate") {
    // mix loss -(1/eta) ln(0.5 + 0.5 e^{-ln2}) = -ln(3/4)/ln 2
    const RoundLosses r = round_losses(Prediction{0.5, 0.5}, Symbol(0), kLn2);
    CHECK(r.expected == 0.5);
    CHECK(r.mix == doctest::Approx(0.4150374992788437).epsilon(1e-12));
    CHECK(r.expected - r.mix == doctest::Approx(0.0849625007211562).epsilon(1e-10));
    CHECK(r.variance == 0.25);
}

TEST_CASE("the gap grows with the rate toward its infinite-rate value") {
    const Prediction w{0.5, 0.5};
    double prev = 0.0;
    for (double eta : {0.01, 0.1, 1.0, 4.0, 64.0}) {
        const RoundLosses r = round_losses(w, Symbol(0), eta);
        const double gap = r.expected - r.mix;
        CHECK(gap >= prev);
        CHECK(gap <= 0.5);
        prev = gap;
    }
    const RoundLosses lim = round_losses(w, Symbol(0), kPosInf);
    CHECK(lim.expected - lim.mix == 0.5);
}

TEST_CASE("no mass on the wrong symbol means zero gap") {
    for (double eta : {0.1, 1.0, 17.0, kPosInf}) {
        const RoundLosses r = round_losses(Prediction{1.0, 0.0}, Symbol(0), eta);
        CHECK(r.expected == 0.0);
        CHECK(r.mix == 0.0);
        CHECK(r.variance == 0.0);
    }
}

TEST_CASE("round losses at the infinite-rate limit") {
    const RoundLosses r = round_losses(Prediction{0.5, 0.5}, Symbol(1), kPosInf);
    CHECK(r.expected == 0.5);
    CHECK(r.mix == 0.0);

    // no mass on the outcome: the mix loss limit equals the certain unit loss
    const RoundLosses miss = round_losses(Prediction{1.0, 0.0}, Symbol(1), kPosInf);
    CHECK(miss.expected == 1.0);
    CHECK(miss.mix == 1.0);
}

TEST_CASE("round losses rejects bad arguments") {
    CHECK_THROWS_AS(round_losses(Prediction{0.7, 0.7}, Symbol(0), 1.0), UsageError);
    CHECK_THROWS_AS(round_losses(Prediction{0.5, 0.5}, Symbol(0), 0.0), UsageError);
    CHECK_THROWS_AS(round_losses(Prediction{0.5, 0.5}, Symbol(0), -1.0), UsageError);
}

TEST_CASE("advance drives the rate recursion") {
    HedgeState state;
    const double gap = state.advance(RoundLosses{0.5, 0.0, 0.25});
    CHECK(gap == 0.5);
    CHECK(state.gap_cum() == 0.5);
    CHECK(state.eta() == doctest::Approx(2.0 * kLn2).epsilon(1e-15));
    CHECK(state.round() == 1);

    // a zero gap leaves the rate unchanged
    const double eta_before = state.eta();
    state.advance(RoundLosses{0.3, 0.3, 0.21});
    CHECK(state.eta() == eta_before);
}

TEST_CASE("gap clamping and the consistency error") {
    HedgeState state;
    // within tolerance below zero: clamped
    CHECK(state.advance(RoundLosses{0.2, 0.2 + 5e-13, 0.16}) == 0.0);
    // beyond tolerance: a broken mix loss
    CHECK_THROWS_AS(state.advance(RoundLosses{0.2, 0.3, 0.16}), NumericsError);
    // above one: clamped to one
    CHECK(state.advance(RoundLosses{1.0, -1.0, 0.0}) == 1.0);
}

TEST_CASE("a hundred bounded gaps keep the rate above ln2/100") {
    HedgeState state;
    SplitMix64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const double h = rng.next_unit();
        state.advance(RoundLosses{h, h - rng.next_unit() * std::min(h, 1.0 - h), 0.0});
    }
    CHECK(state.gap_cum() <= 100.0);
    CHECK(state.eta() >= kLn2 / 100.0);
}

TEST_CASE("random trajectories satisfy the rate and bookkeeping invariants") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        SplitMix64 rng(seed);
        HedgeState state;
        double prev_eta = state.eta();
        const int horizon = 400;
        for (int t = 0; t < horizon; ++t) {
            const double w0 = rng.next_unit();
            const Prediction w{w0, 1.0 - w0};
            const Symbol outcome(rng.next_bit());
            const RoundLosses r = round_losses(w, outcome, state.eta());
            const double gap = state.advance(r);
            CHECK(gap >= 0.0);
            CHECK(gap <= 1.0);
            CHECK(state.eta() <= prev_eta);
            prev_eta = state.eta();
        }
        // bookkeeping: H - M = Delta up to clamping noise
        CHECK(state.expected_cum() - state.mix_cum() ==
              doctest::Approx(state.gap_cum()).epsilon(1e-12));
        // gap-variance inequality for the adaptive rate
        CHECK(state.gap_cum() <=
              std::sqrt(state.variance_cum() * kLn2) + (2.0 / 3.0) * kLn2 + 1.0 + 1e-9);
    }
}
