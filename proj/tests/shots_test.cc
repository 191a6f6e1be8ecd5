#include "qtangle/shots.h"

#include <gtest/gtest.h>

using namespace qtangle;

namespace {

struct NoisyCase {
    const char *state;
    double q;
    double tau4copy;
    double cut;
    double trb;
};

// Dense numpy oracle (tests/oracles/noisy_copies.py).
constexpr NoisyCase kNoisy[] = {
    {"ghz", 0.0, 0.0039062499999999931, 0.25, 0.125},
    {"ghz", 0.05, 0.0032699172973632753, 0.23476562499999995, 0.11890624999999985},
    {"ghz", 1.0, 0.00024414062499999997, 0.09375, 0.0625},
    {"w", 0.0, 0.0, 0.22222222222222235, 0.11111111111111112},
    {"w", 0.05, 5.3773611563223397e-05, 0.20969618055555569, 0.10637152777777777},
};

ShotPlan plan(Observable o, std::uint64_t n, std::uint64_t seed) {
    ShotPlan p;
    p.observable = o;
    p.n_shots = n;
    p.seed = seed;
    return p;
}

}  // namespace

TEST(shots, observable_names) {
    for (auto o : {Observable::tau4copy, Observable::cutA, Observable::cutB, Observable::cutC, Observable::trBpair}) {
        EXPECT_EQ(parse_observable(to_string(o)), o);
    }
    EXPECT_FALSE(parse_observable("tau").has_value());
    EXPECT_EQ(copies_needed(Observable::tau4copy), 4);
    EXPECT_EQ(copies_needed(Observable::cutB), 2);
}

TEST(shots, noisy_expectations_match_oracle) {
    for (const auto &c : kNoisy) {
        auto psi = std::string(c.state) == "ghz" ? ghz() : w();
        NoiseSpec noise{c.q};
        EXPECT_NEAR(noisy_expectation(psi, noise, Observable::tau4copy), c.tau4copy, 1e-14) << c.state << " " << c.q;
        EXPECT_NEAR(noisy_expectation(psi, noise, Observable::cutA), c.cut, 1e-14) << c.state << " " << c.q;
        EXPECT_NEAR(noisy_expectation(psi, noise, Observable::cutB), c.cut, 1e-14) << c.state << " " << c.q;
        EXPECT_NEAR(noisy_expectation(psi, noise, Observable::trBpair), c.trb, 1e-14) << c.state << " " << c.q;
    }
}

TEST(shots, zero_noise_matches_pure_route) {
    for (std::uint64_t seed = 0; seed < 20; seed++) {
        auto psi = haar_random(seed);
        for (auto o : {Observable::tau4copy, Observable::cutA, Observable::cutB, Observable::cutC, Observable::trBpair}) {
            EXPECT_NEAR(noisy_expectation(psi, NoiseSpec{0}, o), success_probability(psi, o), 1e-12);
        }
        for (Pair p : kAllPairs) {
            EXPECT_NEAR(noisy_expectation(psi, NoiseSpec{0}, Observable::trBpair, p),
                        success_probability(psi, Observable::trBpair, p), 1e-12);
        }
    }
}

TEST(shots, noise_spec_validation) {
    EXPECT_THROW(NoiseSpec{1.5}.validate(), std::invalid_argument);
    EXPECT_THROW(NoiseSpec{-0.1}.apply(ghz()), std::invalid_argument);
    EXPECT_NEAR(NoiseSpec{0.3}.apply(w()).trace().real(), 1, 1e-15);
}

TEST(shots, noise_bias_on_ghz) {
    double p = noisy_expectation(ghz(), NoiseSpec{0.05}, Observable::tau4copy);
    double limit = estimate_from_probability(Observable::tau4copy, p);
    EXPECT_NEAR(limit, std::sqrt(256 * 0.0032699172973632753), 1e-12);
    EXPECT_LT(limit - 1, -0.08);
}

TEST(shots, ghz_estimate_within_three_sigma) {
    auto r = sample(plan(Observable::tau4copy, 1000000, 1), ghz());
    EXPECT_FALSE(r.one_sided);
    EXPECT_GT(r.successes, 0u);
    EXPECT_LT(std::abs(r.estimate - 1), 3 * r.std_error);
    EXPECT_NEAR(r.std_error, 0.008, 0.001);
}

TEST(shots, product_state_has_no_successes) {
    auto zero = CVector::basis(2, 0);
    auto r = sample(plan(Observable::cutA, 10000, 3), product_state(zero, zero, zero));
    EXPECT_EQ(r.successes, 0u);
    EXPECT_TRUE(r.one_sided);
    EXPECT_EQ(r.std_error, 0);
    EXPECT_EQ(r.estimate, 0);
    double p_up = -std::expm1(std::log(0.05) / 10000);
    EXPECT_NEAR(r.upper_bound, std::sqrt(4 * p_up), 1e-15);
}

TEST(shots, w_tau4copy_has_no_successes) {
    auto r = sample(plan(Observable::tau4copy, 100000, 5), w());
    EXPECT_EQ(r.successes, 0u);
    EXPECT_TRUE(r.one_sided);
    EXPECT_GT(r.upper_bound, 0);
    EXPECT_LT(r.upper_bound, 0.2);
}

TEST(shots, deterministic_per_seed) {
    auto a = sample(plan(Observable::cutA, 100000, 9), haar_random(2));
    auto b = sample(plan(Observable::cutA, 100000, 9), haar_random(2));
    auto c = sample(plan(Observable::cutA, 100000, 10), haar_random(2));
    EXPECT_EQ(a, b);
    EXPECT_NE(a.successes, c.successes);
}

TEST(shots, thread_count_does_not_change_counts) {
    for (std::uint64_t n : {1ull, 65535ull, 65536ull, 65537ull, 300001ull}) {
        EXPECT_EQ(count_successes(n, 0.3, 42, 1), count_successes(n, 0.3, 42, 4)) << n;
    }
    EXPECT_EQ(count_successes(1000, 0, 1), 0u);
    EXPECT_EQ(count_successes(1000, 1, 1), 1000u);
}

TEST(shots, interval_coverage) {
    int covered = 0;
    const int runs = 200;
    for (int seed = 0; seed < runs; seed++) {
        auto r = sample(plan(Observable::tau4copy, 100000, static_cast<std::uint64_t>(seed)), ghz());
        covered += std::abs(r.estimate - 1) <= 2 * r.std_error;
    }
    EXPECT_GE(covered, 0.9 * runs);
}

TEST(shots, std_error_scales_with_root_n) {
    auto small = sample(plan(Observable::tau4copy, 10000, 77), ghz());
    auto large = sample(plan(Observable::tau4copy, 1000000, 77), ghz());
    EXPECT_NEAR(small.std_error / large.std_error, 10, 0.5);
}

TEST(shots, delta_std_error_forms) {
    double p = 1.0 / 256;
    EXPECT_NEAR(delta_std_error(Observable::tau4copy, p, 1000000), 128 * std::sqrt(p * (1 - p) / 1e6), 1e-15);
    EXPECT_NEAR(delta_std_error(Observable::cutA, 0.25, 100), std::sqrt(0.75 / 100), 1e-15);
    EXPECT_NEAR(delta_std_error(Observable::trBpair, 0.125, 100), 4 * std::sqrt(0.125 * 0.875 / 100), 1e-15);
    EXPECT_TRUE(std::isinf(delta_std_error(Observable::cutA, 0, 100)));
    EXPECT_EQ(delta_std_error(Observable::trBpair, 0, 100), 0);
    EXPECT_THROW(delta_std_error(Observable::cutA, 0.5, 0), std::invalid_argument);
}

TEST(shots, tr_b_estimator_is_linear) {
    EXPECT_NEAR(estimate_from_probability(Observable::trBpair, 0.125), 0.5, 1e-15);
    auto r = sample(plan(Observable::trBpair, 200000, 4), w());
    EXPECT_NEAR(r.estimate, 4.0 / 9, 5 * r.std_error);
}

TEST(shots, precision_plan) {
    auto p = precision_plan(0.01, ghz(), Observable::tau4copy);
    EXPECT_FALSE(p.degenerate);
    EXPECT_EQ(p.n_shots, 637500u);

    EXPECT_EQ(precision_plan(std::numeric_limits<double>::infinity(), ghz(), Observable::tau4copy).n_shots, 1u);

    auto zero = CVector::basis(2, 0);
    auto d = precision_plan(0.01, product_state(zero, zero, zero), Observable::cutA);
    EXPECT_TRUE(d.degenerate);
    EXPECT_FALSE(d.reason.empty());

    EXPECT_THROW(precision_plan(0, ghz(), Observable::cutA), std::invalid_argument);
}

TEST(shots, plan_validation) {
    EXPECT_THROW(sample(plan(Observable::cutA, 0, 1), ghz()), std::invalid_argument);
    EXPECT_THROW(sample_probability(plan(Observable::cutA, 10, 1), 1.5), std::domain_error);
}
