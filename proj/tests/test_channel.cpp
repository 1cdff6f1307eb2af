#include "ainsim/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ainsim;

namespace {

TEST(SampleMimoChannel, SameSeedIsBitIdentical) {
    const RunSeed s{42, 7};
    const auto a = sample_mimo_channel(1, s);
    const auto b = sample_mimo_channel(1, s);
    EXPECT_EQ(a.h_11(0, 0), b.h_11(0, 0));
    EXPECT_EQ(a.h_2r(0, 0), b.h_2r(0, 0));
    const auto c = sample_mimo_channel(1, RunSeed{42, 8});
    EXPECT_NE(a.h_11(0, 0), c.h_11(0, 0));
}

TEST(SampleMimoChannel, ShapesAreMByM) {
    const auto ch = sample_mimo_channel(4, RunSeed{1, 0});
    for (const auto* h : {&ch.h_r1, &ch.h_r2, &ch.h_11, &ch.h_12, &ch.h_21, &ch.h_22, &ch.h_1r,
                          &ch.h_2r}) {
        EXPECT_EQ(h->rows(), 4);
        EXPECT_EQ(h->cols(), 4);
        EXPECT_LT(condition_number(*h), kSingularCondition);
    }
}

TEST(SampleMimoChannel, RejectsNonPositiveM) {
    EXPECT_THROW(sample_mimo_channel(0, RunSeed{}), ArgumentError);
}

// Monte Carlo moment estimate: per-entry variance of h_11 over 1e5 draws.
TEST(SampleMimoChannel, EntryVarianceNearUnit) {
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto ch = sample_mimo_channel(1, RunSeed{9001, i});
        const cplx z = ch.h_11(0, 0);
        sum += z.real() + z.imag();
        sumsq += std::norm(z);
    }
    const double var = sumsq / n;  // E|z|^2, mean is 0
    EXPECT_GE(var, 0.99);
    EXPECT_LE(var, 1.01);
    EXPECT_NEAR(sum / (2 * n), 0.0, 0.01);
}

TEST(SampleScalarChannel, DeterministicAndNonzero) {
    const RunSeed s{5, 3};
    const auto a = sample_scalar_channel(s);
    const auto b = sample_scalar_channel(s);
    EXPECT_EQ(a.h_r1, b.h_r1);
    EXPECT_EQ(a.h_22, b.h_22);
    for (double h : {a.h_r1, a.h_r2, a.h_11, a.h_12, a.h_21, a.h_22, a.h_1r, a.h_2r})
        EXPECT_NE(h, 0.0);
}

// Monte Carlo moment estimate: mean of h_r1 over 1e5 draws.
TEST(SampleScalarChannel, MeanNearZero) {
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto ch = sample_scalar_channel(RunSeed{777, i});
        sum += ch.h_r1;
        ASSERT_NE(ch.h_r1, 0.0);
    }
    EXPECT_GE(sum / n, -0.02);
    EXPECT_LE(sum / n, 0.02);
}

TEST(SampleNoise, ZeroVarianceGivesZeroVector) {
    const auto n = sample_noise(4, 0.0, RunSeed{3, 1});
    EXPECT_EQ(n.size(), 4);
    EXPECT_EQ(n.norm(), 0.0);
}

TEST(SampleNoise, NegativeVarianceIsAnError) {
    EXPECT_THROW(sample_noise(1, -1.0, RunSeed{}), ArgumentError);
    EXPECT_THROW(sample_noise_real(1, -0.5, RunSeed{}), ArgumentError);
}

TEST(SampleNoise, SameSeedGivesIdenticalVectors) {
    const RunSeed s{11, 4};
    const auto a = sample_noise(8, 2.5, s);
    const auto b = sample_noise(8, 2.5, s);
    EXPECT_TRUE(a == b);
}

// Monte Carlo moment estimate: empirical variance over 1e6 unit-variance draws.
TEST(SampleNoise, EmpiricalVarianceNearUnit) {
    const int n = 1000000;
    Rng rng(RunSeed{123, kStreamNoise});
    double sumsq = 0.0;
    for (int i = 0; i < n; ++i) sumsq += std::norm(rng.cnormal());
    const double var = sumsq / n;
    EXPECT_GE(var, 0.997);
    EXPECT_LE(var, 1.003);
}

// Streams with different stream_id must be statistically independent.
TEST(Rng, StreamsAreUncorrelated) {
    const int n = 200000;
    Rng a(RunSeed{2024, 1});
    Rng b(RunSeed{2024, 2});
    double cross = 0.0, va = 0.0, vb = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a.normal();
        const double y = b.normal();
        cross += x * y;
        va += x * x;
        vb += y * y;
    }
    const double corr = cross / std::sqrt(va * vb);
    EXPECT_NEAR(corr, 0.0, 0.01);
}

TEST(RunSeed, DerivedStreamsDiffer) {
    const RunSeed root{1, 0};
    const auto a = root.derived(kStreamChannel);
    const auto b = root.derived(kStreamNoise);
    EXPECT_NE(a.stream_id, b.stream_id);
    EXPECT_EQ(a.seed, root.seed);
    EXPECT_EQ(root.derived(kStreamChannel).stream_id, a.stream_id);
}

}  // namespace
