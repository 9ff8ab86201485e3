#include <cmath>

#include "test_support.hpp"

using namespace nncat;
using namespace nncat::testing;

TEST(Activation, SigmoidValues) {
    EXPECT_EQ(act_value(Activation::sigmoid, 0.0), 0.5);
    EXPECT_NEAR(act_value(Activation::sigmoid, 0.3775), 0.59326999, 5e-9);
    EXPECT_EQ(act_value(Activation::sigmoid, 0.3775), 1.0 / (1.0 + std::exp(-0.3775)));
}

TEST(Activation, IdentityIsIdentity) {
    for (double x : {-3.5, 0.0, 1e-300, 42.0}) {
        EXPECT_EQ(act_value(Activation::identity, x), x);
        EXPECT_EQ(act_deriv(Activation::identity, x), 1.0);
    }
}

TEST(Activation, Derivatives) {
    EXPECT_EQ(act_deriv(Activation::sigmoid, 0.0), 0.25);
    EXPECT_NEAR(act_deriv(Activation::sigmoid, 0.3775), frozen::sigmoid_deriv_03775, 1e-15);
    EXPECT_NEAR(act_deriv(Activation::tanh, 0.7), 1.0 - std::tanh(0.7) * std::tanh(0.7), 0.0);
    EXPECT_EQ(act_deriv(Activation::softplus, 0.0), 0.5);
}

TEST(Activation, NonFiniteArgumentsRejected) {
    for (Activation a : all_activations) {
        EXPECT_THROW(act_value(a, std::nan("")), DomainError);
        EXPECT_THROW(act_deriv(a, INFINITY), DomainError);
    }
}

TEST(Activation, CoordinatewiseMaps) {
    expect_near(act_map(Activation::sigmoid, Vec{0.3775, 0.3925}), Vec{0.59326999, 0.59688438}, 5e-9);
    const Vec v{-1.25, 0.0, 7.5};
    EXPECT_EQ(act_map(Activation::identity, v), v);
    EXPECT_EQ(act_map(Activation::sigmoid, Vec{0, 0}), (Vec{0.5, 0.5}));
    EXPECT_EQ(act_deriv_map(Activation::identity, v), (Vec{1, 1, 1}));
    EXPECT_THROW(act_map(Activation::tanh, Vec{0.0, NAN}), DomainError);
}

TEST(Activation, DerivativeMatchesCentralDifferences) {
    constexpr double eps = 1e-6;
    Rng rng(2024);
    for (Activation a : all_activations) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double z = uniform(rng, -10.0, 10.0);
            const double fd = (act_value(a, z + eps) - act_value(a, z - eps)) / (2 * eps);
            worst = std::max(worst, std::abs(act_deriv(a, z) - fd));
        }
        EXPECT_LE(worst, 1e-6) << to_string(a);
    }
}

TEST(Activation, Ranges) {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        const double z = uniform(rng, -30.0, 30.0);
        const double s = act_value(Activation::sigmoid, z);
        const double t = act_value(Activation::tanh, z * 0.5);
        EXPECT_GT(s, 0.0);
        EXPECT_LT(s, 1.0);
        EXPECT_GT(t, -1.0);
        EXPECT_LT(t, 1.0);
    }
}

TEST(Activation, SoftplusStableForLargeArguments) {
    EXPECT_NEAR(act_value(Activation::softplus, 800.0), 800.0, 1e-12);
    EXPECT_GE(act_value(Activation::softplus, -800.0), 0.0);
}

TEST(Activation, TagsRoundTrip) {
    for (Activation a : all_activations) EXPECT_EQ(parse_activation(to_string(a)), a);
    EXPECT_FALSE(parse_activation("relu").has_value());
    EXPECT_EQ(to_string(Activation::softplus), "softplus");
}
