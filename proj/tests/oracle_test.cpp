#include "test_support.hpp"

using namespace nncat;
using namespace nncat::testing;

TEST(FdLayerGradient, WorkedExampleSecondLayer) {
    const Vec b = layer_forward(mazur::first_layer(), mazur::input);
    const Gradient fd = fd_layer_gradient(mazur::second_layer(), b, mazur::loss());
    const Gradient analytic = layer_gradient(mazur::second_layer(), b, mazur::loss());
    EXPECT_TRUE(gradients_agree(fd, analytic, FdConfig{}.tol));
    expect_near(fd.matrix, frozen::second_gradient, 1e-9);
    // the printed (η-free) matrix is not what the finite differences see
    EXPECT_FALSE(gradients_agree(fd, Gradient{mazur::Expected{}.second_gradient}, 1e-5));
}

TEST(FdLayerGradient, ZeroErosionLoss) {
    const LossPredicate flat(2, [](const Vec&) { return 3.0; },
                             [](const Vec& y) { return Vec(y.size(), 0.0); });
    const Gradient fd = fd_layer_gradient(mazur::second_layer(), Vec{0.3, 0.4}, flat);
    for (double v : fd.matrix.data()) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(FdLayerGradient, LinearLossOnIdentityActivation) {
    // L(y) = η Σ y_i on an identity layer: every row of the gradient is η(a,1)
    static constexpr double eta = 0.75;
    const LossPredicate linear(
        3, [](const Vec& y) { return eta * (y[0] + y[1] + y[2]); },
        [](const Vec& y) { return Vec(y.size(), eta); });
    const Layer l(Mat{{0.1, 0.2, 0.3}, {-0.4, 0.5, 0.6}, {0.7, -0.8, 0.9}}, Activation::identity);
    const Vec a{1.5, -2.0};
    const Gradient fd = fd_layer_gradient(l, a, linear);
    const Gradient analytic = layer_gradient(l, a, linear);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(fd(j, 0), eta * 1.5, 1e-8);
        EXPECT_NEAR(fd(j, 1), eta * -2.0, 1e-8);
        EXPECT_NEAR(fd(j, 2), eta, 1e-8);
        EXPECT_EQ(analytic(j, 0), eta * 1.5);
        EXPECT_EQ(analytic(j, 1), eta * -2.0);
        EXPECT_EQ(analytic(j, 2), eta);
    }
}

TEST(FdLayerGradient, ShapeErrors) {
    EXPECT_THROW(fd_layer_gradient(mazur::second_layer(), Vec{1}, mazur::loss()), ShapeError);
    EXPECT_THROW(fd_layer_gradient(mazur::second_layer(), Vec{1, 2}, squared_error(Vec{1}, 1)),
                 ShapeError);
}

TEST(FdErosion, SquaredErrorAnalytic) {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = uniform_count(rng, 1, 6);
        const Vec t = random_vec(rng, k), y = random_vec(rng, k);
        const double eta = uniform(rng, 0.1, 2.0);
        const Vec fd = fd_erosion(squared_error(t, eta), y);
        for (std::size_t i = 0; i < k; ++i) EXPECT_TRUE(within_tolerance(fd[i], eta * (y[i] - t[i]), 1e-5));
    }
}

TEST(FdErosion, TransformedLossOverWorkedExample) {
    const LossPredicate k0 = transform_loss(mazur::network(), mazur::loss());
    const Vec fd = fd_erosion(k0, mazur::input);
    const Vec analytic = erosion_transform_net(mazur::network(), mazur::loss().erosion_fn(), mazur::input);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_TRUE(within_tolerance(fd[i], analytic[i], 1e-5));
}

TEST(FdErosion, ConstantLoss) {
    const LossPredicate c(2, [](const Vec&) { return -7.5; }, [](const Vec&) { return Vec{0, 0}; });
    EXPECT_EQ(fd_erosion(c, Vec{1, 2}), (Vec{0, 0}));
    EXPECT_THROW(fd_erosion(c, Vec{1}), ShapeError);
}

TEST(FdConfig, Defaults) {
    const FdConfig cfg;
    EXPECT_EQ(cfg.eps, 1e-6);
    EXPECT_EQ(cfg.tol, 1e-5);
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_THROW((FdConfig{0.0, 1e-5}.validate()), DomainError);
    EXPECT_THROW((FdConfig{1e-6, -1.0}.validate()), DomainError);
}

TEST(WithinTolerance, MixedAbsoluteRelative) {
    EXPECT_TRUE(within_tolerance(1.0, 1.0 + 0.9e-5, 1e-5));
    EXPECT_FALSE(within_tolerance(1.0, 1.0 + 1.1e-5, 1e-5));
    EXPECT_TRUE(within_tolerance(1000.0, 1000.009, 1e-5));
    EXPECT_TRUE(within_tolerance(0.0, 0.9e-5, 1e-5));
}

TEST(FdLayerGradient, StableUnderHalvingStep) {
    Rng rng(88);
    const FdConfig full{1e-6, 1e-5};
    const FdConfig half{0.5e-6, 1e-5};
    for (Activation act : all_activations) {
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = uniform_count(rng, 1, 5), k = uniform_count(rng, 1, 5);
            const Layer l = random_layer(rng, n, k, act);
            const Vec a = random_vec(rng, n);
            const LossPredicate loss = squared_error(random_vec(rng, k), 1.0);
            const Gradient g1 = fd_layer_gradient(l, a, loss, full);
            const Gradient g2 = fd_layer_gradient(l, a, loss, half);
            EXPECT_LT(max_abs_deviation(g1, g2), 10 * full.tol) << to_string(act);
        }
    }
}
