#include "test_support.hpp"

using namespace nncat;
using namespace nncat::testing;

namespace {

Network random_net(Rng& rng, std::size_t in, std::size_t out, std::size_t depth,
                   const RandomLayerOptions& opt = {}) {
    return random_network_between(rng, in, out, depth, 1, 5, opt);
}

LossPredicate random_loss(Rng& rng, std::size_t k) {
    return squared_error(random_vec(rng, k, 0.0, 1.0), uniform(rng, 0.1, 2.0));
}

} // namespace

TEST(SquaredError, WorkedExampleValidity) {
    const LossPredicate l = mazur::loss();
    // ½·0.5·(0.74136507² + 0.21707153²) on the printed output state
    const Vec c{0.75136507, 0.77292847};
    const double direct = 0.5 * 0.5 * (0.74136507 * 0.74136507 + 0.21707153 * 0.21707153);
    EXPECT_NEAR(validity(c, l), direct, 1e-15);
    EXPECT_NEAR(validity(net_forward(mazur::network(), mazur::input), l), frozen::output_validity,
                1e-15);
}

TEST(SquaredError, MinimumAndDegenerateRate) {
    const Vec t{0.3, -2.0, 7.0};
    EXPECT_EQ(validity(t, squared_error(t, 1.7)), 0.0);
    EXPECT_EQ(validity(Vec{5, 5, 5}, squared_error(t, 0.0)), 0.0);
    EXPECT_EQ(squared_error(t, 0.0).erosion(Vec{5, 5, 5}), (Vec{0, 0, 0}));
}

TEST(SquaredError, ErosionIsScaledResidual) {
    const LossPredicate l = squared_error(Vec{0.01, 0.99}, 0.5);
    expect_near(l.erosion(Vec{0.75136507, 0.77292847}), Vec{0.5 * 0.74136507, 0.5 * -0.21707153},
                1e-16);
    EXPECT_THROW(l.erosion(Vec{1}), ShapeError);
    EXPECT_THROW(validity(Vec{1, 2, 3}, l), ShapeError);
    EXPECT_THROW(squared_error(Vec{1}, -1.0), DomainError);
    EXPECT_TRUE(std::holds_alternative<loss_kind::SquaredError>(l.descriptor()));
}

TEST(TransformLoss, AlongIdentityIsPointwiseIdentical) {
    Rng rng(31);
    const LossPredicate l = random_loss(rng, 3);
    const LossPredicate moved = transform_loss(identity_net(3), l);
    for (int i = 0; i < 20; ++i) {
        const Vec x = random_vec(rng, 3);
        EXPECT_TRUE(bitwise_equal(moved.eval(x), l.eval(x)));
        EXPECT_TRUE(bitwise_equal(moved.erosion(x), l.erosion(x)));
    }
}

TEST(TransformLoss, WorkedExampleValidityEquation) {
    const LossPredicate l = mazur::loss();
    const LossPredicate k0 = transform_loss(mazur::network(), l);
    const Vec c = net_forward(mazur::network(), mazur::input);
    EXPECT_TRUE(bitwise_equal(validity(mazur::input, k0), validity(c, l)));
    EXPECT_EQ(k0.dim(), 2u);
    EXPECT_TRUE(std::holds_alternative<loss_kind::Transformed>(k0.descriptor()));
    const auto [lhs, rhs] = validity_equation_check(mazur::network(), mazur::input, l);
    EXPECT_TRUE(bitwise_equal(lhs, rhs));
}

TEST(TransformLoss, WorkedExampleErosion) {
    const LossPredicate k0 = transform_loss(mazur::network(), mazur::loss());
    expect_near(k0.erosion(mazur::input), frozen::input_erosion, 1e-15);
    const LossPredicate k1 = transform_loss(Network({mazur::second_layer()}), mazur::loss());
    const Vec b = layer_forward(mazur::first_layer(), mazur::input);
    expect_near(k1.erosion(b), frozen::second_layer_erosion, 1e-15);
}

TEST(TransformLoss, DimensionMismatch) {
    EXPECT_THROW(transform_loss(mazur::network(), squared_error(Vec{1, 2, 3}, 1.0)), ShapeError);
}

TEST(TransformLoss, NestedEqualsComposed) {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const Network n = random_net(rng, 3, 4, uniform_count(rng, 0, 3));
        const Network p = random_net(rng, 4, 2, uniform_count(rng, 0, 3));
        const LossPredicate f = random_loss(rng, 2);
        const LossPredicate nested = transform_loss(n, transform_loss(p, f));
        const LossPredicate flat = transform_loss(compose(n, p), f);
        const Vec x = random_vec(rng, 3);
        EXPECT_TRUE(bitwise_equal(nested.eval(x), flat.eval(x)));
        EXPECT_TRUE(bitwise_equal(nested.erosion(x), flat.erosion(x)));
    }
}

TEST(ValidityEquation, IdentityNetwork) {
    const LossPredicate l = squared_error(Vec{1, 2}, 0.8);
    const Vec x{0.5, -0.5};
    const auto [lhs, rhs] = validity_equation_check(identity_net(2), x, l);
    EXPECT_EQ(lhs, l.eval(x));
    EXPECT_EQ(rhs, l.eval(x));
}

TEST(ValidityEquation, RandomTriplesBitwise) {
    Rng rng(2718);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = uniform_count(rng, 1, 6), k = uniform_count(rng, 1, 6);
        const Network net = random_net(rng, n, k, uniform_count(rng, 0, 4));
        const auto [lhs, rhs] = validity_equation_check(net, random_vec(rng, n), random_loss(rng, k));
        EXPECT_TRUE(bitwise_equal(lhs, rhs)) << lhs << " vs " << rhs;
    }
}

TEST(LossPredicate, ErosionMatchesFiniteDifferences) {
    Rng rng(55);
    FdConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = uniform_count(rng, 1, 5), k = uniform_count(rng, 1, 5);
        const LossPredicate base = random_loss(rng, k);
        const LossPredicate moved = transform_loss(random_net(rng, n, k, uniform_count(rng, 1, 3)), base);
        for (int point = 0; point < 50; ++point) {
            const Vec y = random_vec(rng, k);
            const Vec x = random_vec(rng, n);
            const Vec fy = fd_erosion(base, y, cfg), fx = fd_erosion(moved, x, cfg);
            const Vec ey = base.erosion(y), ex = moved.erosion(x);
            for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(ey[i], fy[i], 1e-5);
            for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ex[i], fx[i], 1e-5);
        }
    }
}

TEST(LossPredicate, OpaqueLossesCarryTheirOwnErosion) {
    // L(y) = Σ sin(y_i)
    const LossPredicate l(
        2, [](const Vec& y) { return std::sin(y[0]) + std::sin(y[1]); },
        [](const Vec& y) { return Vec{std::cos(y[0]), std::cos(y[1])}; });
    EXPECT_TRUE(std::holds_alternative<loss_kind::Opaque>(l.descriptor()));
    const LossPredicate moved = transform_loss(mazur::network(), l);
    const Vec fd = fd_erosion(moved, mazur::input);
    expect_near(moved.erosion(mazur::input), fd, 1e-8);
}
