#pragma once

// Central finite differences: numeric ground truth for every derivative the
// engine computes analytically. Deliberately uses only forward evaluation and
// loss values, never erosions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "algebra.hpp"
#include "backward.hpp"
#include "loss.hpp"
#include "network.hpp"

namespace nncat {

struct FdConfig {
    double eps = 1e-6;
    double tol = 1e-5;

    void validate() const {
        if (!(eps > 0.0) || !(tol > 0.0))
            throw DomainError("FdConfig: eps and tol must be positive");
    }
};

/// Mixed comparison: |x − y| ≤ tol · max(1, |x|, |y|).
inline bool within_tolerance(double x, double y, double tol) {
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

/// Central-difference gradient of f at x.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double eps) {
    Vec g(x.size());
    Vec probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + eps;
        const double up = f(probe);
        probe[i] = x[i] - eps;
        const double down = f(probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * eps);
    }
    return g;
}

/// Entry (j,i) is the central difference of X ↦ ((X,α) ≫ a ⊨ L) in X_{ji}.
inline Gradient fd_layer_gradient(const Layer& l, const Vec& a, const LossPredicate& loss,
                                  const FdConfig& cfg = {}) {
    if (loss.dim() != l.out_dim())
        detail::shape_fail("fd_layer_gradient", "loss dim " + std::to_string(loss.dim()),
                           "layer out_dim " + std::to_string(l.out_dim()));
    if (a.size() != l.in_dim())
        detail::shape_fail("fd_layer_gradient", "input length " + std::to_string(a.size()),
                           "layer in_dim " + std::to_string(l.in_dim()));
    const Mat& t = l.transition();
    auto validity_at = [&](const Mat& x) {
        Vec z = kleisli_apply(x, a);
        return loss.eval(act_map(l.activation(), z));
    };
    Mat g(t.rows(), t.cols());
    Mat probe = t;
    for (std::size_t j = 0; j < t.rows(); ++j) {
        for (std::size_t i = 0; i < t.cols(); ++i) {
            probe(j, i) = t(j, i) + cfg.eps;
            const double up = validity_at(probe);
            probe(j, i) = t(j, i) - cfg.eps;
            const double down = validity_at(probe);
            probe(j, i) = t(j, i);
            g(j, i) = (up - down) / (2.0 * cfg.eps);
        }
    }
    return Gradient{std::move(g)};
}

/// Central differences of L around y.
inline Vec fd_erosion(const LossPredicate& loss, const Vec& y, const FdConfig& cfg = {}) {
    if (y.size() != loss.dim())
        detail::shape_fail("fd_erosion", "state length " + std::to_string(y.size()),
                           "loss dim " + std::to_string(loss.dim()));
    return fd_gradient([&](const Vec& x) { return loss.eval(x); }, y, cfg.eps);
}

/// Largest absolute entry-wise difference; shapes must match.
inline double max_abs_deviation(const Gradient& x, const Gradient& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        detail::shape_fail("max_abs_deviation", detail::dims(x.rows(), x.cols()),
                           detail::dims(y.rows(), y.cols()));
    double worst = 0.0;
    const auto xd = x.matrix.data();
    const auto yd = y.matrix.data();
    for (std::size_t e = 0; e < xd.size(); ++e) worst = std::max(worst, std::abs(xd[e] - yd[e]));
    return worst;
}

/// True iff every entry agrees under the mixed tolerance.
inline bool gradients_agree(const Gradient& x, const Gradient& y, double tol) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    const auto xd = x.matrix.data();
    const auto yd = y.matrix.data();
    for (std::size_t e = 0; e < xd.size(); ++e)
        if (!within_tolerance(xd[e], yd[e], tol)) return false;
    return true;
}

} // namespace nncat
