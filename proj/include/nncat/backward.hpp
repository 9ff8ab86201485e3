#pragma once

// Layer gradients and masked updates.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>

#include "algebra.hpp"
#include "erosion.hpp"
#include "loss.hpp"
#include "network.hpp"

namespace nncat {

/// ∇_{(a,L)}(T): a k×(n+1) matrix aligned with a layer's transition; the last
/// column is the bias gradient.
struct Gradient {
    Mat matrix;

    std::size_t rows() const noexcept { return matrix.rows(); }
    std::size_t cols() const noexcept { return matrix.cols(); }
    double operator()(std::size_t j, std::size_t i) const { return matrix(j, i); }

    friend bool operator==(const Gradient&, const Gradient&) = default;
};

/// True iff every column is a multiple of the bias column, up to `rel_tol`
/// relative to the largest entry. A single-layer gradient s⃗·(a,1)ᵀ always is.
inline bool is_rank_one(const Gradient& g, double rel_tol = 1e-10) {
    const Mat& m = g.matrix;
    if (m.cols() == 0 || m.rows() == 0) return true;
    const std::size_t bias = m.cols() - 1;
    double scale = 0.0;
    for (double v : m.data()) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return true;
    // Column i must equal c_i · bias column; c_i is read off the row with the
    // largest bias entry.
    std::size_t pivot = 0;
    for (std::size_t j = 1; j < m.rows(); ++j)
        if (std::abs(m(j, bias)) > std::abs(m(pivot, bias))) pivot = j;
    const double pb = m(pivot, bias);
    for (std::size_t i = 0; i < bias; ++i) {
        if (pb == 0.0) {
            for (std::size_t j = 0; j < m.rows(); ++j)
                if (std::abs(m(j, i)) > rel_tol * scale) return false;
            continue;
        }
        const double c = m(pivot, i) / pb;
        for (std::size_t j = 0; j < m.rows(); ++j)
            if (std::abs(m(j, i) - c * m(j, bias)) > rel_tol * scale) return false;
    }
    return true;
}

/// ∇ = s⃗ · (a,1)ᵀ with s⃗ = L′(ℓ ≫ a) ⊙ α⃗′(T_*(a,1)).
inline Gradient layer_gradient(const Layer& l, const Vec& a, const LossPredicate& loss,
                               ErosionPath path = ErosionPath::shortcut) {
    if (loss.dim() != l.out_dim())
        detail::shape_fail("layer_gradient", "loss dim " + std::to_string(loss.dim()),
                           "layer out_dim " + std::to_string(l.out_dim()));
    const Vec y = layer_forward(l, a);
    const Vec s = detail::erosion_vector(l, a, y, loss.erosion(y), path);
    return Gradient{outer(s, with_bias_input(a))};
}

/// T − M ⊙ ∇. Frozen entries are copied bitwise; mask, bias mutability and
/// activation carry over.
inline Layer masked_update(const Layer& l, const Gradient& g) {
    const Mat& t = l.transition();
    if (g.rows() != t.rows() || g.cols() != t.cols())
        detail::shape_fail("masked_update", "gradient " + detail::dims(g.rows(), g.cols()),
                           "transition " + detail::dims(t.rows(), t.cols()));
    Mat updated = t;
    for (std::size_t j = 0; j < t.rows(); ++j)
        for (std::size_t i = 0; i < t.cols(); ++i)
            if (l.is_mutable(j, i)) updated(j, i) = t(j, i) - g(j, i);
    return l.with_transition(std::move(updated));
}

} // namespace nncat
