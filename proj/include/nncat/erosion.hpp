#pragma once

// Erosion transformation ⋘: pulling the derivative of an output loss back
// through layers. This is the computational core of the backward pass.

#include <functional>
#include <span>

#include "algebra.hpp"
#include "network.hpp"

namespace nncat {

/// An erosion maps a state to the derivative of a loss at that state.
using Erosion = std::function<Vec(const Vec&)>;

/// How the activation-derivative factor is computed for sigmoid layers.
/// `shortcut` uses y⊙(1−y) on the already-computed output y; `generic` always
/// evaluates α′ at the pre-activation. The two agree to rounding.
enum class ErosionPath { shortcut, generic };

namespace detail {

// y is the layer output on a; only read on the sigmoid shortcut.
inline Vec erosion_vector(const Layer& l, std::span<const double> a, std::span<const double> y,
                          std::span<const double> e_out, ErosionPath path) {
    if (e_out.size() != l.out_dim())
        shape_fail("layer_erosion_vector", "erosion length " + std::to_string(e_out.size()),
                   "layer out_dim " + std::to_string(l.out_dim()));
    if (path == ErosionPath::shortcut && l.activation() == Activation::sigmoid) {
        Vec one_minus(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) one_minus[j] = 1.0 - y[j];
        return hadamard(hadamard(e_out, y), one_minus);
    }
    return hadamard(e_out, act_deriv_map(l.activation(), kleisli_apply(l.transition(), a)));
}

inline Vec erosion_transform_layers(std::span<const Layer> layers, const Erosion& e,
                                    const Vec& x, ErosionPath path) {
    if (layers.empty()) return e(x);
    const Layer& head = layers.front();
    const Vec y = layer_forward(head, x);
    const Vec e_out = erosion_transform_layers(layers.subspan(1), e, y, path);
    const Vec s = erosion_vector(head, x, y, e_out, path);
    return vec_mat(s, weights_part(head.transition()));
}

} // namespace detail

/// s⃗ = E_out ⊙ α⃗′(T_*(a,1)), with E_out the output erosion already evaluated
/// at ℓ ≫ a.
inline Vec layer_erosion_vector(const Layer& l, std::span<const double> a,
                                std::span<const double> e_out,
                                ErosionPath path = ErosionPath::shortcut) {
    const Vec y = layer_forward(l, a);
    return detail::erosion_vector(l, a, y, e_out, path);
}

/// ((T,α) ⋘ E)(x) = (E(⟦T,α⟧x) ⊙ α⃗′(T_*(x,1))) · [T]
inline Vec erosion_transform_layer(const Layer& l, const Erosion& e, const Vec& x,
                                   ErosionPath path = ErosionPath::shortcut) {
    return detail::erosion_transform_layers(std::span<const Layer>(&l, 1), e, x, path);
}

/// ℓ_1 ⋘ (ℓ_2 ⋘ ⋯ (ℓ_m ⋘ E)) evaluated at x; the empty network returns E(x).
inline Vec erosion_transform_net(const Network& net, const Erosion& e, const Vec& x,
                                 ErosionPath path = ErosionPath::shortcut) {
    if (x.size() != net.in_dim())
        detail::shape_fail("erosion_transform_net", "input length " + std::to_string(x.size()),
                           "network in_dim " + std::to_string(net.in_dim()));
    return detail::erosion_transform_layers(net.layers(), e, x, path);
}

} // namespace nncat
