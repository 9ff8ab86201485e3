#pragma once

// Layers, networks as composable morphisms n -> k, and forward state
// transformation. Networks are immutable values: an invalid one cannot be
// constructed, and training produces new values.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "activation.hpp"
#include "algebra.hpp"

namespace nncat {

/// Boolean k×n matrix. Entry (j,i) marks the connection from input i to node j
/// as mutable.
class BoolMat {
public:
    BoolMat() = default;
    BoolMat(std::size_t rows, std::size_t cols, bool fill = true)
        : rows_(rows), cols_(cols), data_(rows * cols, fill ? 1 : 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    bool operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c] != 0; }
    void set(std::size_t r, std::size_t c, bool v) { data_[r * cols_ + c] = v ? 1 : 0; }

    friend bool operator==(const BoolMat&, const BoolMat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<unsigned char> data_;
};

/// A layer n -> k: transition matrix T of shape k×(n+1) whose last column
/// holds the biases, a mutability mask over the k×n weights, a per-row bias
/// mutability flag, and one activation for the whole layer.
///
/// The mask only matters for updates. A false entry with a zero weight means
/// "no connection"; a false entry with a nonzero weight is a frozen
/// connection.
class Layer {
public:
    Layer(Mat transition, Activation act)
        : Layer(transition, BoolMat(transition.rows(), transition.cols() ? transition.cols() - 1 : 0),
                std::vector<bool>(transition.rows(), true), act) {}

    Layer(Mat transition, BoolMat mask, std::vector<bool> bias_mutable, Activation act)
        : transition_(std::move(transition)), mask_(std::move(mask)),
          bias_mutable_(std::move(bias_mutable)), act_(act) {
        if (transition_.cols() == 0)
            throw ShapeError("Layer: transition " +
                             detail::dims(transition_.rows(), transition_.cols()) +
                             " lacks a bias column");
        if (!transition_.finite()) throw DomainError("Layer: non-finite transition entry");
        if (mask_.rows() != out_dim() || mask_.cols() != in_dim())
            detail::shape_fail("Layer mask", detail::dims(mask_.rows(), mask_.cols()),
                               "weights " + detail::dims(out_dim(), in_dim()));
        if (bias_mutable_.size() != out_dim())
            detail::shape_fail("Layer bias_mutable", "length " + std::to_string(bias_mutable_.size()),
                               "out_dim " + std::to_string(out_dim()));
    }

    std::size_t in_dim() const noexcept { return transition_.cols() - 1; }
    std::size_t out_dim() const noexcept { return transition_.rows(); }

    const Mat& transition() const noexcept { return transition_; }
    const BoolMat& mask() const noexcept { return mask_; }
    const std::vector<bool>& bias_mutable() const noexcept { return bias_mutable_; }
    Activation activation() const noexcept { return act_; }

    /// Mutability of entry (j,i) of the transition; column n is the bias.
    bool is_mutable(std::size_t j, std::size_t i) const {
        return i == in_dim() ? bias_mutable_[j] : mask_(j, i);
    }

    /// Same mask and activation, different transition of the same shape.
    Layer with_transition(Mat t) const {
        if (t.rows() != transition_.rows() || t.cols() != transition_.cols())
            detail::shape_fail("Layer::with_transition", detail::dims(t.rows(), t.cols()),
                               detail::dims(transition_.rows(), transition_.cols()));
        return Layer(std::move(t), mask_, bias_mutable_, act_);
    }

    friend bool operator==(const Layer&, const Layer&) = default;

private:
    Mat transition_;
    BoolMat mask_;
    std::vector<bool> bias_mutable_;
    Activation act_;
};

/// (T, α) ≫ x = α⃗(T_*(x, 1)). Reads neither the mask nor bias mutability.
inline Vec layer_forward(const Layer& l, std::span<const double> x) {
    if (x.size() != l.in_dim())
        detail::shape_fail("layer_forward", "input length " + std::to_string(x.size()),
                           "layer in_dim " + std::to_string(l.in_dim()));
    return act_map(l.activation(), kleisli_apply(l.transition(), x));
}

/// A morphism n -> k: a dimension-chained sequence of layers. The empty
/// sequence is the identity on n.
class Network {
public:
    explicit Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
        if (layers_.empty())
            throw ShapeError("Network: empty layer list needs explicit dimensions");
        in_dim_ = layers_.front().in_dim();
        out_dim_ = layers_.back().out_dim();
        check_chain();
    }

    Network(std::size_t in_dim, std::size_t out_dim, std::vector<Layer> layers)
        : in_dim_(in_dim), out_dim_(out_dim), layers_(std::move(layers)) {
        if (layers_.empty()) {
            if (in_dim_ != out_dim_)
                detail::shape_fail("Network: empty identity", "in_dim " + std::to_string(in_dim_),
                                   "out_dim " + std::to_string(out_dim_));
            return;
        }
        if (layers_.front().in_dim() != in_dim_)
            detail::shape_fail("Network", "in_dim " + std::to_string(in_dim_),
                               "first layer in_dim " + std::to_string(layers_.front().in_dim()));
        if (layers_.back().out_dim() != out_dim_)
            detail::shape_fail("Network", "out_dim " + std::to_string(out_dim_),
                               "last layer out_dim " + std::to_string(layers_.back().out_dim()));
        check_chain();
    }

    static Network identity(std::size_t n) { return Network(n, n, {}); }

    std::size_t in_dim() const noexcept { return in_dim_; }
    std::size_t out_dim() const noexcept { return out_dim_; }
    std::size_t size() const noexcept { return layers_.size(); }
    bool empty() const noexcept { return layers_.empty(); }

    std::span<const Layer> layers() const noexcept { return layers_; }
    const Layer& operator[](std::size_t i) const { return layers_[i]; }

    /// Layers [first, last) as a network; an empty range yields the identity
    /// on the appropriate boundary dimension.
    Network slice(std::size_t first, std::size_t last) const {
        if (first > last || last > layers_.size())
            throw ShapeError("Network::slice: range [" + std::to_string(first) + "," +
                             std::to_string(last) + ") of " + std::to_string(layers_.size()));
        const std::size_t n = first == 0 ? in_dim_ : layers_[first - 1].out_dim();
        if (first == last) return identity(n);
        return Network(n, layers_[last - 1].out_dim(),
                       std::vector<Layer>(layers_.begin() + static_cast<std::ptrdiff_t>(first),
                                          layers_.begin() + static_cast<std::ptrdiff_t>(last)));
    }

    friend bool operator==(const Network&, const Network&) = default;

private:
    void check_chain() const {
        for (std::size_t i = 0; i + 1 < layers_.size(); ++i)
            if (layers_[i].out_dim() != layers_[i + 1].in_dim())
                detail::shape_fail("Network: layer " + std::to_string(i) + " -> " +
                                       std::to_string(i + 1),
                                   "out_dim " + std::to_string(layers_[i].out_dim()),
                                   "in_dim " + std::to_string(layers_[i + 1].in_dim()));
    }

    std::size_t in_dim_ = 0;
    std::size_t out_dim_ = 0;
    std::vector<Layer> layers_;
};

inline Network identity_net(std::size_t n) { return Network::identity(n); }

/// Sequential composition: first n, then p.
inline Network compose(const Network& n, const Network& p) {
    if (n.out_dim() != p.in_dim())
        detail::shape_fail("compose", "out_dim " + std::to_string(n.out_dim()),
                           "in_dim " + std::to_string(p.in_dim()));
    std::vector<Layer> layers(n.layers().begin(), n.layers().end());
    layers.insert(layers.end(), p.layers().begin(), p.layers().end());
    return Network(n.in_dim(), p.out_dim(), std::move(layers));
}

/// ⟦ℓ_m⟧ ∘ ⋯ ∘ ⟦ℓ_1⟧ applied to x.
inline Vec net_forward(const Network& net, std::span<const double> x) {
    if (x.size() != net.in_dim())
        detail::shape_fail("net_forward", "input length " + std::to_string(x.size()),
                           "network in_dim " + std::to_string(net.in_dim()));
    Vec state(x.begin(), x.end());
    for (const Layer& l : net.layers()) state = layer_forward(l, state);
    return state;
}

/// ⟨a_0, …, a_m⟩ with a_0 = x and a_i = ℓ_i ≫ a_{i-1}.
inline std::vector<Vec> forward_states(const Network& net, std::span<const double> x) {
    if (x.size() != net.in_dim())
        detail::shape_fail("forward_states", "input length " + std::to_string(x.size()),
                           "network in_dim " + std::to_string(net.in_dim()));
    std::vector<Vec> states;
    states.reserve(net.size() + 1);
    states.emplace_back(x.begin(), x.end());
    for (const Layer& l : net.layers()) states.push_back(layer_forward(l, states.back()));
    return states;
}

} // namespace nncat
