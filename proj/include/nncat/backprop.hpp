#pragma once

// The backprop functor: one gradient step over a whole network, driven by an
// input state and an output loss, and a plain per-example SGD loop on top.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "backward.hpp"
#include "erosion.hpp"
#include "loss.hpp"
#include "network.hpp"

namespace nncat {

/// Everything one backprop step computes before updating.
///
/// states[0] is the input and states[i] = ℓ_i ≫ states[i-1]. erosions[m] is
/// L′(states[m]) and erosions[i-1] = (ℓ_i ⋘ K_i′)(states[i-1]), i.e. the
/// derivative of the suffix loss K_{i-1} at states[i-1]. gradients[i-1] is the
/// gradient for ℓ_i against K_i, computed with pre-update weights throughout.
struct BackpropTrace {
    std::vector<Vec> states;
    std::vector<Vec> erosions;
    std::vector<Gradient> gradients;
};

struct BackpropResult {
    Network network;
    BackpropTrace trace;
};

inline BackpropResult backprop_step(const Network& net, const Vec& a, const LossPredicate& loss) {
    if (loss.dim() != net.out_dim())
        detail::shape_fail("backprop_step", "loss dim " + std::to_string(loss.dim()),
                           "network out_dim " + std::to_string(net.out_dim()));
    const std::size_t m = net.size();
    BackpropTrace trace;
    trace.states = forward_states(net, a);
    trace.erosions.resize(m + 1);
    trace.gradients.resize(m);
    trace.erosions[m] = loss.erosion(trace.states[m]);

    for (std::size_t i = m; i > 0; --i) {
        const Layer& l = net[i - 1];
        const Vec& in = trace.states[i - 1];
        const Vec s =
            detail::erosion_vector(l, in, trace.states[i], trace.erosions[i], ErosionPath::shortcut);
        trace.gradients[i - 1] = Gradient{outer(s, with_bias_input(in))};
        trace.erosions[i - 1] = vec_mat(s, weights_part(l.transition()));
    }

    if (m == 0) return {net, std::move(trace)};
    std::vector<Layer> updated;
    updated.reserve(m);
    for (std::size_t i = 0; i < m; ++i) updated.push_back(masked_update(net[i], trace.gradients[i]));
    return {Network(net.in_dim(), net.out_dim(), std::move(updated)), std::move(trace)};
}

/// Largest |difference| between corresponding transition entries, or +inf if
/// the networks differ in shape, masks or activations.
inline double max_transition_deviation(const Network& x, const Network& y) {
    constexpr double mismatch = std::numeric_limits<double>::infinity();
    if (x.in_dim() != y.in_dim() || x.out_dim() != y.out_dim() || x.size() != y.size())
        return mismatch;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Layer& p = x[i];
        const Layer& q = y[i];
        if (p.activation() != q.activation() || !(p.mask() == q.mask()) ||
            p.bias_mutable() != q.bias_mutable() || p.transition().rows() != q.transition().rows() ||
            p.transition().cols() != q.transition().cols())
            return mismatch;
        const auto pd = p.transition().data();
        const auto qd = q.transition().data();
        for (std::size_t e = 0; e < pd.size(); ++e) worst = std::max(worst, std::abs(pd[e] - qd[e]));
    }
    return worst;
}

/// B(P ∘ N) = B(P) ∘ B(N), with N trained against P ≪ F and P trained from
/// N ≫ a.
inline bool functoriality_check(const Network& n, const Network& p, const Vec& a,
                                const LossPredicate& f, double tol = 1e-12) {
    const Network whole = backprop_step(compose(n, p), a, f).network;
    const Network first = backprop_step(n, a, transform_loss(p, f)).network;
    const Network second = backprop_step(p, net_forward(n, a), f).network;
    return max_transition_deviation(whole, compose(first, second)) <= tol;
}

struct Sample {
    Vec input;
    Vec target;
};

struct SgdConfig {
    std::size_t epochs = 1;
};

struct TrainResult {
    Network network;
    /// Validity of the output under each step's loss, taken before the step.
    std::vector<double> losses;
};

/// Per-example gradient steps in dataset order, `cfg.epochs` passes. Each
/// row uses the loss squared_error(target, eta).
inline TrainResult train(Network net, const std::vector<Sample>& data, double eta,
                         const SgdConfig& cfg) {
    if (data.empty()) throw std::invalid_argument("train: empty dataset");
    if (!std::isfinite(eta) || eta <= 0.0)
        throw DomainError("train: learning rate must be positive, got " + std::to_string(eta));
    for (std::size_t r = 0; r < data.size(); ++r) {
        if (data[r].input.size() != net.in_dim())
            detail::shape_fail("train row " + std::to_string(r + 1),
                               "input length " + std::to_string(data[r].input.size()),
                               "network in_dim " + std::to_string(net.in_dim()));
        if (data[r].target.size() != net.out_dim())
            detail::shape_fail("train row " + std::to_string(r + 1),
                               "target length " + std::to_string(data[r].target.size()),
                               "network out_dim " + std::to_string(net.out_dim()));
    }

    std::vector<LossPredicate> losses;
    losses.reserve(data.size());
    for (const Sample& s : data) losses.push_back(squared_error(s.target, eta));

    TrainResult result{std::move(net), {}};
    result.losses.reserve(cfg.epochs * data.size());
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t r = 0; r < data.size(); ++r) {
            auto step = backprop_step(result.network, data[r].input, losses[r]);
            result.losses.push_back(losses[r].eval(step.trace.states.back()));
            result.network = std::move(step.network);
        }
    }
    return result;
}

} // namespace nncat
