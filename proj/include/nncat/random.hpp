#pragma once

// Seeded generators for random layers, networks and states. Used by the
// gradcheck command and the property suites.

#include <cstdint>
#include <random>
#include <vector>

#include "activation.hpp"
#include "algebra.hpp"
#include "network.hpp"

namespace nncat {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_count(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Vec random_vec(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    Vec v(n);
    for (double& x : v) x = uniform(rng, lo, hi);
    return v;
}

inline Activation random_activation(Rng& rng) {
    return all_activations[uniform_count(rng, 0, all_activations.size() - 1)];
}

struct RandomLayerOptions {
    double weight_scale = 1.0;
    /// Probability that a weight or bias is mutable; 1 gives the full mask.
    double mutable_probability = 1.0;
};

inline Layer random_layer(Rng& rng, std::size_t n, std::size_t k, Activation act,
                          const RandomLayerOptions& opt = {}) {
    Mat t(k, n + 1);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i <= n; ++i) t(j, i) = uniform(rng, -opt.weight_scale, opt.weight_scale);
    BoolMat mask(k, n, true);
    std::vector<bool> bias_mutable(k, true);
    if (opt.mutable_probability < 1.0) {
        std::bernoulli_distribution coin(opt.mutable_probability);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < n; ++i) mask.set(j, i, coin(rng));
            bias_mutable[j] = coin(rng);
        }
    }
    return Layer(std::move(t), std::move(mask), std::move(bias_mutable), act);
}

/// A network through the given widths, e.g. {3, 4, 2} is 3 => 4 => 2, with a
/// random activation per layer.
inline Network random_network(Rng& rng, const std::vector<std::size_t>& widths,
                              const RandomLayerOptions& opt = {}) {
    if (widths.empty()) throw ShapeError("random_network: no widths");
    if (widths.size() == 1) return identity_net(widths.front());
    std::vector<Layer> layers;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i)
        layers.push_back(random_layer(rng, widths[i], widths[i + 1], random_activation(rng), opt));
    return Network(std::move(layers));
}

/// `depth + 1` widths drawn from [lo, hi].
inline std::vector<std::size_t> random_widths(Rng& rng, std::size_t depth, std::size_t lo,
                                              std::size_t hi) {
    std::vector<std::size_t> w(depth + 1);
    for (auto& x : w) x = uniform_count(rng, lo, hi);
    return w;
}

/// A random network in -> out with `depth` layers and hidden widths drawn from
/// [lo, hi]. Depth 0 is only possible when in == out; otherwise one layer is
/// used.
inline Network random_network_between(Rng& rng, std::size_t in, std::size_t out, std::size_t depth,
                                      std::size_t lo = 1, std::size_t hi = 5,
                                      const RandomLayerOptions& opt = {}) {
    if (depth == 0 && in != out) depth = 1;
    auto widths = random_widths(rng, depth, lo, hi);
    widths.front() = in;
    widths.back() = out;
    return random_network(rng, widths, opt);
}

} // namespace nncat
