#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "algebra.hpp"

namespace nncat {

/// Differentiable scalar activations. ReLU is deliberately absent: every
/// registered function must be differentiable everywhere.
enum class Activation { sigmoid, tanh, identity, softplus };

inline constexpr std::array<Activation, 4> all_activations{
    Activation::sigmoid, Activation::tanh, Activation::identity, Activation::softplus};

inline std::string_view to_string(Activation a) {
    switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
    case Activation::softplus: return "softplus";
    }
    return "?";
}

inline std::optional<Activation> parse_activation(std::string_view tag) {
    for (Activation a : all_activations)
        if (to_string(a) == tag) return a;
    return std::nullopt;
}

namespace detail {

inline void require_finite(double z, std::string_view where) {
    if (!std::isfinite(z))
        throw DomainError(std::string(where) + ": non-finite argument " + std::to_string(z));
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

} // namespace detail

inline double act_value(Activation a, double z) {
    detail::require_finite(z, "act_value");
    switch (a) {
    case Activation::sigmoid: return detail::sigmoid(z);
    case Activation::tanh: return std::tanh(z);
    case Activation::identity: return z;
    case Activation::softplus:
        // log(1 + e^z) without overflow for large z
        return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    }
    return z;
}

inline double act_deriv(Activation a, double z) {
    detail::require_finite(z, "act_deriv");
    switch (a) {
    case Activation::sigmoid: {
        const double s = detail::sigmoid(z);
        return s * (1.0 - s);
    }
    case Activation::tanh: {
        const double t = std::tanh(z);
        return 1.0 - t * t;
    }
    case Activation::identity: return 1.0;
    case Activation::softplus: return detail::sigmoid(z);
    }
    return 1.0;
}

inline Vec act_map(Activation a, std::span<const double> z) {
    Vec out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = act_value(a, z[i]);
    return out;
}

inline Vec act_deriv_map(Activation a, std::span<const double> z) {
    Vec out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = act_deriv(a, z[i]);
    return out;
}

} // namespace nncat
