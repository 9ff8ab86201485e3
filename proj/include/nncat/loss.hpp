#pragma once

// Loss predicates: real-valued predicates on states together with their
// derivative (erosion). Validity x ⊨ L is evaluation; loss transformation
// N ≪ L precomposes with forward propagation.

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <variant>

#include "algebra.hpp"
#include "erosion.hpp"
#include "network.hpp"

namespace nncat {

class LossPredicate;

namespace loss_kind {

/// ½·η·Σ(y_i − t_i)², learning rate folded in.
struct SquaredError {
    Vec target;
    double eta;
};

/// N ≪ base
struct Transformed {
    std::shared_ptr<const Network> net;
    std::shared_ptr<const LossPredicate> base;
};

/// Built from arbitrary closures; not serializable.
struct Opaque {};

} // namespace loss_kind

using LossDescriptor =
    std::variant<loss_kind::SquaredError, loss_kind::Transformed, loss_kind::Opaque>;

class LossPredicate {
public:
    using Eval = std::function<double(const Vec&)>;

    /// The caller guarantees erosion is the gradient of eval.
    LossPredicate(std::size_t dim, Eval eval, Erosion erosion,
                  LossDescriptor descriptor = loss_kind::Opaque{})
        : dim_(dim), eval_(std::move(eval)), erosion_(std::move(erosion)),
          descriptor_(std::move(descriptor)) {}

    std::size_t dim() const noexcept { return dim_; }
    const LossDescriptor& descriptor() const noexcept { return descriptor_; }
    const Erosion& erosion_fn() const noexcept { return erosion_; }

    double eval(const Vec& x) const {
        check(x, "validity");
        return eval_(x);
    }

    Vec erosion(const Vec& x) const {
        check(x, "erosion");
        return erosion_(x);
    }

private:
    void check(const Vec& x, const char* what) const {
        if (x.size() != dim_)
            detail::shape_fail(what, "state length " + std::to_string(x.size()),
                               "loss dim " + std::to_string(dim_));
    }

    std::size_t dim_;
    Eval eval_;
    Erosion erosion_;
    LossDescriptor descriptor_;
};

inline LossPredicate squared_error(Vec target, double eta) {
    if (!std::isfinite(eta) || eta < 0.0)
        throw DomainError("squared_error: learning rate must be finite and non-negative, got " +
                          std::to_string(eta));
    if (!all_finite(target)) throw DomainError("squared_error: non-finite target");
    const std::size_t k = target.size();
    auto eval = [target, eta](const Vec& y) {
        double acc = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double d = y[i] - target[i];
            acc += d * d;
        }
        return 0.5 * eta * acc;
    };
    auto erosion = [target, eta](const Vec& y) {
        Vec out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = eta * (y[i] - target[i]);
        return out;
    };
    return LossPredicate(k, std::move(eval), std::move(erosion),
                         loss_kind::SquaredError{std::move(target), eta});
}

/// x ⊨ L
inline double validity(const Vec& x, const LossPredicate& l) { return l.eval(x); }

/// N ≪ L = L ∘ ⟦N⟧. Its erosion is N ⋘ L′, so (N ≪ L)′ = N ⋘ L′ holds by
/// construction.
inline LossPredicate transform_loss(const Network& net, const LossPredicate& l) {
    if (l.dim() != net.out_dim())
        detail::shape_fail("transform_loss", "loss dim " + std::to_string(l.dim()),
                           "network out_dim " + std::to_string(net.out_dim()));
    auto shared_net = std::make_shared<const Network>(net);
    auto shared_loss = std::make_shared<const LossPredicate>(l);
    auto eval = [shared_net, shared_loss](const Vec& x) {
        return shared_loss->eval(net_forward(*shared_net, x));
    };
    auto erosion = [shared_net, shared_loss](const Vec& x) {
        return erosion_transform_net(*shared_net, shared_loss->erosion_fn(), x);
    };
    return LossPredicate(net.in_dim(), std::move(eval), std::move(erosion),
                         loss_kind::Transformed{shared_net, shared_loss});
}

struct ValidityPair {
    double lhs; // N ≫ x ⊨ L
    double rhs; // x ⊨ N ≪ L
};

inline ValidityPair validity_equation_check(const Network& net, const Vec& x,
                                            const LossPredicate& l) {
    return {validity(net_forward(net, x), l), validity(x, transform_loss(net, l))};
}

} // namespace nncat
