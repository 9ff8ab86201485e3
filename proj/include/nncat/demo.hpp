#pragma once

// The classic two-layer worked example (Matt Mazur's backpropagation walk
// through): a 2 => 2 => 2 sigmoid network, input (0.05, 0.1), target
// (0.01, 0.99), learning rate 0.5. The demo recomputes everything and checks
// it against published 8-decimal values.

#include <cmath>
#include <ostream>
#include <string>

#include "backprop.hpp"
#include "io.hpp"
#include "loss.hpp"
#include "network.hpp"

namespace nncat::mazur {

inline const Mat first_transition{{0.15, 0.2, 0.35}, {0.25, 0.3, 0.35}};
inline const Mat second_transition{{0.4, 0.45, 0.6}, {0.5, 0.55, 0.6}};
inline const Vec input{0.05, 0.1};
inline const Vec target{0.01, 0.99};
inline constexpr double eta = 0.5;

inline Layer first_layer() { return Layer(first_transition, Activation::sigmoid); }
inline Layer second_layer() { return Layer(second_transition, Activation::sigmoid); }
inline Network network() { return Network({first_layer(), second_layer()}); }
inline LossPredicate loss() { return squared_error(target, eta); }

/// Published values. The gradient matrices are printed without the learning
/// rate, while the updates subtract η times them; the engine folds η into the
/// loss, so its gradients are compared against eta × these.
struct Expected {
    Vec hidden{0.59326999, 0.59688438};
    Vec output{0.75136507, 0.77292847};
    Mat second_gradient{{0.08216704, 0.08266763, 0.13849856},
                        {-0.02260254, -0.02274024, -0.03809824}};
    Mat first_gradient{{0.00043857, 0.00087714, 0.00877135},
                       {0.00049771, 0.00099543, 0.00995425}};
    Mat second_updated{{0.35891648, 0.40866619, 0.53075072},
                       {0.51130127, 0.56137012, 0.61904912}};
    Mat first_updated{{0.14978072, 0.19956143, 0.34561432},
                      {0.24975114, 0.29950229, 0.34502287}};
};

inline constexpr double tolerance = 1e-8;

namespace detail {

class Checker {
public:
    explicit Checker(std::ostream& out) : out_(out) {}

    void value(const std::string& name, double got, double want) {
        const bool ok = std::abs(got - want) <= tolerance;
        all_ok_ = all_ok_ && ok;
        out_ << "  " << name << " = " << format_fixed8(got) << "  expected " << format_fixed8(want)
             << "  " << (ok ? "match" : "MISMATCH") << "\n";
    }

    void vec(const std::string& name, const Vec& got, const Vec& want) {
        for (std::size_t i = 0; i < got.size(); ++i)
            value(name + "[" + std::to_string(i) + "]", got[i], want[i]);
    }

    void mat(const std::string& name, const Mat& got, const Mat& want, double scale = 1.0) {
        for (std::size_t j = 0; j < got.rows(); ++j)
            for (std::size_t i = 0; i < got.cols(); ++i)
                value(name + "[" + std::to_string(j) + "," + std::to_string(i) + "]", got(j, i),
                      scale * want(j, i));
    }

    bool all_ok() const { return all_ok_; }

private:
    std::ostream& out_;
    bool all_ok_ = true;
};

} // namespace detail

/// Prints the forward states, one backprop step and the updated matrices,
/// flagging each value. Returns 0 iff everything matches `expected`.
inline int run_demo(std::ostream& out, const Expected& expected = {}) {
    const Network net = network();
    const LossPredicate l = loss();
    out << "network 2 => 2 => 2, sigmoid; input " << format_vec(input) << "; target "
        << format_vec(target) << "; eta " << format_fixed8(eta) << "\n";

    detail::Checker check(out);
    const auto step = backprop_step(net, input, l);
    const auto& states = step.trace.states;

    out << "forward states\n";
    check.vec("b", states[1], expected.hidden);
    check.vec("c", states[2], expected.output);
    out << "  loss c |= L = " << format_fixed8(validity(states[2], l)) << "\n";

    out << "gradients (eta folded into L, compared with eta x published)\n";
    check.mat("grad S", step.trace.gradients[1].matrix, expected.second_gradient, eta);
    check.mat("grad T", step.trace.gradients[0].matrix, expected.first_gradient, eta);

    out << "updated transitions\n";
    check.mat("S'", step.network[1].transition(), expected.second_updated);
    check.mat("T'", step.network[0].transition(), expected.first_updated);

    out << (check.all_ok() ? "all values match\n" : "MISMATCH against published values\n");
    return check.all_ok() ? 0 : 1;
}

} // namespace nncat::mazur
