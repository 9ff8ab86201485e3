#pragma once

// Command dispatch for the nncat tool. Exit codes: 0 success, 1 a check
// failed, 2 usage or input error.

#include <cstdlib>
#include <cstdio>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "backprop.hpp"
#include "demo.hpp"
#include "io.hpp"
#include "loss.hpp"
#include "network.hpp"
#include "oracle.hpp"
#include "random.hpp"

namespace nncat::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

/// Input problems that should be reported and mapped to exit 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ForwardArgs {
    std::string net;
    std::string input;
};

struct TrainArgs {
    std::string net;
    std::string data;
    double eta = 0.0;
    std::size_t epochs = 1;
    std::string out;
    std::string trace;
};

struct GradcheckArgs {
    std::optional<std::string> net;
    std::optional<std::string> input;
    std::optional<std::string> target;
    double eta = 1.0;
    double eps = 1e-6;
    double tol = 1e-5;
    std::optional<std::uint64_t> seed;
};

inline int cmd_forward(const ForwardArgs& a, std::ostream& out) {
    const Network net = read_network_file(a.net);
    const Vec x = parse_vec_literal(a.input, "--input");
    if (x.size() != net.in_dim())
        throw UsageError("--input has " + std::to_string(x.size()) + " values but " + a.net +
                         " expects in_dim " + std::to_string(net.in_dim()));
    out << format_vec(net_forward(net, x)) << "\n";
    return exit_ok;
}

inline int cmd_train(const TrainArgs& a, std::ostream& out) {
    if (!(a.eta > 0.0)) throw UsageError("--eta must be positive");
    const Network net = read_network_file(a.net);
    const auto data = read_dataset_file(a.data, net.in_dim(), net.out_dim());
    if (data.empty()) throw UsageError(a.data + ": dataset is empty");
    const TrainResult result = train(net, data, a.eta, SgdConfig{a.epochs});
    write_network_file(a.out, result.network);
    write_text_file(a.trace, format_trace(result.losses));
    out << "steps " << result.losses.size();
    if (!result.losses.empty()) out << ", last loss " << format_fixed8(result.losses.back());
    out << "\n";
    return exit_ok;
}

namespace detail {

inline std::optional<std::uint64_t> seed_from_env() {
    const char* env = std::getenv("NNCAT_SEED");
    if (env == nullptr || *env == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw UsageError("NNCAT_SEED is not an unsigned integer");
    return v;
}

inline std::string format_sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8e", x);
    return buf;
}

} // namespace detail

/// Compares the backprop gradients of every layer against finite differences
/// of the layer's suffix loss. With no --net, a random 3-layer network (and
/// any missing input/target) is drawn from the seed.
inline int cmd_gradcheck(const GradcheckArgs& a, std::ostream& out) {
    if (!(a.eps > 0.0)) throw UsageError("--eps must be positive");
    if (!(a.tol >= 0.0)) throw UsageError("--tol must be non-negative");
    if (!(a.eta >= 0.0)) throw UsageError("--eta must be non-negative");

    std::optional<Vec> input;
    std::optional<Vec> target;
    if (a.input) input = parse_vec_literal(*a.input, "--input");
    if (a.target) target = parse_vec_literal(*a.target, "--target");

    std::optional<Network> net;
    if (a.net) {
        net = read_network_file(*a.net);
        if (!input || !target) throw UsageError("--input and --target are required with --net");
    } else {
        std::optional<std::uint64_t> seed = detail::seed_from_env();
        if (!seed) seed = a.seed;
        if (!seed) throw UsageError("gradcheck needs --net or --seed (or NNCAT_SEED)");
        Rng rng(*seed);
        std::vector<std::size_t> widths = random_widths(rng, 3, 1, 4);
        if (input) widths.front() = input->size();
        if (target) widths.back() = target->size();
        net = random_network(rng, widths);
        if (!input) input = random_vec(rng, widths.front());
        if (!target) target = random_vec(rng, widths.back(), 0.0, 1.0);
        out << "random network, seed " << *seed << ", widths";
        for (auto w : widths) out << " " << w;
        out << "\n";
    }
    if (input->size() != net->in_dim())
        throw UsageError("--input has " + std::to_string(input->size()) +
                         " values but the network expects in_dim " + std::to_string(net->in_dim()));
    if (target->size() != net->out_dim())
        throw UsageError("--target has " + std::to_string(target->size()) +
                         " values but the network expects out_dim " +
                         std::to_string(net->out_dim()));

    const LossPredicate loss = squared_error(*target, a.eta);
    const auto step = backprop_step(*net, *input, loss);
    FdConfig cfg;
    cfg.eps = a.eps;
    bool ok = true;
    for (std::size_t i = 0; i < net->size(); ++i) {
        const LossPredicate suffix = transform_loss(net->slice(i + 1, net->size()), loss);
        const Gradient fd = fd_layer_gradient((*net)[i], step.trace.states[i], suffix, cfg);
        const double dev = max_abs_deviation(step.trace.gradients[i], fd);
        const bool pass = dev <= a.tol;
        ok = ok && pass;
        out << "layer " << i + 1 << " (" << to_string((*net)[i].activation())
            << "): max |analytic - fd| = " << detail::format_sci(dev) << "  "
            << (pass ? "ok" : "FAIL") << "\n";
    }
    out << (ok ? "gradcheck passed" : "gradcheck FAILED") << " (eps " << detail::format_sci(a.eps)
        << ", tol " << detail::format_sci(a.tol) << ")\n";
    return ok ? exit_ok : exit_check_failed;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"nncat: MLP forward/backward semantics, training and gradient checks"};
    app.require_subcommand(1);

    ForwardArgs fwd;
    auto* forward = app.add_subcommand("forward", "Propagate an input state through a network");
    forward->add_option("--net", fwd.net, "Network file (JSON)")->required();
    forward->add_option("--input", fwd.input, "Comma-separated input state")->required();

    TrainArgs tr;
    auto* trainc = app.add_subcommand("train", "Per-example gradient descent over a CSV dataset");
    trainc->add_option("--net", tr.net, "Initial network file")->required();
    trainc->add_option("--data", tr.data, "Dataset CSV: inputs then targets per row")->required();
    trainc->add_option("--eta", tr.eta, "Learning rate (folded into the loss)")->required();
    trainc->add_option("--epochs", tr.epochs, "Passes over the dataset")->required();
    trainc->add_option("--out", tr.out, "Where to write the trained network")->required();
    trainc->add_option("--trace", tr.trace, "Where to write step,loss rows")->required();

    GradcheckArgs gc;
    auto* gradcheck = app.add_subcommand("gradcheck", "Compare analytic gradients with finite differences");
    gradcheck->add_option("--net", gc.net, "Network file; omit to use a random network");
    gradcheck->add_option("--input", gc.input, "Comma-separated input state");
    gradcheck->add_option("--target", gc.target, "Comma-separated target state");
    gradcheck->add_option("--eta", gc.eta, "Learning rate folded into the loss");
    gradcheck->add_option("--eps", gc.eps, "Finite-difference step");
    gradcheck->add_option("--tol", gc.tol, "Largest allowed absolute deviation");
    gradcheck->add_option("--seed", gc.seed, "Seed for the random network (NNCAT_SEED overrides)");

    std::string demo_name;
    auto* demo = app.add_subcommand("demo", "Built-in worked examples");
    demo->add_option("name", demo_name, "Which demo (mazur)")->required()->check(CLI::IsMember({"mazur"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (*forward) return cmd_forward(fwd, out);
        if (*trainc) return cmd_train(tr, out);
        if (*gradcheck) return cmd_gradcheck(gc, out);
        if (*demo) return mazur::run_demo(out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

} // namespace nncat::cli
