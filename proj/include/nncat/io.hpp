#pragma once

// File formats: networks as JSON documents, datasets as headerless CSV, loss
// traces as "step,loss" rows. Reals in reports are printed with 8 decimals.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "activation.hpp"
#include "algebra.hpp"
#include "backprop.hpp"
#include "network.hpp"

namespace nncat {

/// Malformed input text or unreadable files.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed 8-decimal rendering of the exact binary value, ties to even.
inline std::string format_fixed8(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8f", x);
    return buf;
}

inline std::string format_vec(std::span<const double> v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_fixed8(v[i]);
    }
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view field, const std::string& context) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw ParseError(context + ": not a decimal number: '" + std::string(field) + "'");
    if (!std::isfinite(value))
        throw ParseError(context + ": non-finite value '" + std::string(field) + "'");
    return value;
}

} // namespace detail

/// "x1,…,xn" -> Vec. The empty (or all-blank) literal is the empty vector.
inline Vec parse_vec_literal(std::string_view text, const std::string& context = "vector") {
    Vec out;
    if (detail::trim(text).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(detail::parse_real(text.substr(start, comma - start), context));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Network files
//
// {
//   "in_dim": 2, "out_dim": 2,
//   "layers": [
//     { "weights": [[0.15, 0.2], [0.25, 0.3]], "bias": [0.35, 0.35],
//       "mask": [[true, true], [true, true]], "bias_mutable": [true, true],
//       "activation": "sigmoid" }, ...
//   ]
// }
//
// "mask" and "bias_mutable" default to all true. "in_dim"/"out_dim" are always
// written; on read they are required only where the layers cannot determine
// them (empty networks, zero-width layers).

inline nlohmann::json network_to_json(const Network& net) {
    using nlohmann::json;
    json layers = json::array();
    for (const Layer& l : net.layers()) {
        const Mat& t = l.transition();
        json weights = json::array();
        json mask = json::array();
        json bias = json::array();
        json bias_mut = json::array();
        for (std::size_t j = 0; j < l.out_dim(); ++j) {
            json wrow = json::array();
            json mrow = json::array();
            for (std::size_t i = 0; i < l.in_dim(); ++i) {
                wrow.push_back(t(j, i));
                mrow.push_back(l.mask()(j, i));
            }
            weights.push_back(std::move(wrow));
            mask.push_back(std::move(mrow));
            bias.push_back(t(j, l.in_dim()));
            bias_mut.push_back(static_cast<bool>(l.bias_mutable()[j]));
        }
        layers.push_back({{"in_dim", l.in_dim()},
                          {"weights", std::move(weights)},
                          {"bias", std::move(bias)},
                          {"mask", std::move(mask)},
                          {"bias_mutable", std::move(bias_mut)},
                          {"activation", std::string(to_string(l.activation()))}});
    }
    return {{"in_dim", net.in_dim()}, {"out_dim", net.out_dim()}, {"layers", std::move(layers)}};
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& ctx) {
    if (!obj.is_object() || !obj.contains(key))
        throw ParseError(ctx + ": missing field '" + key + "'");
    return obj.at(key);
}

inline double json_real(const nlohmann::json& v, const std::string& ctx) {
    if (!v.is_number()) throw ParseError(ctx + ": expected a number, got " + v.dump());
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(ctx + ": non-finite value");
    return x;
}

inline bool json_bool(const nlohmann::json& v, const std::string& ctx) {
    if (!v.is_boolean()) throw ParseError(ctx + ": expected true/false, got " + v.dump());
    return v.get<bool>();
}

inline std::size_t json_count(const nlohmann::json& v, const std::string& ctx) {
    if (!v.is_number_unsigned()) throw ParseError(ctx + ": expected a count, got " + v.dump());
    return v.get<std::size_t>();
}

inline Layer layer_from_json(const nlohmann::json& obj, std::optional<std::size_t> expected_in,
                             const std::string& ctx) {
    const auto& bias = require(obj, "bias", ctx);
    const auto& weights = require(obj, "weights", ctx);
    if (!bias.is_array()) throw ParseError(ctx + ": 'bias' must be an array");
    if (!weights.is_array()) throw ParseError(ctx + ": 'weights' must be an array");
    const std::size_t k = bias.size();
    if (weights.size() != k)
        throw ParseError(ctx + ": weights has " + std::to_string(weights.size()) +
                         " rows but bias has length " + std::to_string(k));

    std::optional<std::size_t> n;
    if (obj.contains("in_dim")) n = json_count(obj.at("in_dim"), ctx + ".in_dim");
    if (!n && k > 0) {
        if (!weights[0].is_array()) throw ParseError(ctx + ": weights rows must be arrays");
        n = weights[0].size();
    }
    if (!n) n = expected_in;
    if (!n) throw ParseError(ctx + ": cannot infer in_dim of a zero-width layer");
    if (expected_in && *expected_in != *n)
        throw ParseError(ctx + ": in_dim " + std::to_string(*n) + " does not match previous out_dim " +
                         std::to_string(*expected_in));

    Mat t(k, *n + 1);
    for (std::size_t j = 0; j < k; ++j) {
        const auto& row = weights[j];
        const std::string rctx = ctx + ".weights[" + std::to_string(j) + "]";
        if (!row.is_array() || row.size() != *n)
            throw ParseError(rctx + ": expected " + std::to_string(*n) + " entries");
        for (std::size_t i = 0; i < *n; ++i) t(j, i) = json_real(row[i], rctx);
        t(j, *n) = json_real(bias[j], ctx + ".bias");
    }

    BoolMat mask(k, *n, true);
    if (obj.contains("mask")) {
        const auto& m = obj.at("mask");
        if (!m.is_array() || m.size() != k)
            throw ParseError(ctx + ": mask must have " + std::to_string(k) + " rows");
        for (std::size_t j = 0; j < k; ++j) {
            const std::string rctx = ctx + ".mask[" + std::to_string(j) + "]";
            if (!m[j].is_array() || m[j].size() != *n)
                throw ParseError(rctx + ": expected " + std::to_string(*n) + " entries");
            for (std::size_t i = 0; i < *n; ++i) mask.set(j, i, json_bool(m[j][i], rctx));
        }
    }

    std::vector<bool> bias_mutable(k, true);
    if (obj.contains("bias_mutable")) {
        const auto& b = obj.at("bias_mutable");
        if (!b.is_array() || b.size() != k)
            throw ParseError(ctx + ": bias_mutable must have length " + std::to_string(k));
        for (std::size_t j = 0; j < k; ++j) bias_mutable[j] = json_bool(b[j], ctx + ".bias_mutable");
    }

    const auto& tag = require(obj, "activation", ctx);
    if (!tag.is_string()) throw ParseError(ctx + ": activation must be a string");
    const auto act = parse_activation(tag.get<std::string>());
    if (!act) throw ParseError(ctx + ": unknown activation '" + tag.get<std::string>() + "'");

    return Layer(std::move(t), std::move(mask), std::move(bias_mutable), *act);
}

} // namespace detail

inline Network network_from_json(const nlohmann::json& doc, const std::string& ctx = "network") {
    if (!doc.is_object()) throw ParseError(ctx + ": expected a JSON object");
    const auto& layers = detail::require(doc, "layers", ctx);
    if (!layers.is_array()) throw ParseError(ctx + ": 'layers' must be an array");

    std::optional<std::size_t> in_dim, out_dim;
    if (doc.contains("in_dim")) in_dim = detail::json_count(doc.at("in_dim"), ctx + ".in_dim");
    if (doc.contains("out_dim")) out_dim = detail::json_count(doc.at("out_dim"), ctx + ".out_dim");

    std::vector<Layer> parsed;
    std::optional<std::size_t> expected = in_dim;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        parsed.push_back(detail::layer_from_json(layers[i], expected,
                                                 ctx + ".layers[" + std::to_string(i) + "]"));
        expected = parsed.back().out_dim();
    }

    try {
        if (parsed.empty()) {
            if (!in_dim && !out_dim) throw ParseError(ctx + ": empty network needs in_dim");
            const std::size_t n = in_dim ? *in_dim : *out_dim;
            return Network(n, out_dim ? *out_dim : n, {});
        }
        const std::size_t n = parsed.front().in_dim();
        const std::size_t k = parsed.back().out_dim();
        return Network(in_dim.value_or(n), out_dim.value_or(k), std::move(parsed));
    } catch (const ShapeError& e) {
        throw ParseError(ctx + ": " + e.what());
    }
}

inline std::string serialize_network(const Network& net) { return network_to_json(net).dump(2) + "\n"; }

inline Network parse_network(std::string_view text, const std::string& ctx = "network") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(ctx + ": " + e.what());
    }
    try {
        return network_from_json(doc, ctx);
    } catch (const ShapeError& e) {
        throw ParseError(ctx + ": " + e.what());
    } catch (const DomainError& e) {
        throw ParseError(ctx + ": " + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out << text;
    if (!out) throw ParseError(path + ": write failed");
}

inline Network read_network_file(const std::string& path) {
    return parse_network(read_text_file(path), path);
}

inline void write_network_file(const std::string& path, const Network& net) {
    write_text_file(path, serialize_network(net));
}

// ---------------------------------------------------------------------------
// Datasets: one sample per line, n inputs then k targets. Blank lines are
// skipped.

inline std::vector<Sample> parse_dataset(std::string_view text, std::size_t n, std::size_t k,
                                         const std::string& ctx = "dataset") {
    std::vector<Sample> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (detail::trim(line).empty()) continue;
        const std::string lctx = ctx + ":" + std::to_string(line_no);
        Vec values = parse_vec_literal(line, lctx);
        if (values.size() != n + k)
            throw ParseError(lctx + ": expected " + std::to_string(n + k) + " values (" +
                             std::to_string(n) + " inputs + " + std::to_string(k) +
                             " targets), got " + std::to_string(values.size()));
        rows.push_back({Vec(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n)),
                        Vec(values.begin() + static_cast<std::ptrdiff_t>(n), values.end())});
    }
    return rows;
}

inline std::vector<Sample> read_dataset_file(const std::string& path, std::size_t n, std::size_t k) {
    return parse_dataset(read_text_file(path), n, k, path);
}

// ---------------------------------------------------------------------------
// Loss traces

inline std::string format_trace(std::span<const double> losses) {
    std::string out;
    for (std::size_t i = 0; i < losses.size(); ++i)
        out += std::to_string(i + 1) + "," + format_fixed8(losses[i]) + "\n";
    return out;
}

struct TraceRow {
    std::size_t step;
    double loss;
};

inline std::vector<TraceRow> parse_trace(std::string_view text, const std::string& ctx = "trace") {
    std::vector<TraceRow> rows;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = detail::trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        const std::string lctx = ctx + ":" + std::to_string(line_no);
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) throw ParseError(lctx + ": expected 'step,loss'");
        std::size_t step = 0;
        const auto field = detail::trim(line.substr(0, comma));
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), step);
        if (ec != std::errc() || ptr != field.data() + field.size())
            throw ParseError(lctx + ": bad step '" + std::string(field) + "'");
        if (step != rows.size() + 1)
            throw ParseError(lctx + ": step " + std::to_string(step) + " out of sequence");
        rows.push_back({step, detail::parse_real(line.substr(comma + 1), lctx)});
    }
    return rows;
}

} // namespace nncat
