#pragma once

// Dense real vectors and matrices with exactly the operations the two-pass
// semantics needs. Every reduction sums left to right in ascending index
// order, so results are bit-stable across runs and platforms with IEEE-754
// doubles.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nncat {

/// Raised when operand dimensions do not line up.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for non-finite reals where finite ones are required.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

using Vec = std::vector<double>;

namespace detail {

inline std::string dims(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

[[noreturn]] inline void shape_fail(const std::string& what, const std::string& lhs,
                                    const std::string& rhs) {
    throw ShapeError(what + ": " + lhs + " vs " + rhs);
}

} // namespace detail

inline bool all_finite(std::span<const double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Row-major dense matrix.
class Mat {
public:
    Mat() = default;

    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Mat(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw ShapeError("Mat: " + std::to_string(data_.size()) + " entries for shape " +
                             detail::dims(rows_, cols_));
    }

    /// Nested-list construction; all rows must have equal length.
    Mat(std::initializer_list<std::initializer_list<double>> rows) : rows_(rows.size()) {
        cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw ShapeError("Mat: ragged rows " + std::to_string(r.size()) + " vs " +
                                 std::to_string(cols_));
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Mat from_rows(const std::vector<Vec>& rows, std::size_t cols_if_empty = 0) {
        std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
        std::vector<double> data;
        data.reserve(rows.size() * cols);
        for (const auto& r : rows) {
            if (r.size() != cols)
                throw ShapeError("Mat: ragged rows " + std::to_string(r.size()) + " vs " +
                                 std::to_string(cols));
            data.insert(data.end(), r.begin(), r.end());
        }
        return Mat(rows.size(), cols, std::move(data));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data_).subspan(r * cols_, cols_);
    }
    std::span<const double> data() const noexcept { return data_; }

    bool finite() const { return all_finite(data_); }

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// T_*(x, 1): the linear extension of a transition matrix applied to x with an
/// appended constant 1 feeding the bias column.
inline Vec kleisli_apply(const Mat& t, std::span<const double> x) {
    if (t.cols() != x.size() + 1)
        detail::shape_fail("kleisli_apply", "matrix " + detail::dims(t.rows(), t.cols()),
                           "input length " + std::to_string(x.size()) + " (+1 bias)");
    const std::size_t n = x.size();
    Vec out(t.rows());
    for (std::size_t j = 0; j < t.rows(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += t(j, i) * x[i];
        acc += t(j, n);
        out[j] = acc;
    }
    return out;
}

inline Vec hadamard(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        detail::shape_fail("hadamard", "length " + std::to_string(u.size()),
                           "length " + std::to_string(v.size()));
    Vec out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * v[i];
    return out;
}

inline Mat hadamard(const Mat& u, const Mat& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols())
        detail::shape_fail("hadamard", detail::dims(u.rows(), u.cols()),
                           detail::dims(v.rows(), v.cols()));
    Vec prod = hadamard(u.data(), v.data());
    return Mat(u.rows(), u.cols(), std::move(prod));
}

/// s · wᵀ
inline Mat outer(std::span<const double> s, std::span<const double> w) {
    Mat out(s.size(), w.size());
    for (std::size_t j = 0; j < s.size(); ++j)
        for (std::size_t i = 0; i < w.size(); ++i) out(j, i) = s[j] * w[i];
    return out;
}

/// [T]: the matrix without its last (bias) column.
inline Mat weights_part(const Mat& t) {
    if (t.cols() == 0)
        throw ShapeError("weights_part: matrix " + detail::dims(t.rows(), t.cols()) +
                         " has no bias column");
    Mat out(t.rows(), t.cols() - 1);
    for (std::size_t j = 0; j < t.rows(); ++j)
        for (std::size_t i = 0; i + 1 < t.cols(); ++i) out(j, i) = t(j, i);
    return out;
}

/// Row vector times matrix: result_i = Σ_j s_j · A[j,i].
inline Vec vec_mat(std::span<const double> s, const Mat& a) {
    if (s.size() != a.rows())
        detail::shape_fail("vec_mat", "length " + std::to_string(s.size()),
                           "matrix " + detail::dims(a.rows(), a.cols()));
    Vec out(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j) acc += s[j] * a(j, i);
        out[i] = acc;
    }
    return out;
}

/// (x, 1)
inline Vec with_bias_input(std::span<const double> x) {
    Vec out(x.begin(), x.end());
    out.push_back(1.0);
    return out;
}

} // namespace nncat
