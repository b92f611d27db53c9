// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file tensor.hpp
 * @brief Dense hypercubic tensors of rank 4 and 6 plus the matrix alias.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace qdsrg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Row-major n^R tensor; every mode has the same extent.
template <int R>
class CubeTensor {
public:
    CubeTensor() = default;
    explicit CubeTensor(std::size_t n) : n_(n), data_(ipow(n, R), 0.0) {}

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return data_.size(); }
    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    std::vector<double>& raw() noexcept { return data_; }
    const std::vector<double>& raw() const noexcept { return data_; }

    template <typename... I>
    double& operator()(I... idx) noexcept {
        static_assert(sizeof...(I) == R);
        return data_[offset(idx...)];
    }
    template <typename... I>
    double operator()(I... idx) const noexcept {
        static_assert(sizeof...(I) == R);
        return data_[offset(idx...)];
    }

    template <typename... I>
    std::size_t offset(I... idx) const noexcept {
        std::size_t off = 0;
        ((off = off * n_ + static_cast<std::size_t>(idx)), ...);
        return off;
    }

    void set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

    double norm() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    CubeTensor& operator+=(const CubeTensor& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    CubeTensor& operator-=(const CubeTensor& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    CubeTensor& operator*=(double a) {
        for (double& v : data_) v *= a;
        return *this;
    }
    /// this += a * o
    void axpy(double a, const CubeTensor& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * o.data_[i];
    }

    bool operator==(const CubeTensor& o) const = default;

private:
    static std::size_t ipow(std::size_t b, int e) {
        std::size_t r = 1;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    }

    std::size_t n_ = 0;
    std::vector<double> data_;
};

using Tensor4 = CubeTensor<4>;
using Tensor6 = CubeTensor<6>;

/// Largest elementwise difference between two equally shaped tensors.
template <int R>
double max_abs_diff(const CubeTensor<R>& a, const CubeTensor<R>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.raw()[i] - b.raw()[i]));
    return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

/// Antisymmetrize a rank-4 coefficient over (0,1) and (2,3): sum of the four signed permutations.
Tensor4 antisymmetrize_pairs(const Tensor4& c);

/// Antisymmetry defect max |t_pqrs + t_qprs| + |t_pqrs + t_pqsr| (0 for an exact antisymmetric tensor).
double antisymmetry_defect(const Tensor4& t);

/// Hermiticity defect max |t_pqrs - t_rspq|.
double hermiticity_defect(const Tensor4& t);

/// Rotate all four modes: out_pqrs = sum U_ap U_bq U_cr U_ds t_abcd.
Tensor4 rotate(const Tensor4& t, const Matrix& u);

/// Rotate all six modes with U.
Tensor6 rotate(const Tensor6& t, const Matrix& u);

/// Sum of squares helper used by component norms.
inline double frobenius(const Matrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

}  // namespace qdsrg
