// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file operator.hpp
 * @brief Rank-≤2 second-quantized operators and conversions between vacua.
 *
 * An operator is
 *   scalar + Σ one_body(p,q) a+_p a_q + ¼ Σ two_body(p,q,r,s) a+_p a+_q a_s a_r
 * where the strings are either bare (vacuum-ordered) or generalized normal
 * ordered with respect to a CumulantSet.
 */
#pragma once

#include <qdsrg/cumulants.hpp>
#include <qdsrg/tensor.hpp>

#include <cstdint>
#include <vector>

namespace qdsrg {

enum class Vacuum { bare, gno };

struct ManyBodyOperator {
    double scalar = 0.0;
    Matrix one_body;
    Tensor4 two_body;
    Vacuum vacuum = Vacuum::bare;
    std::uint64_t reference = 0;  ///< CumulantSet::tag() when vacuum == gno

    static ManyBodyOperator zero(std::size_t n, Vacuum v = Vacuum::bare, std::uint64_t ref = 0);

    std::size_t n() const { return static_cast<std::size_t>(one_body.rows()); }

    ManyBodyOperator& operator+=(const ManyBodyOperator& o);
    ManyBodyOperator& operator*=(double a);
    /// this += a * o (vacuum of this is kept)
    void axpy(double a, const ManyBodyOperator& o);

    /// |scalar| + ‖one_body‖_F + ‖two_body‖_F
    double component_norm() const;
    /// max over components of |X - X^T| (one-body) and |v_pqrs - v_rspq|
    double hermiticity_defect() const;
};

/// Largest elementwise difference over all three components.
double max_abs_diff(const ManyBodyOperator& a, const ManyBodyOperator& b);

/// Antisymmetric-pair check on two_body (max defect).
double antisymmetry_defect(const ManyBodyOperator& op);

/// GNO -> bare with γ1 and λ2 of `cum`. Bare input is returned unchanged.
ManyBodyOperator to_bare_operator(const ManyBodyOperator& op, const CumulantSet& cum);

/// Bare -> GNO with respect to `cum`. GNO input must already match `cum`.
ManyBodyOperator normal_order(const ManyBodyOperator& op, const CumulantSet& cum);

/// Restrict a bare operator to `keep` with `occupied` orbitals folded in as always filled.
ManyBodyOperator fold_and_restrict(const ManyBodyOperator& bare, const std::vector<std::size_t>& occupied,
                                   const std::vector<std::size_t>& keep);

}  // namespace qdsrg
