// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file rdm.hpp
 * @brief Reduced density matrices over active spin orbitals.
 */
#pragma once

#include <qdsrg/tensor.hpp>

#include <optional>

namespace qdsrg {

/**
 * @brief γ1, γ2 and optionally γ3 over the active spin orbitals.
 *
 * g1(p,q) = <a+_p a_q>, g2(p,q,r,s) = <a+_p a+_q a_s a_r>,
 * g3(p,q,r,s,t,u) = <a+_p a+_q a+_r a_u a_t a_s>.
 */
struct RDMSet {
    Matrix g1;
    Tensor4 g2;
    std::optional<Tensor6> g3;

    std::size_t n() const { return static_cast<std::size_t>(g1.rows()); }
};

}  // namespace qdsrg
