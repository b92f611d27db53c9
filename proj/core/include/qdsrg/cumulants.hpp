// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cumulants.hpp
 * @brief Density cumulants, their truncations, λ3 reconstruction and RDM noise.
 *
 * Cumulants live on the active spin orbitals. A CumulantSet can be embedded in a
 * larger spin-orbital space (core/active/virtual) so that the full one-body
 * density γ (identity on core, λ1 on active, zero on virtual) and η = 1 - γ are
 * available to the transformation engine.
 */
#pragma once

#include <qdsrg/rdm.hpp>
#include <qdsrg/tensor.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qdsrg {

enum class TruncationPolicy { exact, lambda2_diagonal, lambda1_diagonal };
enum class L3Policy { exact, zero, gamma3_zero };

std::string to_string(TruncationPolicy p);
std::string to_string(L3Policy p);

struct CumulantSet {
    std::size_t n_orbitals = 0;        ///< spin orbitals of the embedding space
    std::vector<std::size_t> core;     ///< spin-orbital indices, doubly occupied
    std::vector<std::size_t> active;   ///< spin-orbital indices carrying l1/l2/l3
    std::vector<std::size_t> virt;     ///< spin-orbital indices, empty
    Matrix l1;                         ///< λ^u_v over active
    Tensor4 l2;                        ///< λ^{uv}_{xy} over active
    std::optional<Tensor6> l3;         ///< λ^{uvw}_{xyz}; absent means zero
    TruncationPolicy policy = TruncationPolicy::exact;
    L3Policy l3_policy = L3Policy::exact;

    std::size_t n_active() const { return active.size(); }
    /// γ over the embedding space: 1 on core, λ1 on active, 0 elsewhere.
    Matrix g1_full() const;
    /// η = 1 - γ restricted to particles (zero on core).
    Matrix eta1() const;
    /// Fingerprint of the densities, used to tag normal-ordered operators.
    std::uint64_t tag() const;
};

struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::size_t n_samples = 1;
};

/// Exact cumulant decomposition. With l3_policy = exact, r.g3 is required.
CumulantSet cumulants_from_rdms(const RDMSet& r, L3Policy l3_policy = L3Policy::exact);

/// Level 1: diagonal λ1, λ2 = 0. Level 2: full λ1, λ2 keeps λ^{uv}_{uv} and λ^{uv}_{vu}.
CumulantSet apply_truncation(const CumulantSet& c, int level);

/// λ3 = 0 (zero) or the λ3 that makes the reassembled γ3 vanish (gamma3_zero).
CumulantSet reconstruct_lambda3(const CumulantSet& c, L3Policy policy);

/// Gaussian noise on the symmetry-unique, Sz-conserving elements of γ1 and γ2.
RDMSet add_noise(const RDMSet& r, const NoiseSpec& spec);

/// Place active-space cumulants into a spin-orbital space.
CumulantSet embed(const CumulantSet& c, std::size_t n_orbitals, std::vector<std::size_t> core,
                  std::vector<std::size_t> active, std::vector<std::size_t> virt);

/// γ2 from λ1, λ2.
Tensor4 reassemble_g2(const Matrix& l1, const Tensor4& l2);

/// γ3 from λ1, λ2, λ3 (λ3 may be absent).
Tensor6 reassemble_g3(const Matrix& l1, const Tensor4& l2, const Tensor6* l3);

/// Antisymmetrized λ1⊗λ2 (9 terms) plus λ1⊗λ1⊗λ1 (6 terms): the disconnected part of γ3.
Tensor6 disconnected_g3(const Matrix& l1, const Tensor4& l2);

/// Largest index count for which dense rank-6 tensors are allowed.
inline constexpr std::size_t kMaxRank3Orbitals = 14;

/// JSON ("qdsrg-rdm-v1") serialization of RDMs and cumulants.
std::string rdms_to_json(const RDMSet& r);
RDMSet rdms_from_json(const std::string& text);
std::string cumulants_to_json(const CumulantSet& c);

}  // namespace qdsrg
