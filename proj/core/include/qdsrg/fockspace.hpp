// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fockspace.hpp
 * @brief Determinant-space exact diagonalization, RDMs and brute-force oracles.
 *
 * A determinant is a bitset over spin orbitals; |D> = a+_{i1} a+_{i2} ... |0>
 * with i1 < i2 < ... carries the positive phase.
 */
#pragma once

#include <qdsrg/cumulants.hpp>
#include <qdsrg/fcidump.hpp>
#include <qdsrg/operator.hpp>
#include <qdsrg/rdm.hpp>

#include <cstdint>
#include <vector>

namespace qdsrg {

using Determinant = std::uint64_t;

inline constexpr std::size_t kDefaultDeterminantCap = 1'000'000;
inline constexpr std::size_t kMaxDenseDimension = 4000;

struct CIWavefunction {
    std::vector<Determinant> determinants;
    Vector coefficients;
    double energy = 0.0;
};

/// All determinants with the given α/β counts, ordered lexicographically by occupied index list.
std::vector<Determinant> enumerate_determinants(std::size_t n_spinorb, std::size_t n_alpha,
                                                std::size_t n_beta,
                                                std::size_t cap = kDefaultDeterminantCap);

/// Slater–Condon Hamiltonian matrix, scalar included on the diagonal.
Matrix build_hamiltonian(const IntegralSet& ints, const std::vector<Determinant>& dets);

/// Same, for a bare Hermitian operator given by (scalar, h, v); the upper triangle is mirrored.
Matrix build_hamiltonian(double scalar, const Matrix& h, const Tensor4& v,
                         const std::vector<Determinant>& dets);

/// Lowest k eigenpairs; largest-magnitude coefficient made positive (ties: lowest index).
std::vector<CIWavefunction> solve_ground(const Matrix& H, std::size_t k,
                                         const std::vector<Determinant>& dets = {});

RDMSet compute_rdms(const CIWavefunction& wfn, int max_rank, std::size_t n_spinorb);

/// Full matrix of a general `op` in the determinant basis; GNO operators need `densities`.
Matrix operator_matrix(const ManyBodyOperator& op, const std::vector<Determinant>& dets,
                       const CumulantSet* densities = nullptr);

/// exp(-A) H exp(A); A must be antisymmetric within 1e-10.
Matrix brute_force_transform(const Matrix& Hm, const Matrix& Am);

/**
 * @brief Scalar, one- and two-body GNO parts of [O, A] by exhaustive Wick enumeration.
 *
 * Independent of dsrg::commutator_12; enumerates every contraction pattern of the
 * products OA and AO (pairwise γ/η contractions plus λ2/λ3 blocks) and evaluates
 * each as a generic tensor network. Intended for at most ~10 spin orbitals.
 */
ManyBodyOperator wick_commutator_oracle(const ManyBodyOperator& O, const ManyBodyOperator& A,
                                        const CumulantSet& cum);

/// Fermionic sign of a_p acting on `d` (p occupied): (-1)^{#occupied below p}.
int annihilation_sign(Determinant d, std::size_t p);

}  // namespace qdsrg
