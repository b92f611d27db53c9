// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dsrg.hpp
 * @brief Spin-orbital LDSRG(2): Fock build, semicanonical orbitals, regularized
 *        amplitudes, GNO commutators truncated to two-body, BCH summation and
 *        active-space extraction.
 *
 * Index convention: hole = core ∪ active, particle = active ∪ virtual.
 * t1(i,a) and t2(i,j,a,b) are stored over the full spin-orbital range and are
 * zero outside the hole/particle blocks and on the all-active blocks.
 */
#pragma once

#include <qdsrg/cumulants.hpp>
#include <qdsrg/fcidump.hpp>
#include <qdsrg/operator.hpp>

#include <string>
#include <tuple>
#include <vector>

namespace qdsrg {

enum class FlowMode { first_order, iterated };
enum class UpdateRule { dsrg_standard, source_literal };

struct FlowConfig {
    double s = 0.5;
    std::size_t max_bch_terms = 20;
    double bch_tolerance = 1e-12;
    FlowMode mode = FlowMode::iterated;
    std::size_t max_iterations = 100;
    double energy_convergence = 1e-9;
    double residual_convergence = 1e-7;
    double damping = 0.5;  ///< weight of the previous amplitudes in the update
    UpdateRule update_rule = UpdateRule::dsrg_standard;

    void validate() const;
    double energy_cutoff() const;  ///< Λ = 1/√s (infinite for s = 0)
};

struct Amplitudes {
    Matrix t1;   ///< t1(i,a)
    Tensor4 t2;  ///< t2(i,j,a,b)

    double norm() const;
    /// A = T - T† as an operator GNO-tagged with `ref`.
    ManyBodyOperator anti_hermitian(std::uint64_t ref) const;
};

struct SemicanonicalBasis {
    Matrix rotation;  ///< columns are new orbitals in the old basis
    Vector epsilon;
};

/// f_pq = h_pq + Σ_rs <pr||qs> γ_rs
Matrix build_fock(const IntegralSet& ints, const CumulantSet& cum);

std::tuple<IntegralSet, CumulantSet, SemicanonicalBasis> semicanonicalize(const IntegralSet& ints,
                                                                          const CumulantSet& cum);

/// (1 - exp(-sΔ²))/Δ with reg(0, s) = 0.
double regularizer(double delta, double s);

Amplitudes first_order_amplitudes(const Matrix& f, const Tensor4& v, const Vector& eps,
                                  const CumulantSet& cum, double s);

/// Scalar, one- and two-body GNO parts of [O, A].
ManyBodyOperator commutator_12(const ManyBodyOperator& O, const ManyBodyOperator& A,
                               const CumulantSet& cum);

struct BCHResult {
    ManyBodyOperator hbar;
    std::vector<double> term_norms;  ///< ‖C_k/k!‖ for k = 1, 2, ...
};

BCHResult bch_transform(const ManyBodyOperator& H, const Amplitudes& T, const CumulantSet& cum,
                        const FlowConfig& cfg);

/// H as a GNO operator with respect to `cum`: scalar = <H>, one-body = Fock.
ManyBodyOperator gno_hamiltonian(const IntegralSet& ints, const CumulantSet& cum);

struct LDSRGResult {
    Amplitudes amplitudes;
    ManyBodyOperator hbar;
    std::vector<std::string> log;
    std::size_t iterations = 0;
    std::vector<double> last_bch_norms;
};

/// `H` is GNO with respect to `cum`; `eps` are the semicanonical orbital energies.
LDSRGResult solve_ldsrg2(const ManyBodyOperator& H, const Vector& eps, const CumulantSet& cum,
                         const FlowConfig& cfg);

/// Scalar component; throws ContractViolation if Hbar is not ordered with respect to `cum`.
double expectation(const ManyBodyOperator& Hbar, const CumulantSet& cum);

/// Bare active-space operator with core folded in.
ManyBodyOperator extract_active_hamiltonian(const ManyBodyOperator& Hbar, const CumulantSet& cum);

/// Log line "iter k: E=... dE=... rms=... bch_terms=n".
std::string format_iteration(std::size_t k, double e, double de, double rms, std::size_t terms);

}  // namespace qdsrg
