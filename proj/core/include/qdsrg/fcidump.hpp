// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fcidump.hpp
 * @brief FCIDUMP ingestion, spin-orbital expansion, frozen-orbital folding,
 *        orbital-space partitioning and effective-Hamiltonian export.
 */
#pragma once

#include <qdsrg/operator.hpp>
#include <qdsrg/tensor.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace qdsrg {

/// Spatial-orbital integrals as read from an FCIDUMP file (Hartree).
struct SpatialIntegrals {
    std::size_t n_orbitals = 0;
    std::size_t n_electrons = 0;
    int ms2 = 0;
    double scalar_energy = 0.0;
    Matrix one_body;
    Tensor4 two_body_chemist;  ///< (ij|kl)
    std::vector<int> orbital_symmetries;
    std::vector<std::string> warnings;  ///< non-fatal parse diagnostics
};

/// Disjoint sorted index lists covering every orbital exactly once.
struct OrbitalSpace {
    std::vector<std::size_t> frozen_core;
    std::vector<std::size_t> core;
    std::vector<std::size_t> active;
    std::vector<std::size_t> virt;
    std::vector<std::size_t> frozen_virtual;

    std::size_t size() const {
        return frozen_core.size() + core.size() + active.size() + virt.size() + frozen_virtual.size();
    }
    /// Throws ConfigError if the lists overlap, are unsorted or do not cover 0..n-1.
    void validate(std::size_t n_orbitals) const;
    /// Everything active.
    static OrbitalSpace all_active(std::size_t n_orbitals);
};

/// Spin-orbital Hamiltonian; index 2p is α and 2p+1 is β of spatial orbital p.
struct IntegralSet {
    double scalar = 0.0;
    Matrix h;
    Tensor4 v;  ///< <pq||rs>
    OrbitalSpace space;  ///< spin-orbital view
    std::size_t n_electrons = 0;
    int ms2 = 0;

    std::size_t n() const { return static_cast<std::size_t>(h.rows()); }
    ManyBodyOperator as_operator() const;
};

/// Map spatial index lists to spin-orbital lists (p -> 2p, 2p+1).
std::vector<std::size_t> to_spin_orbitals(const std::vector<std::size_t>& spatial);
OrbitalSpace to_spin_orbitals(const OrbitalSpace& s);

SpatialIntegrals parse_fcidump(std::istream& in);
SpatialIntegrals parse_fcidump_string(const std::string& text);
SpatialIntegrals read_fcidump(const std::string& path);

/// One representative per 8-fold orbit, values printed with 17 significant digits.
std::string write_fcidump(const SpatialIntegrals& ints);

IntegralSet spinorbitalize(const SpatialIntegrals& ints);

/// Fold frozen core into scalar/h, drop frozen core and frozen virtuals; `space` is spatial.
IntegralSet freeze_core(const IntegralSet& ints, const OrbitalSpace& space);

/// Number of active electrons implied by `space`; throws ConfigError if negative.
std::size_t active_electrons(std::size_t n_electrons, const OrbitalSpace& space);

/// Metadata recorded in the exported effective Hamiltonian.
struct HeffMetadata {
    double s = 0.0;
    std::string truncation = "exact";
    std::string l3_policy = "exact";
    OrbitalSpace space;  ///< spatial
};

/// Serialize a bare operator ("qdsrg-heff-v1"). Throws ContractViolation for GNO input.
std::string export_effective_hamiltonian(const ManyBodyOperator& op, const HeffMetadata& meta);
void export_effective_hamiltonian(const ManyBodyOperator& op, const HeffMetadata& meta,
                                  const std::string& path);

/// Parse an exported container back into a bare operator and its metadata.
ManyBodyOperator import_effective_hamiltonian(const std::string& text, HeffMetadata* meta = nullptr);

}  // namespace qdsrg
