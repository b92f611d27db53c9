// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

// Random instances shared by the unit, property and acceptance tests.
#pragma once

#include <qdsrg/cumulants.hpp>
#include <qdsrg/fcidump.hpp>
#include <qdsrg/fockspace.hpp>
#include <qdsrg/operator.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace qdsrg::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Matrix random_matrix(std::size_t n, Rng& rng, bool symmetric) {
    const auto m = static_cast<Eigen::Index>(n);
    Matrix a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) a(i, j) = uniform(rng);
    if (symmetric) a = (a + a.transpose()).eval() * 0.5;
    return a;
}

/// Antisymmetric in (p,q) and (r,s); optionally Hermitian (v_pqrs = v_rspq).
inline Tensor4 random_antisymmetric(std::size_t n, Rng& rng, bool hermitian) {
    Tensor4 c(n);
    for (double& x : c.raw()) x = uniform(rng);
    Tensor4 t = antisymmetrize_pairs(c);
    t *= 0.25;
    if (!hermitian) return t;
    Tensor4 h(n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) h(p, q, r, s) = 0.5 * (t(p, q, r, s) + t(r, s, p, q));
    return h;
}

inline ManyBodyOperator random_operator(std::size_t n, Rng& rng, Vacuum vac, std::uint64_t ref,
                                        bool hermitian = false) {
    ManyBodyOperator op = ManyBodyOperator::zero(n, vac, ref);
    op.scalar = uniform(rng);
    op.one_body = random_matrix(n, rng, hermitian);
    op.two_body = random_antisymmetric(n, rng, hermitian);
    return op;
}

/// Random normalized CI vector with n_alpha/n_beta electrons over n spin orbitals.
inline CIWavefunction random_state(std::size_t n, std::size_t na, std::size_t nb, Rng& rng) {
    CIWavefunction w;
    w.determinants = enumerate_determinants(n, na, nb);
    w.coefficients = Vector(static_cast<Eigen::Index>(w.determinants.size()));
    for (Eigen::Index i = 0; i < w.coefficients.size(); ++i) w.coefficients(i) = uniform(rng);
    w.coefficients.normalize();
    return w;
}

/// Random spin-orbital partition: nc core, na active, rest virtual (pairs kept together).
struct Partition {
    std::vector<std::size_t> core, active, virt;
};

inline Partition partition(std::size_t n, std::size_t n_core_spatial, std::size_t n_active_spatial) {
    Partition p;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t sp = i / 2;
        if (sp < n_core_spatial)
            p.core.push_back(i);
        else if (sp < n_core_spatial + n_active_spatial)
            p.active.push_back(i);
        else
            p.virt.push_back(i);
    }
    return p;
}

/// Exact cumulants of a random active-space state, embedded in n spin orbitals.
/// Returns the active-space wavefunction through `wfn` when requested.
inline CumulantSet random_cumulants(std::size_t n, const Partition& part, std::size_t na, std::size_t nb, Rng& rng,
                                    CIWavefunction* wfn = nullptr) {
    const std::size_t m = part.active.size();
    const CIWavefunction w = random_state(m, na, nb, rng);
    const RDMSet r = compute_rdms(w, 3, m);
    const CumulantSet c = cumulants_from_rdms(r, L3Policy::exact);
    if (wfn) *wfn = w;
    return embed(c, n, part.core, part.active, part.virt);
}

/// Lift an active-space determinant into the full space with the core filled.
inline Determinant lift(Determinant active_det, const Partition& part) {
    Determinant d = 0;
    for (std::size_t c : part.core) d |= Determinant{1} << c;
    for (std::size_t i = 0; i < part.active.size(); ++i)
        if (active_det & (Determinant{1} << i)) d |= Determinant{1} << part.active[i];
    return d;
}

/// Deterministic toy molecule: rising orbital energies (spacing scaled by `gap`), weak one-body
/// couplings and a positive semidefinite (pq|rs) built from symmetric factors.
inline SpatialIntegrals toy_integrals(std::size_t norb, std::size_t nelec, std::uint64_t seed, double gap = 1.0) {
    Rng rng(seed);
    SpatialIntegrals s;
    s.n_orbitals = norb;
    s.n_electrons = nelec;
    s.ms2 = static_cast<int>(nelec % 2);
    s.scalar_energy = 0.7;
    s.one_body = Matrix::Zero(static_cast<Eigen::Index>(norb), static_cast<Eigen::Index>(norb));
    for (std::size_t p = 0; p < norb; ++p) {
        s.one_body(p, p) = -1.0 + 0.45 * gap * static_cast<double>(p);
        for (std::size_t q = 0; q < p; ++q) s.one_body(p, q) = s.one_body(q, p) = 0.05 * uniform(rng);
    }
    std::vector<Matrix> factors;
    factors.push_back(0.55 * Matrix::Identity(static_cast<Eigen::Index>(norb), static_cast<Eigen::Index>(norb)));
    for (std::size_t l = 0; l < norb; ++l) factors.push_back(0.12 * random_matrix(norb, rng, true));
    s.two_body_chemist = Tensor4(norb);
    for (std::size_t p = 0; p < norb; ++p)
        for (std::size_t q = 0; q < norb; ++q)
            for (std::size_t r = 0; r < norb; ++r)
                for (std::size_t t = 0; t < norb; ++t) {
                    double v = 0.0;
                    for (const Matrix& b : factors) v += b(p, q) * b(r, t);
                    s.two_body_chemist(p, q, r, t) = v;
                }
    return s;
}

/// Largest absolute element of all components.
inline double op_scale(const ManyBodyOperator& a) {
    double m = std::abs(a.scalar);
    if (a.one_body.size()) m = std::max(m, a.one_body.cwiseAbs().maxCoeff());
    return std::max(m, a.two_body.max_abs());
}

}  // namespace qdsrg::testing
