// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include <qdsrg/errors.hpp>
#include <qdsrg/fockspace.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace qdsrg {

namespace {

constexpr Determinant bit(std::size_t p) { return Determinant{1} << p; }

int popcount(Determinant d) { return std::popcount(d); }

// Apply a_p (p occupied) in place; returns the sign.
int annihilate(Determinant& d, std::size_t p) {
    const int s = annihilation_sign(d, p);
    d &= ~bit(p);
    return s;
}

// Apply a+_p (p empty) in place; returns the sign.
int create(Determinant& d, std::size_t p) {
    const int s = (popcount(d & (bit(p) - 1)) % 2) ? -1 : 1;
    d |= bit(p);
    return s;
}

std::vector<std::size_t> occupied(Determinant d) {
    std::vector<std::size_t> o;
    while (d) {
        o.push_back(static_cast<std::size_t>(std::countr_zero(d)));
        d &= d - 1;
    }
    return o;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// All bitsets over `n` positions with `k` ones, in increasing numeric order.
std::vector<Determinant> combinations(std::size_t n, std::size_t k) {
    std::vector<Determinant> out;
    if (k > n) return out;
    if (k == 0) return {0};
    Determinant c = bit(k) - 1;
    const Determinant limit = bit(n);
    while (c < limit) {
        out.push_back(c);
        const Determinant t = c | (c - 1);
        c = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(c) + 1));
    }
    return out;
}

// Lexicographic order on ascending occupied-index lists of equal length.
bool lex_less(Determinant a, Determinant b) {
    const Determinant x = a ^ b;
    if (!x) return false;
    return (a & (x & -x)) != 0;
}

}  // namespace

int annihilation_sign(Determinant d, std::size_t p) {
    return (popcount(d & (bit(p) - 1)) % 2) ? -1 : 1;
}

std::vector<Determinant> enumerate_determinants(std::size_t n_spinorb, std::size_t n_alpha, std::size_t n_beta,
                                                std::size_t cap) {
    if (n_spinorb % 2 != 0) throw BoundsError("spin-orbital count must be even");
    if (n_spinorb > 64) throw CapacityError("determinants are limited to 64 spin orbitals");
    const std::size_t m = n_spinorb / 2;
    if (n_alpha > m || n_beta > m) throw BoundsError("more electrons of one spin than spatial orbitals");
    const std::size_t count = binomial(m, n_alpha) * binomial(m, n_beta);
    if (count > cap)
        throw CapacityError("determinant space of " + std::to_string(count) + " exceeds the cap of " +
                            std::to_string(cap));
    auto spread = [](Determinant s, std::size_t offset) {
        Determinant d = 0;
        for (std::size_t i = 0; s; ++i, s >>= 1)
            if (s & 1) d |= bit(2 * i + offset);
        return d;
    };
    std::vector<Determinant> out;
    out.reserve(count);
    for (Determinant a : combinations(m, n_alpha))
        for (Determinant b : combinations(m, n_beta)) out.push_back(spread(a, 0) | spread(b, 1));
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

namespace {

// <I|O|J> by Slater–Condon rules; `hermitian` fills the lower triangle by symmetry.
Matrix slater_condon(double scalar, const Matrix& h, const Tensor4& v, const std::vector<Determinant>& dets,
                     bool hermitian) {
    const std::size_t dim = dets.size();
    if (dim > kMaxDenseDimension)
        throw CapacityError("dense Hamiltonian of dimension " + std::to_string(dim) + " exceeds " +
                            std::to_string(kMaxDenseDimension));
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix H = Matrix::Zero(d, d);
    for (std::size_t J = 0; J < dim; ++J) {
        const Determinant dj = dets[J];
        const auto occ = occupied(dj);
        const std::size_t last = hermitian ? J + 1 : dim;
        for (std::size_t I = 0; I < last; ++I) {
            const Determinant di = dets[I];
            if (popcount(di) != popcount(dj)) continue;
            const Determinant diff = di ^ dj;
            const int level = popcount(diff) / 2;
            double val = 0.0;
            if (level == 0) {
                val = scalar;
                for (std::size_t a = 0; a < occ.size(); ++a) {
                    val += h(occ[a], occ[a]);
                    for (std::size_t b = 0; b < a; ++b) val += v(occ[a], occ[b], occ[a], occ[b]);
                }
            } else if (level == 1) {
                const std::size_t q = static_cast<std::size_t>(std::countr_zero(dj & diff));
                const std::size_t p = static_cast<std::size_t>(std::countr_zero(di & diff));
                Determinant t = dj;
                int sign = annihilate(t, q);
                sign *= create(t, p);
                val = h(p, q);
                for (std::size_t k : occ)
                    if (k != q) val += v(p, k, q, k);
                val *= sign;
            } else if (level == 2) {
                const auto qs = occupied(dj & diff);
                const auto ps = occupied(di & diff);
                Determinant t = dj;
                int sign = annihilate(t, qs[0]);
                sign *= annihilate(t, qs[1]);
                sign *= create(t, ps[1]);
                sign *= create(t, ps[0]);
                val = sign * v(ps[0], ps[1], qs[0], qs[1]);
            } else {
                continue;
            }
            H(static_cast<Eigen::Index>(I), static_cast<Eigen::Index>(J)) = val;
            if (hermitian) H(static_cast<Eigen::Index>(J), static_cast<Eigen::Index>(I)) = val;
        }
    }
    return H;
}

}  // namespace

Matrix build_hamiltonian(double scalar, const Matrix& h, const Tensor4& v, const std::vector<Determinant>& dets) {
    return slater_condon(scalar, h, v, dets, true);
}

Matrix build_hamiltonian(const IntegralSet& ints, const std::vector<Determinant>& dets) {
    return build_hamiltonian(ints.scalar, ints.h, ints.v, dets);
}

std::vector<CIWavefunction> solve_ground(const Matrix& H, std::size_t k, const std::vector<Determinant>& dets) {
    const auto dim = static_cast<std::size_t>(H.rows());
    if (H.rows() != H.cols()) throw ContractViolation("Hamiltonian matrix is not square");
    if (k > dim) throw BoundsError("requested " + std::to_string(k) + " states from a space of dimension " +
                                   std::to_string(dim));
    if (dim > kMaxDenseDimension) throw CapacityError("dense eigensolver limited to dimension 4000");
    if (!dets.empty() && dets.size() != dim) throw ContractViolation("determinant list does not match matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", {});
    std::vector<CIWavefunction> out;
    for (std::size_t i = 0; i < k; ++i) {
        CIWavefunction w;
        w.determinants = dets;
        w.coefficients = es.eigenvectors().col(static_cast<Eigen::Index>(i));
        w.energy = es.eigenvalues()(static_cast<Eigen::Index>(i));
        const double mx = w.coefficients.cwiseAbs().maxCoeff();
        for (Eigen::Index j = 0; j < w.coefficients.size(); ++j)
            if (std::abs(w.coefficients(j)) >= mx - 1e-12) {
                if (w.coefficients(j) < 0) w.coefficients = -w.coefficients;
                break;
            }
        out.push_back(std::move(w));
    }
    return out;
}

namespace {

// D(K, (r1..rk)) = <K| a_rk ... a_r1 |Ψ>, so γk = Dᵀ D.
Matrix removal_amplitudes(const CIWavefunction& wfn, int rank, std::size_t n) {
    std::unordered_map<Determinant, Eigen::Index> index;
    std::vector<std::tuple<Eigen::Index, std::size_t, double>> entries;
    std::size_t cols = 1;
    for (int i = 0; i < rank; ++i) cols *= n;
    for (std::size_t J = 0; J < wfn.determinants.size(); ++J) {
        const double c = wfn.coefficients(static_cast<Eigen::Index>(J));
        if (c == 0.0) continue;
        const Determinant dj = wfn.determinants[J];
        const auto occ = occupied(dj);
        std::vector<std::size_t> idx(static_cast<std::size_t>(rank));
        // Enumerate ordered tuples of distinct occupied orbitals.
        auto rec = [&](auto&& self, int level, Determinant d, double amp) -> void {
            if (level == rank) {
                auto [it, inserted] = index.try_emplace(d, static_cast<Eigen::Index>(index.size()));
                std::size_t col = 0;
                for (int l = 0; l < rank; ++l) col = col * n + idx[static_cast<std::size_t>(l)];
                entries.emplace_back(it->second, col, amp);
                return;
            }
            for (std::size_t r : occ) {
                if (!(d & bit(r))) continue;
                Determinant t = d;
                const int s = annihilate(t, r);
                idx[static_cast<std::size_t>(level)] = r;
                self(self, level + 1, t, amp * s);
            }
        };
        rec(rec, 0, dj, c);
    }
    Matrix D = Matrix::Zero(static_cast<Eigen::Index>(index.size()), static_cast<Eigen::Index>(cols));
    for (const auto& [row, col, amp] : entries) D(row, static_cast<Eigen::Index>(col)) += amp;
    return D;
}

}  // namespace

RDMSet compute_rdms(const CIWavefunction& wfn, int max_rank, std::size_t n_spinorb) {
    if (max_rank < 1 || max_rank > 3) throw BoundsError("RDM rank must be 1, 2 or 3");
    if (max_rank == 3 && n_spinorb > kMaxRank3Orbitals)
        throw CapacityError("γ3 limited to " + std::to_string(kMaxRank3Orbitals) + " spin orbitals");
    if (static_cast<std::size_t>(wfn.coefficients.size()) != wfn.determinants.size())
        throw ContractViolation("wavefunction coefficients and determinants differ in length");
    const auto n = static_cast<Eigen::Index>(n_spinorb);
    RDMSet r;
    {
        const Matrix D = removal_amplitudes(wfn, 1, n_spinorb);
        r.g1 = D.rows() ? Matrix(D.transpose() * D) : Matrix::Zero(n, n);
    }
    r.g2 = Tensor4(n_spinorb);
    if (max_rank >= 2) {
        const Matrix D = removal_amplitudes(wfn, 2, n_spinorb);
        if (D.rows()) {
            const Matrix G = D.transpose() * D;
            std::copy(G.data(), G.data() + G.size(), r.g2.data());  // symmetric, so layout is irrelevant
        }
    }
    if (max_rank >= 3) {
        Tensor6 g3(n_spinorb);
        const Matrix D = removal_amplitudes(wfn, 3, n_spinorb);
        if (D.rows()) {
            const Matrix G = D.transpose() * D;
            std::copy(G.data(), G.data() + G.size(), g3.data());
        }
        r.g3 = std::move(g3);
    }
    return r;
}

Matrix operator_matrix(const ManyBodyOperator& op, const std::vector<Determinant>& dets,
                       const CumulantSet* densities) {
    if (op.vacuum == Vacuum::gno) {
        if (!densities) throw ContractViolation("normal-ordered operator needs its densities");
        const ManyBodyOperator bare = to_bare_operator(op, *densities);
        return slater_condon(bare.scalar, bare.one_body, bare.two_body, dets, false);
    }
    return slater_condon(op.scalar, op.one_body, op.two_body, dets, false);
}

Matrix brute_force_transform(const Matrix& Hm, const Matrix& Am) {
    if (Am.size() && (Am + Am.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw ContractViolation("generator is not antisymmetric");
    const Matrix U = Am.exp();
    return U.transpose() * Hm * U;
}

}  // namespace qdsrg
