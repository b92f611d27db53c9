// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <qdsrg/errors.hpp>
#include <qdsrg/fockspace.hpp>

#include <gtest/gtest.h>

#include <bit>

namespace qdsrg {
namespace {

using testing::Rng;
using testing::uniform;

TEST(Determinants, CountsAndOrdering) {
    EXPECT_EQ(enumerate_determinants(4, 1, 1).size(), 4u);
    EXPECT_EQ(enumerate_determinants(2, 1, 0).size(), 1u);
    const auto d = enumerate_determinants(12, 3, 3);
    EXPECT_EQ(d.size(), 400u);
    for (Determinant x : d) {
        EXPECT_EQ(std::popcount(x & 0x555555555555ull), 3);
        EXPECT_EQ(std::popcount(x & 0xAAAAAAAAAAAAull), 3);
    }
    // Lexicographic by occupied index list equals ascending bit-reversed order.
    auto key = [](Determinant x) {
        std::vector<int> occ;
        for (int i = 0; i < 64; ++i)
            if (x >> i & 1) occ.push_back(i);
        return occ;
    };
    for (std::size_t i = 1; i < d.size(); ++i) EXPECT_LT(key(d[i - 1]), key(d[i]));
}

TEST(Determinants, CapIsEnforced) {
    EXPECT_THROW(enumerate_determinants(40, 10, 10, 1000), CapacityError);
    EXPECT_THROW(enumerate_determinants(4, 3, 0), BoundsError);
}

IntegralSet random_ints(std::size_t m, Rng& rng) {
    return spinorbitalize(testing::toy_integrals(m, 2, rng()));
}

TEST(SlaterCondon, SingleDeterminantDiagonal) {
    Rng rng(21);
    const IntegralSet ints = random_ints(3, rng);
    const Determinant phi = 0b100011;
    double ref = ints.scalar;
    const std::vector<std::size_t> occ = {0, 1, 5};
    for (std::size_t i : occ) ref += ints.h(i, i);
    for (std::size_t i : occ)
        for (std::size_t j : occ) ref += 0.5 * ints.v(i, j, i, j);
    EXPECT_NEAR(build_hamiltonian(ints, {phi})(0, 0), ref, 1e-13);
}

TEST(SlaterCondon, TripleExcitationsVanish) {
    Rng rng(22);
    const IntegralSet ints = random_ints(4, rng);
    const Matrix H = build_hamiltonian(ints, {0b00010101, 0b10101000});
    EXPECT_EQ(H(0, 1), 0.0);
}

TEST(SlaterCondon, MatchesGeneralOperatorMatrix) {
    Rng rng(23);
    const IntegralSet ints = random_ints(4, rng);
    const auto dets = enumerate_determinants(8, 2, 1);
    const Matrix a = build_hamiltonian(ints, dets);
    const Matrix b = operator_matrix(ints.as_operator(), dets);
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-13);
}

// Two-orbital minimal model with inversion symmetry: the closed shells couple
// through K12, the open-shell singlet and triplet are diagonal.
TEST(SlaterCondon, MinimalModelMatchesSymmetryBlocks) {
    const double h11 = -1.25, h22 = -0.47, j11 = 0.67, j22 = 0.70, j12 = 0.66, k12 = 0.18, e0 = 0.71;
    SpatialIntegrals s;
    s.n_orbitals = 2;
    s.n_electrons = 2;
    s.scalar_energy = e0;
    s.one_body = Matrix::Zero(2, 2);
    s.one_body(0, 0) = h11;
    s.one_body(1, 1) = h22;
    s.two_body_chemist = Tensor4(2);
    s.two_body_chemist(0, 0, 0, 0) = j11;
    s.two_body_chemist(1, 1, 1, 1) = j22;
    s.two_body_chemist(0, 0, 1, 1) = s.two_body_chemist(1, 1, 0, 0) = j12;
    for (auto [a, b, c, d] : {std::array{0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 1, 0}, {1, 0, 0, 1}})
        s.two_body_chemist(a, b, c, d) = k12;
    const auto dets = enumerate_determinants(4, 1, 1);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(build_hamiltonian(spinorbitalize(s), dets));

    Matrix g(2, 2);
    g << 2 * h11 + j11, k12, k12, 2 * h22 + j22;
    const Vector gv = Eigen::SelfAdjointEigenSolver<Matrix>(g).eigenvalues();
    std::vector<double> hand = {gv(0) + e0, gv(1) + e0, h11 + h22 + j12 - k12 + e0, h11 + h22 + j12 + k12 + e0};
    std::sort(hand.begin(), hand.end());
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(es.eigenvalues()(i), hand[static_cast<std::size_t>(i)], 1e-12);
}

TEST(SolveGround, SmallExamples) {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 3, 1, 2;
    const auto g = solve_ground(d, 1).front();
    EXPECT_DOUBLE_EQ(g.energy, 1.0);
    EXPECT_DOUBLE_EQ(g.coefficients(1), 1.0);

    Matrix p(2, 2);
    p << 0.3, -0.8, -0.8, 0.3;
    EXPECT_NEAR(solve_ground(p, 1).front().energy, 0.3 - 0.8, 1e-15);
    EXPECT_THROW(solve_ground(p, 3), BoundsError);
}

TEST(SolveGround, SignConventionLargestComponentPositive) {
    Matrix p(2, 2);
    p << 0.0, 0.4, 0.4, 1.0;
    const auto g = solve_ground(p, 1).front();
    Eigen::Index imax = 0;
    g.coefficients.cwiseAbs().maxCoeff(&imax);
    EXPECT_GT(g.coefficients(imax), 0.0);
}

TEST(SolveGround, MatchesPowerIteration) {
    Rng rng(24);
    const Matrix H = testing::random_matrix(50, rng, true);
    const double shift = H.cwiseAbs().rowwise().sum().maxCoeff();
    const Matrix M = shift * Matrix::Identity(50, 50) - H;
    Vector x = Vector::Ones(50).normalized();
    double lambda = 0.0;
    for (int it = 0; it < 400000; ++it) {
        const Vector y = M * x;
        const double next = x.dot(y);
        x = y.normalized();
        if (std::abs(next - lambda) < 1e-15 * shift && it > 100) break;
        lambda = next;
    }
    const double oracle = shift - x.dot(M * x);
    EXPECT_NEAR(solve_ground(H, 1).front().energy, oracle, 1e-10);
}

TEST(SolveGround, EigenpairResidual) {
    Rng rng(25);
    const IntegralSet ints = random_ints(4, rng);
    const auto dets = enumerate_determinants(8, 2, 2);
    const Matrix H = build_hamiltonian(ints, dets);
    for (const auto& w : solve_ground(H, 3, dets)) {
        EXPECT_LT((H * w.coefficients - w.energy * w.coefficients).norm(), 1e-9);
        EXPECT_NEAR(w.coefficients.norm(), 1.0, 1e-12);
        EXPECT_EQ(w.determinants, dets);
    }
}

TEST(Rdms, SingleDeterminant) {
    CIWavefunction w;
    w.determinants = {0b0110};
    w.coefficients = Vector::Ones(1);
    const RDMSet r = compute_rdms(w, 2, 4);
    Matrix expect = Matrix::Zero(4, 4);
    expect(1, 1) = expect(2, 2) = 1.0;
    EXPECT_EQ(r.g1, expect);
    EXPECT_DOUBLE_EQ(r.g2(1, 2, 1, 2), 1.0);
    EXPECT_DOUBLE_EQ(r.g2(1, 2, 2, 1), -1.0);
}

TEST(Rdms, TwoElectronStatesHaveZeroThreeBodyDensity) {
    Rng rng(26);
    const CIWavefunction w = testing::random_state(6, 1, 1, rng);
    const RDMSet r = compute_rdms(w, 3, 6);
    ASSERT_TRUE(r.g3.has_value());
    EXPECT_EQ(r.g3->max_abs(), 0.0);
}

TEST(Rdms, RankThreeCapacity) {
    Rng rng(27);
    const CIWavefunction w = testing::random_state(16, 1, 1, rng);
    EXPECT_THROW(compute_rdms(w, 3, 16), CapacityError);
}

TEST(Rdms, InvariantsOnRandomStates) {
    Rng rng(28);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t na = 1 + trial % 2, nb = 1 + (trial / 2) % 2;
        const std::size_t n = 8, N = na + nb;
        const RDMSet r = compute_rdms(testing::random_state(n, na, nb, rng), 3, n);
        EXPECT_NEAR(r.g1.trace(), static_cast<double>(N), 1e-12);
        EXPECT_LE((r.g1 - r.g1.transpose()).cwiseAbs().maxCoeff(), 1e-14);
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                EXPECT_GE(r.g2(p, q, p, q), -1e-12);
                EXPECT_LE(r.g2(p, q, p, q), 1.0 + 1e-12);
                for (std::size_t s = 0; s < n; ++s) {
                    double tr = 0.0;
                    for (std::size_t k = 0; k < n; ++k) tr += r.g2(p, k, q, k);
                    if (s == 0) EXPECT_NEAR(tr, (static_cast<double>(N) - 1.0) * r.g1(p, q), 1e-12);
                    EXPECT_NEAR(r.g2(p, q, s, 0), -r.g2(q, p, s, 0), 1e-14);
                    EXPECT_NEAR(r.g2(p, q, s, 0), -r.g2(p, q, 0, s), 1e-14);
                }
            }
        const Tensor6& g3 = *r.g3;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                for (std::size_t t = 0; t < n; ++t) {
                    EXPECT_NEAR(g3(p, q, t, 0, 1, 2), -g3(q, p, t, 0, 1, 2), 1e-14);
                    EXPECT_NEAR(g3(p, q, t, 0, 1, 2), g3(q, t, p, 0, 1, 2), 1e-14);
                    EXPECT_NEAR(g3(p, q, t, 0, 1, 2), -g3(p, q, t, 1, 0, 2), 1e-14);
                }
    }
}

TEST(OperatorMatrix, ScalarAndNumberOperators) {
    const auto dets = enumerate_determinants(6, 2, 1);
    ManyBodyOperator c = ManyBodyOperator::zero(6);
    c.scalar = 1.7;
    const auto eye = static_cast<Eigen::Index>(dets.size());
    EXPECT_EQ(operator_matrix(c, dets), 1.7 * Matrix::Identity(eye, eye));
    for (std::size_t p = 0; p < 6; ++p) {
        ManyBodyOperator np = ManyBodyOperator::zero(6);
        np.one_body(p, p) = 1.0;
        const Matrix m = operator_matrix(np, dets);
        for (Eigen::Index i = 0; i < eye; ++i) {
            EXPECT_EQ(m(i, i), static_cast<double>(dets[static_cast<std::size_t>(i)] >> p & 1));
            for (Eigen::Index j = 0; j < eye; ++j)
                if (i != j) EXPECT_EQ(m(i, j), 0.0);
        }
    }
}

TEST(OperatorMatrix, NormalOrderedOneBodyShiftsByDensity) {
    Rng rng(29);
    const auto part = testing::partition(6, 0, 3);
    for (int trial = 0; trial < 5; ++trial) {
        const CumulantSet cum = testing::random_cumulants(6, part, 1 + trial % 2, 1, rng);
        const Matrix g = cum.g1_full();
        const auto dets = enumerate_determinants(6, 2, 1);
        const auto dim = static_cast<Eigen::Index>(dets.size());
        for (std::size_t p = 0; p < 6; ++p)
            for (std::size_t q = 0; q < 6; ++q) {
                ManyBodyOperator gno = ManyBodyOperator::zero(6, Vacuum::gno, cum.tag());
                gno.one_body(p, q) = 1.0;
                ManyBodyOperator bare = ManyBodyOperator::zero(6);
                bare.one_body(p, q) = 1.0;
                const Matrix expect = operator_matrix(bare, dets) - g(p, q) * Matrix::Identity(dim, dim);
                EXPECT_LE((operator_matrix(gno, dets, &cum) - expect).cwiseAbs().maxCoeff(), 1e-14);
            }
    }
}

TEST(OperatorMatrix, NormalOrderedNeedsDensities) {
    const ManyBodyOperator g = ManyBodyOperator::zero(4, Vacuum::gno, 7);
    EXPECT_THROW(operator_matrix(g, enumerate_determinants(4, 1, 1)), ContractViolation);
}

TEST(OperatorMatrix, Linear) {
    Rng rng(30);
    const auto dets = enumerate_determinants(8, 2, 1);
    const ManyBodyOperator x = testing::random_operator(8, rng, Vacuum::bare, 0);
    const ManyBodyOperator y = testing::random_operator(8, rng, Vacuum::bare, 0);
    ManyBodyOperator z = x;
    z *= 0.75;
    z.axpy(-1.5, y);
    const Matrix lhs = operator_matrix(z, dets);
    const Matrix rhs = 0.75 * operator_matrix(x, dets) - 1.5 * operator_matrix(y, dets);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-13);
}

Matrix random_antisymmetric_matrix(Eigen::Index n, Rng& rng, double norm) {
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = uniform(rng);
    a = (a - a.transpose()).eval();
    return a * (norm / a.norm());
}

TEST(BruteForce, ZeroGeneratorIsIdentity) {
    Rng rng(31);
    const Matrix H = testing::random_matrix(6, rng, true);
    EXPECT_LE((brute_force_transform(H, Matrix::Zero(6, 6)) - H).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BruteForce, PreservesSpectrumTraceAndNorm) {
    Rng rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix H = testing::random_matrix(10, rng, true);
        const Matrix A = random_antisymmetric_matrix(10, rng, 2.0);
        const Matrix T = brute_force_transform(H, A);
        const Vector e0 = Eigen::SelfAdjointEigenSolver<Matrix>(H).eigenvalues();
        const Vector e1 = Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (T + T.transpose())).eigenvalues();
        EXPECT_LE((e0 - e1).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_NEAR(T.trace(), H.trace(), 1e-10);
        EXPECT_NEAR(T.norm(), H.norm(), 1e-10);
    }
}

TEST(BruteForce, MatchesNestedCommutatorSeries) {
    Rng rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix H = testing::random_matrix(8, rng, true);
        const Matrix A = random_antisymmetric_matrix(8, rng, 0.5);
        Matrix term = H, sum = H;
        for (int k = 1; k <= 40; ++k) {
            term = (term * A - A * term).eval() / static_cast<double>(k);
            sum += term;
        }
        EXPECT_LE((brute_force_transform(H, A) - sum).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(BruteForce, RejectsNonAntisymmetricGenerator) {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 1) = 0.1;
    EXPECT_THROW(brute_force_transform(Matrix::Identity(3, 3), a), ContractViolation);
}

TEST(WickOracle, ZeroGeneratorGivesZero) {
    Rng rng(34);
    const auto part = testing::partition(6, 1, 1);
    const CumulantSet cum = testing::random_cumulants(6, part, 1, 1, rng);
    const ManyBodyOperator H = testing::random_operator(6, rng, Vacuum::gno, cum.tag(), true);
    const ManyBodyOperator C = wick_commutator_oracle(H, ManyBodyOperator::zero(6, Vacuum::gno, cum.tag()), cum);
    EXPECT_EQ(testing::op_scale(C), 0.0);
}

// One-body pair: the λ2 block cancels between XY and YX, leaving tr(XηYγ) - tr(YηXγ).
TEST(WickOracle, OneBodyScalarClosedForm) {
    Rng rng(35);
    const auto part = testing::partition(6, 1, 1);
    for (int trial = 0; trial < 5; ++trial) {
        const CumulantSet cum = testing::random_cumulants(6, part, 1, 1, rng);
        ManyBodyOperator x = ManyBodyOperator::zero(6, Vacuum::gno, cum.tag());
        x.one_body = testing::random_matrix(6, rng, true);
        ManyBodyOperator y = ManyBodyOperator::zero(6, Vacuum::gno, cum.tag());
        y.one_body = testing::random_matrix(6, rng, false);
        const Matrix g = cum.g1_full();
        const Matrix eta = Matrix::Identity(6, 6) - g;
        const double hand = (x.one_body * eta * y.one_body * g).trace() - (y.one_body * eta * x.one_body * g).trace();
        EXPECT_NEAR(wick_commutator_oracle(x, y, cum).scalar, hand, 1e-13);
    }
}

}  // namespace
}  // namespace qdsrg
