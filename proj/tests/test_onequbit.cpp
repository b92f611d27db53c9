// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <qdsrg/errors.hpp>
#include <qdsrg/fcidump.hpp>
#include <qdsrg/fockspace.hpp>
#include <qdsrg/onequbit.hpp>

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <numbers>

namespace qdsrg {
namespace {

using testing::Rng;
using testing::uniform;

constexpr double kPi = std::numbers::pi;

// Spatial coefficient matrix C with |ψ> = Σ C_ij a+_{iα} a+_{jβ}|0>.
Eigen::Matrix2d coefficient_matrix(double c1, double c2, double c3) {
    Eigen::Matrix2d c;
    c << c1, c3 / std::numbers::sqrt2, c3 / std::numbers::sqrt2, c2;
    return c;
}

TEST(RotationAngle, Conventions) {
    EXPECT_EQ(rotation_angle(0.8, 0.6, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(rotation_angle(0.5, 0.5, std::sqrt(0.5)), kPi / 4.0);
    for (double c3 : {-0.3, 0.3})
        for (double d : {-0.4, 0.4}) {
            const double t = rotation_angle(0.5 + d / 2, 0.5 - d / 2, c3);
            EXPECT_GT(2 * t, -kPi / 2);
            EXPECT_LE(2 * t, kPi / 2);
        }
}

// Old creators in terms of rotated ones: a+_1 = c a+_1' - s a+_2', a+_2 = s a+_1' + c a+_2'.
TEST(RotationAngle, RemovesOpenShellComponent) {
    Rng rng(81);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Vector3d v(uniform(rng), uniform(rng), uniform(rng));
        v.normalize();
        const double t = rotation_angle(v(0), v(1), v(2));
        Eigen::Matrix2d R;
        R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
        const Eigen::Matrix2d c = R.transpose() * coefficient_matrix(v(0), v(1), v(2)) * R;
        EXPECT_NEAR(c(0, 1), 0.0, 1e-12);
        EXPECT_NEAR(c.squaredNorm(), 1.0, 1e-12);
    }
}

TEST(RotationAngle, RotatedHamiltonianHasClosedShellGround) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const IntegralSet ints = spinorbitalize(testing::toy_integrals(2, 2, seed));
        const auto dets = enumerate_determinants(4, 1, 1);
        const CIWavefunction w = solve_ground(build_hamiltonian(ints, dets), 1, dets).front();
        const TwoConfigState st = two_config_state(w.determinants, w.coefficients);
        EXPECT_NEAR(st.c1p * st.c1p + st.c2p * st.c2p + st.c3p * st.c3p, 1.0, 1e-12);
        const ManyBodyOperator h = rotate_two_orbitals(ints.as_operator(), st.theta);
        const CIWavefunction r =
            solve_ground(build_hamiltonian(h.scalar, h.one_body, h.two_body, dets), 1, dets).front();
        EXPECT_NEAR(r.energy, w.energy, 1e-12);
        EXPECT_NEAR(two_config_state(r.determinants, r.coefficients).c3p, 0.0, 1e-10);
    }
}

TEST(RotateTwoOrbitals, RejectsWrongSize) {
    EXPECT_THROW(rotate_two_orbitals(ManyBodyOperator::zero(6, Vacuum::bare, 0), 0.1), ContractViolation);
}

TEST(OneQubitProblem, PauliRelations) {
    const OneQubitProblem p = OneQubitProblem::from_matrix(-1.0, 0.5, 0.2);
    EXPECT_EQ(p.c0, (-1.0 + 0.5) / 2);
    EXPECT_EQ(p.cz, (-1.0 - 0.5) / 2);
    EXPECT_EQ(p.cx, 0.2);
    const OneQubitProblem q = OneQubitProblem::from_pauli(p.c0, p.cz, p.cx);
    EXPECT_DOUBLE_EQ(q.h00, p.h00);
    EXPECT_DOUBLE_EQ(q.h11, p.h11);
    EXPECT_EQ(q.h10, p.h10);
}

TEST(OneQubitProblem, ExactGroundIsSmallerEigenvalue) {
    Rng rng(82);
    for (int trial = 0; trial < 100; ++trial) {
        const OneQubitProblem p = OneQubitProblem::from_pauli(uniform(rng), uniform(rng), uniform(rng));
        Eigen::Matrix2d m;
        m << p.c0 + p.cz, p.cx, p.cx, p.c0 - p.cz;
        EXPECT_NEAR(p.exact_ground(), Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m).eigenvalues()(0), 1e-12);
    }
}

TEST(MapToQubit, ScalarOperator) {
    ManyBodyOperator h = ManyBodyOperator::zero(4, Vacuum::bare, 0);
    h.scalar = -1.7;
    const OneQubitProblem p = map_to_qubit(h);
    EXPECT_EQ(p.c0, -1.7);
    EXPECT_EQ(p.cz, 0.0);
    EXPECT_EQ(p.cx, 0.0);
}

// Closed-shell matrix elements from spatial integrals: <ii|H|ii> = 2h_ii + (ii|ii), <11|H|22> = (12|12).
TEST(MapToQubit, MatchesSpatialTwoDeterminantCi) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SpatialIntegrals s = testing::toy_integrals(2, 2, seed);
        const OneQubitProblem p = map_to_qubit(spinorbitalize(s).as_operator());
        const auto& g = s.two_body_chemist;
        EXPECT_NEAR(p.h00, s.scalar_energy + 2 * s.one_body(0, 0) + g(0, 0, 0, 0), 1e-12);
        EXPECT_NEAR(p.h11, s.scalar_energy + 2 * s.one_body(1, 1) + g(1, 1, 1, 1), 1e-12);
        EXPECT_NEAR(p.h10, g(0, 1, 0, 1), 1e-12);
        Eigen::Matrix2d m;
        m << p.h00, p.h10, p.h10, p.h11;
        EXPECT_NEAR(p.exact_ground(), Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m).eigenvalues()(0), 1e-12);
    }
}

TEST(MapToQubit, Contracts) {
    EXPECT_THROW(map_to_qubit(ManyBodyOperator::zero(6, Vacuum::bare, 0)), ContractViolation);
    EXPECT_THROW(map_to_qubit(ManyBodyOperator::zero(4, Vacuum::gno, 7)), ContractViolation);
}

TEST(Measurement, DeterministicLimits) {
    for (std::size_t shots : {1u, 7u, 1000u}) {
        EXPECT_EQ(simulate_measurement(0.0, shots, 3).z, 1.0);
        EXPECT_EQ(simulate_measurement(kPi, shots, 3).z, -1.0);
    }
    const Measurement a = simulate_measurement(0.4, 500, 9), b = simulate_measurement(0.4, 500, 9);
    EXPECT_EQ(a.n0, b.n0);
    EXPECT_EQ(a.n_plus, b.n_plus);
    EXPECT_EQ(a.n0 + a.n1, 500u);
    EXPECT_EQ(a.n_plus + a.n_minus, 500u);
    EXPECT_THROW(simulate_measurement(0.4, 0, 9), DomainError);
}

TEST(Measurement, BinomialSpread) {
    double sum = 0.0, sq = 0.0, xsum = 0.0;
    const int reps = 1000;
    for (int k = 0; k < reps; ++k) {
        const Measurement m = simulate_measurement(kPi / 2, 10000, 1000 + static_cast<std::uint64_t>(k));
        sum += m.z;
        sq += m.z * m.z;
        xsum += m.x;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt(sq / reps - mean * mean);
    EXPECT_GE(sd, 0.8e-2);
    EXPECT_LE(sd, 1.2e-2);
    EXPECT_NEAR(xsum / reps, 1.0, 1e-12);
}

TEST(Measurement, XMeanVanishesAtZeroAngle) {
    double xsum = 0.0;
    for (int k = 0; k < 400; ++k) xsum += simulate_measurement(0.0, 2500, 50 + static_cast<std::uint64_t>(k)).x;
    // Standard error of the grand mean is 1/√(400·2500).
    EXPECT_LT(std::abs(xsum / 400), 5e-3);
}

QuadraturePoint noiseless(double a, double b, double c, double t) {
    return {std::cos(t), std::sin(t), a + b * std::cos(t) + c * std::sin(t)};
}

TEST(Quadrature, ExactOnTrigonometricModel) {
    for (auto design : {QuadratureDesign::pauli_expectations, QuadratureDesign::fourier_angles}) {
        const TomographyModel m = fourier_quadrature([](double t) { return noiseless(2, 3, 4, t); }, 0.0, design);
        EXPECT_NEAR(m.a, 2.0, 1e-12);
        EXPECT_NEAR(m.b, 3.0, 1e-12);
        EXPECT_NEAR(m.c, 4.0, 1e-12);
        const TomographyModel k = fourier_quadrature([](double t) { return noiseless(5, 0, 0, t); }, 1.3, design);
        EXPECT_NEAR(k.a, 5.0, 1e-12);
        EXPECT_NEAR(k.b, 0.0, 1e-12);
        EXPECT_NEAR(k.c, 0.0, 1e-12);
    }
}

TEST(Quadrature, IndependentOfCenter) {
    Rng rng(83);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = uniform(rng), b = uniform(rng), c = uniform(rng), t0 = 4 * uniform(rng);
        const TomographyModel m = fourier_quadrature([&](double t) { return noiseless(a, b, c, t); }, t0);
        EXPECT_NEAR(m.a, a, 1e-12);
        EXPECT_NEAR(m.b, b, 1e-12);
        EXPECT_NEAR(m.c, c, 1e-12);
        EXPECT_NEAR(m(0.7), a + b * std::cos(0.7) + c * std::sin(0.7), 1e-12);
    }
}

TEST(Quadrature, SingularSystemRaises) {
    auto flat = [](double) { return QuadraturePoint{0.5, 0.5, 1.0}; };
    EXPECT_THROW(fourier_quadrature(flat, 0.0), QuadratureError);
}

// With measured Pauli rows the right-hand side is linear in the same rows, so the fit is exact.
TEST(Quadrature, PauliRowsAbsorbShotNoise) {
    const OneQubitProblem p = OneQubitProblem::from_pauli(-0.3, 0.4, -0.2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::uint64_t k = 0;
        const TomographyModel m = fourier_quadrature(
            [&](double t) {
                const Measurement s = simulate_measurement(t, 1000, seed * 10 + k++);
                return QuadraturePoint{s.z, s.x, p.c0 + p.cz * s.z + p.cx * s.x};
            },
            0.3);
        EXPECT_NEAR(m.a, p.c0, 1e-12);
        EXPECT_NEAR(m.b, p.cz, 1e-12);
        EXPECT_NEAR(m.c, p.cx, 1e-12);
    }
}

TEST(Quadrature, NominalRowsRecoveryWithinTenStandardErrors) {
    const OneQubitProblem p = OneQubitProblem::from_pauli(-0.3, 0.4, -0.2);
    const std::size_t shots = 100000;
    const double se = std::hypot(p.cz, p.cx) / std::sqrt(static_cast<double>(shots));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::uint64_t k = 0;
        const TomographyModel m = fourier_quadrature(
            [&](double t) {
                const Measurement s = simulate_measurement(t, shots, seed * 10 + k++);
                return QuadraturePoint{s.z, s.x, p.c0 + p.cz * s.z + p.cx * s.x};
            },
            std::atan2(p.cx, p.cz), QuadratureDesign::fourier_angles);
        EXPECT_LT(std::abs(m.a - p.c0), 10 * se);
        EXPECT_LT(std::abs(m.b - p.cz), 10 * se);
        EXPECT_LT(std::abs(m.c - p.cx), 10 * se);
    }
}

TEST(OptimalAngle, Examples) {
    auto [t1, e1] = optimal_angle({0, -1, 0});
    EXPECT_EQ(t1, 0.0);
    EXPECT_EQ(e1, -1.0);
    auto [t2, e2] = optimal_angle({0, 0, -1});
    EXPECT_DOUBLE_EQ(t2, kPi / 2);
    EXPECT_EQ(e2, -1.0);
    auto [t3, e3] = optimal_angle({2.5, 0, 0});
    EXPECT_EQ(t3, 0.0);
    EXPECT_EQ(e3, 2.5);
}

TEST(OptimalAngle, MinimizesModelAndMatchesEigenvalue) {
    Rng rng(84);
    for (int trial = 0; trial < 100; ++trial) {
        const TomographyModel m{uniform(rng), uniform(rng), uniform(rng)};
        auto [t, e] = optimal_angle(m);
        EXPECT_NEAR(m(t), e, 1e-12);
        for (double u = -kPi; u < kPi; u += 0.05) EXPECT_GE(m(u), e - 1e-12);
        Eigen::Matrix2d h;
        h << m.a + m.b, m.c, m.c, m.a - m.b;
        EXPECT_NEAR(e, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(h).eigenvalues()(0), 1e-12);
    }
}

TEST(Rdms, SingleDeterminantAngle) {
    const RDMSet r = rdms_from_angle(0.0);
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = expect(1, 1) = 1.0;
    EXPECT_EQ(r.g1, expect);
    EXPECT_EQ(r.g2(0, 1, 0, 1), 1.0);
    EXPECT_EQ(r.g2(1, 0, 0, 1), -1.0);
    EXPECT_EQ(r.g2(2, 3, 2, 3), 0.0);
}

TEST(Rdms, MatchCiOracleOverAngles) {
    Rng rng(85);
    const std::vector<Determinant> dets{0b0011, 0b1100};
    for (int trial = 0; trial < 50; ++trial) {
        const double t = kPi * uniform(rng);
        CIWavefunction w;
        w.determinants = dets;
        w.coefficients = Vector(2);
        w.coefficients << std::cos(t / 2), std::sin(t / 2);
        const RDMSet oracle = compute_rdms(w, 2, 4);
        const RDMSet r = rdms_from_angle(t);
        EXPECT_LT((r.g1 - oracle.g1).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT(max_abs_diff(r.g2, oracle.g2), 1e-12);
        EXPECT_NEAR(r.g1.trace(), 2.0, 1e-12);
        double tr2 = 0.0;
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b) {
                tr2 += r.g2(a, b, a, b);
                double partial = 0.0;
                for (std::size_t q = 0; q < 4; ++q) partial += r.g2(a, q, b, q);
                EXPECT_NEAR(partial, r.g1(a, b), 1e-12);
            }
        EXPECT_NEAR(tr2, 2.0, 1e-12);
    }
}

TEST(Rdms, MeasuredVariantUsesCountsDirectly) {
    const RDMSet r = rdms_from_measurements(0.9, 0.1, 0.5);
    EXPECT_EQ(r.g1(1, 1), 0.9);
    EXPECT_EQ(r.g1(3, 3), 0.1);
    EXPECT_EQ(r.g2(0, 1, 2, 3), 0.25);
    EXPECT_EQ(r.g2(1, 0, 2, 3), -0.25);
    EXPECT_EQ(r.g2(2, 3, 0, 1), 0.25);
}

TEST(Vqe, NoiselessPipelineIsExact) {
    Rng rng(86);
    for (int trial = 0; trial < 100; ++trial) {
        const OneQubitProblem p = OneQubitProblem::from_pauli(uniform(rng), uniform(rng), uniform(rng));
        for (auto design : {QuadratureDesign::pauli_expectations, QuadratureDesign::fourier_angles}) {
            const VQERecord r = vqe_one_qubit(p, 0, 1, design);
            EXPECT_NEAR(r.e_est, p.exact_ground(), 1e-12);
            EXPECT_EQ(r.angles.size(), 3u);
            EXPECT_DOUBLE_EQ(r.t0, std::atan2(p.cx, p.cz));
        }
    }
}

TEST(Vqe, ConstantProblemIgnoresShots) {
    const OneQubitProblem p = OneQubitProblem::from_pauli(0.7, 0.0, 0.0);
    for (std::size_t shots : {0u, 6u, 600u}) EXPECT_NEAR(vqe_one_qubit(p, shots, 4).e_est, 0.7, 1e-12);
}

TEST(Vqe, ShotBudgetSplit) {
    const OneQubitProblem p = OneQubitProblem::from_pauli(0.1, 0.3, 0.2);
    const VQERecord r = vqe_one_qubit(p, 32000, 5);
    EXPECT_EQ(r.shots_per_setting, 5333u);
    ASSERT_EQ(r.measurements.size(), 3u);
    for (const auto& m : r.measurements) EXPECT_EQ(m.n0 + m.n1, 5333u);
    EXPECT_THROW(vqe_one_qubit(p, 5, 5), DomainError);
}

TEST(Vqe, NominalRowsCoverageAndUnbiasedMean) {
    Rng rng(87);
    const OneQubitProblem p = OneQubitProblem::from_pauli(uniform(rng), uniform(rng), uniform(rng));
    const std::size_t shots = 32000;
    double sum = 0.0, sq = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const double e = vqe_one_qubit(p, shots, seed, QuadratureDesign::fourier_angles).e_est;
        sum += e;
        sq += e * e;
    }
    const double mean = sum / 100, var = sq / 100 - mean * mean;
    EXPECT_LT(std::abs(mean - p.exact_ground()), 3.0 * std::sqrt(var / 100) + 1e-12);
}

TEST(Vqe, RecordJsonAndDeterminism) {
    const OneQubitProblem p = OneQubitProblem::from_pauli(0.1, 0.3, 0.2);
    const std::string a = vqe_one_qubit(p, 600, 11).to_json();
    EXPECT_EQ(a, vqe_one_qubit(p, 600, 11).to_json());
    EXPECT_NE(a, vqe_one_qubit(p, 600, 12, QuadratureDesign::fourier_angles).to_json());
    const auto j = nlohmann::json::parse(a);
    for (const char* key : {"t0", "angles", "counts", "fit", "t_star", "E_est", "seed", "shots"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["counts"].size(), 3u);
    EXPECT_EQ(j["design"], to_string(QuadratureDesign::pauli_expectations));
}

}  // namespace
}  // namespace qdsrg
