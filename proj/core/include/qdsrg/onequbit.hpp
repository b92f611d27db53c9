// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file onequbit.hpp
 * @brief Two-configuration active spaces mapped to one qubit: orbital rotation,
 *        Pauli decomposition, shot-noise tomography and VQE.
 *
 * Active spin orbitals are ordered 1α, 1β, 2α, 2β. |Φ1> = a+_{1α} a+_{1β}|0> maps
 * to |0>, |Φ2> = a+_{2α} a+_{2β}|0> maps to |1>. The ansatz Ry(t)|0> has
 * C1 = cos(t/2), C2 = sin(t/2).
 */
#pragma once

#include <qdsrg/operator.hpp>
#include <qdsrg/rdm.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qdsrg {

struct TwoConfigState {
    double c1p = 1.0;
    double c2p = 0.0;
    double c3p = 0.0;  ///< coefficient of (|1α 2β> + |2α 1β>)/√2 with |2α 1β> = a+_{2α} a+_{1β}|0>
    double theta = 0.0;
};

struct OneQubitProblem {
    double h00 = 0.0, h11 = 0.0, h10 = 0.0;
    double c0 = 0.0, cz = 0.0, cx = 0.0;

    static OneQubitProblem from_matrix(double h00, double h11, double h10);
    static OneQubitProblem from_pauli(double c0, double cz, double cx);
    double exact_ground() const;  ///< c0 - √(cz² + cx²)
};

struct TomographyModel {
    double a = 0.0, b = 0.0, c = 0.0;
    double operator()(double t) const;
};

struct Measurement {
    double z = 0.0;
    double x = 0.0;
    std::size_t n0 = 0, n1 = 0;        ///< Z-basis counts
    std::size_t n_plus = 0, n_minus = 0;  ///< X-basis counts
};

/// tan 2θ = √2 c3/(c1 - c2), 2θ in (-π/2, π/2]; π/4 when c1 = c2 and c3 ≠ 0.
double rotation_angle(double c1p, double c2p, double c3p);

/// Rotate active spatial orbitals 1,2 by θ: 1' = cosθ·1 + sinθ·2, 2' = -sinθ·1 + cosθ·2.
ManyBodyOperator rotate_two_orbitals(const ManyBodyOperator& op, double theta);

/// Read (c1p, c2p, c3p) off a 2-electron CI vector over the 6 singlet-compatible determinants.
TwoConfigState two_config_state(const std::vector<std::uint64_t>& dets, const Vector& coeffs);

/// Bare operator over 4 active spin orbitals -> (h00, h11, h10) and Pauli coefficients.
OneQubitProblem map_to_qubit(const ManyBodyOperator& hact);

/// Z and X sampled independently with `shots` each.
Measurement simulate_measurement(double t, std::size_t shots, std::uint64_t seed);

struct QuadraturePoint {
    double z = 0.0, x = 0.0, e = 0.0;
};

/// Rows of the 3×3 quadrature system: measured [1, ⟨Z⟩, ⟨X⟩] or nominal [1, cos t, sin t].
enum class QuadratureDesign { pauli_expectations, fourier_angles };

std::string to_string(QuadratureDesign d);

/// Fit a + b cos t + c sin t from (⟨Z⟩, ⟨X⟩, ⟨H⟩) at t0, t0 - π/3, t0 + π/3.
/// Throws QuadratureError when the system's condition number exceeds 1e12.
TomographyModel fourier_quadrature(const std::function<QuadraturePoint(double)>& measure, double t0,
                                   QuadratureDesign design = QuadratureDesign::pauli_expectations);

/// t* = atan2(-c, -b), E = a - √(b² + c²); constant model gives t* = 0.
std::pair<double, double> optimal_angle(const TomographyModel& m);

/// Table-style RDMs from measured |C1|², |C2|² and ⟨X⟩.
RDMSet rdms_from_measurements(double p0, double p1, double x);
/// Analytic variant: |C1|² = cos²(t/2), |C2|² = sin²(t/2), ⟨X⟩ = sin t.
RDMSet rdms_from_angle(double t);

struct VQERecord {
    double t0 = 0.0;
    std::vector<double> angles;
    std::vector<Measurement> measurements;
    TomographyModel model;
    double t_star = 0.0;
    double e_est = 0.0;
    std::uint64_t seed = 0;
    std::size_t shots = 0;  ///< total budget; 0 means analytic expectations
    std::size_t shots_per_setting = 0;
    QuadratureDesign design = QuadratureDesign::pauli_expectations;

    std::string to_json() const;
};

/// shots = 0 runs the analytic pipeline; otherwise shots are split evenly over 3 angles × 2 bases
/// (floor(shots/6) per setting, at least 6 shots required). cz = cx = 0 skips the fit and returns c0.
VQERecord vqe_one_qubit(const OneQubitProblem& p, std::size_t shots, std::uint64_t seed,
                        QuadratureDesign design = QuadratureDesign::pauli_expectations);

}  // namespace qdsrg
