// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include <qdsrg/errors.hpp>
#include <qdsrg/fockspace.hpp>
#include <qdsrg/onequbit.hpp>

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace qdsrg {

namespace {

using ojson = nlohmann::ordered_json;

constexpr Determinant kPhi1 = 0b0011;  // 1α 1β
constexpr Determinant kPhi2 = 0b1100;  // 2α 2β

// Stable per-setting seed derived from the experiment seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::string to_string(QuadratureDesign d) {
    return d == QuadratureDesign::pauli_expectations ? "pauli-expectations" : "fourier-angles";
}

OneQubitProblem OneQubitProblem::from_matrix(double h00, double h11, double h10) {
    OneQubitProblem p;
    p.h00 = h00;
    p.h11 = h11;
    p.h10 = h10;
    p.c0 = (h00 + h11) / 2.0;
    p.cz = (h00 - h11) / 2.0;
    p.cx = h10;
    return p;
}

OneQubitProblem OneQubitProblem::from_pauli(double c0, double cz, double cx) {
    OneQubitProblem p;
    p.c0 = c0;
    p.cz = cz;
    p.cx = cx;
    p.h00 = c0 + cz;
    p.h11 = c0 - cz;
    p.h10 = cx;
    return p;
}

double OneQubitProblem::exact_ground() const { return c0 - std::hypot(cz, cx); }

double TomographyModel::operator()(double t) const { return a + b * std::cos(t) + c * std::sin(t); }

double rotation_angle(double c1p, double c2p, double c3p) {
    if (c3p == 0.0) return 0.0;
    const double den = c1p - c2p;
    if (den == 0.0) return std::numbers::pi / 4.0;
    return 0.5 * std::atan(std::numbers::sqrt2 * c3p / den);
}

ManyBodyOperator rotate_two_orbitals(const ManyBodyOperator& op, double theta) {
    if (op.n() != 4) throw ContractViolation("two-orbital rotation needs exactly 4 spin orbitals");
    const double c = std::cos(theta), s = std::sin(theta);
    Matrix U = Matrix::Zero(4, 4);
    for (int sigma = 0; sigma < 2; ++sigma) {
        U(0 + sigma, 0 + sigma) = c;
        U(2 + sigma, 0 + sigma) = s;
        U(0 + sigma, 2 + sigma) = -s;
        U(2 + sigma, 2 + sigma) = c;
    }
    ManyBodyOperator out = op;
    out.one_body = U.transpose() * op.one_body * U;
    out.two_body = rotate(op.two_body, U);
    return out;
}

TwoConfigState two_config_state(const std::vector<std::uint64_t>& dets, const Vector& coeffs) {
    if (static_cast<std::size_t>(coeffs.size()) != dets.size())
        throw ContractViolation("coefficients and determinants differ in length");
    auto coeff = [&](std::uint64_t d) {
        for (std::size_t i = 0; i < dets.size(); ++i)
            if (dets[i] == d) return coeffs(static_cast<Eigen::Index>(i));
        return 0.0;
    };
    TwoConfigState st;
    st.c1p = coeff(kPhi1);
    st.c2p = coeff(kPhi2);
    // |1α 2β> = det{0,3}; |2α 1β> = a+_2 a+_1|0> = -det{1,2}.
    st.c3p = (coeff(0b1001) - coeff(0b0110)) / std::numbers::sqrt2;
    st.theta = rotation_angle(st.c1p, st.c2p, st.c3p);
    return st;
}

OneQubitProblem map_to_qubit(const ManyBodyOperator& hact) {
    if (hact.vacuum != Vacuum::bare) throw ContractViolation("one-qubit mapping needs a bare operator");
    if (hact.n() != 4) throw ContractViolation("one-qubit mapping needs exactly 2 active spatial orbitals");
    const Matrix H = build_hamiltonian(hact.scalar, hact.one_body, hact.two_body, {kPhi1, kPhi2});
    return OneQubitProblem::from_matrix(H(0, 0), H(1, 1), H(1, 0));
}

Measurement simulate_measurement(double t, std::size_t shots, std::uint64_t seed) {
    if (shots < 1) throw DomainError("measurement needs at least one shot");
    std::mt19937_64 gen(seed);
    const double p0 = std::pow(std::cos(t / 2.0), 2);
    const double pplus = std::clamp((1.0 + std::sin(t)) / 2.0, 0.0, 1.0);
    std::binomial_distribution<std::size_t> zdist(shots, std::clamp(p0, 0.0, 1.0));
    std::binomial_distribution<std::size_t> xdist(shots, pplus);
    Measurement m;
    m.n0 = zdist(gen);
    m.n1 = shots - m.n0;
    m.n_plus = xdist(gen);
    m.n_minus = shots - m.n_plus;
    const auto n = static_cast<double>(shots);
    m.z = (static_cast<double>(m.n0) - static_cast<double>(m.n1)) / n;
    m.x = (static_cast<double>(m.n_plus) - static_cast<double>(m.n_minus)) / n;
    return m;
}

TomographyModel fourier_quadrature(const std::function<QuadraturePoint(double)>& measure, double t0,
                                   QuadratureDesign design) {
    const double third = std::numbers::pi / 3.0;
    const double angles[3] = {t0, t0 - third, t0 + third};
    Eigen::Matrix3d M;
    Eigen::Vector3d rhs;
    for (int k = 0; k < 3; ++k) {
        const QuadraturePoint q = measure(angles[k]);
        if (design == QuadratureDesign::pauli_expectations)
            M.row(k) << 1.0, q.z, q.x;
        else
            M.row(k) << 1.0, std::cos(angles[k]), std::sin(angles[k]);
        rhs(k) = q.e;
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(M);
    const auto sv = svd.singularValues();
    if (sv(2) == 0.0 || sv(0) / sv(2) > 1e12)
        throw QuadratureError("quadrature system is singular at t0 = " + std::to_string(t0) +
                              "; choose a different t0");
    const Eigen::Vector3d abc = M.partialPivLu().solve(rhs);
    return {abc(0), abc(1), abc(2)};
}

std::pair<double, double> optimal_angle(const TomographyModel& m) {
    if (m.b == 0.0 && m.c == 0.0) return {0.0, m.a};
    return {std::atan2(-m.c, -m.b), m.a - std::hypot(m.b, m.c)};
}

RDMSet rdms_from_measurements(double p0, double p1, double x) {
    RDMSet r;
    r.g1 = Matrix::Zero(4, 4);
    r.g1(0, 0) = r.g1(1, 1) = p0;
    r.g1(2, 2) = r.g1(3, 3) = p1;
    r.g2 = Tensor4(4);
    // Pair (a,b) = (0,1) or (2,3); γ(ab,cd) with antisymmetric partners.
    auto put = [&](int a, int b, int c, int d, double v) {
        r.g2(a, b, c, d) = v;
        r.g2(b, a, c, d) = -v;
        r.g2(a, b, d, c) = -v;
        r.g2(b, a, d, c) = v;
    };
    put(0, 1, 0, 1, p0);
    put(2, 3, 2, 3, p1);
    put(0, 1, 2, 3, x / 2.0);
    put(2, 3, 0, 1, x / 2.0);
    r.g3 = Tensor6(4);  // two electrons: γ3 vanishes
    return r;
}

RDMSet rdms_from_angle(double t) {
    const double c = std::cos(t / 2.0), s = std::sin(t / 2.0);
    return rdms_from_measurements(c * c, s * s, 2.0 * c * s);
}

std::string VQERecord::to_json() const {
    ojson j;
    j["t0"] = t0;
    j["angles"] = angles;
    ojson ms = ojson::array();
    for (const auto& m : measurements)
        ms.push_back({{"z", m.z}, {"x", m.x}, {"n0", m.n0}, {"n1", m.n1}, {"n_plus", m.n_plus},
                      {"n_minus", m.n_minus}});
    j["counts"] = ms;
    j["fit"] = {{"a", model.a}, {"b", model.b}, {"c", model.c}};
    j["design"] = to_string(design);
    j["t_star"] = t_star;
    j["E_est"] = e_est;
    j["seed"] = seed;
    j["shots"] = shots;
    j["shots_per_setting"] = shots_per_setting;
    return j.dump();
}

VQERecord vqe_one_qubit(const OneQubitProblem& p, std::size_t shots, std::uint64_t seed,
                        QuadratureDesign design) {
    if (shots != 0 && shots < 6) throw DomainError("a shot budget needs at least one shot per setting (6)");
    VQERecord rec;
    rec.seed = seed;
    rec.shots = shots;
    rec.design = design;
    rec.shots_per_setting = shots / 6;
    rec.t0 = std::atan2(p.cx, p.cz);
    std::uint64_t k = 0;
    auto measure = [&](double t) {
        QuadraturePoint q;
        rec.angles.push_back(t);
        if (shots == 0) {
            q.z = std::cos(t);
            q.x = std::sin(t);
        } else {
            const Measurement m = simulate_measurement(t, rec.shots_per_setting, derive_seed(seed, k++));
            rec.measurements.push_back(m);
            q.z = m.z;
            q.x = m.x;
        }
        q.e = p.c0 + p.cz * q.z + p.cx * q.x;
        return q;
    };
    if (p.cz == 0.0 && p.cx == 0.0) {
        // Constant Hamiltonian: the experiments are recorded but there is nothing to fit.
        for (double t : {rec.t0, rec.t0 - std::numbers::pi / 3.0, rec.t0 + std::numbers::pi / 3.0}) measure(t);
        rec.model = {p.c0, 0.0, 0.0};
    } else {
        rec.model = fourier_quadrature(measure, rec.t0, design);
    }
    std::tie(rec.t_star, rec.e_est) = optimal_angle(rec.model);
    return rec;
}

}  // namespace qdsrg
