// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include <qdsrg/dsrg.hpp>
#include <qdsrg/errors.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace qdsrg {

void FlowConfig::validate() const {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("flow parameter s must be finite and >= 0");
    if (!(bch_tolerance > 0.0)) throw ConfigError("bch_tolerance must be > 0");
    if (!(energy_convergence > 0.0)) throw ConfigError("energy_convergence must be > 0");
    if (!(residual_convergence > 0.0)) throw ConfigError("residual_convergence must be > 0");
    if (max_bch_terms < 1) throw ConfigError("max_bch_terms must be >= 1");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (!(damping >= 0.0 && damping < 1.0)) throw ConfigError("damping must lie in [0, 1)");
}

double FlowConfig::energy_cutoff() const {
    return s == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::sqrt(s);
}

double Amplitudes::norm() const { return std::sqrt(t1.squaredNorm() + t2.norm() * t2.norm()); }

ManyBodyOperator Amplitudes::anti_hermitian(std::uint64_t ref) const {
    const std::size_t n = static_cast<std::size_t>(t1.rows());
    ManyBodyOperator a = ManyBodyOperator::zero(n, Vacuum::gno, ref);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t x = 0; x < n; ++x) {
            const double t = t1(i, x);
            if (t == 0.0) continue;
            a.one_body(x, i) += t;
            a.one_body(i, x) -= t;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y) {
                    const double t = t2(i, j, x, y);
                    if (t == 0.0) continue;
                    a.two_body(x, y, i, j) += t;
                    a.two_body(i, j, x, y) -= t;
                }
    return a;
}

Matrix build_fock(const IntegralSet& ints, const CumulantSet& cum) {
    const std::size_t n = ints.n();
    const Matrix g = cum.g1_full();
    Matrix f = ints.h;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            double acc = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) {
                    const double gr = g(r, s);
                    if (gr != 0.0) acc += ints.v(p, r, q, s) * gr;
                }
            f(p, q) += acc;
        }
    return f;
}

namespace {

constexpr double kDiagonalThreshold = 1e-12;

// Orthogonal U for one block; columns matched to original orbitals by overlap.
Matrix block_rotation(const Matrix& fb) {
    const auto m = fb.rows();
    Matrix off = fb;
    off.diagonal().setZero();
    if (m == 0 || off.cwiseAbs().maxCoeff() < kDiagonalThreshold) return Matrix::Identity(m, m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(fb);
    const Matrix& vec = es.eigenvectors();
    Matrix u = Matrix::Zero(m, m);
    std::vector<char> taken(static_cast<std::size_t>(m), 0);
    for (Eigen::Index k = 0; k < m; ++k) {
        Eigen::Index best = -1;
        double bo = -1.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (taken[static_cast<std::size_t>(i)]) continue;
            const double o = std::abs(vec(i, k));
            if (o > bo + 1e-12) {
                bo = o;
                best = i;
            }
        }
        taken[static_cast<std::size_t>(best)] = 1;
        u.col(best) = vec(best, k) < 0 ? Matrix(-vec.col(k)) : Matrix(vec.col(k));
    }
    return u;
}

void rotate_block(const Matrix& f, const std::vector<std::size_t>& idx, bool spin_free, Matrix& U) {
    if (idx.empty()) return;
    std::vector<std::size_t> alpha, beta;
    for (std::size_t p : idx) (p % 2 == 0 ? alpha : beta).push_back(p);
    double spin_mixing = 0.0;
    for (std::size_t a : alpha)
        for (std::size_t b : beta) spin_mixing = std::max(spin_mixing, std::abs(f(a, b)));
    std::vector<std::vector<std::size_t>> groups;
    if (spin_free || spin_mixing < kDiagonalThreshold) {
        groups = {alpha, beta};
    } else {
        groups = {idx};
    }
    for (const auto& grp : groups) {
        const auto m = static_cast<Eigen::Index>(grp.size());
        if (m == 0) continue;
        Matrix fb(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) fb(i, j) = f(grp[i], grp[j]);
        const Matrix ub = block_rotation(fb);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) U(grp[i], grp[j]) = ub(i, j);
    }
}

}  // namespace

std::tuple<IntegralSet, CumulantSet, SemicanonicalBasis> semicanonicalize(const IntegralSet& ints,
                                                                          const CumulantSet& cum) {
    const std::size_t n = ints.n();
    if (cum.n_orbitals != n) throw ContractViolation("integrals and densities differ in size");
    const Matrix f = build_fock(ints, cum);
    Matrix U = Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    // Spin-conserving integrals keep the alpha and beta blocks apart so that
    // determinant spaces of fixed Sz stay valid after the rotation.
    double h_mixing = 0.0;
    for (std::size_t p = 0; p < n; p += 2)
        for (std::size_t q = 1; q < n; q += 2) h_mixing = std::max(h_mixing, std::abs(ints.h(p, q)));
    const bool spin_free = h_mixing < kDiagonalThreshold;
    rotate_block(f, cum.core, spin_free, U);
    rotate_block(f, cum.active, spin_free, U);
    rotate_block(f, cum.virt, spin_free, U);

    IntegralSet out = ints;
    out.h = U.transpose() * ints.h * U;
    out.v = rotate(ints.v, U);

    CumulantSet c = cum;
    const std::size_t na = cum.active.size();
    Matrix Ua(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(na));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) Ua(i, j) = U(cum.active[i], cum.active[j]);
    if (Ua != Matrix::Identity(Ua.rows(), Ua.cols())) {
        c.l1 = Ua.transpose() * cum.l1 * Ua;
        c.l2 = rotate(cum.l2, Ua);
        if (cum.l3) c.l3 = rotate(*cum.l3, Ua);
    }

    SemicanonicalBasis basis;
    const Matrix fr = U.transpose() * f * U;
    basis.epsilon = fr.diagonal();
    basis.rotation = std::move(U);
    return {std::move(out), std::move(c), std::move(basis)};
}

double regularizer(double delta, double s) {
    if (delta == 0.0) return 0.0;
    return -std::expm1(-s * delta * delta) / delta;
}

namespace {

struct Blocks {
    std::vector<std::size_t> hole, particle;
    std::vector<char> active;
};

Blocks blocks_of(const CumulantSet& cum) {
    Blocks b;
    b.active.assign(cum.n_orbitals, 0);
    for (std::size_t u : cum.active) b.active[u] = 1;
    b.hole = cum.core;
    b.hole.insert(b.hole.end(), cum.active.begin(), cum.active.end());
    b.particle = cum.active;
    b.particle.insert(b.particle.end(), cum.virt.begin(), cum.virt.end());
    return b;
}

}  // namespace

Amplitudes first_order_amplitudes(const Matrix& f, const Tensor4& v, const Vector& eps, const CumulantSet& cum,
                                  double s) {
    const std::size_t n = cum.n_orbitals;
    const Blocks b = blocks_of(cum);
    Amplitudes t;
    t.t1 = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    t.t2 = Tensor4(n);
    for (std::size_t i : b.hole)
        for (std::size_t j : b.hole)
            for (std::size_t a : b.particle)
                for (std::size_t c : b.particle) {
                    if (b.active[i] && b.active[j] && b.active[a] && b.active[c]) continue;
                    t.t2(i, j, a, c) = v(a, c, i, j) * regularizer(eps(i) + eps(j) - eps(a) - eps(c), s);
                }
    const Matrix g = cum.g1_full();
    for (std::size_t i : b.hole)
        for (std::size_t a : b.particle) {
            if (b.active[i] && b.active[a]) continue;
            double src = f(i, a);
            for (std::size_t u : cum.active)
                for (std::size_t x : cum.active) src += (eps(x) - eps(u)) * t.t2(i, u, a, x) * g(x, u);
            t.t1(i, a) = src * regularizer(eps(i) - eps(a), s);
        }
    return t;
}

BCHResult bch_transform(const ManyBodyOperator& H, const Amplitudes& T, const CumulantSet& cum,
                        const FlowConfig& cfg) {
    const ManyBodyOperator A = T.anti_hermitian(cum.tag());
    BCHResult r;
    r.hbar = H;
    ManyBodyOperator term = H;
    for (std::size_t k = 1; k <= cfg.max_bch_terms; ++k) {
        term = commutator_12(term, A, cum);
        term *= 1.0 / static_cast<double>(k);
        const double nk = term.component_norm();
        r.hbar += term;
        r.term_norms.push_back(nk);
        if (nk < cfg.bch_tolerance) return r;
    }
    if (r.term_norms.back() > 1e-6)
        throw DivergenceError("BCH series did not converge within " + std::to_string(cfg.max_bch_terms) + " terms",
                              r.term_norms);
    return r;
}

ManyBodyOperator gno_hamiltonian(const IntegralSet& ints, const CumulantSet& cum) {
    return normal_order(ints.as_operator(), cum);
}

std::string format_iteration(std::size_t k, double e, double de, double rms, std::size_t terms) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "iter %zu: E=%.12f dE=%.3e rms=%.3e bch_terms=%zu", k, e, de, rms, terms);
    return buf;
}

LDSRGResult solve_ldsrg2(const ManyBodyOperator& H, const Vector& eps, const CumulantSet& cum,
                         const FlowConfig& cfg) {
    cfg.validate();
    if (H.vacuum != Vacuum::gno || H.reference != cum.tag())
        throw ContractViolation("Hamiltonian must be normal ordered with respect to the given densities");
    const Blocks b = blocks_of(cum);

    LDSRGResult res;
    res.amplitudes = first_order_amplitudes(H.one_body, H.two_body, eps, cum, cfg.s);

    if (cfg.mode == FlowMode::first_order) {
        BCHResult r = bch_transform(H, res.amplitudes, cum, cfg);
        res.hbar = std::move(r.hbar);
        res.last_bch_norms = std::move(r.term_norms);
        res.iterations = 1;
        res.log.push_back(format_iteration(1, res.hbar.scalar, res.hbar.scalar - H.scalar, 0.0,
                                           res.last_bch_norms.size()));
        return res;
    }

    auto update = [&](double source, double t, double delta) {
        const double reg = regularizer(delta, cfg.s);
        if (reg == 0.0) return 0.0;
        if (cfg.update_rule == UpdateRule::dsrg_standard) return (source + t * delta) * reg;
        return (source + t * delta * std::exp(-cfg.s * delta * delta)) * reg;
    };

    double e_prev = H.scalar;
    for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
        BCHResult r = bch_transform(H, res.amplitudes, cum, cfg);
        const ManyBodyOperator& hb = r.hbar;
        const double e = hb.scalar;

        Amplitudes next = res.amplitudes;
        double sq = 0.0;
        std::size_t count = 0;
        for (std::size_t i : b.hole)
            for (std::size_t a : b.particle) {
                if (b.active[i] && b.active[a]) continue;
                const double old = res.amplitudes.t1(i, a);
                const double fresh = update(hb.one_body(a, i), old, eps(i) - eps(a));
                sq += (fresh - old) * (fresh - old);
                ++count;
                next.t1(i, a) = (1.0 - cfg.damping) * fresh + cfg.damping * old;
            }
        for (std::size_t i : b.hole)
            for (std::size_t j : b.hole)
                for (std::size_t a : b.particle)
                    for (std::size_t c : b.particle) {
                        if (b.active[i] && b.active[j] && b.active[a] && b.active[c]) continue;
                        const double old = res.amplitudes.t2(i, j, a, c);
                        const double fresh =
                            update(hb.two_body(a, c, i, j), old, eps(i) + eps(j) - eps(a) - eps(c));
                        sq += (fresh - old) * (fresh - old);
                        ++count;
                        next.t2(i, j, a, c) = (1.0 - cfg.damping) * fresh + cfg.damping * old;
                    }
        const double rms = count ? std::sqrt(sq / static_cast<double>(count)) : 0.0;
        const double de = e - e_prev;
        res.log.push_back(format_iteration(it, e, de, rms, r.term_norms.size()));
        res.iterations = it;
        if (std::abs(de) < cfg.energy_convergence && rms < cfg.residual_convergence) {
            res.hbar = std::move(r.hbar);
            res.last_bch_norms = std::move(r.term_norms);
            return res;
        }
        res.amplitudes = std::move(next);
        e_prev = e;
    }
    throw ConvergenceError("amplitude iterations did not converge in " + std::to_string(cfg.max_iterations) +
                               " cycles",
                           res.log);
}

double expectation(const ManyBodyOperator& Hbar, const CumulantSet& cum) {
    if (Hbar.vacuum != Vacuum::gno || Hbar.reference != cum.tag())
        throw ContractViolation("expectation needs an operator normal ordered with respect to these densities");
    return Hbar.scalar;
}

ManyBodyOperator extract_active_hamiltonian(const ManyBodyOperator& Hbar, const CumulantSet& cum) {
    const ManyBodyOperator bare = to_bare_operator(Hbar, cum);
    return fold_and_restrict(bare, cum.core, cum.active);
}

}  // namespace qdsrg
