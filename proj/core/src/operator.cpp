// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include <qdsrg/errors.hpp>
#include <qdsrg/operator.hpp>

#include <cmath>

namespace qdsrg {

namespace {

// out[pre, j, post] = Σ_i U(i, j) in[pre, i, post] for the mode with `pre` leading elements.
void transform_mode(const std::vector<double>& in, std::vector<double>& out, std::size_t n,
                    std::size_t pre, std::size_t post, const Matrix& u) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t a = 0; a < pre; ++a) {
        for (std::size_t i = 0; i < n; ++i) {
            const double* src = in.data() + (a * n + i) * post;
            for (std::size_t j = 0; j < n; ++j) {
                const double w = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (w == 0.0) continue;
                double* dst = out.data() + (a * n + j) * post;
                for (std::size_t b = 0; b < post; ++b) dst[b] += w * src[b];
            }
        }
    }
}

template <int R>
CubeTensor<R> rotate_all(const CubeTensor<R>& t, const Matrix& u) {
    const std::size_t n = t.n();
    CubeTensor<R> a = t;
    CubeTensor<R> b(n);
    std::size_t pre = 1;
    std::size_t post = t.size() / n;
    for (int mode = 0; mode < R; ++mode) {
        transform_mode(a.raw(), b.raw(), n, pre, post, u);
        std::swap(a, b);
        pre *= n;
        post /= n;
    }
    return a;
}

}  // namespace

Tensor4 antisymmetrize_pairs(const Tensor4& c) {
    const std::size_t n = c.n();
    Tensor4 z(n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s)
                    z(p, q, r, s) = c(p, q, r, s) - c(q, p, r, s) - c(p, q, s, r) + c(q, p, s, r);
    return z;
}

double antisymmetry_defect(const Tensor4& t) {
    const std::size_t n = t.n();
    double m = 0.0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) {
                    m = std::max(m, std::abs(t(p, q, r, s) + t(q, p, r, s)));
                    m = std::max(m, std::abs(t(p, q, r, s) + t(p, q, s, r)));
                }
    return m;
}

double hermiticity_defect(const Tensor4& t) {
    const std::size_t n = t.n();
    double m = 0.0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s)
                    m = std::max(m, std::abs(t(p, q, r, s) - t(r, s, p, q)));
    return m;
}

Tensor4 rotate(const Tensor4& t, const Matrix& u) { return rotate_all(t, u); }
Tensor6 rotate(const Tensor6& t, const Matrix& u) { return rotate_all(t, u); }

ManyBodyOperator ManyBodyOperator::zero(std::size_t n, Vacuum v, std::uint64_t ref) {
    ManyBodyOperator op;
    op.one_body = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    op.two_body = Tensor4(n);
    op.vacuum = v;
    op.reference = ref;
    return op;
}

ManyBodyOperator& ManyBodyOperator::operator+=(const ManyBodyOperator& o) {
    scalar += o.scalar;
    one_body += o.one_body;
    two_body += o.two_body;
    return *this;
}

ManyBodyOperator& ManyBodyOperator::operator*=(double a) {
    scalar *= a;
    one_body *= a;
    two_body *= a;
    return *this;
}

void ManyBodyOperator::axpy(double a, const ManyBodyOperator& o) {
    scalar += a * o.scalar;
    one_body += a * o.one_body;
    two_body.axpy(a, o.two_body);
}

double ManyBodyOperator::component_norm() const {
    return std::abs(scalar) + frobenius(one_body) + two_body.norm();
}

double ManyBodyOperator::hermiticity_defect() const {
    double m = one_body.size() ? (one_body - one_body.transpose()).cwiseAbs().maxCoeff() : 0.0;
    return std::max(m, qdsrg::hermiticity_defect(two_body));
}

double max_abs_diff(const ManyBodyOperator& a, const ManyBodyOperator& b) {
    double m = std::abs(a.scalar - b.scalar);
    m = std::max(m, max_abs_diff(a.one_body, b.one_body));
    return std::max(m, max_abs_diff(a.two_body, b.two_body));
}

double antisymmetry_defect(const ManyBodyOperator& op) { return antisymmetry_defect(op.two_body); }

namespace {

// Shared body of the two vacuum conversions; sign = -1 goes GNO -> bare, +1 bare -> GNO.
ManyBodyOperator reorder(const ManyBodyOperator& op, const CumulantSet& cum, double sign) {
    const std::size_t n = op.n();
    if (cum.n_orbitals != n)
        throw ContractViolation("operator and densities span different orbital counts");
    const Matrix g = cum.g1_full();
    const Tensor4& v = op.two_body;

    ManyBodyOperator out = op;
    // scalar: ± Σ o1 γ + ½ Σ v γ γ ± ¼ Σ v λ2
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) s1 += op.one_body(p, q) * g(p, q);
    Matrix vg = Matrix::Zero(n, n);  // vg(p,q) = Σ_rs v(p,r,q,s) γ(r,s)
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            double acc = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) {
                    const double gr = g(r, s);
                    if (gr != 0.0) acc += v(p, r, q, s) * gr;
                }
            vg(p, q) = acc;
        }
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) s2 += vg(p, q) * g(p, q);
    double sl = 0.0;
    const auto& act = cum.active;
    const std::size_t na = act.size();
    for (std::size_t u = 0; u < na; ++u)
        for (std::size_t w = 0; w < na; ++w)
            for (std::size_t x = 0; x < na; ++x)
                for (std::size_t y = 0; y < na; ++y)
                    sl += v(act[u], act[w], act[x], act[y]) * cum.l2(u, w, x, y);

    // GNO -> bare: c - Σ o1 γ + ½ Σ vγγ - ¼ Σ v λ2, o1 - vγ.
    // bare -> GNO: c + Σ h γ + ½ Σ vγγ + ¼ Σ v λ2, h + vγ.
    out.scalar = op.scalar + sign * s1 + 0.5 * s2 + sign * 0.25 * sl;
    out.one_body = op.one_body + sign * vg;
    out.vacuum = sign < 0 ? Vacuum::bare : Vacuum::gno;
    out.reference = sign < 0 ? 0 : cum.tag();
    return out;
}

}  // namespace

ManyBodyOperator to_bare_operator(const ManyBodyOperator& op, const CumulantSet& cum) {
    if (op.vacuum == Vacuum::bare) return op;
    if (op.reference != cum.tag())
        throw ContractViolation("operator is normal ordered with respect to different densities");
    return reorder(op, cum, -1.0);
}

ManyBodyOperator normal_order(const ManyBodyOperator& op, const CumulantSet& cum) {
    if (op.vacuum == Vacuum::gno) {
        if (op.reference != cum.tag())
            throw ContractViolation("operator is normal ordered with respect to different densities");
        return op;
    }
    return reorder(op, cum, +1.0);
}

ManyBodyOperator fold_and_restrict(const ManyBodyOperator& bare, const std::vector<std::size_t>& occupied,
                                   const std::vector<std::size_t>& keep) {
    if (bare.vacuum != Vacuum::bare) throw ContractViolation("fold_and_restrict needs a bare operator");
    const std::size_t m = keep.size();
    ManyBodyOperator out = ManyBodyOperator::zero(m);
    const Matrix& h = bare.one_body;
    const Tensor4& v = bare.two_body;
    out.scalar = bare.scalar;
    for (std::size_t i : occupied) out.scalar += h(i, i);
    for (std::size_t i : occupied)
        for (std::size_t j : occupied) out.scalar += 0.5 * v(i, j, i, j);
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) {
            double acc = h(keep[p], keep[q]);
            for (std::size_t i : occupied) acc += v(keep[p], i, keep[q], i);
            out.one_body(p, q) = acc;
        }
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q)
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t s = 0; s < m; ++s)
                    out.two_body(p, q, r, s) = v(keep[p], keep[q], keep[r], keep[s]);
    return out;
}

}  // namespace qdsrg
