// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

// Closed-form GNO commutator [X, Y] truncated to rank 2.
// Index letters follow X^{pq}_{rs}, Y^{tu}_{vw}; γ = <a+ a>, η = 1 - γ.

#include <qdsrg/dsrg.hpp>
#include <qdsrg/errors.hpp>

#include <array>

namespace qdsrg {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Ctx {
    std::size_t n = 0;
    Matrix g;  // γ over the full space
    Matrix e;  // η over the full space
    std::vector<std::size_t> act;
    const Tensor4* l2 = nullptr;  // active-indexed
    const Tensor6* l3 = nullptr;  // active-indexed, may be null
};

// out[.. j ..] = Σ_i M(i, j) t[.. i ..] on mode k.
Tensor4 mode(const Tensor4& t, int k, const Matrix& M) {
    const auto n = static_cast<Eigen::Index>(t.n());
    Eigen::Index pre = 1, post = 1;
    for (int i = 0; i < k; ++i) pre *= n;
    for (int i = k + 1; i < 4; ++i) post *= n;
    Tensor4 out(t.n());
    if (k == 3) {
        Eigen::Map<const RowMat> src(t.data(), pre, n);
        Eigen::Map<RowMat> dst(out.data(), pre, n);
        dst.noalias() = src * M;
        return out;
    }
    const Matrix Mt = M.transpose();
    for (Eigen::Index a = 0; a < pre; ++a) {
        Eigen::Map<const RowMat> src(t.data() + a * n * post, n, post);
        Eigen::Map<RowMat> dst(out.data() + a * n * post, n, post);
        dst.noalias() = Mt * src;
    }
    return out;
}

// Matrix view M[(x0 x1), (x2 x3)] = t[slot perm[0] = x0, ...].
RowMat mat(const Tensor4& t, std::array<int, 4> perm) {
    const std::size_t n = t.n();
    const auto nn = static_cast<Eigen::Index>(n * n);
    RowMat m(nn, nn);
    std::array<std::size_t, 4> idx{};
    std::array<std::size_t, 4> x{};
    for (x[0] = 0; x[0] < n; ++x[0])
        for (x[1] = 0; x[1] < n; ++x[1])
            for (x[2] = 0; x[2] < n; ++x[2])
                for (x[3] = 0; x[3] < n; ++x[3]) {
                    for (int k = 0; k < 4; ++k) idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = x[static_cast<std::size_t>(k)];
                    m(static_cast<Eigen::Index>(x[0] * n + x[1]), static_cast<Eigen::Index>(x[2] * n + x[3])) =
                        t(idx[0], idx[1], idx[2], idx[3]);
                }
    return m;
}

// t[slot perm[k] = x_k] += a * M[(x0 x1), (x2 x3)].
void unmat_add(Tensor4& t, const RowMat& m, std::array<int, 4> perm, double a) {
    const std::size_t n = t.n();
    std::array<std::size_t, 4> idx{};
    std::array<std::size_t, 4> x{};
    for (x[0] = 0; x[0] < n; ++x[0])
        for (x[1] = 0; x[1] < n; ++x[1])
            for (x[2] = 0; x[2] < n; ++x[2])
                for (x[3] = 0; x[3] < n; ++x[3]) {
                    for (int k = 0; k < 4; ++k) idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = x[static_cast<std::size_t>(k)];
                    t(idx[0], idx[1], idx[2], idx[3]) +=
                        a * m(static_cast<Eigen::Index>(x[0] * n + x[1]), static_cast<Eigen::Index>(x[2] * n + x[3]));
                }
}

double trace_product(const Matrix& a, const Matrix& b) { return (a.array() * b.transpose().array()).sum(); }

// [X1, Y1]
void comm11(const Matrix& X, const Matrix& Y, const Ctx& c, ManyBodyOperator& out) {
    out.scalar += trace_product(X * c.e * Y, c.g) - trace_product(X * c.g * Y, c.e);
    out.one_body += X * Y - Y * X;
}

// [X1, Y2], scaled by `sign`.
void comm12(const Matrix& X, const Tensor4& Y, const Ctx& c, double sign, ManyBodyOperator& out) {
    const std::size_t n = c.n;
    const auto& act = c.act;
    const std::size_t na = act.size();
    const Tensor4& L = *c.l2;

    // Scalar: ½ Σ X^p_t Y^{tu}_{vw} λ^{pu}_{vw} - ½ Σ X^w_q Y^{tu}_{vw} λ^{tu}_{vq}
    double s0 = 0.0;
    for (std::size_t p = 0; p < na; ++p)
        for (std::size_t u = 0; u < na; ++u)
            for (std::size_t v = 0; v < na; ++v)
                for (std::size_t w = 0; w < na; ++w) {
                    const double l = L(p, u, v, w);
                    if (l == 0.0) continue;
                    double acc = 0.0;
                    for (std::size_t t = 0; t < n; ++t) acc += X(act[p], t) * Y(t, act[u], act[v], act[w]);
                    s0 += 0.5 * acc * l;
                }
    for (std::size_t t = 0; t < na; ++t)
        for (std::size_t u = 0; u < na; ++u)
            for (std::size_t v = 0; v < na; ++v)
                for (std::size_t q = 0; q < na; ++q) {
                    const double l = L(t, u, v, q);
                    if (l == 0.0) continue;
                    double acc = 0.0;
                    for (std::size_t w = 0; w < n; ++w) acc += X(w, act[q]) * Y(act[t], act[u], act[v], w);
                    s0 -= 0.5 * acc * l;
                }
    out.scalar += sign * s0;

    // One-body: C^u_v = Σ_tw M^w_t Y^{tu}_{vw}, M = ηXγ - γXη
    const Matrix M = c.e * X * c.g - c.g * X * c.e;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                for (std::size_t w = 0; w < n; ++w) acc += M(w, t) * Y(t, u, v, w);
            out.one_body(u, v) += sign * acc;
        }

    // Two-body: P(pq) Σ_t X^p_t Y^{tq}_{rs} - P(rs) Σ_t Y^{pq}_{rt} X^t_s
    const Tensor4 XY = mode(Y, 0, X.transpose());  // Σ_t X(p,t) Y(t,q,r,s)
    const Tensor4 YX = mode(Y, 3, X);              // Σ_t Y(p,q,r,t) X(t,s)
    Tensor4& Z = out.two_body;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s)
                    Z(p, q, r, s) += sign * (XY(p, q, r, s) - XY(q, p, r, s) - YX(p, q, r, s) + YX(p, q, s, r));
}

// [X2, Y2]
void comm22(const Tensor4& X, const Tensor4& Y, const Ctx& c, ManyBodyOperator& out) {
    const std::size_t n = c.n;
    const auto& act = c.act;
    const std::size_t na = act.size();
    const Tensor4& L = *c.l2;
    const Matrix& g = c.g;
    const Matrix& e = c.e;

    // Shared single-mode transforms of X; modes commute, so later ones build on these.
    const Tensor4 X0g = mode(X, 0, g), X0e = mode(X, 0, e);
    const Tensor4 X23e = mode(mode(X, 2, e), 3, e), X23g = mode(mode(X, 2, g), 3, g);
    const Tensor4 Xa = mode(X0g, 3, e), Xb = mode(X0e, 3, g);  // (w q r t)
    const Tensor4 Xp = mode(X0g, 1, g), Xh = mode(X0e, 1, e);  // (w v r s)
    const auto nn = static_cast<Eigen::Index>(n * n);

    // Two-body ladders: ½ X (ηη - γγ) Y - ½ Y (ηη - γγ) X
    {
        Tensor4 XK = X23e;
        XK -= X23g;
        Tensor4 YK = mode(mode(Y, 2, e), 3, e);
        YK -= mode(mode(Y, 2, g), 3, g);
        Eigen::Map<const RowMat> Xm(X.data(), nn, nn), Ym(Y.data(), nn, nn);
        Eigen::Map<const RowMat> XKm(XK.data(), nn, nn), YKm(YK.data(), nn, nn);
        Eigen::Map<RowMat> Z(out.two_body.data(), nn, nn);
        Z.noalias() += 0.5 * (XKm * Ym);
        Z.noalias() -= 0.5 * (YKm * Xm);
    }

    // Two-body ring: C(a,b,c,d) = -Σ X^{pa}_{ds} (γ_pw η_st - η_pw γ_st) Y^{tb}_{cw}, then P(ab)P(cd)
    {
        Tensor4 XM = Xa;  // (w a d t)
        XM -= Xb;
        const RowMat Xr = mat(XM, {1, 2, 0, 3});  // [(a d), (w t)]
        const RowMat Yr = mat(Y, {3, 0, 1, 2});   // [(w t), (b c)]
        const RowMat Cm = -(Xr * Yr);             // [(a d), (b c)]
        Tensor4 C(n);
        unmat_add(C, Cm, {0, 3, 1, 2}, 1.0);
        out.two_body += antisymmetrize_pairs(C);
    }

    // One-body from three pair contractions.
    {
        // R1: C^q_v = ½ Σ X^{pq}_{rs} Y^{tu}_{vw} [γ_pw η_st η_ru + η_pw γ_st γ_ru]
        const Tensor4 A1 = mode(X23e, 0, g);  // (w q u t)
        const Tensor4 A2 = mode(X23g, 0, e);
        // R2: C^u_r = -½ Σ X^{pq}_{rs} Y^{tu}_{vw} [γ_pw γ_qv η_st + η_pw η_qv γ_st]
        const Tensor4 B1 = mode(Xp, 3, e);  // (w v r t)
        const Tensor4 B2 = mode(Xh, 3, g);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                double r1 = 0.0, r2 = 0.0;
                for (std::size_t w = 0; w < n; ++w)
                    for (std::size_t u = 0; u < n; ++u)
                        for (std::size_t t = 0; t < n; ++t) {
                            // r1: q = a, v = b
                            r1 += (A1(w, a, u, t) + A2(w, a, u, t)) * Y(t, u, b, w);
                            // r2: u = a, r = b; summation letters reused as (w, v, t)
                            r2 += (B1(w, u, b, t) + B2(w, u, b, t)) * Y(t, a, u, w);
                        }
                out.one_body(a, b) += 0.5 * r1 - 0.5 * r2;
            }
    }

    // One-body from one δ pair plus λ2.
    {
        Matrix C = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        // P1a: C^q_r += -½ Σ X^{pq}_{rs} Y^{tu}_{vp} λ^{tu}_{sv}
        // P1d: C^u_v += ½ Σ X^{pq}_{rs} Y^{tu}_{vp} λ^{qt}_{sr}
        Matrix YL = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(na));  // (p, s)
        Matrix XL = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(na));  // (p, t)
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t s = 0; s < na; ++s) {
                double acc = 0.0, acc2 = 0.0;
                for (std::size_t t = 0; t < na; ++t)
                    for (std::size_t u = 0; u < na; ++u)
                        for (std::size_t v = 0; v < na; ++v) {
                            acc += Y(act[t], act[u], act[v], p) * L(t, u, s, v);
                            // XL(p, s) with s playing t: Σ_{q r v} X(p,q,r,v) λ(q,s,v,r)
                            acc2 += X(p, act[t], act[u], act[v]) * L(t, s, v, u);
                        }
                YL(p, s) = acc;
                XL(p, s) = acc2;
            }
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r) {
                double acc = 0.0;
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t s = 0; s < na; ++s) acc += X(p, q, r, act[s]) * YL(p, s);
                C(q, r) -= 0.5 * acc;
            }
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) {
                double acc = 0.0;
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t t = 0; t < na; ++t) acc += XL(p, t) * Y(act[t], u, v, p);
                C(u, v) += 0.5 * acc;
            }

        // P1b: C^q_v += ¼ Σ X^{pq}_{rs} Y^{tu}_{vp} λ^{tu}_{sr}
        // P1c: C^u_r += -Σ X^{pq}_{rs} Y^{tu}_{vp} λ^{qt}_{sv}
        {
            Tensor4 XLb(n);  // (p, q, t, u) with t, u active positions
            Tensor4 XLc(n);  // (p, r, t, v) with t, v active positions
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q)
                    for (std::size_t t = 0; t < na; ++t)
                        for (std::size_t u = 0; u < na; ++u) {
                            double acc = 0.0, acc2 = 0.0;
                            for (std::size_t r = 0; r < na; ++r)
                                for (std::size_t s = 0; s < na; ++s) {
                                    acc += X(p, q, act[r], act[s]) * L(t, u, s, r);
                                    // q here is the free r of P1c; (r, s) run over λ's q, s
                                    acc2 += X(p, act[r], q, act[s]) * L(r, t, s, u);
                                }
                            XLb(p, q, t, u) = acc;
                            XLc(p, q, t, u) = acc2;
                        }
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    double accb = 0.0, accc = 0.0;
                    for (std::size_t p = 0; p < n; ++p)
                        for (std::size_t t = 0; t < na; ++t)
                            for (std::size_t u = 0; u < na; ++u) {
                                // P1b: q = a, v = b
                                accb += XLb(p, a, t, u) * Y(act[t], act[u], b, p);
                                // P1c: u = a, r = b; (t, u) loop letters are λ's t and v
                                accc += XLc(p, b, t, u) * Y(act[t], a, act[u], p);
                            }
                    C(a, b) += 0.25 * accb;
                    C(a, b) -= accc;
                }
        }

        // P2a: C^q_r += -½ Σ X^{pq}_{rs} Y^{su}_{vw} λ^{pu}_{vw}
        // P2d: C^u_v += -½ Σ X^{pq}_{rs} Y^{su}_{vw} λ^{pq}_{rw}
        {
            Matrix B = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(na));   // (s, p)
            Matrix Bd = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(na));  // (s, w)
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t p = 0; p < na; ++p) {
                    double acc = 0.0, acc2 = 0.0;
                    for (std::size_t u = 0; u < na; ++u)
                        for (std::size_t v = 0; v < na; ++v)
                            for (std::size_t w = 0; w < na; ++w) {
                                acc += Y(s, act[u], act[v], act[w]) * L(p, u, v, w);
                                // Bd(s, p=w'): Σ_{u v w} X(u, v, w, s) λ(u, v, w, p)
                                acc2 += X(act[u], act[v], act[w], s) * L(u, v, w, p);
                            }
                    B(s, p) = acc;
                    Bd(s, p) = acc2;
                }
            for (std::size_t q = 0; q < n; ++q)
                for (std::size_t r = 0; r < n; ++r) {
                    double acc = 0.0;
                    for (std::size_t p = 0; p < na; ++p)
                        for (std::size_t s = 0; s < n; ++s) acc += X(act[p], q, r, s) * B(s, p);
                    C(q, r) -= 0.5 * acc;
                }
            for (std::size_t u = 0; u < n; ++u)
                for (std::size_t v = 0; v < n; ++v) {
                    double acc = 0.0;
                    for (std::size_t s = 0; s < n; ++s)
                        for (std::size_t w = 0; w < na; ++w) acc += Bd(s, w) * Y(s, u, v, act[w]);
                    C(u, v) -= 0.5 * acc;
                }
        }

        // P2b: C^q_v += Σ X^{pq}_{rs} Y^{su}_{vw} λ^{pu}_{rw}
        // P2c: C^u_r += ¼ Σ X^{pq}_{rs} Y^{su}_{vw} λ^{pq}_{vw}
        {
            Tensor4 Ab(n);  // (q, s, u, w), u, w active positions
            Tensor4 Yc(n);  // (s, u, p, q), p, q active positions
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t s = 0; s < n; ++s)
                    for (std::size_t u = 0; u < na; ++u)
                        for (std::size_t w = 0; w < na; ++w) {
                            double acc = 0.0, acc2 = 0.0;
                            for (std::size_t p = 0; p < na; ++p)
                                for (std::size_t r = 0; r < na; ++r) {
                                    acc += X(act[p], a, act[r], s) * L(p, u, r, w);
                                    // Yc(s, a, u, w) = Σ_{v w'} Y(s, a, v, w') λ(u, w, v, w')
                                    acc2 += Y(s, a, act[p], act[r]) * L(u, w, p, r);
                                }
                            Ab(a, s, u, w) = acc;
                            Yc(s, a, u, w) = acc2;
                        }
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    double accb = 0.0, accc = 0.0;
                    for (std::size_t s = 0; s < n; ++s)
                        for (std::size_t u = 0; u < na; ++u)
                            for (std::size_t w = 0; w < na; ++w) {
                                // P2b: q = a, v = b
                                accb += Ab(a, s, u, w) * Y(s, act[u], b, act[w]);
                                // P2c: u = a, r = b; (u, w) loop letters are λ's p, q
                                accc += X(act[u], act[w], b, s) * Yc(s, a, u, w);
                            }
                    C(a, b) += accb + 0.25 * accc;
                }
        }
        out.one_body += C;
    }

    // Scalar.
    {
        double s0 = 0.0;
        // ¼ Σ X Y [γ_pw γ_qv η_st η_ru - η_pw η_qv γ_st γ_ru]
        const Tensor4 Xg = mode(mode(X23e, 0, g), 1, g);  // (w v u t)
        const Tensor4 Xe = mode(mode(X23g, 0, e), 1, e);
        for (std::size_t w = 0; w < n; ++w)
            for (std::size_t v = 0; v < n; ++v)
                for (std::size_t u = 0; u < n; ++u)
                    for (std::size_t t = 0; t < n; ++t) s0 += 0.25 * (Xg(w, v, u, t) - Xe(w, v, u, t)) * Y(t, u, v, w);

        // ⅛ Σ X Y (γ_pw γ_qv - η_pw η_qv) λ^{tu}_{sr}
        {
            for (std::size_t w = 0; w < n; ++w)
                for (std::size_t v = 0; v < n; ++v)
                    for (std::size_t r = 0; r < na; ++r)
                        for (std::size_t s = 0; s < na; ++s) {
                            const double xv = Xp(w, v, act[r], act[s]) - Xh(w, v, act[r], act[s]);
                            if (xv == 0.0) continue;
                            double acc = 0.0;
                            for (std::size_t t = 0; t < na; ++t)
                                for (std::size_t u = 0; u < na; ++u) acc += Y(act[t], act[u], v, w) * L(t, u, s, r);
                            s0 += 0.125 * xv * acc;
                        }
        }
        // -⅛ Σ X Y (η_st η_ru - γ_st γ_ru) λ^{pq}_{vw}
        {
            for (std::size_t p = 0; p < na; ++p)
                for (std::size_t q = 0; q < na; ++q)
                    for (std::size_t u = 0; u < n; ++u)
                        for (std::size_t t = 0; t < n; ++t) {
                            const double xv = X23e(act[p], act[q], u, t) - X23g(act[p], act[q], u, t);
                            if (xv == 0.0) continue;
                            double acc = 0.0;
                            for (std::size_t v = 0; v < na; ++v)
                                for (std::size_t w = 0; w < na; ++w) acc += Y(t, u, act[v], act[w]) * L(p, q, v, w);
                            s0 -= 0.125 * xv * acc;
                        }
        }
        // Σ X Y (γ_pw η_st - η_pw γ_st) λ^{qu}_{rv}
        {
            for (std::size_t w = 0; w < n; ++w)
                for (std::size_t t = 0; t < n; ++t)
                    for (std::size_t q = 0; q < na; ++q)
                        for (std::size_t r = 0; r < na; ++r) {
                            const double xv = Xa(w, act[q], act[r], t) - Xb(w, act[q], act[r], t);
                            if (xv == 0.0) continue;
                            double acc = 0.0;
                            for (std::size_t u = 0; u < na; ++u)
                                for (std::size_t v = 0; v < na; ++v) acc += Y(t, act[u], act[v], w) * L(q, u, r, v);
                            s0 += xv * acc;
                        }
        }
        // λ3: ¼ Σ X^{pq}_{rs} Y^{tu}_{vp} λ^{qtu}_{srv} - ¼ Σ X^{pq}_{rs} Y^{su}_{vw} λ^{pqu}_{rwv}
        if (c.l3) {
            const Tensor6& L3 = *c.l3;
            std::array<std::size_t, 6> i{};
            for (i[0] = 0; i[0] < na; ++i[0])
                for (i[1] = 0; i[1] < na; ++i[1])
                    for (i[2] = 0; i[2] < na; ++i[2])
                        for (i[3] = 0; i[3] < na; ++i[3])
                            for (i[4] = 0; i[4] < na; ++i[4])
                                for (i[5] = 0; i[5] < na; ++i[5]) {
                                    const double l = L3(i[0], i[1], i[2], i[3], i[4], i[5]);
                                    if (l == 0.0) continue;
                                    // first: (q t u s r v) = i
                                    const std::size_t q = act[i[0]], t = act[i[1]], u = act[i[2]];
                                    const std::size_t s = act[i[3]], r = act[i[4]], v = act[i[5]];
                                    double a1 = 0.0;
                                    for (std::size_t p = 0; p < n; ++p) a1 += X(p, q, r, s) * Y(t, u, v, p);
                                    // second: (p q u r w v) = i
                                    const std::size_t p2 = act[i[0]], q2 = act[i[1]], u2 = act[i[2]];
                                    const std::size_t r2 = act[i[3]], w2 = act[i[4]], v2 = act[i[5]];
                                    double a2 = 0.0;
                                    for (std::size_t s2 = 0; s2 < n; ++s2) a2 += X(p2, q2, r2, s2) * Y(s2, u2, v2, w2);
                                    s0 += 0.25 * (a1 - a2) * l;
                                }
        }
        out.scalar += s0;
    }
}

}  // namespace

ManyBodyOperator commutator_12(const ManyBodyOperator& O, const ManyBodyOperator& A, const CumulantSet& cum) {
    const std::uint64_t tag = cum.tag();
    for (const ManyBodyOperator* op : {&O, &A}) {
        if (op->vacuum != Vacuum::gno || op->reference != tag)
            throw ContractViolation("commutator inputs must be normal ordered with respect to the given densities");
        if (op->n() != cum.n_orbitals) throw ContractViolation("operator and densities differ in size");
    }
    Ctx c;
    c.n = cum.n_orbitals;
    c.g = cum.g1_full();
    c.e = cum.eta1();
    c.act = cum.active;
    c.l2 = &cum.l2;
    c.l3 = cum.l3 ? &*cum.l3 : nullptr;

    ManyBodyOperator out = ManyBodyOperator::zero(c.n, Vacuum::gno, tag);
    comm11(O.one_body, A.one_body, c, out);
    comm12(O.one_body, A.two_body, c, 1.0, out);
    comm12(A.one_body, O.two_body, c, -1.0, out);
    comm22(O.two_body, A.two_body, c, out);
    return out;
}

}  // namespace qdsrg
