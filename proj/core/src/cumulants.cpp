// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include <qdsrg/cumulants.hpp>
#include <qdsrg/errors.hpp>

#include <json.hpp>

#include <array>
#include <cstring>
#include <random>

namespace qdsrg {

using ojson = nlohmann::ordered_json;

std::string to_string(TruncationPolicy p) {
    switch (p) {
        case TruncationPolicy::exact: return "exact";
        case TruncationPolicy::lambda2_diagonal: return "2";
        case TruncationPolicy::lambda1_diagonal: return "1";
    }
    return "exact";
}

std::string to_string(L3Policy p) {
    switch (p) {
        case L3Policy::exact: return "exact";
        case L3Policy::zero: return "zero";
        case L3Policy::gamma3_zero: return "gamma3-zero";
    }
    return "exact";
}

Matrix CumulantSet::g1_full() const {
    const auto n = static_cast<Eigen::Index>(n_orbitals);
    Matrix g = Matrix::Zero(n, n);
    for (std::size_t i : core) g(i, i) = 1.0;
    for (std::size_t u = 0; u < active.size(); ++u)
        for (std::size_t v = 0; v < active.size(); ++v) g(active[u], active[v]) = l1(u, v);
    return g;
}

Matrix CumulantSet::eta1() const {
    const auto n = static_cast<Eigen::Index>(n_orbitals);
    return Matrix::Identity(n, n) - g1_full();
}

namespace {

struct Fnv {
    std::uint64_t h = 1469598103934665603ull;
    void bytes(const void* p, std::size_t len) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void indices(const std::vector<std::size_t>& v) {
        u64(v.size());
        for (std::size_t x : v) u64(x);
    }
};

void check_rank3_capacity(std::size_t n) {
    if (n > kMaxRank3Orbitals)
        throw CapacityError("rank-3 cumulants need at most " + std::to_string(kMaxRank3Orbitals) +
                            " active spin orbitals, got " + std::to_string(n));
}

}  // namespace

std::uint64_t CumulantSet::tag() const {
    Fnv f;
    f.u64(n_orbitals);
    f.indices(core);
    f.indices(active);
    f.indices(virt);
    f.bytes(l1.data(), sizeof(double) * static_cast<std::size_t>(l1.size()));
    f.bytes(l2.data(), sizeof(double) * l2.size());
    if (l3) f.bytes(l3->data(), sizeof(double) * l3->size());
    f.u64(static_cast<std::uint64_t>(policy));
    f.u64(static_cast<std::uint64_t>(l3_policy));
    // 0 is reserved for bare operators.
    return f.h == 0 ? 1 : f.h;
}

Tensor4 reassemble_g2(const Matrix& l1, const Tensor4& l2) {
    const std::size_t n = l2.n();
    Tensor4 g = l2;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) g(p, q, r, s) += l1(p, r) * l1(q, s) - l1(p, s) * l1(q, r);
    return g;
}

Tensor6 disconnected_g3(const Matrix& l1, const Tensor4& l2) {
    const std::size_t n = l2.n();
    check_rank3_capacity(n);
    Tensor6 g(n);
    std::array<std::size_t, 3> up{};
    std::array<std::size_t, 3> lo{};
    // Signed permutations of the lower triple for the λ1λ1λ1 determinant.
    static constexpr int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    static constexpr double psign[6] = {1, -1, -1, 1, 1, -1};
    // Remaining positions once one of three is taken.
    static constexpr int rest[3][2] = {{1, 2}, {0, 2}, {0, 1}};
    for (up[0] = 0; up[0] < n; ++up[0])
        for (up[1] = 0; up[1] < n; ++up[1])
            for (up[2] = 0; up[2] < n; ++up[2])
                for (lo[0] = 0; lo[0] < n; ++lo[0])
                    for (lo[1] = 0; lo[1] < n; ++lo[1])
                        for (lo[2] = 0; lo[2] < n; ++lo[2]) {
                            double acc = 0.0;
                            for (int i = 0; i < 3; ++i)
                                for (int j = 0; j < 3; ++j) {
                                    const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
                                    acc += sgn * l1(up[i], lo[j]) *
                                           l2(up[rest[i][0]], up[rest[i][1]], lo[rest[j][0]], lo[rest[j][1]]);
                                }
                            for (int k = 0; k < 6; ++k)
                                acc += psign[k] * l1(up[0], lo[perm[k][0]]) * l1(up[1], lo[perm[k][1]]) *
                                       l1(up[2], lo[perm[k][2]]);
                            g(up[0], up[1], up[2], lo[0], lo[1], lo[2]) = acc;
                        }
    return g;
}

Tensor6 reassemble_g3(const Matrix& l1, const Tensor4& l2, const Tensor6* l3) {
    Tensor6 g = disconnected_g3(l1, l2);
    if (l3) g += *l3;
    return g;
}

CumulantSet cumulants_from_rdms(const RDMSet& r, L3Policy l3_policy) {
    const std::size_t n = r.n();
    if (r.g2.n() != n) throw ContractViolation("g1 and g2 dimensions differ");
    CumulantSet c;
    c.n_orbitals = n;
    c.active.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.active[i] = i;
    c.l1 = r.g1;
    c.l2 = r.g2;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t t = 0; t < n; ++t)
                    c.l2(p, q, s, t) -= r.g1(p, s) * r.g1(q, t) - r.g1(p, t) * r.g1(q, s);
    c.l3_policy = l3_policy;
    switch (l3_policy) {
        case L3Policy::exact: {
            if (!r.g3) throw ContractViolation("exact λ3 requested but the RDM set has no γ3");
            check_rank3_capacity(n);
            Tensor6 l3 = *r.g3;
            l3 -= disconnected_g3(c.l1, c.l2);
            c.l3 = std::move(l3);
            break;
        }
        case L3Policy::zero:
        case L3Policy::gamma3_zero:
            c = reconstruct_lambda3(c, l3_policy);
            break;
    }
    return c;
}

CumulantSet reconstruct_lambda3(const CumulantSet& c, L3Policy policy) {
    CumulantSet out = c;
    out.l3_policy = policy;
    switch (policy) {
        case L3Policy::zero:
            out.l3.reset();
            break;
        case L3Policy::gamma3_zero: {
            Tensor6 l3 = disconnected_g3(c.l1, c.l2);
            l3 *= -1.0;
            out.l3 = std::move(l3);
            break;
        }
        case L3Policy::exact:
            break;
    }
    return out;
}

CumulantSet apply_truncation(const CumulantSet& c, int level) {
    if (level != 1 && level != 2) throw ConfigError("truncation level must be 1 or 2");
    CumulantSet out = c;
    const std::size_t n = c.n_active();
    if (level == 1) {
        out.l1 = Matrix(c.l1.diagonal().asDiagonal());
        out.l2.set_zero();
        out.policy = TruncationPolicy::lambda1_diagonal;
    } else {
        out.l2.set_zero();
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) {
                out.l2(u, v, u, v) = c.l2(u, v, u, v);
                out.l2(u, v, v, u) = c.l2(u, v, v, u);
            }
        if (c.policy != TruncationPolicy::lambda1_diagonal) out.policy = TruncationPolicy::lambda2_diagonal;
    }
    if (c.l3_policy != L3Policy::exact) out = reconstruct_lambda3(out, c.l3_policy);
    return out;
}

RDMSet add_noise(const RDMSet& r, const NoiseSpec& spec) {
    if (!(spec.sigma >= 0.0)) throw DomainError("noise sigma must be non-negative");
    if (spec.sigma == 0.0) return r;
    RDMSet out = r;
    const std::size_t n = r.n();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, spec.sigma);
    // Elements that change Sz vanish by symmetry and are left untouched.
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p; q < n; ++q) {
            if (p % 2 != q % 2) continue;
            const double e = gauss(rng);
            out.g1(p, q) += e;
            if (q != p) out.g1(q, p) += e;
        }
    // Orbit representative: p < q, r < s, (p,q) <= (r,s).
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q)
            for (std::size_t a = p; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b) {
                    if (a == p && b < q) continue;
                    if (p % 2 + q % 2 != a % 2 + b % 2) continue;
                    const double e = gauss(rng);
                    out.g2(p, q, a, b) += e;
                    out.g2(q, p, a, b) -= e;
                    out.g2(p, q, b, a) -= e;
                    out.g2(q, p, b, a) += e;
                    if (a == p && b == q) continue;
                    out.g2(a, b, p, q) += e;
                    out.g2(b, a, p, q) -= e;
                    out.g2(a, b, q, p) -= e;
                    out.g2(b, a, q, p) += e;
                }
    return out;
}

CumulantSet embed(const CumulantSet& c, std::size_t n_orbitals, std::vector<std::size_t> core,
                  std::vector<std::size_t> active, std::vector<std::size_t> virt) {
    if (active.size() != static_cast<std::size_t>(c.l1.rows()))
        throw ContractViolation("active list does not match cumulant dimension");
    if (core.size() + active.size() + virt.size() != n_orbitals)
        throw ContractViolation("core/active/virtual lists do not cover the orbital space");
    CumulantSet out = c;
    out.n_orbitals = n_orbitals;
    out.core = std::move(core);
    out.active = std::move(active);
    out.virt = std::move(virt);
    return out;
}

namespace {

ojson matrix_json(const Matrix& m) {
    ojson a = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        a.push_back(std::move(row));
    }
    return a;
}

template <int R>
ojson flat_json(const CubeTensor<R>& t) {
    return ojson(t.raw());
}

}  // namespace

std::string rdms_to_json(const RDMSet& r) {
    ojson j;
    j["schema"] = "qdsrg-rdm-v1";
    j["n_spin_orbitals"] = r.n();
    j["layout"] = "row-major";
    j["g1"] = matrix_json(r.g1);
    j["g2"] = flat_json(r.g2);
    j["g3"] = r.g3 ? flat_json(*r.g3) : ojson(nullptr);
    return j.dump(2);
}

RDMSet rdms_from_json(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("rdm json: ") + e.what());
    }
    if (j.value("schema", "") != "qdsrg-rdm-v1") throw ParseError("rdm json: unexpected schema");
    const auto n = j.at("n_spin_orbitals").get<std::size_t>();
    RDMSet r;
    r.g1 = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const auto& g1 = j.at("g1");
    if (g1.size() != n) throw ParseError("rdm json: g1 has wrong shape");
    for (std::size_t p = 0; p < n; ++p) {
        if (g1[p].size() != n) throw ParseError("rdm json: g1 has wrong shape");
        for (std::size_t q = 0; q < n; ++q) r.g1(p, q) = g1[p][q].get<double>();
    }
    r.g2 = Tensor4(n);
    auto g2 = j.at("g2").get<std::vector<double>>();
    if (g2.size() != r.g2.size()) throw ParseError("rdm json: g2 has wrong size");
    r.g2.raw() = std::move(g2);
    if (!j.at("g3").is_null()) {
        Tensor6 g3(n);
        auto v = j.at("g3").get<std::vector<double>>();
        if (v.size() != g3.size()) throw ParseError("rdm json: g3 has wrong size");
        g3.raw() = std::move(v);
        r.g3 = std::move(g3);
    }
    return r;
}

std::string cumulants_to_json(const CumulantSet& c) {
    ojson j;
    j["schema"] = "qdsrg-rdm-v1";
    j["kind"] = "cumulants";
    j["truncation"] = to_string(c.policy);
    j["l3_policy"] = to_string(c.l3_policy);
    j["n_spin_orbitals"] = c.n_orbitals;
    j["core"] = c.core;
    j["active"] = c.active;
    j["virtual"] = c.virt;
    j["layout"] = "row-major";
    j["l1"] = matrix_json(c.l1);
    j["l2"] = flat_json(c.l2);
    j["l3"] = c.l3 ? flat_json(*c.l3) : ojson(nullptr);
    return j.dump(2);
}

}  // namespace qdsrg
