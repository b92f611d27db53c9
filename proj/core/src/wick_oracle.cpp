// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force generalized Wick contraction of {X}{Y}. Every pattern of pairwise
// γ/η contractions and λ2/λ3 blocks that links the two strings is enumerated and
// evaluated as a small tensor network. This file shares no code with the closed
// forms in commutator.cpp.

#include <qdsrg/errors.hpp>
#include <qdsrg/fockspace.hpp>

#include <algorithm>
#include <numeric>

namespace qdsrg {

namespace {

struct Labeled {
    std::vector<int> labels;
    std::vector<double> data;
};

std::size_t ipow(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r *= n;
    return r;
}

// Reorder modes so that the result carries `order`.
Labeled permute(const Labeled& t, const std::vector<int>& order, std::size_t n) {
    if (order == t.labels) return t;
    const std::size_t rank = order.size();
    std::vector<std::size_t> src_stride(rank);
    for (std::size_t k = 0; k < rank; ++k) {
        const auto pos = static_cast<std::size_t>(
            std::find(t.labels.begin(), t.labels.end(), order[k]) - t.labels.begin());
        src_stride[k] = ipow(n, rank - 1 - pos);
    }
    Labeled out{order, std::vector<double>(t.data.size())};
    std::vector<std::size_t> idx(rank, 0);
    for (std::size_t o = 0; o < out.data.size(); ++o) {
        std::size_t s = 0;
        for (std::size_t k = 0; k < rank; ++k) s += idx[k] * src_stride[k];
        out.data[o] = t.data[s];
        for (std::size_t k = rank; k-- > 0;) {
            if (++idx[k] < n) break;
            idx[k] = 0;
        }
    }
    return out;
}

// Sum over all labels shared by a and b.
Labeled contract(const Labeled& a, const Labeled& b, std::size_t n) {
    std::vector<int> shared, fa, fb;
    for (int l : a.labels)
        (std::find(b.labels.begin(), b.labels.end(), l) != b.labels.end() ? shared : fa).push_back(l);
    for (int l : b.labels)
        if (std::find(shared.begin(), shared.end(), l) == shared.end()) fb.push_back(l);
    std::vector<int> oa = fa, ob = shared;
    oa.insert(oa.end(), shared.begin(), shared.end());
    ob.insert(ob.end(), fb.begin(), fb.end());
    const Labeled pa = permute(a, oa, n);
    const Labeled pb = permute(b, ob, n);
    const auto m = static_cast<Eigen::Index>(ipow(n, fa.size()));
    const auto k = static_cast<Eigen::Index>(ipow(n, shared.size()));
    const auto c = static_cast<Eigen::Index>(ipow(n, fb.size()));
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Labeled out;
    out.labels = fa;
    out.labels.insert(out.labels.end(), fb.begin(), fb.end());
    out.data.assign(static_cast<std::size_t>(m * c), 0.0);
    Eigen::Map<const RowMat> A(pa.data.data(), m, k);
    Eigen::Map<const RowMat> B(pb.data.data(), k, c);
    Eigen::Map<RowMat> C(out.data.data(), m, c);
    C.noalias() = A * B;
    return out;
}

// Greedy pairwise evaluation of a closed or open network.
Labeled evaluate(std::vector<Labeled> ts, const std::vector<int>& output, std::size_t n) {
    while (ts.size() > 1) {
        std::size_t bi = 0, bj = 1;
        std::size_t best = static_cast<std::size_t>(-1);
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = i + 1; j < ts.size(); ++j) {
                std::size_t shared = 0;
                for (int l : ts[i].labels)
                    shared += std::count(ts[j].labels.begin(), ts[j].labels.end(), l);
                if (shared == 0) continue;
                const std::size_t rank = ts[i].labels.size() + ts[j].labels.size() - 2 * shared;
                if (rank < best) {
                    best = rank;
                    bi = i;
                    bj = j;
                }
            }
        Labeled r = contract(ts[bi], ts[bj], n);
        ts.erase(ts.begin() + static_cast<std::ptrdiff_t>(bj));
        ts[bi] = std::move(r);
    }
    return permute(ts.front(), output, n);
}

struct Leg {
    int side;  // 0 = left string, 1 = right string
    bool cre;
    int slot;  // tensor mode of the owning component
};

struct Component {
    int rank = 0;
    double prefactor = 1.0;
    std::vector<double> data;  // row-major n^(2 rank)
};

// Legs of a^+_p a^+_q a_s a_r (rank 2) or a^+_p a_q (rank 1) in written order.
void append_legs(std::vector<Leg>& legs, const Component& c, int side) {
    for (int k = 0; k < c.rank; ++k) legs.push_back({side, true, k});
    for (int k = 2 * c.rank - 1; k >= c.rank; --k) legs.push_back({side, false, k});
}

struct Densities {
    std::size_t n = 0;
    std::vector<double> gamma;   // <a+_p a_q>
    std::vector<double> eta;     // <a_p a+_q> = δ_pq - γ_qp
    std::vector<double> l2;      // full-space λ2
    std::vector<double> l3;      // full-space λ3, empty if absent
};

Densities make_densities(const CumulantSet& cum) {
    Densities d;
    const std::size_t n = cum.n_orbitals;
    d.n = n;
    const Matrix g = cum.g1_full();
    d.gamma.resize(n * n);
    d.eta.resize(n * n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            d.gamma[p * n + q] = g(p, q);
            d.eta[p * n + q] = (p == q ? 1.0 : 0.0) - g(q, p);
        }
    const auto& act = cum.active;
    const std::size_t na = act.size();
    d.l2.assign(ipow(n, 4), 0.0);
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < na; ++b)
            for (std::size_t c = 0; c < na; ++c)
                for (std::size_t e = 0; e < na; ++e)
                    d.l2[((act[a] * n + act[b]) * n + act[c]) * n + act[e]] = cum.l2(a, b, c, e);
    if (cum.l3) {
        d.l3.assign(ipow(n, 6), 0.0);
        std::size_t i[6];
        for (i[0] = 0; i[0] < na; ++i[0])
            for (i[1] = 0; i[1] < na; ++i[1])
                for (i[2] = 0; i[2] < na; ++i[2])
                    for (i[3] = 0; i[3] < na; ++i[3])
                        for (i[4] = 0; i[4] < na; ++i[4])
                            for (i[5] = 0; i[5] < na; ++i[5]) {
                                std::size_t off = 0;
                                for (std::size_t k : i) off = off * n + act[k];
                                d.l3[off] = (*cum.l3)(i[0], i[1], i[2], i[3], i[4], i[5]);
                            }
    }
    return d;
}

int permutation_parity(const std::vector<int>& seq) {
    int inv = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j]) ++inv;
    return inv % 2 ? -1 : 1;
}

struct Accumulator {
    double scalar = 0.0;
    std::vector<double> one;  // o1(c, a)
    std::vector<double> two;  // W(c1, c2, a2, a1) before antisymmetrization
};

class PatternEnumerator {
public:
    PatternEnumerator(const Component& x, const Component& y, const Densities& d, Accumulator& acc)
        : x_(x), y_(y), d_(d), acc_(acc) {
        append_legs(legs_, x, 0);
        append_legs(legs_, y, 1);
        group_.assign(legs_.size(), kUnassigned);
    }

    void run() { recurse(0); }

private:
    static constexpr int kUnassigned = -2;
    static constexpr int kFree = -1;

    void recurse(std::size_t i) {
        while (i < legs_.size() && group_[i] != kUnassigned) ++i;
        if (i == legs_.size()) {
            evaluate_pattern();
            return;
        }
        // Leave free, keeping the output at rank <= 2.
        if (free_count_ < 4) {
            group_[i] = kFree;
            ++free_count_;
            recurse(i + 1);
            --free_count_;
            group_[i] = kUnassigned;
        }
        // Pair with a later leg of the other string.
        for (std::size_t j = i + 1; j < legs_.size(); ++j) {
            if (group_[j] != kUnassigned || legs_[j].side == legs_[i].side || legs_[j].cre == legs_[i].cre)
                continue;
            const int g = static_cast<int>(groups_.size());
            groups_.push_back({i, j});
            group_[i] = group_[j] = g;
            recurse(i + 1);
            group_[i] = group_[j] = kUnassigned;
            groups_.pop_back();
        }
        // Cumulant blocks of 4 or 6 legs containing i.
        std::vector<std::size_t> members{i};
        choose_block(i, i + 1, members);
    }

    void choose_block(std::size_t i, std::size_t from, std::vector<std::size_t>& members) {
        if (members.size() == 4 || members.size() == 6) {
            int cre = 0;
            bool left = false, right = false;
            for (std::size_t m : members) {
                cre += legs_[m].cre ? 1 : 0;
                (legs_[m].side == 0 ? left : right) = true;
            }
            const bool usable = members.size() == 4 || !d_.l3.empty();
            if (2 * cre == static_cast<int>(members.size()) && left && right && usable) {
                const int g = static_cast<int>(groups_.size());
                groups_.push_back(members);
                for (std::size_t m : members) group_[m] = g;
                recurse(i + 1);
                for (std::size_t m : members) group_[m] = kUnassigned;
                groups_.pop_back();
            }
        }
        if (members.size() == 6) return;
        for (std::size_t j = from; j < legs_.size(); ++j) {
            if (group_[j] != kUnassigned) continue;
            members.push_back(j);
            choose_block(i, j + 1, members);
            members.pop_back();
        }
    }

    void evaluate_pattern() {
        const std::size_t n = d_.n;
        std::vector<int> order;  // legs in contracted position order
        std::vector<Labeled> net;
        for (const auto& g : groups_) {
            if (g.size() == 2) {
                const Leg& a = legs_[g[0]];
                order.push_back(static_cast<int>(g[0]));
                order.push_back(static_cast<int>(g[1]));
                net.push_back({{static_cast<int>(g[0]), static_cast<int>(g[1])}, a.cre ? d_.gamma : d_.eta});
            } else {
                std::vector<int> cre, ann;
                for (std::size_t m : g) (legs_[m].cre ? cre : ann).push_back(static_cast<int>(m));
                order.insert(order.end(), cre.begin(), cre.end());
                order.insert(order.end(), ann.rbegin(), ann.rend());
                std::vector<int> labels = cre;
                labels.insert(labels.end(), ann.begin(), ann.end());
                net.push_back({labels, g.size() == 4 ? d_.l2 : d_.l3});
            }
        }
        std::vector<int> fc, fa;
        for (std::size_t k = 0; k < legs_.size(); ++k)
            if (group_[k] == kFree) (legs_[k].cre ? fc : fa).push_back(static_cast<int>(k));
        if (fc.size() != fa.size()) return;
        order.insert(order.end(), fc.begin(), fc.end());
        order.insert(order.end(), fa.begin(), fa.end());
        const double sign = permutation_parity(order) * x_.prefactor * y_.prefactor;

        auto component_labels = [&](int side, int rank) {
            std::vector<int> labels(static_cast<std::size_t>(2 * rank));
            for (std::size_t k = 0; k < legs_.size(); ++k)
                if (legs_[k].side == side) labels[static_cast<std::size_t>(legs_[k].slot)] = static_cast<int>(k);
            return labels;
        };
        net.push_back({component_labels(0, x_.rank), x_.data});
        net.push_back({component_labels(1, y_.rank), y_.data});

        std::vector<int> output;
        if (fc.size() == 2) output = {fc[0], fc[1], fa[1], fa[0]};
        if (fc.size() == 1) output = {fc[0], fa[0]};
        const Labeled r = evaluate(std::move(net), output, n);
        if (fc.empty()) {
            acc_.scalar += sign * r.data[0];
        } else {
            auto& dst = fc.size() == 1 ? acc_.one : acc_.two;
            for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += sign * r.data[k];
        }
    }

    const Component& x_;
    const Component& y_;
    const Densities& d_;
    Accumulator& acc_;
    std::vector<Leg> legs_;
    std::vector<int> group_;
    std::vector<std::vector<std::size_t>> groups_;
    std::size_t free_count_ = 0;
};

std::vector<Component> components(const ManyBodyOperator& op) {
    const std::size_t n = op.n();
    Component c1;
    c1.rank = 1;
    c1.data.resize(n * n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) c1.data[p * n + q] = op.one_body(p, q);
    Component c2;
    c2.rank = 2;
    c2.prefactor = 0.25;
    c2.data = op.two_body.raw();
    return {c1, c2};
}

}  // namespace

ManyBodyOperator wick_commutator_oracle(const ManyBodyOperator& O, const ManyBodyOperator& A,
                                        const CumulantSet& cum) {
    const std::uint64_t tag = cum.tag();
    for (const ManyBodyOperator* op : {&O, &A}) {
        if (op->vacuum != Vacuum::gno || op->reference != tag)
            throw ContractViolation("oracle inputs must be normal ordered with respect to the given densities");
        if (op->n() != cum.n_orbitals) throw ContractViolation("operator and densities differ in size");
    }
    const std::size_t n = cum.n_orbitals;
    const Densities d = make_densities(cum);
    Accumulator plus, minus;
    for (Accumulator* a : {&plus, &minus}) {
        a->one.assign(n * n, 0.0);
        a->two.assign(ipow(n, 4), 0.0);
    }
    const auto co = components(O);
    const auto ca = components(A);
    for (const auto& x : co)
        for (const auto& y : ca) {
            PatternEnumerator(x, y, d, plus).run();
            PatternEnumerator(y, x, d, minus).run();
        }
    ManyBodyOperator out = ManyBodyOperator::zero(n, Vacuum::gno, tag);
    out.scalar = plus.scalar - minus.scalar;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) out.one_body(p, q) = plus.one[p * n + q] - minus.one[p * n + q];
    Tensor4 w(n);
    for (std::size_t k = 0; k < w.size(); ++k) w.raw()[k] = plus.two[k] - minus.two[k];
    out.two_body = antisymmetrize_pairs(w);
    return out;
}

}  // namespace qdsrg
