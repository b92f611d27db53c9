// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include "models.hpp"

#include <qdsrg/dsrg.hpp>
#include <qdsrg/fockspace.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace qdsrg;

// Core and active spatial orbitals fixed at 1 and 2; the virtual space grows.
void BM_Commutator12(benchmark::State& state) {
    const auto nsp = static_cast<std::size_t>(state.range(0));
    testing::Rng rng(1);
    const auto part = testing::partition(2 * nsp, 1, 2);
    const CumulantSet cum = testing::random_cumulants(2 * nsp, part, 1, 1, rng);
    const ManyBodyOperator X = testing::random_operator(2 * nsp, rng, Vacuum::gno, cum.tag(), true);
    const ManyBodyOperator Y = testing::random_operator(2 * nsp, rng, Vacuum::gno, cum.tag());
    for (auto _ : state) benchmark::DoNotOptimize(commutator_12(X, Y, cum));
}
BENCHMARK(BM_Commutator12)->RangeMultiplier(2)->Range(4, 16)->Unit(benchmark::kMillisecond);

void BM_WickOracle(benchmark::State& state) {
    const auto nsp = static_cast<std::size_t>(state.range(0));
    testing::Rng rng(2);
    const auto part = testing::partition(2 * nsp, 1, 1);
    const CumulantSet cum = testing::random_cumulants(2 * nsp, part, 1, 0, rng);
    const ManyBodyOperator X = testing::random_operator(2 * nsp, rng, Vacuum::gno, cum.tag());
    const ManyBodyOperator Y = testing::random_operator(2 * nsp, rng, Vacuum::gno, cum.tag());
    for (auto _ : state) benchmark::DoNotOptimize(wick_commutator_oracle(X, Y, cum));
}
BENCHMARK(BM_WickOracle)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

void BM_Fci(benchmark::State& state) {
    const auto norb = static_cast<std::size_t>(state.range(0));
    const IntegralSet ints = spinorbitalize(testing::toy_integrals(norb, 4, 3));
    const auto dets = enumerate_determinants(ints.n(), 2, 2);
    for (auto _ : state) benchmark::DoNotOptimize(solve_ground(build_hamiltonian(ints, dets), 1, dets));
    state.counters["determinants"] = static_cast<double>(dets.size());
}
BENCHMARK(BM_Fci)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_Ldsrg2(benchmark::State& state) {
    const auto norb = static_cast<std::size_t>(state.range(0));
    std::vector<std::size_t> virt;
    for (std::size_t p = 3; p < norb; ++p) virt.push_back(p);
    const testing::Model m =
        testing::make_model(testing::toy_integrals(norb, 4, 4), testing::space_of({0}, {1, 2}, virt));
    const ManyBodyOperator H = gno_hamiltonian(m.ints, m.cum);
    for (auto _ : state) benchmark::DoNotOptimize(solve_ldsrg2(H, m.eps, m.cum, FlowConfig{}));
}
BENCHMARK(BM_Ldsrg2)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
