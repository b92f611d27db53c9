// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline.hpp"

#include <qdsrg/errors.hpp>
#include <qdsrg/fockspace.hpp>
#include <qdsrg/onequbit.hpp>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>

namespace {

using namespace qdsrg;
using namespace qdsrg::cli;
using ojson = nlohmann::ordered_json;

struct Overrides {
    std::string config;
    std::optional<double> s;
    std::optional<std::string> truncation;
    std::optional<std::string> l3;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> shots;
    std::string out;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--s", o.s, "flow parameter s (Hartree^-2)");
    sub->add_option("--truncation", o.truncation, "cumulant truncation")
        ->check(CLI::IsMember({"exact", "2", "1"}));
    sub->add_option("--l3", o.l3, "three-body cumulant policy")
        ->check(CLI::IsMember({"exact", "zero", "gamma3-zero"}));
    sub->add_option("--seed", o.seed, "master seed for noise and VQE");
    sub->add_option("--shots", o.shots, "VQE shot budget per experiment");
    sub->add_option("--out", o.out, "output file (default: stdout)");
}

RunConfig configure(const Overrides& o) {
    RunConfig cfg = load_config(o.config);
    if (o.s) cfg.flow.s = *o.s;
    if (o.truncation) cfg.truncation = parse_truncation(*o.truncation);
    if (o.l3) cfg.l3_policy = parse_l3_policy(*o.l3);
    if (o.seed) {
        if (cfg.noise) cfg.noise->seed = *o.seed;
        if (cfg.vqe) cfg.vqe->seed = *o.seed;
    }
    if (o.shots) {
        if (!cfg.vqe) cfg.vqe = VQESpec{};
        cfg.vqe->enabled = true;
        cfg.vqe->shots = *o.shots;
    }
    return cfg;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << text;
    spdlog::info("wrote {}", path);
}

int cmd_downfold(const Overrides& o, bool scan) {
    const RunConfig cfg = configure(o);
    const RunReport rep = run_pipeline(cfg);
    if (scan) {
        emit(curve_table(rep), o.out.empty() ? cfg.curve_path : o.out);
        if (!cfg.output_path.empty()) emit(rep.to_json(), cfg.output_path);
    } else {
        emit(rep.to_json(), o.out.empty() ? cfg.output_path : o.out);
        if (!cfg.curve_path.empty()) emit(curve_table(rep), cfg.curve_path);
    }
    return rep.all_ok() ? 0 : 1;
}

int cmd_sweep(const Overrides& o, std::vector<double> sigmas) {
    const RunConfig cfg = configure(o);
    if (sigmas.empty()) sigmas = cfg.sigmas;
    if (sigmas.empty()) throw ConfigError("no noise levels: pass --sigmas or set noise.sigmas");
    const SweepReport rep = noise_sweep(cfg, sigmas);
    emit(rep.to_json(), o.out.empty() ? cfg.output_path : o.out);
    return rep.all_ok() ? 0 : 1;
}

struct VqeArgs {
    double c0 = 0.0, cz = 0.0, cx = 0.0;
    std::size_t shots = 32000;
    std::size_t experiments = 1;
    std::uint64_t seed = 0;
    std::string design = "pauli-expectations";
    std::string out;
};

int cmd_vqe(const VqeArgs& a) {
    const OneQubitProblem p = OneQubitProblem::from_pauli(a.c0, a.cz, a.cx);
    const QuadratureDesign d =
        a.design == "fourier-angles" ? QuadratureDesign::fourier_angles : QuadratureDesign::pauli_expectations;
    ojson j;
    j["schema"] = "qdsrg-vqe1q-v1";
    j["problem"] = {{"c0", p.c0}, {"cz", p.cz}, {"cx", p.cx}};
    j["exact"] = p.exact_ground();
    ojson runs = ojson::array();
    for (std::size_t k = 0; k < a.experiments; ++k)
        runs.push_back(ojson::parse(vqe_one_qubit(p, a.shots, a.seed + k, d).to_json()));
    j["experiments"] = std::move(runs);
    emit(j.dump(2) + "\n", a.out);
    return 0;
}

int cmd_fci(const std::string& path, const std::string& out) {
    const SpatialIntegrals raw = read_fcidump(path);
    const IntegralSet ints = spinorbitalize(raw);
    const auto N = static_cast<long>(ints.n_electrons);
    const long na = (N + ints.ms2) / 2;
    const auto dets = enumerate_determinants(ints.n(), static_cast<std::size_t>(na),
                                             static_cast<std::size_t>(N - na), kMaxDenseDimension);
    const double e = solve_ground(build_hamiltonian(ints, dets), 1, dets).front().energy;
    ojson j{{"schema", "qdsrg-fci-v1"}, {"path", path}, {"n_determinants", dets.size()}, {"energy", e}};
    emit(j.dump(2) + "\n", out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("qdsrg"));
    spdlog::set_pattern("[%l] %v");

    CLI::App app{"qdsrg: unitary downfolding of active-space Hamiltonians"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "debug logging");

    Overrides down_o, scan_o, sweep_o;
    auto* down = app.add_subcommand("downfold", "run the downfolding pipeline and write a JSON report");
    add_common(down, down_o);
    auto* scan = app.add_subcommand("scan", "run every input and write a tab-separated curve");
    add_common(scan, scan_o);
    auto* sweep = app.add_subcommand("noise-sweep", "repeat runs with Gaussian RDM noise");
    add_common(sweep, sweep_o);
    std::vector<double> sigmas;
    sweep->add_option("--sigmas", sigmas, "noise standard deviations");

    VqeArgs va;
    auto* vqe = app.add_subcommand("vqe1q", "one-qubit VQE on H = c0 + cz Z + cx X");
    vqe->add_option("--c0", va.c0);
    vqe->add_option("--cz", va.cz);
    vqe->add_option("--cx", va.cx);
    vqe->add_option("--shots", va.shots, "total shots per experiment (0 = analytic)");
    vqe->add_option("--experiments", va.experiments)->check(CLI::PositiveNumber);
    vqe->add_option("--seed", va.seed);
    vqe->add_option("--design", va.design)->check(CLI::IsMember({"pauli-expectations", "fourier-angles"}));
    vqe->add_option("--out", va.out);

    std::string fci_path, fci_out;
    auto* fci = app.add_subcommand("fci", "full configuration interaction energy of an FCIDUMP");
    fci->add_option("fcidump", fci_path)->required()->check(CLI::ExistingFile);
    fci->add_option("--out", fci_out);

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    try {
        if (*down) return cmd_downfold(down_o, false);
        if (*scan) return cmd_downfold(scan_o, true);
        if (*sweep) return cmd_sweep(sweep_o, sigmas);
        if (*vqe) return cmd_vqe(va);
        if (*fci) return cmd_fci(fci_path, fci_out);
    } catch (const qdsrg::Error& e) {
        spdlog::error("{} error: {}", e.kind(), e.what());
        return 2;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 2;
    }
    return 0;
}
