// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file pipeline.hpp
 * @brief Driver behind the qdsrg command line: configuration, per-input
 *        downfolding runs, noise sweeps, curve scans and report emission.
 */
#pragma once

#include <qdsrg/cumulants.hpp>
#include <qdsrg/dsrg.hpp>
#include <qdsrg/fcidump.hpp>
#include <qdsrg/onequbit.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qdsrg::cli {

struct InputSpec {
    std::string path;
    std::string label;
};

struct VQESpec {
    bool enabled = false;
    std::size_t shots = 32000;
    std::size_t n_experiments = 10;
    std::uint64_t seed = 0;
    QuadratureDesign design = QuadratureDesign::pauli_expectations;
};

struct RunConfig {
    std::vector<InputSpec> inputs;
    OrbitalSpace space;  ///< spatial; empty means all active
    FlowConfig flow;
    int truncation = 0;  ///< 0 = exact, 1 or 2
    L3Policy l3_policy = L3Policy::exact;
    std::optional<NoiseSpec> noise;
    std::vector<double> sigmas;  ///< noise-sweep levels
    std::optional<VQESpec> vqe;
    bool compute_fci = true;
    std::size_t workers = 1;
    std::string output_path;  ///< JSON report; empty means stdout
    std::string curve_path;   ///< tab-separated curve for scans
    std::string heff_dir;     ///< effective Hamiltonian exports; empty disables

    /// Throws ConfigError on inconsistent settings.
    void validate() const;
};

/// Parse the JSON configuration; relative paths are resolved against `base_dir`.
RunConfig parse_config(const std::string& text, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

std::string truncation_name(int level);
int parse_truncation(const std::string& s);
L3Policy parse_l3_policy(const std::string& s);

struct StageFailure {
    std::string stage;
    std::string kind;
    std::string message;
};

struct VQEStats {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> samples;
    double exact = 0.0;
    double theta = 0.0;
    OneQubitProblem problem;
};

struct RunRecord {
    std::string label;
    std::string path;
    std::optional<StageFailure> failure;

    std::size_t n_spin_orbitals = 0;
    std::size_t n_active_electrons = 0;
    double e_reference = 0.0;  ///< CASCI
    double e_hbar = 0.0;       ///< <Ψ|H̄|Ψ>
    double e_relaxed = 0.0;    ///< lowest eigenvalue of the active H̄
    std::optional<double> e_fci;
    std::size_t iterations = 0;
    std::vector<std::string> iteration_log;
    double t1_norm = 0.0;
    double t2_norm = 0.0;
    std::vector<double> bch_norms;
    std::optional<VQEStats> vqe;

    bool ok() const { return !failure; }
};

struct RunReport {
    std::vector<RunRecord> records;
    bool all_ok() const;
    std::string to_json() const;
};

/// Parse → spinorbitalize → freeze → CASCI → RDMs → (noise) → cumulants → LDSRG(2) → relax.
RunReport run_pipeline(const RunConfig& cfg);

struct SweepRow {
    std::size_t input = 0;
    double sigma = 0.0;
    std::size_t sample = 0;
    std::uint64_t seed = 0;
    std::optional<double> energy;
    double error_mh = 0.0;
    std::optional<StageFailure> failure;
};

struct SweepSummary {
    std::size_t input = 0;
    double sigma = 0.0;
    double mean_error_mh = 0.0;
    double mean_abs_error_mh = 0.0;
    double stddev_mh = 0.0;
};

struct SweepReport {
    std::vector<std::string> labels;
    std::vector<double> baseline;  ///< σ = 0 relaxed energies per input
    std::vector<SweepRow> rows;
    std::vector<SweepSummary> summary;
    bool all_ok() const;
    std::string to_json() const;
};

/// For each input and σ, cfg.noise->n_samples runs with seeds cfg.noise->seed + task index.
SweepReport noise_sweep(const RunConfig& cfg, const std::vector<double>& sigmas);

/// Tab-separated curve: label, E_ref, <H̄>, Ẽ, E_FCI and errors in mHartree.
std::string curve_table(const RunReport& report);

}  // namespace qdsrg::cli
