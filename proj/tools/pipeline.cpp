// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline.hpp"

#include <qdsrg/errors.hpp>
#include <qdsrg/fockspace.hpp>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace qdsrg::cli {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

class StageError : public std::runtime_error {
public:
    explicit StageError(StageFailure f) : std::runtime_error(f.message), failure(std::move(f)) {}
    StageFailure failure;
};

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError({name, e.kind(), e.what()});
    } catch (const std::exception& e) {
        throw StageError({name, "internal", e.what()});
    }
}

template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& f) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) f(i);
        });
    for (auto& t : pool) t.join();
}

std::string resolve(const std::string& path, const std::string& base) {
    if (path.empty() || base.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base) / path).lexically_normal().string();
}

FlowMode parse_mode(const std::string& s) {
    if (s == "iterated") return FlowMode::iterated;
    if (s == "first-order") return FlowMode::first_order;
    throw ConfigError("unknown flow mode '" + s + "' (expected iterated or first-order)");
}

UpdateRule parse_update_rule(const std::string& s) {
    if (s == "dsrg-standard") return UpdateRule::dsrg_standard;
    if (s == "source-literal") return UpdateRule::source_literal;
    throw ConfigError("unknown update rule '" + s + "' (expected dsrg-standard or source-literal)");
}

QuadratureDesign parse_design(const std::string& s) {
    if (s == "pauli-expectations") return QuadratureDesign::pauli_expectations;
    if (s == "fourier-angles") return QuadratureDesign::fourier_angles;
    throw ConfigError("unknown quadrature design '" + s + "'");
}

// Everything that does not depend on the densities' noise.
struct Prepared {
    IntegralSet ints;
    std::size_t na = 0, nb = 0;
    std::vector<Determinant> active_dets;
    CIWavefunction casci;
    RDMSet rdms;
    std::optional<double> e_fci;
};

Prepared prepare(const InputSpec& in, const RunConfig& cfg) {
    Prepared p;
    const SpatialIntegrals raw = stage("parse", [&] { return read_fcidump(in.path); });
    for (const auto& w : raw.warnings) spdlog::warn("{}: {}", in.path, w);
    p.ints = stage("freeze", [&] {
        const OrbitalSpace space = cfg.space.size() ? cfg.space : OrbitalSpace::all_active(raw.n_orbitals);
        return freeze_core(spinorbitalize(raw), space);
    });
    stage("casci", [&] {
        const std::size_t ne = p.ints.n_electrons - p.ints.space.core.size();
        const int ms2 = p.ints.ms2;
        if (static_cast<long>(ne) < std::abs(ms2) || (static_cast<long>(ne) + ms2) % 2 != 0)
            throw ConfigError("active electron count is incompatible with MS2 = " + std::to_string(ms2));
        p.na = static_cast<std::size_t>((static_cast<long>(ne) + ms2) / 2);
        p.nb = ne - p.na;
        const ManyBodyOperator hact =
            fold_and_restrict(p.ints.as_operator(), p.ints.space.core, p.ints.space.active);
        const std::size_t m = p.ints.space.active.size();
        p.active_dets = enumerate_determinants(m, p.na, p.nb);
        const Matrix H = build_hamiltonian(hact.scalar, hact.one_body, hact.two_body, p.active_dets);
        p.casci = solve_ground(H, 1, p.active_dets).front();
        return 0;
    });
    p.rdms = stage("rdms", [&] {
        const std::size_t m = p.ints.space.active.size();
        return compute_rdms(p.casci, m <= kMaxRank3Orbitals ? 3 : 2, m);
    });
    if (cfg.compute_fci) {
        stage("fci", [&] {
            const std::size_t n = p.ints.n();
            const auto N = static_cast<long>(p.ints.n_electrons);
            const long na = (N + p.ints.ms2) / 2;
            try {
                const auto dets = enumerate_determinants(n, static_cast<std::size_t>(na),
                                                         static_cast<std::size_t>(N - na), kMaxDenseDimension);
                p.e_fci = solve_ground(build_hamiltonian(p.ints, dets), 1, dets).front().energy;
            } catch (const CapacityError&) {
                spdlog::info("{}: full space above {} determinants, FCI skipped", in.path, kMaxDenseDimension);
            }
            return 0;
        });
    }
    return p;
}

struct Downfolded {
    LDSRGResult ldsrg;
    CumulantSet cum;
    ManyBodyOperator hact;
    double e_hbar = 0.0;
    double e_relaxed = 0.0;
    CIWavefunction relaxed;
};

Downfolded downfold(const Prepared& p, const RDMSet& rdms, const RunConfig& cfg) {
    Downfolded d;
    d.cum = stage("cumulants", [&] {
        CumulantSet c = cumulants_from_rdms(rdms, cfg.l3_policy);
        if (cfg.truncation != 0) c = apply_truncation(c, cfg.truncation);
        return embed(c, p.ints.n(), p.ints.space.core, p.ints.space.active, p.ints.space.virt);
    });
    auto [ints, cum, basis] = stage("semicanonicalize", [&] { return semicanonicalize(p.ints, d.cum); });
    d.cum = std::move(cum);
    d.ldsrg = stage("ldsrg", [&] {
        return solve_ldsrg2(gno_hamiltonian(ints, d.cum), basis.epsilon, d.cum, cfg.flow);
    });
    stage("relax", [&] {
        d.e_hbar = expectation(d.ldsrg.hbar, d.cum);
        d.hact = extract_active_hamiltonian(d.ldsrg.hbar, d.cum);
        const Matrix H = build_hamiltonian(d.hact.scalar, d.hact.one_body, d.hact.two_body, p.active_dets);
        d.relaxed = solve_ground(H, 1, p.active_dets).front();
        d.e_relaxed = d.relaxed.energy;
        return 0;
    });
    return d;
}

VQEStats run_vqe(const Downfolded& d, const VQESpec& spec) {
    VQEStats st;
    const TwoConfigState tc = two_config_state(d.relaxed.determinants, d.relaxed.coefficients);
    st.theta = tc.theta;
    st.problem = map_to_qubit(rotate_two_orbitals(d.hact, tc.theta));
    st.exact = st.problem.exact_ground();
    for (std::size_t k = 0; k < spec.n_experiments; ++k)
        st.samples.push_back(vqe_one_qubit(st.problem, spec.shots, spec.seed + k, spec.design).e_est);
    const auto n = static_cast<double>(st.samples.size());
    for (double e : st.samples) st.mean += e / n;
    double ss = 0.0;
    for (double e : st.samples) ss += (e - st.mean) * (e - st.mean);
    st.stddev = st.samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return st;
}

RunRecord run_one(const InputSpec& in, const RunConfig& cfg) {
    RunRecord rec;
    rec.label = in.label;
    rec.path = in.path;
    try {
        const Prepared p = prepare(in, cfg);
        rec.n_spin_orbitals = p.ints.n();
        rec.n_active_electrons = p.na + p.nb;
        rec.e_reference = p.casci.energy;
        rec.e_fci = p.e_fci;
        RDMSet rdms = p.rdms;
        if (cfg.noise && cfg.noise->sigma > 0.0)
            rdms = stage("noise", [&] { return add_noise(p.rdms, *cfg.noise); });
        const Downfolded d = downfold(p, rdms, cfg);
        rec.e_hbar = d.e_hbar;
        rec.e_relaxed = d.e_relaxed;
        rec.iterations = d.ldsrg.iterations;
        rec.iteration_log = d.ldsrg.log;
        rec.t1_norm = frobenius(d.ldsrg.amplitudes.t1);
        rec.t2_norm = d.ldsrg.amplitudes.t2.norm();
        rec.bch_norms = d.ldsrg.last_bch_norms;
        if (!cfg.heff_dir.empty())
            stage("export", [&] {
                HeffMetadata meta;
                meta.s = cfg.flow.s;
                meta.truncation = truncation_name(cfg.truncation);
                meta.l3_policy = to_string(cfg.l3_policy);
                meta.space = cfg.space;
                fs::create_directories(cfg.heff_dir);
                export_effective_hamiltonian(d.hact, meta, (fs::path(cfg.heff_dir) / (in.label + ".heff.json")).string());
                return 0;
            });
        if (cfg.vqe && cfg.vqe->enabled) {
            if (p.ints.space.active.size() == 4 && p.na == 1 && p.nb == 1)
                rec.vqe = stage("vqe", [&] { return run_vqe(d, *cfg.vqe); });
            else
                spdlog::warn("{}: one-qubit VQE needs 2 active orbitals with 2 electrons; skipped", in.path);
        }
    } catch (const StageError& e) {
        rec.failure = e.failure;
        spdlog::error("{} [{}]: {} error: {}", in.path, e.failure.stage, e.failure.kind, e.failure.message);
    }
    return rec;
}

ojson failure_json(const StageFailure& f) { return {{"stage", f.stage}, {"kind", f.kind}, {"message", f.message}}; }

double mh(double e) { return 1000.0 * e; }

}  // namespace

std::string truncation_name(int level) {
    if (level == 0) return "exact";
    return std::to_string(level);
}

int parse_truncation(const std::string& s) {
    if (s == "exact") return 0;
    if (s == "1") return 1;
    if (s == "2") return 2;
    throw ConfigError("unknown truncation '" + s + "' (expected exact, 2 or 1)");
}

L3Policy parse_l3_policy(const std::string& s) {
    if (s == "exact") return L3Policy::exact;
    if (s == "zero") return L3Policy::zero;
    if (s == "gamma3-zero" || s == "gamma3_zero") return L3Policy::gamma3_zero;
    throw ConfigError("unknown l3 policy '" + s + "' (expected exact, zero or gamma3-zero)");
}

void RunConfig::validate() const {
    flow.validate();
    if (truncation < 0 || truncation > 2) throw ConfigError("truncation must be exact, 2 or 1");
    if (noise && !(noise->sigma >= 0.0)) throw ConfigError("noise sigma must be >= 0");
    for (double s : sigmas)
        if (!(s >= 0.0)) throw ConfigError("noise sweep sigmas must be >= 0");
    if (truncation == 1 && l3_policy == L3Policy::exact && space.active.size() > kMaxRank3Orbitals / 2)
        throw ConfigError("truncation 1 with exact λ3 needs γ3, which is limited to " +
                          std::to_string(kMaxRank3Orbitals) + " active spin orbitals; choose --l3 zero or gamma3-zero");
    if (vqe && vqe->enabled && vqe->n_experiments < 1) throw ConfigError("vqe.n_experiments must be >= 1");
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const ojson::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    try {
        auto add_input = [&](const std::string& path, std::string label) {
            if (label.empty()) label = fs::path(path).stem().string();
            c.inputs.push_back({resolve(path, base_dir), std::move(label)});
        };
        if (j.contains("inputs"))
            for (const auto& e : j["inputs"]) {
                if (e.is_string())
                    add_input(e.get<std::string>(), "");
                else
                    add_input(e.at("path").get<std::string>(), e.value("label", std::string{}));
            }
        if (j.contains("orbital_space")) {
            const auto& s = j["orbital_space"];
            c.space.frozen_core = s.value("frozen_core", std::vector<std::size_t>{});
            c.space.core = s.value("core", std::vector<std::size_t>{});
            c.space.active = s.value("active", std::vector<std::size_t>{});
            c.space.virt = s.value("virtual", std::vector<std::size_t>{});
            c.space.frozen_virtual = s.value("frozen_virtual", std::vector<std::size_t>{});
        }
        if (j.contains("flow")) {
            const auto& f = j["flow"];
            c.flow.s = f.value("s", c.flow.s);
            c.flow.mode = parse_mode(f.value("mode", std::string("iterated")));
            c.flow.max_bch_terms = f.value("max_bch_terms", c.flow.max_bch_terms);
            c.flow.bch_tolerance = f.value("bch_tolerance", c.flow.bch_tolerance);
            c.flow.max_iterations = f.value("max_iterations", c.flow.max_iterations);
            c.flow.energy_convergence = f.value("energy_convergence", c.flow.energy_convergence);
            c.flow.residual_convergence = f.value("residual_convergence", c.flow.residual_convergence);
            c.flow.damping = f.value("damping", c.flow.damping);
            c.flow.update_rule = parse_update_rule(f.value("update_rule", std::string("dsrg-standard")));
        }
        c.truncation = parse_truncation(j.value("truncation", std::string("exact")));
        c.l3_policy = parse_l3_policy(j.value("l3_policy", std::string("exact")));
        if (j.contains("noise")) {
            const auto& n = j["noise"];
            NoiseSpec ns;
            ns.sigma = n.value("sigma", 0.0);
            ns.seed = n.value("seed", std::uint64_t{0});
            ns.n_samples = n.value("n_samples", std::size_t{1});
            c.noise = ns;
            c.sigmas = n.value("sigmas", std::vector<double>{});
        }
        if (j.contains("vqe")) {
            const auto& v = j["vqe"];
            VQESpec vs;
            vs.enabled = v.value("enabled", true);
            vs.shots = v.value("shots", vs.shots);
            vs.n_experiments = v.value("n_experiments", vs.n_experiments);
            vs.seed = v.value("seed", vs.seed);
            vs.design = parse_design(v.value("design", std::string("pauli-expectations")));
            c.vqe = vs;
        }
        c.compute_fci = j.value("fci", true);
        c.workers = j.value("workers", std::size_t{1});
        c.output_path = resolve(j.value("output", std::string{}), base_dir);
        c.curve_path = resolve(j.value("curve", std::string{}), base_dir);
        c.heff_dir = resolve(j.value("heff_dir", std::string{}), base_dir);
    } catch (const ojson::exception& e) {
        throw ConfigError(std::string("bad config field: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), fs::path(path).parent_path().string());
}

bool RunReport::all_ok() const {
    for (const auto& r : records)
        if (!r.ok()) return false;
    return true;
}

std::string RunReport::to_json() const {
    ojson j;
    j["schema"] = "qdsrg-report-v1";
    ojson recs = ojson::array();
    for (const auto& r : records) {
        ojson o;
        o["label"] = r.label;
        o["path"] = r.path;
        if (r.failure) {
            o["status"] = "error";
            o["error"] = failure_json(*r.failure);
            recs.push_back(std::move(o));
            continue;
        }
        o["status"] = "ok";
        o["n_spin_orbitals"] = r.n_spin_orbitals;
        o["n_active_electrons"] = r.n_active_electrons;
        ojson e;
        e["reference"] = r.e_reference;
        e["hbar_expectation"] = r.e_hbar;
        e["relaxed"] = r.e_relaxed;
        if (r.e_fci) e["fci"] = *r.e_fci;
        o["energies"] = e;
        if (r.e_fci) {
            o["errors_mh"] = {{"reference", mh(r.e_reference - *r.e_fci)},
                              {"hbar_expectation", mh(r.e_hbar - *r.e_fci)},
                              {"relaxed", mh(r.e_relaxed - *r.e_fci)}};
        }
        o["iterations"] = r.iterations;
        o["iteration_log"] = r.iteration_log;
        o["amplitude_norms"] = {{"t1", r.t1_norm}, {"t2", r.t2_norm}};
        o["bch_term_norms"] = r.bch_norms;
        if (r.vqe) {
            const auto& v = *r.vqe;
            o["vqe"] = {{"theta", v.theta},
                        {"pauli", {{"c0", v.problem.c0}, {"cz", v.problem.cz}, {"cx", v.problem.cx}}},
                        {"exact", v.exact},
                        {"mean", v.mean},
                        {"stddev", v.stddev},
                        {"samples", v.samples}};
        }
        recs.push_back(std::move(o));
    }
    j["records"] = std::move(recs);
    return j.dump(2) + "\n";
}

RunReport run_pipeline(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.inputs.empty()) throw ConfigError("no inputs given");
    RunReport rep;
    rep.records.resize(cfg.inputs.size());
    parallel_for(cfg.inputs.size(), cfg.workers, [&](std::size_t i) {
        spdlog::info("running {}", cfg.inputs[i].path);
        rep.records[i] = run_one(cfg.inputs[i], cfg);
    });
    return rep;
}

bool SweepReport::all_ok() const {
    for (const auto& r : rows)
        if (r.failure) return false;
    return true;
}

std::string SweepReport::to_json() const {
    ojson j;
    j["schema"] = "qdsrg-noise-sweep-v1";
    j["labels"] = labels;
    j["baseline"] = baseline;
    ojson rs = ojson::array();
    for (const auto& r : rows) {
        ojson o{{"input", r.input}, {"sigma", r.sigma}, {"sample", r.sample}, {"seed", r.seed}};
        if (r.failure) {
            o["status"] = "error";
            o["error"] = failure_json(*r.failure);
        } else {
            o["status"] = "ok";
            o["energy"] = *r.energy;
            o["error_mh"] = r.error_mh;
        }
        rs.push_back(std::move(o));
    }
    j["rows"] = std::move(rs);
    ojson sm = ojson::array();
    for (const auto& s : summary)
        sm.push_back({{"input", s.input},
                      {"sigma", s.sigma},
                      {"mean_error_mh", s.mean_error_mh},
                      {"mean_abs_error_mh", s.mean_abs_error_mh},
                      {"stddev_mh", s.stddev_mh}});
    j["summary"] = std::move(sm);
    return j.dump(2) + "\n";
}

SweepReport noise_sweep(const RunConfig& cfg, const std::vector<double>& sigmas) {
    cfg.validate();
    if (!cfg.noise || cfg.noise->n_samples < 2) throw ConfigError("noise sweep needs noise.n_samples >= 2");
    if (cfg.inputs.empty()) throw ConfigError("no inputs given");
    for (double s : sigmas)
        if (!(s >= 0.0)) throw ConfigError("noise sweep sigmas must be >= 0");
    const std::size_t ns = cfg.noise->n_samples;
    SweepReport rep;
    rep.baseline.assign(cfg.inputs.size(), std::numeric_limits<double>::quiet_NaN());
    rep.rows.resize(cfg.inputs.size() * sigmas.size() * ns);
    for (std::size_t in = 0; in < cfg.inputs.size(); ++in) {
        rep.labels.push_back(cfg.inputs[in].label);
        std::optional<Prepared> prep;
        std::optional<StageFailure> fail;
        try {
            prep = prepare(cfg.inputs[in], cfg);
            rep.baseline[in] = downfold(*prep, prep->rdms, cfg).e_relaxed;
        } catch (const StageError& e) {
            fail = e.failure;
            spdlog::error("{} [{}]: {}", cfg.inputs[in].path, e.failure.stage, e.failure.message);
        }
        const std::size_t offset = in * sigmas.size() * ns;
        parallel_for(sigmas.size() * ns, cfg.workers, [&](std::size_t k) {
            SweepRow& row = rep.rows[offset + k];
            row.input = in;
            row.sigma = sigmas[k / ns];
            row.sample = k % ns;
            row.seed = cfg.noise->seed + offset + k;
            if (fail) {
                row.failure = fail;
                return;
            }
            try {
                const RDMSet noisy = stage("noise", [&] { return add_noise(prep->rdms, {row.sigma, row.seed, 1}); });
                row.energy = downfold(*prep, noisy, cfg).e_relaxed;
                row.error_mh = mh(*row.energy - rep.baseline[in]);
            } catch (const StageError& e) {
                row.failure = e.failure;
                row.failure->message = "sample " + std::to_string(row.sample) + ": " + row.failure->message;
            }
        });
        for (std::size_t si = 0; si < sigmas.size(); ++si) {
            SweepSummary s;
            s.input = in;
            s.sigma = sigmas[si];
            std::vector<double> errs;
            for (std::size_t k = 0; k < ns; ++k) {
                const SweepRow& r = rep.rows[offset + si * ns + k];
                if (!r.failure) errs.push_back(r.error_mh);
            }
            const auto n = static_cast<double>(errs.size());
            for (double e : errs) {
                s.mean_error_mh += e / n;
                s.mean_abs_error_mh += std::abs(e) / n;
            }
            double ss = 0.0;
            for (double e : errs) ss += (e - s.mean_error_mh) * (e - s.mean_error_mh);
            s.stddev_mh = errs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            rep.summary.push_back(s);
        }
    }
    return rep;
}

std::string curve_table(const RunReport& report) {
    bool any_fci = false;
    for (const auto& r : report.records) any_fci = any_fci || (r.ok() && r.e_fci);
    std::string out = "label\tstatus\tE_ref\tE_hbar\tE_relaxed";
    if (any_fci) out += "\tE_fci\terr_ref_mh\terr_hbar_mh\terr_relaxed_mh";
    out += "\n";
    char buf[64];
    auto num = [&](double v, const char* fmt) {
        std::snprintf(buf, sizeof buf, fmt, v);
        return std::string("\t") + buf;
    };
    for (const auto& r : report.records) {
        out += r.label;
        if (!r.ok()) {
            out += "\terror:" + r.failure->stage + "\t\t\t";
            if (any_fci) out += "\t\t\t\t";
            out += "\n";
            continue;
        }
        out += "\tok";
        out += num(r.e_reference, "%.12f") + num(r.e_hbar, "%.12f") + num(r.e_relaxed, "%.12f");
        if (any_fci) {
            if (r.e_fci)
                out += num(*r.e_fci, "%.12f") + num(mh(r.e_reference - *r.e_fci), "%.9f") +
                       num(mh(r.e_hbar - *r.e_fci), "%.9f") + num(mh(r.e_relaxed - *r.e_fci), "%.9f");
            else
                out += "\t\t\t\t";
        }
        out += "\n";
    }
    return out;
}

}  // namespace qdsrg::cli
