// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

#include <qdsrg/errors.hpp>
#include <qdsrg/fcidump.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace qdsrg {

using ojson = nlohmann::ordered_json;

namespace {

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool ends_header(const std::string& line) {
    const std::string u = upper(trim(line));
    return u.find("&END") != std::string::npos || u == "/" || (!u.empty() && u.back() == '/');
}

// KEY=v1,v2,... pairs from the namelist text.
std::map<std::string, std::vector<std::string>> parse_namelist(std::string text) {
    text = upper(text);
    for (const char* marker : {"&FCI", "&END"}) {
        for (auto pos = text.find(marker); pos != std::string::npos; pos = text.find(marker))
            text.replace(pos, std::string(marker).size(), " ");
    }
    std::replace(text.begin(), text.end(), '/', ' ');
    std::replace(text.begin(), text.end(), ',', ' ');
    text = std::regex_replace(text, std::regex("\\s*=\\s*"), "=");
    std::map<std::string, std::vector<std::string>> out;
    std::istringstream ss(text);
    std::string tok;
    std::string key;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq != std::string::npos) {
            key = tok.substr(0, eq);
            out[key];
            const std::string rest = tok.substr(eq + 1);
            if (!rest.empty()) out[key].push_back(rest);
        } else if (!key.empty()) {
            out[key].push_back(tok);
        }
    }
    return out;
}

long header_int(const std::map<std::string, std::vector<std::string>>& h, const std::string& key) {
    const auto it = h.find(key);
    if (it == h.end() || it->second.empty()) throw ParseError("FCIDUMP header is missing " + key);
    try {
        return std::stol(it->second.front());
    } catch (const std::exception&) {
        throw ParseError("FCIDUMP header key " + key + " is not an integer");
    }
}

double parse_value(std::string s, std::size_t line_no) {
    std::replace(s.begin(), s.end(), 'D', 'E');
    std::replace(s.begin(), s.end(), 'd', 'e');
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("FCIDUMP line " + std::to_string(line_no) + ": bad value '" + s + "'");
    }
}

constexpr double kDuplicateTolerance = 1e-10;

void set_checked(double& slot, char& seen, double value, std::size_t line_no) {
    if (seen && std::abs(slot - value) > kDuplicateTolerance)
        throw ConsistencyError("FCIDUMP line " + std::to_string(line_no) +
                               ": entry contradicts an earlier symmetry-equivalent value");
    slot = value;
    seen = 1;
}

}  // namespace

void OrbitalSpace::validate(std::size_t n_orbitals) const {
    std::vector<int> owner(n_orbitals, -1);
    const std::vector<const std::vector<std::size_t>*> lists = {&frozen_core, &core, &active, &virt,
                                                                &frozen_virtual};
    static const char* names[] = {"frozen_core", "core", "active", "virtual", "frozen_virtual"};
    for (std::size_t b = 0; b < lists.size(); ++b) {
        const auto& l = *lists[b];
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (l[i] >= n_orbitals)
                throw ConfigError(std::string(names[b]) + " index " + std::to_string(l[i]) + " out of range");
            if (i > 0 && l[i] <= l[i - 1]) throw ConfigError(std::string(names[b]) + " list is not sorted");
            if (owner[l[i]] >= 0)
                throw ConfigError("orbital " + std::to_string(l[i]) + " listed as both " +
                                  names[owner[l[i]]] + " and " + names[b]);
            owner[l[i]] = static_cast<int>(b);
        }
    }
    for (std::size_t p = 0; p < n_orbitals; ++p)
        if (owner[p] < 0) throw ConfigError("orbital " + std::to_string(p) + " is not assigned to any space");
}

OrbitalSpace OrbitalSpace::all_active(std::size_t n_orbitals) {
    OrbitalSpace s;
    s.active.resize(n_orbitals);
    for (std::size_t i = 0; i < n_orbitals; ++i) s.active[i] = i;
    return s;
}

ManyBodyOperator IntegralSet::as_operator() const {
    ManyBodyOperator op;
    op.scalar = scalar;
    op.one_body = h;
    op.two_body = v;
    op.vacuum = Vacuum::bare;
    return op;
}

std::vector<std::size_t> to_spin_orbitals(const std::vector<std::size_t>& spatial) {
    std::vector<std::size_t> out;
    out.reserve(2 * spatial.size());
    for (std::size_t p : spatial) {
        out.push_back(2 * p);
        out.push_back(2 * p + 1);
    }
    return out;
}

OrbitalSpace to_spin_orbitals(const OrbitalSpace& s) {
    OrbitalSpace o;
    o.frozen_core = to_spin_orbitals(s.frozen_core);
    o.core = to_spin_orbitals(s.core);
    o.active = to_spin_orbitals(s.active);
    o.virt = to_spin_orbitals(s.virt);
    o.frozen_virtual = to_spin_orbitals(s.frozen_virtual);
    return o;
}

SpatialIntegrals parse_fcidump(std::istream& in) {
    std::string line;
    std::string header;
    std::size_t line_no = 0;
    bool closed = false;
    while (std::getline(in, line)) {
        ++line_no;
        header += line + "\n";
        if (ends_header(line)) {
            closed = true;
            break;
        }
    }
    if (!closed) throw ParseError("FCIDUMP header is not terminated by &END or /");
    const auto h = parse_namelist(header);

    SpatialIntegrals out;
    const long norb = header_int(h, "NORB");
    const long nelec = header_int(h, "NELEC");
    const long ms2 = header_int(h, "MS2");
    if (norb < 0 || nelec < 0) throw ParseError("FCIDUMP header has negative NORB or NELEC");
    const auto n = static_cast<std::size_t>(norb);
    out.n_orbitals = n;
    out.n_electrons = static_cast<std::size_t>(nelec);
    out.ms2 = static_cast<int>(ms2);
    if (const auto it = h.find("ORBSYM"); it != h.end()) {
        for (const auto& v : it->second) {
            try {
                out.orbital_symmetries.push_back(std::stoi(v));
            } catch (const std::exception&) {
                throw ParseError("FCIDUMP ORBSYM entry '" + v + "' is not an integer");
            }
        }
        if (!out.orbital_symmetries.empty() && out.orbital_symmetries.size() != n)
            out.warnings.push_back("ORBSYM lists " + std::to_string(out.orbital_symmetries.size()) +
                                   " labels for " + std::to_string(n) + " orbitals");
    }

    out.one_body = Matrix::Zero(norb, norb);
    out.two_body_chemist = Tensor4(n);
    std::vector<char> seen2(out.two_body_chemist.size(), 0);
    std::vector<char> seen1(n * n, 0);
    char seen0 = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::istringstream ss(line);
        std::string value_text;
        long idx[4];
        if (!(ss >> value_text >> idx[0] >> idx[1] >> idx[2] >> idx[3]))
            throw ParseError("FCIDUMP line " + std::to_string(line_no) + ": expected 'value i j k l'");
        const double value = parse_value(value_text, line_no);
        for (long x : idx)
            if (x < 0 || x > norb)
                throw BoundsError("FCIDUMP line " + std::to_string(line_no) + ": index " + std::to_string(x) +
                                  " outside 0.." + std::to_string(norb));
        const long i = idx[0], j = idx[1], k = idx[2], l = idx[3];
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            set_checked(out.scalar_energy, seen0, value, line_no);
        } else if (i != 0 && j == 0 && k == 0 && l == 0) {
            out.warnings.push_back("line " + std::to_string(line_no) + ": orbital-energy entry ignored");
        } else if (i != 0 && j != 0 && k == 0 && l == 0) {
            const std::size_t a = static_cast<std::size_t>(i - 1), b = static_cast<std::size_t>(j - 1);
            set_checked(out.one_body(a, b), seen1[a * n + b], value, line_no);
            set_checked(out.one_body(b, a), seen1[b * n + a], value, line_no);
        } else if (i != 0 && j != 0 && k != 0 && l != 0) {
            const std::size_t a = static_cast<std::size_t>(i - 1), b = static_cast<std::size_t>(j - 1);
            const std::size_t c = static_cast<std::size_t>(k - 1), d = static_cast<std::size_t>(l - 1);
            const std::size_t perms[8][4] = {{a, b, c, d}, {b, a, c, d}, {a, b, d, c}, {b, a, d, c},
                                             {c, d, a, b}, {d, c, a, b}, {c, d, b, a}, {d, c, b, a}};
            for (const auto& p : perms) {
                const std::size_t off = out.two_body_chemist.offset(p[0], p[1], p[2], p[3]);
                set_checked(out.two_body_chemist.raw()[off], seen2[off], value, line_no);
            }
        } else {
            throw ParseError("FCIDUMP line " + std::to_string(line_no) + ": unsupported index pattern");
        }
    }
    return out;
}

SpatialIntegrals parse_fcidump_string(const std::string& text) {
    std::istringstream ss(text);
    return parse_fcidump(ss);
}

SpatialIntegrals read_fcidump(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open FCIDUMP file " + path);
    return parse_fcidump(f);
}

std::string write_fcidump(const SpatialIntegrals& ints) {
    const std::size_t n = ints.n_orbitals;
    std::string out = "&FCI NORB=" + std::to_string(n) + ",NELEC=" + std::to_string(ints.n_electrons) +
                      ",MS2=" + std::to_string(ints.ms2) + ",\n ORBSYM=";
    for (std::size_t p = 0; p < n; ++p) {
        const int sym = p < ints.orbital_symmetries.size() ? ints.orbital_symmetries[p] : 1;
        out += std::to_string(sym) + ",";
    }
    out += "\n ISYM=1,\n&END\n";
    char buf[96];
    auto emit = [&](double v, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        std::snprintf(buf, sizeof buf, "%24.17e %4zu %4zu %4zu %4zu\n", v, i, j, k, l);
        out += buf;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l <= k; ++l) {
                    if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
                    const double v = ints.two_body_chemist(i, j, k, l);
                    if (v != 0.0) emit(v, i + 1, j + 1, k + 1, l + 1);
                }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = ints.one_body(i, j);
            if (v != 0.0) emit(v, i + 1, j + 1, 0, 0);
        }
    emit(ints.scalar_energy, 0, 0, 0, 0);
    return out;
}

IntegralSet spinorbitalize(const SpatialIntegrals& ints) {
    const std::size_t m = ints.n_orbitals;
    const std::size_t n = 2 * m;
    IntegralSet out;
    out.scalar = ints.scalar_energy;
    out.h = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    out.v = Tensor4(n);
    out.n_electrons = ints.n_electrons;
    out.ms2 = ints.ms2;
    out.space = OrbitalSpace::all_active(n);
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) {
            out.h(2 * p, 2 * q) = ints.one_body(p, q);
            out.h(2 * p + 1, 2 * q + 1) = ints.one_body(p, q);
        }
    const Tensor4& g = ints.two_body_chemist;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) {
                    double val = 0.0;
                    if (p % 2 == r % 2 && q % 2 == s % 2) val += g(p / 2, r / 2, q / 2, s / 2);
                    if (p % 2 == s % 2 && q % 2 == r % 2) val -= g(p / 2, s / 2, q / 2, r / 2);
                    out.v(p, q, r, s) = val;
                }
    return out;
}

IntegralSet freeze_core(const IntegralSet& ints, const OrbitalSpace& space) {
    const std::size_t m = ints.n() / 2;
    space.validate(m);
    for (std::size_t i = 0; i < space.frozen_core.size(); ++i)
        if (space.frozen_core[i] != i) throw ConfigError("frozen core orbitals must be the lowest-index orbitals");
    const std::size_t n_frozen_el = 2 * space.frozen_core.size();
    if (n_frozen_el > ints.n_electrons) throw ConfigError("more frozen core electrons than electrons");

    const OrbitalSpace so = to_spin_orbitals(space);
    std::vector<int> dropped(ints.n(), 0);
    for (std::size_t i : so.frozen_core) dropped[i] = 1;
    for (std::size_t i : so.frozen_virtual) dropped[i] = 1;
    std::vector<std::size_t> keep;
    std::vector<std::size_t> remap(ints.n(), 0);
    for (std::size_t p = 0; p < ints.n(); ++p)
        if (!dropped[p]) {
            remap[p] = keep.size();
            keep.push_back(p);
        }

    const ManyBodyOperator folded = fold_and_restrict(ints.as_operator(), so.frozen_core, keep);
    IntegralSet out;
    out.scalar = folded.scalar;
    out.h = folded.one_body;
    out.v = folded.two_body;
    out.n_electrons = ints.n_electrons - n_frozen_el;
    out.ms2 = ints.ms2;
    auto map_list = [&](const std::vector<std::size_t>& l) {
        std::vector<std::size_t> r;
        for (std::size_t p : l) r.push_back(remap[p]);
        return r;
    };
    out.space.core = map_list(so.core);
    out.space.active = map_list(so.active);
    out.space.virt = map_list(so.virt);
    return out;
}

std::size_t active_electrons(std::size_t n_electrons, const OrbitalSpace& space) {
    const std::size_t occupied = 2 * (space.frozen_core.size() + space.core.size());
    if (occupied > n_electrons)
        throw ConfigError("core and frozen core hold " + std::to_string(occupied) + " electrons but only " +
                          std::to_string(n_electrons) + " are available");
    return n_electrons - occupied;
}

namespace {

ojson space_json(const OrbitalSpace& s) {
    ojson j;
    j["frozen_core"] = s.frozen_core;
    j["core"] = s.core;
    j["active"] = s.active;
    j["virtual"] = s.virt;
    j["frozen_virtual"] = s.frozen_virtual;
    return j;
}

OrbitalSpace space_from_json(const ojson& j) {
    OrbitalSpace s;
    s.frozen_core = j.value("frozen_core", std::vector<std::size_t>{});
    s.core = j.value("core", std::vector<std::size_t>{});
    s.active = j.value("active", std::vector<std::size_t>{});
    s.virt = j.value("virtual", std::vector<std::size_t>{});
    s.frozen_virtual = j.value("frozen_virtual", std::vector<std::size_t>{});
    return s;
}

}  // namespace

std::string export_effective_hamiltonian(const ManyBodyOperator& op, const HeffMetadata& meta) {
    if (op.vacuum != Vacuum::bare)
        throw ContractViolation("effective Hamiltonian export needs a bare operator; convert with to_bare_operator");
    const std::size_t n = op.n();
    ojson j;
    j["schema"] = "qdsrg-heff-v1";
    j["convention"] = "H = scalar + sum h[p][q] a+p aq + 1/4 sum v[p][q][r][s] a+p a+q as ar; spin orbital 2k is alpha";
    ojson m;
    m["s"] = meta.s;
    m["truncation"] = meta.truncation;
    m["l3_policy"] = meta.l3_policy;
    m["orbital_space"] = space_json(meta.space);
    j["metadata"] = std::move(m);
    j["n_spin_orbitals"] = n;
    j["scalar"] = op.scalar;
    ojson h = ojson::array();
    for (std::size_t p = 0; p < n; ++p) {
        ojson row = ojson::array();
        for (std::size_t q = 0; q < n; ++q) row.push_back(op.one_body(p, q));
        h.push_back(std::move(row));
    }
    j["one_body"] = std::move(h);
    ojson v = ojson::array();
    for (std::size_t p = 0; p < n; ++p) {
        ojson vp = ojson::array();
        for (std::size_t q = 0; q < n; ++q) {
            ojson vq = ojson::array();
            for (std::size_t r = 0; r < n; ++r) {
                ojson vr = ojson::array();
                for (std::size_t s = 0; s < n; ++s) vr.push_back(op.two_body(p, q, r, s));
                vq.push_back(std::move(vr));
            }
            vp.push_back(std::move(vq));
        }
        v.push_back(std::move(vp));
    }
    j["two_body"] = std::move(v);
    return j.dump(1) + "\n";
}

void export_effective_hamiltonian(const ManyBodyOperator& op, const HeffMetadata& meta, const std::string& path) {
    const std::string text = export_effective_hamiltonian(op, meta);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << text;
}

ManyBodyOperator import_effective_hamiltonian(const std::string& text, HeffMetadata* meta) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("effective Hamiltonian json: ") + e.what());
    }
    if (j.value("schema", "") != "qdsrg-heff-v1") throw ParseError("effective Hamiltonian json: unexpected schema");
    try {
        const auto n = j.at("n_spin_orbitals").get<std::size_t>();
        ManyBodyOperator op = ManyBodyOperator::zero(n);
        op.scalar = j.at("scalar").get<double>();
        const auto& h = j.at("one_body");
        const auto& v = j.at("two_body");
        if (h.size() != n || v.size() != n) throw ParseError("effective Hamiltonian json: wrong array shape");
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                op.one_body(p, q) = h.at(p).at(q).get<double>();
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t s = 0; s < n; ++s) op.two_body(p, q, r, s) = v.at(p).at(q).at(r).at(s).get<double>();
            }
        if (meta) {
            const auto& m = j.at("metadata");
            meta->s = m.at("s").get<double>();
            meta->truncation = m.at("truncation").get<std::string>();
            meta->l3_policy = m.at("l3_policy").get<std::string>();
            meta->space = space_from_json(m.at("orbital_space"));
        }
        return op;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("effective Hamiltonian json: ") + e.what());
    }
}

}  // namespace qdsrg
