// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by all qdsrg modules.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qdsrg {

/// Base class; `kind()` is a stable lowercase tag used in reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& w) : Error("parse", w) {}
};
class BoundsError : public Error {
public:
    explicit BoundsError(const std::string& w) : Error("bounds", w) {}
};
class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& w) : Error("consistency", w) {}
};
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& w) : Error("config", w) {}
};
class CapacityError : public Error {
public:
    explicit CapacityError(const std::string& w) : Error("capacity", w) {}
};
class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& w) : Error("contract", w) {}
};
class DomainError : public Error {
public:
    explicit DomainError(const std::string& w) : Error("domain", w) {}
};
class Unsupported : public Error {
public:
    explicit Unsupported(const std::string& w) : Error("unsupported", w) {}
};
class QuadratureError : public Error {
public:
    explicit QuadratureError(const std::string& w) : Error("quadrature", w) {}
};

/// BCH series failed to converge; carries the per-term norms.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& w, std::vector<double> norms)
        : Error("divergence", w), norms_(std::move(norms)) {}
    const std::vector<double>& norms() const noexcept { return norms_; }

private:
    std::vector<double> norms_;
};

/// Amplitude iterations hit the cap; carries the iteration log.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& w, std::vector<std::string> log)
        : Error("convergence", w), log_(std::move(log)) {}
    const std::vector<std::string>& log() const noexcept { return log_; }

private:
    std::vector<std::string> log_;
};

}  // namespace qdsrg
