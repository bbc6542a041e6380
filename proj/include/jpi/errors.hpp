#pragma once

#include <stdexcept>
#include <string>

namespace jpi {

// Numeric values are shared with the C API status codes in jpi.h.
enum class ErrorCode : int {
    InvalidParameter = 1,
    DivergentInductance = 2,
    SingularNetwork = 3,
    Infeasible = 4,
    Config = 5,
    Io = 6,
    Numerical = 7,
    DimensionMismatch = 8,
    Internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& what) : Error(ErrorCode::InvalidParameter, what) {}
};

class DivergentInductance : public Error {
public:
    explicit DivergentInductance(const std::string& what)
        : Error(ErrorCode::DivergentInductance, what) {}
};

/// Raised when a matrix that must be inverted is singular. Carries the
/// signal frequency (rad/s, 0 when not applicable) and which block failed.
class SingularNetwork : public Error {
public:
    SingularNetwork(const std::string& what, double omega = 0.0, std::string block = {})
        : Error(ErrorCode::SingularNetwork, what), omega_(omega), block_(std::move(block)) {}
    double omega() const noexcept { return omega_; }
    const std::string& block() const noexcept { return block_; }

private:
    double omega_;
    std::string block_;
};

class Infeasible : public Error {
public:
    explicit Infeasible(const std::string& what) : Error(ErrorCode::Infeasible, what) {}
};

/// Schema/validation failure in a run configuration; `field` is the JSON path.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(ErrorCode::Config, field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorCode::Numerical, what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what)
        : Error(ErrorCode::DimensionMismatch, what) {}
};

void require_finite(double value, const char* name);

}  // namespace jpi
