#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mongelab {

enum class ErrorCode {
    DomainError,
    UnsupportedVariant,
    KinkError,
    OrderError,
    InsufficientData,
    NoBreak,
    NoRoot,
    NonFinite,
    TurningPoint,
    ZeroVelocity,
    NotMultivalued,
    MultipleFolds,
    PoleError,
    ResidualError,
    NotCommuting,
    PoleOnGrid,
    ZeroGradient,
    DegeneratePoint,
    DegenerateCoefficients,
    OrderTooHigh,
    ConfigError,
};

constexpr std::string_view error_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnsupportedVariant: return "UnsupportedVariant";
    case ErrorCode::KinkError: return "KinkError";
    case ErrorCode::OrderError: return "OrderError";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NoBreak: return "NoBreak";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TurningPoint: return "TurningPoint";
    case ErrorCode::ZeroVelocity: return "ZeroVelocity";
    case ErrorCode::NotMultivalued: return "NotMultivalued";
    case ErrorCode::MultipleFolds: return "MultipleFolds";
    case ErrorCode::PoleError: return "PoleError";
    case ErrorCode::ResidualError: return "ResidualError";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::PoleOnGrid: return "PoleOnGrid";
    case ErrorCode::ZeroGradient: return "ZeroGradient";
    case ErrorCode::DegeneratePoint: return "DegeneratePoint";
    case ErrorCode::DegenerateCoefficients: return "DegenerateCoefficients";
    case ErrorCode::OrderTooHigh: return "OrderTooHigh";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Every failure raised by the library. The message is prefixed with the
/// originating module and the error name, e.g. "lambertw: DomainError: ...".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string_view module, const std::string& what)
        : std::runtime_error(std::string(module) + ": " + std::string(error_name(code)) + ": " + what),
          code_(code), module_(module)
    {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorCode code_;
    std::string module_;
};

} // namespace mongelab
