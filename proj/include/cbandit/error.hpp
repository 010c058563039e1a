#pragma once

#include <stdexcept>
#include <string>

namespace cbandit {

enum class ErrorCode {
    NonUniqueOptimal,
    EmptyInstance,
    PairOrderViolation,
    WrongArity,
    NotAllInfeasible,
    BudgetTooSmall,
    EmptyActiveSet,
    ParseError,
    ValidationError,
    ConfigError,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonUniqueOptimal: return "NonUniqueOptimal";
    case ErrorCode::EmptyInstance: return "EmptyInstance";
    case ErrorCode::PairOrderViolation: return "PairOrderViolation";
    case ErrorCode::WrongArity: return "WrongArity";
    case ErrorCode::NotAllInfeasible: return "NotAllInfeasible";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::EmptyActiveSet: return "EmptyActiveSet";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace cbandit
