#pragma once

#include <stdexcept>
#include <string>

namespace specdec {

enum class ErrorCode {
    NegativeWeight,
    ZeroMass,
    ExhaustedSupport,
    DegenerateResidual,
    ZeroProposal,
    OutOfVocab,
    MaskShapeMismatch,
    EnumerationTooLarge,
    BudgetExceeded,
    ConfigError,
};

/// Library-wide exception carrying a machine-checkable code.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::ExhaustedSupport: return "ExhaustedSupport";
    case ErrorCode::DegenerateResidual: return "DegenerateResidual";
    case ErrorCode::ZeroProposal: return "ZeroProposal";
    case ErrorCode::OutOfVocab: return "OutOfVocab";
    case ErrorCode::MaskShapeMismatch: return "MaskShapeMismatch";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace specdec
