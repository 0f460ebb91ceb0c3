#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace novlog {

enum class ErrorKind {
    TruncationMismatch,
    NonUnitLeading,
    PositiveValuationRequired,
    NotWittVector,
    NegativeValuation,
    UnsupportedGroup,
    NotInKernel,
    NotUnipotentModT,
    SingularConstantTerm,
    NoUnitPivot,
    NotAcyclicOrNoPivot,
    BadLabelLevel,
    NonAbelianGroup,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::TruncationMismatch: return "TruncationMismatch";
    case ErrorKind::NonUnitLeading: return "NonUnitLeading";
    case ErrorKind::PositiveValuationRequired: return "PositiveValuationRequired";
    case ErrorKind::NotWittVector: return "NotWittVector";
    case ErrorKind::NegativeValuation: return "NegativeValuation";
    case ErrorKind::UnsupportedGroup: return "UnsupportedGroup";
    case ErrorKind::NotInKernel: return "NotInKernel";
    case ErrorKind::NotUnipotentModT: return "NotUnipotentModT";
    case ErrorKind::SingularConstantTerm: return "SingularConstantTerm";
    case ErrorKind::NoUnitPivot: return "NoUnitPivot";
    case ErrorKind::NotAcyclicOrNoPivot: return "NotAcyclicOrNoPivot";
    case ErrorKind::BadLabelLevel: return "BadLabelLevel";
    case ErrorKind::NonAbelianGroup: return "NonAbelianGroup";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Domain error raised by the algebra routines. The kind is stable and is
/// what the CLI reports; the message is for humans.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace novlog
