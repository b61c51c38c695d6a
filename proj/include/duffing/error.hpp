#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace duffing {

enum class ErrorCode {
    InvalidArgument,
    StepFailure,
    MaxStepsExceeded,
    BranchPointApproach,
    DegenerateCrossing,
    NoReturn,
    OnSeparatrix,
    CenterSingular,
    OriginSingular,
    UnwrapAmbiguous,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::StepFailure: return "StepFailure";
        case ErrorCode::MaxStepsExceeded: return "MaxStepsExceeded";
        case ErrorCode::BranchPointApproach: return "BranchPointApproach";
        case ErrorCode::DegenerateCrossing: return "DegenerateCrossing";
        case ErrorCode::NoReturn: return "NoReturn";
        case ErrorCode::OnSeparatrix: return "OnSeparatrix";
        case ErrorCode::CenterSingular: return "CenterSingular";
        case ErrorCode::OriginSingular: return "OriginSingular";
        case ErrorCode::UnwrapAmbiguous: return "UnwrapAmbiguous";
    }
    return "Unknown";
}

/// Every failure surfaced by the library. The code is stable and maps 1:1
/// onto the C API status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace duffing
