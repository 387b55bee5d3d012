#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wboxdim {

enum class ErrorCode {
    OutOfRange,
    BaseTooSmall,
    ContractivityViolation,
    ToleranceTooSmall,
    DigitOutOfRange,
    IndexOutOfRange,
    BudgetExceeded,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BaseTooSmall: return "BaseTooSmall";
    case ErrorCode::ContractivityViolation: return "ContractivityViolation";
    case ErrorCode::ToleranceTooSmall: return "ToleranceTooSmall";
    case ErrorCode::DigitOutOfRange: return "DigitOutOfRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code;
/// what() is "<Code>: <detail>".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace wboxdim
