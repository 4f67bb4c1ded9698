#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aries {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    EmptyInput,
    Io,
    TooShort,
    SingularRegression,
    PeriodTooLarge,
    NotPositiveDefinite,
    DuplicateMeasurement,
    NegativeMetric,
    MissingProfile,
    EmptyStore,
    HistoryTooShort,
    InsufficientWindows,
    Schema,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::Io: return "Io";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::SingularRegression: return "SingularRegression";
        case ErrorCode::PeriodTooLarge: return "PeriodTooLarge";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::DuplicateMeasurement: return "DuplicateMeasurement";
        case ErrorCode::NegativeMetric: return "NegativeMetric";
        case ErrorCode::MissingProfile: return "MissingProfile";
        case ErrorCode::EmptyStore: return "EmptyStore";
        case ErrorCode::HistoryTooShort: return "HistoryTooShort";
        case ErrorCode::InsufficientWindows: return "InsufficientWindows";
        case ErrorCode::Schema: return "Schema";
    }
    return "Unknown";
}

/// Every domain failure in the library surfaces as this type; `code()` identifies the contract that was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace aries
