#pragma once

#include <stdexcept>
#include <string>

namespace novelty {

enum class ErrorCode {
    InvalidParams,
    NumericBlowup,
    NoExperience,
    MeasureFailure,
    EmptyTrajectory,
    WorldShapeMismatch,
    ModelBlowup,
};

inline const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParams: return "invalid-params";
        case ErrorCode::NumericBlowup: return "numeric-blowup";
        case ErrorCode::NoExperience: return "no-experience";
        case ErrorCode::MeasureFailure: return "measure-failure";
        case ErrorCode::EmptyTrajectory: return "empty-trajectory";
        case ErrorCode::WorldShapeMismatch: return "world-shape-mismatch";
        case ErrorCode::ModelBlowup: return "model-blowup";
    }
    return "unknown";
}

/// Library error; `code()` carries the stable machine-readable cause.
class NoveltyError : public std::runtime_error {
public:
    NoveltyError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    const char* code_name() const noexcept { return error_code_name(code_); }

private:
    ErrorCode code_;
};

}  // namespace novelty
