#pragma once

#include <stdexcept>
#include <string>

namespace pasteup {

enum class ErrorCode {
    UnreadableFile,
    WriteFailure,
    SchemaViolation,
    LengthMismatch,
    EmptyMask,
    EmptyClass,
    DegenerateResize,
    BothEmpty,
    InstanceTooLarge,
    EmptyFeasibleRegion,
    DimMismatch,
    EmptyRegion,
    TooSmall,
    FrameMismatch,
    PairingError,
    ExhaustedCorpus,
    ConfigError,
    InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// I/O errors map to CLI exit 1, everything else is a domain error (exit 2).
    static bool is_io(ErrorCode code) {
        return code == ErrorCode::UnreadableFile || code == ErrorCode::WriteFailure;
    }

private:
    ErrorCode code_;
};

}  // namespace pasteup
