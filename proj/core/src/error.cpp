#include "pasteup/error.hpp"

namespace pasteup {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnreadableFile: return "UnreadableFile";
        case ErrorCode::WriteFailure: return "WriteFailure";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyMask: return "EmptyMask";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::DegenerateResize: return "DegenerateResize";
        case ErrorCode::BothEmpty: return "BothEmpty";
        case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
        case ErrorCode::EmptyFeasibleRegion: return "EmptyFeasibleRegion";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::EmptyRegion: return "EmptyRegion";
        case ErrorCode::TooSmall: return "TooSmall";
        case ErrorCode::FrameMismatch: return "FrameMismatch";
        case ErrorCode::PairingError: return "PairingError";
        case ErrorCode::ExhaustedCorpus: return "ExhaustedCorpus";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

}  // namespace pasteup
