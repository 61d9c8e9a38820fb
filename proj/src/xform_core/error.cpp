#include "xformplay/error.hpp"

namespace xformplay {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "E_INVALID_PARAMETER";
    case ErrorCode::UnsupportedMatrix: return "E_UNSUPPORTED_MATRIX";
    case ErrorCode::SingularMatrix: return "E_SINGULAR_MATRIX";
    case ErrorCode::ReflectionOrSingular: return "E_REFLECTION_OR_SINGULAR";
    case ErrorCode::ShearOrNonuniformScale: return "E_SHEAR_OR_NONUNIFORM_SCALE";
    case ErrorCode::InvalidRotation: return "E_INVALID_ROTATION";
    case ErrorCode::DegenerateConfiguration: return "E_DEGENERATE_CONFIGURATION";
    case ErrorCode::NoImprovingStep: return "E_NO_IMPROVING_STEP";
    case ErrorCode::InvalidSpec: return "E_INVALID_SPEC";
    case ErrorCode::IllegalMove: return "E_ILLEGAL_MOVE";
    case ErrorCode::SessionFinished: return "E_SESSION_FINISHED";
    case ErrorCode::NoActiveStep: return "E_NO_ACTIVE_STEP";
    case ErrorCode::InvalidField: return "E_INVALID_FIELD";
    case ErrorCode::NothingToUndo: return "E_NOTHING_TO_UNDO";
    case ErrorCode::CorruptLog: return "E_CORRUPT_LOG";
    case ErrorCode::VersionMismatch: return "E_VERSION_MISMATCH";
    case ErrorCode::MalformedDocument: return "E_MALFORMED_DOCUMENT";
    case ErrorCode::InvariantViolation: return "E_INVARIANT_VIOLATION";
    case ErrorCode::Io: return "E_IO";
    case ErrorCode::Parse: return "E_PARSE";
    case ErrorCode::BadMessage: return "E_BAD_MESSAGE";
    case ErrorCode::NoSession: return "E_NO_SESSION";
    case ErrorCode::UnknownPuzzle: return "E_UNKNOWN_PUZZLE";
  }
  return "E_UNKNOWN";
}

}  // namespace xformplay
