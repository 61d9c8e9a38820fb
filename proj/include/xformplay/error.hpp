#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace xformplay {

enum class ErrorCode {
  InvalidParameter,
  UnsupportedMatrix,
  SingularMatrix,
  ReflectionOrSingular,
  ShearOrNonuniformScale,
  InvalidRotation,
  DegenerateConfiguration,
  NoImprovingStep,
  InvalidSpec,
  IllegalMove,
  SessionFinished,
  NoActiveStep,
  InvalidField,
  NothingToUndo,
  CorruptLog,
  VersionMismatch,
  MalformedDocument,
  InvariantViolation,
  Io,
  Parse,
  BadMessage,
  NoSession,
  UnknownPuzzle,
};

// Stable wire name, e.g. "E_ILLEGAL_MOVE".
std::string_view code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Set when the failure is tied to a logged move (replay, service replies).
  std::optional<std::int64_t> sequence_no() const noexcept { return sequence_no_; }
  Error& with_sequence_no(std::int64_t seq) {
    sequence_no_ = seq;
    return *this;
  }

  // Set by readers of line-oriented files.
  std::optional<std::int64_t> line() const noexcept { return line_; }
  Error& with_line(std::int64_t line) {
    line_ = line;
    return *this;
  }

 private:
  ErrorCode code_;
  std::optional<std::int64_t> sequence_no_;
  std::optional<std::int64_t> line_;
};

}  // namespace xformplay
