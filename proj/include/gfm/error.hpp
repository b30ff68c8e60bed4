#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gfm {

enum class ErrorCode {
  FileUnreadable,
  UnknownMediaType,
  SpanOutOfRange,
  DuplicateIndexer,
  UnknownIndexer,
  UnknownParameter,
  MissingParameter,
  DomainViolation,
  MediaTypeMismatch,
  ForeignFragment,
  ResolverFailure,
  EmptyInput,
  PatternError,
  NoMatch,
  UnknownColumn,
  SyntaxError,
  NestedKindMismatch,
  DuplicateNode,
  UnknownNode,
  DuplicateAnchor,
  UnknownAnchorRef,
  UnboundNode,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileUnreadable: return "FileUnreadable";
    case ErrorCode::UnknownMediaType: return "UnknownMediaType";
    case ErrorCode::SpanOutOfRange: return "SpanOutOfRange";
    case ErrorCode::DuplicateIndexer: return "DuplicateIndexer";
    case ErrorCode::UnknownIndexer: return "UnknownIndexer";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::MissingParameter: return "MissingParameter";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::MediaTypeMismatch: return "MediaTypeMismatch";
    case ErrorCode::ForeignFragment: return "ForeignFragment";
    case ErrorCode::ResolverFailure: return "ResolverFailure";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::PatternError: return "PatternError";
    case ErrorCode::NoMatch: return "NoMatch";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NestedKindMismatch: return "NestedKindMismatch";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::DuplicateAnchor: return "DuplicateAnchor";
    case ErrorCode::UnknownAnchorRef: return "UnknownAnchorRef";
    case ErrorCode::UnboundNode: return "UnboundNode";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

class GfmError : public std::runtime_error {
 public:
  GfmError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }

  /// Message without the error-code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

/// Parse failure in the fragment-expression grammar. Carries the byte
/// offset of the failure and a description of what was expected there.
class SyntaxError : public GfmError {
 public:
  SyntaxError(std::size_t offset, const std::string& expected)
      : GfmError(ErrorCode::SyntaxError,
                 "at offset " + std::to_string(offset) + ": expected " + expected),
        offset_(offset),
        expected_(expected) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

}  // namespace gfm
