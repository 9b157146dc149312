#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace laysumm {

enum class ErrorKind {
  EmptyText,
  InvalidWord,
  InvalidWordList,
  InvalidParameter,
  InvalidPool,
  MissingField,
  MalformedRecord,
  DuplicateId,
  MissingAbstract,
  ScorerError,
  TransportError,
  TimeoutError,
  ProtocolError,
  IoError,
};

inline constexpr std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyText: return "EmptyText";
    case ErrorKind::InvalidWord: return "InvalidWord";
    case ErrorKind::InvalidWordList: return "InvalidWordList";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::InvalidPool: return "InvalidPool";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::MissingAbstract: return "MissingAbstract";
    case ErrorKind::ScorerError: return "ScorerError";
    case ErrorKind::TransportError: return "TransportError";
    case ErrorKind::TimeoutError: return "TimeoutError";
    case ErrorKind::ProtocolError: return "ProtocolError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

// Process exit code contract: 1 validation, 2 transport/scorer, 3 I/O.
inline constexpr int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ScorerError:
    case ErrorKind::TransportError:
    case ErrorKind::TimeoutError:
    case ErrorKind::ProtocolError:
      return 2;
    case ErrorKind::IoError:
      return 3;
    default:
      return 1;
  }
}

/// Every failure raised by the library. `detail` carries the offending
/// field name, record id or scorer name when there is one; `line` is the
/// 1-based input line for record-level errors (0 when not applicable).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string detail = {}, std::size_t line = 0)
      : std::runtime_error(compose(kind, message, line)),
        kind_(kind),
        detail_(std::move(detail)),
        line_(line) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view kind_name() const noexcept { return error_kind_name(kind_); }
  const std::string& detail() const noexcept { return detail_; }
  std::size_t line() const noexcept { return line_; }
  int exit_code() const noexcept { return exit_code_for(kind_); }

 private:
  static std::string compose(ErrorKind kind, const std::string& message, std::size_t line) {
    std::string out(error_kind_name(kind));
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    out += ": ";
    out += message;
    return out;
  }

  ErrorKind kind_;
  std::string detail_;
  std::size_t line_;
};

}  // namespace laysumm
