#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idtlab {

enum class ErrorKind {
  ParseError,
  NonTriangleFace,
  NonManifoldInput,
  DegenerateFace,
  BoundaryEdge,
  NotFlippable,
  NotDelaunay,
  IncompatibleData,
  InvalidArgument,
  FlipBudgetExceeded,
  SolverFailure,
  NotConverged,
  DegenerateCollapse,
  ZeroVoronoiArea,
  CollinearInput,
};

/// Coarse category used by the command-line tool for exit codes.
enum class ErrorCategory { Parse = 1, Validation = 2, Numeric = 3 };

inline constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonTriangleFace: return "NonTriangleFace";
    case ErrorKind::NonManifoldInput: return "NonManifoldInput";
    case ErrorKind::DegenerateFace: return "DegenerateFace";
    case ErrorKind::BoundaryEdge: return "BoundaryEdge";
    case ErrorKind::NotFlippable: return "NotFlippable";
    case ErrorKind::NotDelaunay: return "NotDelaunay";
    case ErrorKind::IncompatibleData: return "IncompatibleData";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::FlipBudgetExceeded: return "FlipBudgetExceeded";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::DegenerateCollapse: return "DegenerateCollapse";
    case ErrorKind::ZeroVoronoiArea: return "ZeroVoronoiArea";
    case ErrorKind::CollinearInput: return "CollinearInput";
  }
  return "Unknown";
}

inline constexpr ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::NonTriangleFace:
      return ErrorCategory::Parse;
    case ErrorKind::FlipBudgetExceeded:
    case ErrorKind::SolverFailure:
    case ErrorKind::NotConverged:
    case ErrorKind::DegenerateCollapse:
    case ErrorKind::ZeroVoronoiArea:
      return ErrorCategory::Numeric;
    default:
      return ErrorCategory::Validation;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

/// Parse failure with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, const std::string& message, int line, int column)
      : Error(kind, message + " (line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace idtlab
