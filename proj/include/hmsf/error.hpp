#pragma once

#include <stdexcept>
#include <string>

namespace hmsf {

enum class ErrorCode {
  // DIMACS / formula
  MalformedHeader,
  ClauseSizeNot3,
  DuplicateVariableInClause,
  VariableOutOfRange,
  IncompleteAssignment,
  TooManyVariables,
  // graph / instance / forest
  InvalidForest,
  GraphNotComplete,
  DisconnectedGraph,
  MalformedLine,
  DuplicateEdge,
  RootOutOfRange,
  Overflow,
  // reduction / certificates
  NotAModel,
  InvalidCertificate,
  // solver
  NoSpanningForest,
  TooLarge,
  MissingBudget,
  // misc
  InvalidArgument,
  IoError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::ClauseSizeNot3: return "ClauseSizeNot3";
    case ErrorCode::DuplicateVariableInClause: return "DuplicateVariableInClause";
    case ErrorCode::VariableOutOfRange: return "VariableOutOfRange";
    case ErrorCode::IncompleteAssignment: return "IncompleteAssignment";
    case ErrorCode::TooManyVariables: return "TooManyVariables";
    case ErrorCode::InvalidForest: return "InvalidForest";
    case ErrorCode::GraphNotComplete: return "GraphNotComplete";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::RootOutOfRange: return "RootOutOfRange";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotAModel: return "NotAModel";
    case ErrorCode::InvalidCertificate: return "InvalidCertificate";
    case ErrorCode::NoSpanningForest: return "NoSpanningForest";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::MissingBudget: return "MissingBudget";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hmsf
