#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cpc {

enum class ErrorKind {
  InvalidArgument,
  MalformedPolygon,
  Infeasible,
  Unbounded,
  BudgetExceeded,
  EmptyRegion,
  RejectionStall,
  DimensionTooLarge,
  EmptyLattice,
  InfeasibleStart,
  ZeroSubgradient,
  OutsideRegion,
  ParseError,
  SchemaError,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MalformedPolygon: return "MalformedPolygon";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::RejectionStall: return "RejectionStall";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::EmptyLattice: return "EmptyLattice";
    case ErrorKind::InfeasibleStart: return "InfeasibleStart";
    case ErrorKind::ZeroSubgradient: return "ZeroSubgradient";
    case ErrorKind::OutsideRegion: return "OutsideRegion";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace cpc
