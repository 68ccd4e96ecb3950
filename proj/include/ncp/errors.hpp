#pragma once

#include <stdexcept>
#include <string>

namespace ncp {

enum class ErrorKind {
  AmbiguousKernel,
  EmptyKernel,
  CommonComponent,
  ConditioningFailure,
  UnmatchedPoint,
  NonUniqueSecondCurve,
  DegenerateLine,
  NoConvergence,
  NoFlex,
  NotOnCurve,
  ConstraintViolated,
  IndexRange,
  SizeMismatch,
  NotInW0,
  UnsupportedLevel,
  Parse,
  DegenerateParams,
  IdenticallyZeroDet,
  NonTranslation,
  KernelDimension,
  UnexpectedKernelDim,
  DependentV,
  RankDrop,
  DegenerateColumn,
  FiberCase,
  NotFiberCase,
  ZeroCountMismatch,
  NotIsotrivial,
  Quadrature,
  HbarMismatch,
  ZeroF0,
  NotARoot,
  NoCyclicGenerator,
  NotPrincipal,
  Config,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::AmbiguousKernel: return "AmbiguousKernel";
    case ErrorKind::EmptyKernel: return "EmptyKernel";
    case ErrorKind::CommonComponent: return "CommonComponent";
    case ErrorKind::ConditioningFailure: return "ConditioningFailure";
    case ErrorKind::UnmatchedPoint: return "UnmatchedPoint";
    case ErrorKind::NonUniqueSecondCurve: return "NonUniqueSecondCurve";
    case ErrorKind::DegenerateLine: return "DegenerateLine";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoFlex: return "NoFlex";
    case ErrorKind::NotOnCurve: return "NotOnCurve";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::IndexRange: return "IndexRange";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::NotInW0: return "NotInW0";
    case ErrorKind::UnsupportedLevel: return "UnsupportedLevel";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::DegenerateParams: return "DegenerateParams";
    case ErrorKind::IdenticallyZeroDet: return "IdenticallyZeroDet";
    case ErrorKind::NonTranslation: return "NonTranslation";
    case ErrorKind::KernelDimension: return "KernelDimension";
    case ErrorKind::UnexpectedKernelDim: return "UnexpectedKernelDim";
    case ErrorKind::DependentV: return "DependentV";
    case ErrorKind::RankDrop: return "RankDrop";
    case ErrorKind::DegenerateColumn: return "DegenerateColumn";
    case ErrorKind::FiberCase: return "FiberCase";
    case ErrorKind::NotFiberCase: return "NotFiberCase";
    case ErrorKind::ZeroCountMismatch: return "ZeroCountMismatch";
    case ErrorKind::NotIsotrivial: return "NotIsotrivial";
    case ErrorKind::Quadrature: return "Quadrature";
    case ErrorKind::HbarMismatch: return "HbarMismatch";
    case ErrorKind::ZeroF0: return "ZeroF0";
    case ErrorKind::NotARoot: return "NotARoot";
    case ErrorKind::NoCyclicGenerator: return "NoCyclicGenerator";
    case ErrorKind::NotPrincipal: return "NotPrincipal";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind k, const std::string& msg, double value = 0.0)
      : std::runtime_error(std::string(kind_name(k)) + ": " + msg), kind_(k), value_(value) {}
  ErrorKind kind() const { return kind_; }
  // diagnostic number attached by the thrower (residual, distance, dimension ...)
  double value() const { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

}  // namespace ncp
