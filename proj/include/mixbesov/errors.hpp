#ifndef MIXBESOV_ERRORS_HPP
#define MIXBESOV_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mixbesov {

enum class ErrorCode {
  NonPowerOfTwo,
  NonPositiveWindow,
  EvaluatorReturnedNonFinite,
  NonFiniteValue,
  IoError,
  BadMagic,
  UnsupportedVersion,
  TruncatedPayload,
  ExponentOutOfRange,
  DomainExceedsWindow,
  GridMismatch,
  LagExceedsWindow,
  ResolutionTooCoarse,
  CovarianceNotPSD,
  GridTooLargeForDense,
  ModeCountExceedsGrid,
  ExponentOrderingViolated,
  InsufficientLagLevels,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPowerOfTwo: return "NonPowerOfTwo";
    case ErrorCode::NonPositiveWindow: return "NonPositiveWindow";
    case ErrorCode::EvaluatorReturnedNonFinite: return "EvaluatorReturnedNonFinite";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::DomainExceedsWindow: return "DomainExceedsWindow";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::LagExceedsWindow: return "LagExceedsWindow";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::CovarianceNotPSD: return "CovarianceNotPSD";
    case ErrorCode::GridTooLargeForDense: return "GridTooLargeForDense";
    case ErrorCode::ModeCountExceedsGrid: return "ModeCountExceedsGrid";
    case ErrorCode::ExponentOrderingViolated: return "ExponentOrderingViolated";
    case ErrorCode::InsufficientLagLevels: return "InsufficientLagLevels";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class WarningKind { SupportMarginViolated, TruncatedBlock };

constexpr std::string_view to_string(WarningKind kind) {
  switch (kind) {
    case WarningKind::SupportMarginViolated: return "SupportMarginViolated";
    case WarningKind::TruncatedBlock: return "TruncatedBlock";
  }
  return "Unknown";
}

struct Warning {
  WarningKind kind;
  std::string detail;
};

/// Collects non-fatal conditions. Operations that may warn take an optional
/// pointer; passing nullptr discards warnings.
class Diagnostics {
 public:
  void warn(WarningKind kind, std::string detail) {
    warnings_.push_back({kind, std::move(detail)});
  }
  const std::vector<Warning>& warnings() const noexcept { return warnings_; }
  bool has(WarningKind kind) const noexcept {
    for (const auto& w : warnings_)
      if (w.kind == kind) return true;
    return false;
  }
  bool empty() const noexcept { return warnings_.empty(); }

 private:
  std::vector<Warning> warnings_;
};

inline void warn_if(Diagnostics* diag, WarningKind kind, std::string detail) {
  if (diag) diag->warn(kind, std::move(detail));
}

}  // namespace mixbesov

#endif  // MIXBESOV_ERRORS_HPP
