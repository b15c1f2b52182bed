#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbch {

enum class ErrorKind {
  InvalidArgument,
  Overflow,
  HorizonSingular,
  CurveSingular,
  DegenerateEta,
  OutOfCanonicalDomain,
  NotUnimodular,
  TruncationUnreliable,
  StepTooCoarse,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::HorizonSingular: return "HorizonSingular";
    case ErrorKind::CurveSingular: return "CurveSingular";
    case ErrorKind::DegenerateEta: return "DegenerateEta";
    case ErrorKind::OutOfCanonicalDomain: return "OutOfCanonicalDomain";
    case ErrorKind::NotUnimodular: return "NotUnimodular";
    case ErrorKind::TruncationUnreliable: return "TruncationUnreliable";
    case ErrorKind::StepTooCoarse: return "StepTooCoarse";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the ErrorKind tags;
/// the CLI prints error_name(kind()) on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace cbch
