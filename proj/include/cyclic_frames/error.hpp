#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cyclic_frames {

enum class ErrorKind {
  InvalidArgument,
  NonHermitian,
  NoConvergence,
  NotPositiveDefinite,
  NotAFrame,
  DependentInput,
  RepeatedRoot,
  ZeroCoordinate,
  SingularU,
  WrongSupportSize,
  NotCyclic,
  SurvivorNotAFrame,
  VerificationFailed,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::DependentInput: return "DependentInput";
    case ErrorKind::RepeatedRoot: return "RepeatedRoot";
    case ErrorKind::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorKind::SingularU: return "SingularU";
    case ErrorKind::WrongSupportSize: return "WrongSupportSize";
    case ErrorKind::NotCyclic: return "NotCyclic";
    case ErrorKind::SurvivorNotAFrame: return "SurvivorNotAFrame";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

/// Single exception type for the library; callers branch on kind().
class FrameError : public std::runtime_error {
 public:
  FrameError(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cyclic_frames
