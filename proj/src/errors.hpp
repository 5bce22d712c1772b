// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace beamctl {

// Status values double as CLI exit codes.
enum class Status : int {
  Ok = 0,
  Internal = 1,
  Domain = 2,
  Uncontrollable = 3,
  Numerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(Status status, std::string cause, const std::string& message)
      : std::runtime_error(message), status_(status), cause_(std::move(cause)) {}

  Status status() const noexcept { return status_; }
  // Short machine-readable name, e.g. "ResonanceDefect".
  const std::string& cause() const noexcept { return cause_; }

 private:
  Status status_;
  std::string cause_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(Status::Domain, "DomainError", message) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& message)
      : Error(Status::Internal, "InternalError", message) {}
};

class StepSizeError : public Error {
 public:
  explicit StepSizeError(const std::string& message)
      : Error(Status::Numerical, "StepSizeError", message) {}
};

/// A mode with zero boundary-trace coefficient carries initial data; the
/// control cannot reach it.
class UncontrollableMode : public Error {
 public:
  UncontrollableMode(int mode, const std::string& message)
      : Error(Status::Uncontrollable, "UncontrollableMode", message), mode_(mode) {}
  int mode() const noexcept { return mode_; }

 private:
  int mode_;
};

/// Two collided exponential constraints demand different moments.
class ResonanceDefect : public Error {
 public:
  ResonanceDefect(int plus_mode, int minus_mode, double defect, double data_norm,
                  const std::string& message)
      : Error(Status::Uncontrollable, "ResonanceDefect", message),
        plus_mode_(plus_mode),
        minus_mode_(minus_mode),
        defect_(defect),
        data_norm_(data_norm) {}

  int plus_mode() const noexcept { return plus_mode_; }
  int minus_mode() const noexcept { return minus_mode_; }
  double defect() const noexcept { return defect_; }
  double data_norm() const noexcept { return data_norm_; }

 private:
  int plus_mode_;
  int minus_mode_;
  double defect_;
  double data_norm_;
};

class RationalResonance : public Error {
 public:
  explicit RationalResonance(const std::string& message)
      : Error(Status::Uncontrollable, "RationalResonance", message) {}
};

class NumericalRankDeficiency : public Error {
 public:
  NumericalRankDeficiency(unsigned precision_bits, double pivot_ratio,
                          const std::string& message)
      : Error(Status::Numerical, "NumericalRankDeficiency", message),
        precision_bits_(precision_bits),
        pivot_ratio_(pivot_ratio) {}

  unsigned precision_bits() const noexcept { return precision_bits_; }
  double pivot_ratio() const noexcept { return pivot_ratio_; }

 private:
  unsigned precision_bits_;
  double pivot_ratio_;
};

}  // namespace beamctl
