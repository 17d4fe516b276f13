#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bnf {

/// Process exit codes shared by the CLI and the error hierarchy.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitResonance = 3,
  kExitConditioning = 4,
  kExitOracleDrift = 5,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual int exit_code() const { return kExitFailure; }
  virtual std::string hint() const { return {}; }
};

class InvalidInput : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitValidation; }
};

class DimensionMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& what, int line = 0)
      : InvalidInput(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, std::vector<int> shift, int fourier, double divisor)
      : Error(what), shift_(std::move(shift)), fourier_(fourier), divisor_(divisor) {}
  int exit_code() const override { return kExitResonance; }
  std::string hint() const override {
    return "raise the resonance threshold only if the angles are known to be non-resonant, "
           "or lower the truncation order";
  }
  const std::vector<int>& shift() const { return shift_; }
  int fourier() const { return fourier_; }
  double divisor() const { return divisor_; }

 private:
  std::vector<int> shift_;
  int fourier_;
  double divisor_;
};

class NonNilpotentError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class OrderingError : public Error {
 public:
  using Error::Error;
};

class JetDepthError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, double cond) : Error(what), cond_(cond) {}
  int exit_code() const override { return kExitConditioning; }
  std::string hint() const override { return "add more periods l to the trace data"; }
  double condition_number() const { return cond_; }

 private:
  double cond_;
};

class InconsistentDataError : public Error {
 public:
  InconsistentDataError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  int exit_code() const override { return kExitConditioning; }
  double residual() const { return residual_; }

 private:
  double residual_;
};

class UnsafeWindowError : public Error {
 public:
  UnsafeWindowError(const std::string& what, double drift) : Error(what), drift_(drift) {}
  int exit_code() const override { return kExitOracleDrift; }
  std::string hint() const override { return "shrink the energy window or enlarge the basis cut"; }
  double drift() const { return drift_; }

 private:
  double drift_;
};

class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, double leak) : Error(what), leak_(leak) {}
  int exit_code() const override { return kExitOracleDrift; }
  double leak() const { return leak_; }

 private:
  double leak_;
};

class BudgetExceeded : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

}  // namespace bnf
