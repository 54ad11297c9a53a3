#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wavecascade {

// Argument outside the mathematical domain of an operation (negative radius,
// non-finite frequency, R^2 < 45 r^2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke an API contract (grid mismatch, empty series, non-convex test
// function handed to a convexity check).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical procedure did not reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Root bracket [lo, hi] does not straddle the target.
class BracketError : public NumericError {
 public:
  BracketError(const std::string& what, double f_lo, double f_hi, double target)
      : NumericError(what), f_lo_(f_lo), f_hi_(f_hi), target_(target) {}
  double f_lo() const noexcept { return f_lo_; }
  double f_hi() const noexcept { return f_hi_; }
  double target() const noexcept { return target_; }

 private:
  double f_lo_, f_hi_, target_;
};

// Kernel table would exceed the configured memory budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, std::size_t required_bytes)
      : std::runtime_error(what), required_bytes_(required_bytes) {}
  std::size_t required_bytes() const noexcept { return required_bytes_; }

 private:
  std::size_t required_bytes_;
};

// Time step could not keep the spectrum nonnegative after the maximum number
// of halvings. Carries the state at the start of the failed step.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(const std::string& what, std::vector<double> snapshot, double time)
      : std::runtime_error(what), snapshot_(std::move(snapshot)), time_(time) {}
  const std::vector<double>& snapshot() const noexcept { return snapshot_; }
  double time() const noexcept { return time_; }

 private:
  std::vector<double> snapshot_;
  double time_;
};

// File could not be read or written; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration text could not be turned into a RunConfig.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& reason)
      : std::runtime_error(format(key, line, reason)), key_(key), line_(line) {}
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& reason) {
    std::string msg = "config";
    if (line > 0) msg += " line " + std::to_string(line);
    if (!key.empty()) msg += " key '" + key + "'";
    return msg + ": " + reason;
  }
  std::string key_;
  int line_;
};

}  // namespace wavecascade
