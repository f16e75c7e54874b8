#pragma once

#include <stdexcept>
#include <string>

namespace rocoin {

/// Input data violates a schema or type invariant (bad capacity, duplicate
/// id, dangling reference, malformed file content).
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A planning stage cannot produce a feasible result. `stage()` names the
/// stage that failed ("grouping", "partitioning", "matching").
class InfeasibleError : public std::runtime_error {
public:
  InfeasibleError(std::string stage, const std::string& msg)
      : std::runtime_error(stage + ": " + msg), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

/// File-level problem: missing file, unreadable stream, parse failure.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numeric routine exceeded its iteration budget. Carries the residual it
/// reached so callers can report how close it got.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& msg, double achieved_residual)
      : std::runtime_error(msg), achieved_residual_(achieved_residual) {}

  double achieved_residual() const { return achieved_residual_; }

private:
  double achieved_residual_;
};

}  // namespace rocoin
