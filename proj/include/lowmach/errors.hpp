#pragma once

#include <stdexcept>
#include <string>

namespace lowmach {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A field that must be mean-free reached an operator with a nonzero mean.
class NonZeroMean : public Error {
 public:
  using Error::Error;
};

class NotSolenoidal : public Error {
 public:
  using Error::Error;
};

class NegativeDensity : public Error {
 public:
  using Error::Error;
};

/// k = 0 reached the per-mode principal inversion.
class DegenerateMode : public Error {
 public:
  using Error::Error;
};

/// A smallness gate (a0, E, eps0, linearized gate) was violated without --force.
class GateViolation : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(std::string stage, int iterations, double last_update)
      : Error(stage + ": no convergence after " + std::to_string(iterations) +
              " iterations (last update " + std::to_string(last_update) + ")"),
        stage_(std::move(stage)),
        iterations_(iterations),
        last_update_(last_update) {}

  const std::string& stage() const { return stage_; }
  int iterations() const { return iterations_; }
  double last_update() const { return last_update_; }

 private:
  std::string stage_;
  int iterations_;
  double last_update_;
};

/// Update norm doubled on two consecutive inner iterations.
class InnerDivergence : public NoConvergence {
 public:
  InnerDivergence(std::string stage, int iterations, double last_update)
      : NoConvergence(std::move(stage) + " (diverging)", iterations, last_update) {}
};

}  // namespace lowmach
