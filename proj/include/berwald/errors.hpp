#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace berwald {

// Base of every library error. kind() is the stable diagnostic name used in
// reports and by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define BERWALD_ERROR(Name)                                                    \
  class Name : public Error {                                                  \
   public:                                                                     \
    explicit Name(const std::string& message) : Error(#Name, message) {}       \
  };

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected, const std::string& message)
      : Error("SyntaxError", message + " at offset " + std::to_string(position) + " (expected " +
                                 expected + ")"),
        position_(position),
        expected_(std::move(expected)) {}
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

BERWALD_ERROR(UnknownIdentifier)
BERWALD_ERROR(DomainError)
BERWALD_ERROR(UnboundParameter)
BERWALD_ERROR(UnsupportedConnection)
BERWALD_ERROR(K10Degenerate)
BERWALD_ERROR(InsufficientSamples)
BERWALD_ERROR(MixedClass)
BERWALD_ERROR(InternalInconsistency)
BERWALD_ERROR(LambdaNotConstant)
BERWALD_ERROR(LambdaEqualsOne)
BERWALD_ERROR(NotClosed)
BERWALD_ERROR(DeltaVanishes)
BERWALD_ERROR(PathDependent)
BERWALD_ERROR(NotRiemannMetrizable)
BERWALD_ERROR(SingularQuadratic)
BERWALD_ERROR(GradientNotClosed)
BERWALD_ERROR(Degenerate)
BERWALD_ERROR(ChartExit)
BERWALD_ERROR(StepFailure)
BERWALD_ERROR(ConfigError)
BERWALD_ERROR(NotMetrizable)

#undef BERWALD_ERROR

}  // namespace berwald
