#pragma once

// Job configuration: a line-oriented [section] / key = value text format.
// Values run to the end of the line; '#' starts a comment only at the
// beginning of a line.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "berwald/classifier.hpp"
#include "berwald/connection.hpp"
#include "berwald/metrizer.hpp"
#include "berwald/sampling.hpp"
#include "berwald/verifier.hpp"

namespace berwald::cli {

// A bad command line (exit status 64), as opposed to a bad config file.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message) : Error("UsageError", message) {}
};

struct TaskOptions {
  int class_override = 0;  // 0: classify first
  Signature signature = Signature::kLorentzian;
  double C1 = 1.0, C2 = -1.0;
  std::string theta = "identity";  // identity, square or an expression in s
  std::string L;                   // Finsler function checked by `verify`
  std::optional<TangentPoint> initial;
  double T = 0.5;
  int n_out = 100;
};

struct Tolerances {
  ClassifierTolerances classifier;
  VerifierTolerances verifier;
  double closedness = 1e-8;
  double lambda = 1e-8;

  // Names as listed by names(); UsageError for anything else.
  void set(const std::string& name, double value);
  std::map<std::string, double> values() const;
};

struct JobConfig {
  std::string source_name;
  std::map<std::string, std::string> connection;  // k1..k12
  ParamMap params;
  Grid grid;
  std::size_t sample_count = 50;
  std::uint64_t seed = 1;
  std::string domain;  // a sample is kept where this is > 0
  TaskOptions task;
  std::map<std::string, int> lines;  // "section.key" -> line number

  ConnectionProfile connection_profile() const;
  // Samples with the domain predicate and `extra` both applied.
  SampleOptions sample_options(std::function<bool(const TangentPoint&)> extra = {}) const;
  MetrizeOptions metrize_options(const Tolerances& tol) const;
};

JobConfig parse_config(std::istream& in, const std::string& source_name);
JobConfig load_config(const std::string& path);

// "NxM" -> (N, M), UsageError otherwise.
std::pair<int, int> parse_resolution(const std::string& text);
// Eight whitespace- or comma-separated numbers.
TangentPoint parse_state(const std::string& text);

}  // namespace berwald::cli
