#pragma once

// Finsler and Riemann metrizability verdicts and the five-class split.

#include <string>
#include <vector>

#include "berwald/brackets.hpp"
#include "berwald/sampling.hpp"

namespace berwald {

enum class Verdict { kYes, kNo, kUndetermined };
std::string to_string(Verdict v);

enum class ZeroStatus { kZero, kNonZero, kUndetermined };
std::string to_string(ZeroStatus s);

struct ClassifierTolerances {
  // |x| <= zero * scale counts as 0 and |x| > nonzero * scale as nonzero,
  // with scale = 1 + max|a_i| + the magnitude of the terms of x.
  double zero = 1e-9;
  double nonzero = 1e-6;
  double rank = 1e-8;
  double ricci = 1e-8;
};

// A function of (t, r) tested against zero on the grid.
struct GridQuantity {
  std::string name;
  double max_abs = 0.0;
  double max_scaled = 0.0;  // max |x| / scale
  std::vector<double> where;  // (t, r) of max_scaled
  int zero_nodes = 0, nonzero_nodes = 0, undetermined_nodes = 0;

  // kZero when zero at every node, kNonZero when nonzero at some node.
  ZeroStatus status() const;
  bool nonzero_everywhere() const { return zero_nodes == 0 && undetermined_nodes == 0; }
};

struct FinslerResiduals {
  WCorner corner = WCorner::kNonZero;
  Verdict verdict = Verdict::kUndetermined;
  std::vector<GridQuantity> quantities;

  const GridQuantity* find(const std::string& name) const;
};

struct ClassificationReport {
  Verdict finsler = Verdict::kUndetermined;
  int class_label = 0;  // 0 when no class applies
  Verdict riemann = Verdict::kUndetermined;
  std::string riemann_note;
  double ricci_asymmetry = 0.0;  // value of largest magnitude on the grid
  RankResult holonomy;
  std::vector<GridQuantity> evidence;
  std::vector<std::string> notes;
  Grid grid;
  SampleOptions samples;
};

FinslerResiduals check_finsler_constraints(const ConnectionProfile& conn, const Grid& grid,
                                           const ClassifierTolerances& tol = {});

// Class 1..5, or 0 when the D/E/F combination (or a vanishing
// a1 a4 - a2 a3 in the w-corner-zero branch) fits none. Appends the
// signature quantities to evidence. Throws MixedClass when grid nodes
// disagree.
int assign_class(const ConnectionProfile& conn, const Grid& grid, const FinslerResiduals& fr,
                 const ClassifierTolerances& tol, std::vector<GridQuantity>* evidence);

// Fills riemann, ricci_asymmetry and holonomy of a report whose class is
// set. Throws InternalInconsistency when the verdict contradicts the rank
// or the Ricci asymmetry.
void riemann_verdict(const ConnectionProfile& conn, ClassificationReport& report,
                     const ClassifierTolerances& tol = {});

ClassificationReport classify(const ConnectionProfile& conn, const Grid& grid,
                              const SampleOptions& samples, const ClassifierTolerances& tol = {});

}  // namespace berwald
