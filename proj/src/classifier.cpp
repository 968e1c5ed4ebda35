#include "berwald/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "berwald/errors.hpp"

namespace berwald {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kYes:
      return "yes";
    case Verdict::kNo:
      return "no";
    default:
      return "undetermined";
  }
}

std::string to_string(ZeroStatus s) {
  switch (s) {
    case ZeroStatus::kZero:
      return "zero";
    case ZeroStatus::kNonZero:
      return "nonzero";
    default:
      return "undetermined";
  }
}

ZeroStatus GridQuantity::status() const {
  if (nonzero_nodes > 0) return ZeroStatus::kNonZero;
  if (undetermined_nodes > 0) return ZeroStatus::kUndetermined;
  return ZeroStatus::kZero;
}

const GridQuantity* FinslerResiduals::find(const std::string& name) const {
  for (const auto& q : quantities) {
    if (q.name == name) return &q;
  }
  return nullptr;
}

namespace {

// Accumulates the node-wise zero test of one quantity.
class Tally {
 public:
  Tally(std::string name, const ClassifierTolerances& tol) : tol_(tol) { q_.name = std::move(name); }

  ZeroStatus add(double x, double magnitude, double amax, double t, double r) {
    const double scale = 1.0 + amax + magnitude;
    const double scaled = std::fabs(x) / scale;
    q_.max_abs = std::max(q_.max_abs, std::fabs(x));
    if (q_.where.empty() || scaled > q_.max_scaled || std::isnan(scaled)) {
      q_.max_scaled = scaled;
      q_.where = {t, r};
    }
    ZeroStatus s;
    if (scaled <= tol_.zero) {
      s = ZeroStatus::kZero;
      ++q_.zero_nodes;
    } else if (scaled > tol_.nonzero || std::isnan(scaled)) {
      s = ZeroStatus::kNonZero;
      ++q_.nonzero_nodes;
    } else {
      s = ZeroStatus::kUndetermined;
      ++q_.undetermined_nodes;
    }
    return s;
  }

  const GridQuantity& quantity() const { return q_; }

 private:
  GridQuantity q_;
  ClassifierTolerances tol_;
};

struct Node {
  double t, r;
  CurvatureProfile cp;
};

double max_abs_k(const std::array<Jet2, 12>& k) {
  double m = 0.0;
  for (const auto& x : k) m = std::max(m, std::fabs(x.v));
  return m;
}

std::vector<Node> nodes_of(const ConnectionProfile& conn, const Grid& grid,
                           const ClassifierTolerances& tol) {
  std::vector<Node> out;
  out.reserve(grid.size());
  for (int i = 0; i < grid.nt; ++i) {
    for (int j = 0; j < grid.nr; ++j) {
      const double t = grid.t(i), r = grid.r(j);
      const auto k = conn.jets(t, r);
      if (k[10].v != 0.0 || k[11].v != 0.0) {
        throw UnsupportedConnection("k11 or k12 is nonzero at (t, r) = (" + std::to_string(t) +
                                    ", " + std::to_string(r) + ")");
      }
      out.push_back({t, r, curvature_profile(k, t, r, tol.zero * (1.0 + max_abs_k(k)))});
    }
  }
  return out;
}

// Velocities at which the bracket proportionality is probed.
const TangentPoint kProbes[3] = {{0, 0, 1.0, 0, 1.0, 0.3, 0.2, 0.1},
                                 {0, 0, 1.0, 0, 0.5, -0.7, 0.4, 0.9},
                                 {0, 0, 1.0, 0, 1.3, 0.2, -0.6, 0.5}};

WCorner grid_corner(const std::vector<Node>& nodes) {
  int zero = 0, nonzero = 0;
  for (const Node& n : nodes) {
    if (n.cp.corner == WCorner::kK10Degenerate) {
      throw K10Degenerate("k10 vanishes while k7, k8 or k9 does not at (t, r) = (" +
                          std::to_string(n.t) + ", " + std::to_string(n.r) + ")");
    }
    (n.cp.corner == WCorner::kZero ? zero : nonzero)++;
  }
  if (zero > 0 && nonzero > 0) {
    throw MixedClass("w-corner vanishes at " + std::to_string(zero) + " nodes and not at " +
                     std::to_string(nonzero));
  }
  return zero > 0 ? WCorner::kZero : WCorner::kNonZero;
}

}  // namespace

FinslerResiduals check_finsler_constraints(const ConnectionProfile& conn, const Grid& grid,
                                           const ClassifierTolerances& tol) {
  if (grid.size() == 0) throw ConfigError("empty grid");
  const std::vector<Node> nodes = nodes_of(conn, grid, tol);
  FinslerResiduals fr;
  fr.corner = grid_corner(nodes);

  std::vector<Tally> tallies;
  auto tally = [&](const std::string& name) -> Tally& {
    for (auto& t : tallies) {
      if (t.quantity().name == name) return t;
    }
    tallies.emplace_back(name, tol);
    return tallies.back();
  };
  // Declare in report order.
  if (fr.corner == WCorner::kNonZero) {
    for (const char* n : {"A", "B", "C", "a6-a*a7", "a8-b*a7", "a9-(ab+c)*a7", "a10-a*a11",
                          "a12-b*a11", "a13-(ab+c)*a11"}) {
      tally(n);
    }
  } else {
    for (int i = 6; i <= 13; ++i) tally("a" + std::to_string(i));
  }
  tally("prop[t,[t,r]]");
  tally("prop[r,[t,r]]");

  for (const Node& n : nodes) {
    const CurvatureProfile& cp = n.cp;
    const double amax = cp.max_abs_a();
    auto A = [&](int i) { return cp.ai(i).v; };
    if (fr.corner == WCorner::kNonZero) {
      const double a = cp.abc_a.v, b = cp.abc_b.v, c = cp.abc_c.v;
      const double ab_c = a * b + c, two_ab_c = 2 * a * b + c;
      const double x13 = a * A(1) + A(2), x34 = a * A(3) + A(4);
      tally("A").add(b * x13 + ab_c * x34 - A(5) * two_ab_c,
                     std::fabs(b * x13) + std::fabs(ab_c * x34) + std::fabs(A(5) * two_ab_c),
                     amax, n.t, n.r);
      tally("B").add(a * x34 - x13, std::fabs(a * x34) + std::fabs(x13), amax, n.t, n.r);
      tally("C").add(ab_c * A(3) + b * x34 + b * (A(1) - 2 * A(5)),
                     std::fabs(ab_c * A(3)) + std::fabs(b * x34) +
                         std::fabs(b * (A(1) - 2 * A(5))),
                     amax, n.t, n.r);
      auto rel = [&](const char* name, double lhs, double coef, double rhs) {
        tally(name).add(lhs - coef * rhs, std::fabs(lhs) + std::fabs(coef * rhs), amax, n.t, n.r);
      };
      rel("a6-a*a7", A(6), a, A(7));
      rel("a8-b*a7", A(8), b, A(7));
      rel("a9-(ab+c)*a7", A(9), ab_c, A(7));
      rel("a10-a*a11", A(10), a, A(11));
      rel("a12-b*a11", A(12), b, A(11));
      rel("a13-(ab+c)*a11", A(13), ab_c, A(11));
    } else {
      for (int i = 6; i <= 13; ++i) tally("a" + std::to_string(i)).add(A(i), 0.0, amax, n.t, n.r);
    }
    for (const TangentPoint& probe : kProbes) {
      TangentPoint p = probe;
      p.t = n.t;
      p.r = n.r;
      const Vec4 w = bracket(cp, p, kT, kR);
      for (int c : {kT, kR}) {
        const Vec4 u = bracket2(cp, p, c, kT, kR);
        double worst = 0.0, mag = 0.0;
        for (int x = 0; x < 4; ++x) {
          for (int y = x + 1; y < 4; ++y) {
            const double m = u[x] * w[y] - u[y] * w[x];
            if (std::fabs(m) >= std::fabs(worst)) {
              worst = m;
              mag = std::fabs(u[x] * w[y]) + std::fabs(u[y] * w[x]);
            }
          }
        }
        tally(c == kT ? "prop[t,[t,r]]" : "prop[r,[t,r]]").add(worst, mag, amax, n.t, n.r);
      }
    }
  }

  bool any_nonzero = false, any_undetermined = false;
  for (const Tally& t : tallies) {
    fr.quantities.push_back(t.quantity());
    const ZeroStatus s = t.quantity().status();
    any_nonzero |= s == ZeroStatus::kNonZero;
    any_undetermined |= s == ZeroStatus::kUndetermined;
  }
  fr.verdict = any_nonzero ? Verdict::kNo : any_undetermined ? Verdict::kUndetermined
                                                             : Verdict::kYes;
  return fr;
}

int assign_class(const ConnectionProfile& conn, const Grid& grid, const FinslerResiduals& fr,
                 const ClassifierTolerances& tol, std::vector<GridQuantity>* evidence) {
  const std::vector<Node> nodes = nodes_of(conn, grid, tol);
  std::map<int, int> votes;  // class -> node count; 0 = no class, -1 = undetermined

  if (fr.corner == WCorner::kNonZero) {
    Tally D("D", tol), E("E", tol), F("F", tol);
    for (const Node& n : nodes) {
      const CurvatureProfile& cp = n.cp;
      const double amax = cp.max_abs_a();
      const double a = cp.abc_a.v, a1 = cp.ai(1).v, a3 = cp.ai(3).v, a5 = cp.ai(5).v;
      const ZeroStatus sd = D.add(cp.D.v, std::fabs(a * a3) + std::fabs(a1) + std::fabs(a5), amax,
                                  n.t, n.r);
      const ZeroStatus se = E.add(cp.E.v, std::fabs(cp.E.v), amax, n.t, n.r);
      const ZeroStatus sf = F.add(cp.F.v, std::fabs(a * a3) + std::fabs(a1), amax, n.t, n.r);
      int label;
      if (sd == ZeroStatus::kNonZero) {
        label = 1;
      } else if (sd == ZeroStatus::kUndetermined || se == ZeroStatus::kUndetermined ||
                 sf == ZeroStatus::kUndetermined) {
        label = -1;
      } else if (se == ZeroStatus::kNonZero && sf == ZeroStatus::kNonZero) {
        label = 2;
      } else if (se == ZeroStatus::kZero && sf == ZeroStatus::kZero) {
        label = 3;
      } else {
        label = 0;
      }
      ++votes[label];
    }
    if (evidence) {
      evidence->push_back(D.quantity());
      evidence->push_back(E.quantity());
      evidence->push_back(F.quantity());
    }
  } else {
    Tally tr("[t,r]", tol), det("a1a4-a2a3", tol), variant("a1a3-a2a4", tol);
    for (const Node& n : nodes) {
      const CurvatureProfile& cp = n.cp;
      const double amax = cp.max_abs_a();
      double worst = 0.0;
      for (int i = 1; i <= 5; ++i) worst = std::max(worst, std::fabs(cp.ai(i).v));
      const ZeroStatus s = tr.add(worst, 0.0, amax, n.t, n.r);
      const double a1 = cp.ai(1).v, a2 = cp.ai(2).v, a3 = cp.ai(3).v, a4 = cp.ai(4).v;
      det.add(a1 * a4 - a2 * a3, std::fabs(a1 * a4) + std::fabs(a2 * a3), amax, n.t, n.r);
      variant.add(a1 * a3 - a2 * a4, std::fabs(a1 * a3) + std::fabs(a2 * a4), amax, n.t, n.r);
      ++votes[s == ZeroStatus::kZero ? 4 : s == ZeroStatus::kNonZero ? 5 : -1];
    }
    // Class 5 needs a1 a4 - a2 a3 != 0; when it vanishes identically no
    // class applies.
    if (votes.count(5) && !votes.count(4) && !votes.count(-1) &&
        det.quantity().status() == ZeroStatus::kZero) {
      votes.clear();
      votes[0] = static_cast<int>(nodes.size());
    }
    if (evidence) {
      evidence->push_back(tr.quantity());
      evidence->push_back(det.quantity());
      evidence->push_back(variant.quantity());
    }
  }

  if (votes.size() > 1) {
    std::string parts;
    for (const auto& [label, count] : votes) {
      if (!parts.empty()) parts += ", ";
      parts += (label < 0 ? std::string("undetermined") : "class " + std::to_string(label)) +
               ": " + std::to_string(count) + " nodes";
    }
    if (votes.count(-1) && votes.size() == 2) return -1;
    throw MixedClass("class signature changes across the grid (" + parts + ")");
  }
  return votes.begin()->first;
}

void riemann_verdict(const ConnectionProfile& conn, ClassificationReport& report,
                     const ClassifierTolerances& tol) {
  const Grid& grid = report.grid;
  double worst = 0.0, worst_scaled = 0.0;
  Tally sym("a1+a4", tol);
  for (int i = 0; i < grid.nt; ++i) {
    for (int j = 0; j < grid.nr; ++j) {
      const double t = grid.t(i), r = grid.r(j);
      const auto k = conn.jets(t, r);
      const CurvatureProfile cp = curvature_profile(k, t, r, 0.0);
      const double amax = cp.max_abs_a();
      const double asym = ricci_asymmetry(cp);
      if (std::fabs(asym) > std::fabs(worst)) worst = asym;
      worst_scaled = std::max(worst_scaled, std::fabs(asym) / (1 + amax));
      sym.add(cp.ai(1).v + cp.ai(4).v, std::fabs(cp.ai(1).v) + std::fabs(cp.ai(4).v), amax, t, r);
    }
  }
  report.ricci_asymmetry = worst;
  report.holonomy = vertical_holonomy_rank(conn, sample_tangent_points(report.samples), tol.rank);

  switch (report.class_label) {
    case 1:
    case 2:
      report.riemann = Verdict::kNo;
      report.riemann_note = "power or exponential law; holonomy dimension 3";
      break;
    case 3:
    case 4:
      report.riemann = Verdict::kYes;
      report.riemann_note = "affinely equivalent quadratic metric exists";
      break;
    case 5: {
      report.evidence.push_back(sym.quantity());
      const ZeroStatus s = sym.quantity().status();
      report.riemann = s == ZeroStatus::kZero      ? Verdict::kYes
                       : s == ZeroStatus::kNonZero ? Verdict::kNo
                                                   : Verdict::kUndetermined;
      report.riemann_note = "yes iff a1 + a4 = 0 (symmetric Ricci tensor)";
      break;
    }
    default:
      report.riemann = report.finsler == Verdict::kNo ? Verdict::kNo : Verdict::kUndetermined;
      report.riemann_note = report.finsler == Verdict::kNo ? "not Finsler metrizable"
                                                           : "classification undetermined";
      return;
  }

  const int rank = report.holonomy.rank;
  const bool ricci_symmetric = worst_scaled < tol.ricci;
  if (report.riemann == Verdict::kYes && (rank > 2 || !ricci_symmetric)) {
    throw InternalInconsistency("class " + std::to_string(report.class_label) +
                                " is Riemann metrizable but holonomy rank is " +
                                std::to_string(rank) + " and Ricci asymmetry " +
                                std::to_string(worst));
  }
  if ((report.class_label == 1 || report.class_label == 2) && rank != 3) {
    throw InternalInconsistency("class " + std::to_string(report.class_label) +
                                " with holonomy rank " + std::to_string(rank));
  }
  if (report.class_label >= 3 && rank > 2) {
    throw InternalInconsistency("class " + std::to_string(report.class_label) +
                                " with holonomy rank 3");
  }
}

ClassificationReport classify(const ConnectionProfile& conn, const Grid& grid,
                              const SampleOptions& samples, const ClassifierTolerances& tol) {
  ClassificationReport report;
  report.grid = grid;
  report.samples = samples;
  report.samples.box = grid.box;
  const FinslerResiduals fr = check_finsler_constraints(conn, grid, tol);
  report.evidence = fr.quantities;
  report.finsler = fr.verdict;
  if (fr.verdict == Verdict::kYes) {
    const int label = assign_class(conn, grid, fr, tol, &report.evidence);
    if (label < 0) {
      report.finsler = Verdict::kUndetermined;
      report.notes.push_back("class signature inside the undetermined band");
    } else if (label == 0) {
      report.finsler = Verdict::kNo;
      report.notes.push_back(fr.corner == WCorner::kZero
                                 ? "a1 a4 - a2 a3 vanishes identically: no class applies"
                                 : "D = 0 with exactly one of E, F zero: no class applies");
    } else {
      report.class_label = label;
    }
  }
  if (report.class_label == 5) {
    for (const auto& q : report.evidence) {
      if (q.name == "a1a3-a2a4" && q.status() != ZeroStatus::kNonZero) {
        report.notes.push_back(
            "a1 a3 - a2 a4 vanishes somewhere; the lemma's a1 a4 - a2 a3 is used instead");
      }
    }
  }
  riemann_verdict(conn, report, tol);
  return report;
}

}  // namespace berwald
