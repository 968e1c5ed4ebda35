#pragma once

// Per-class construction of the metrizing Finsler function L and, for
// Classes 3-5, of the affinely equivalent quadratic metric A.

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "berwald/classifier.hpp"
#include "berwald/potential.hpp"

namespace berwald {

// Jet over (t, r, theta, phi, tdot, rdot, thetadot, phidot). Built forms
// leave the position-position Hessian block NaN wherever a potential is
// involved; only the position-velocity and velocity-velocity blocks and
// the gradient are meaningful.
using Jet8 = Taylor<8>;

enum Slot { kSlotT = 0, kSlotR, kSlotTheta, kSlotPhi, kSlotTdot, kSlotRdot, kSlotThetadot, kSlotPhidot };

std::array<Jet8, 8> jet_coordinates(const TangentPoint& p);

class FinslerFunction {
 public:
  virtual ~FinslerFunction() = default;
  virtual Jet8 evaluate(const TangentPoint& p) const = 0;
  double value(const TangentPoint& p) const { return evaluate(p).v; }
  // Inside the conic domain where the formula is smooth.
  virtual bool in_domain(const TangentPoint& p) const { return p.valid(); }
  virtual std::string formula() const = 0;
};

// Metric coefficients and their first partials at one point.
struct MetricJet {
  Eigen::Matrix4d g;
  std::array<Eigen::Matrix4d, 4> dg;  // dg[c] = d_c g
};

// A Finsler function that is quadratic in the velocities.
class RiemannForm : public FinslerFunction {
 public:
  // a_ab = 1/2 of the velocity Hessian.
  Eigen::Matrix4d coefficients(double t, double r, double theta) const;
  // Coefficients and their position derivatives from the mixed Hessian block.
  MetricJet metric_jet(double t, double r, double theta) const;
  // A velocity inside the domain at which coefficients are read off.
  virtual Vec4 reference_velocity(double t, double r) const;
  // Pieces of the domain on which the formula is a single quadratic.
  virtual int branch(const TangentPoint&) const { return 0; }
};

// L given as an expression in t, r, theta, phi, tdot, rdot, thetadot, phidot.
class ExpressionFinsler : public FinslerFunction {
 public:
  ExpressionFinsler(const std::string& source, const ParamMap& params);
  Jet8 evaluate(const TangentPoint& p) const override;
  bool in_domain(const TangentPoint& p) const override;
  std::string formula() const override { return source_; }

 private:
  std::string source_;
  Program program_;
};

// Same as ExpressionFinsler but quadratic by assertion of the caller.
class ExpressionMetric : public RiemannForm {
 public:
  ExpressionMetric(const std::string& source, const ParamMap& params) : inner_(source, params) {}
  Jet8 evaluate(const TangentPoint& p) const override { return inner_.evaluate(p); }
  bool in_domain(const TangentPoint& p) const override { return inner_.in_domain(p); }
  std::string formula() const override { return inner_.formula(); }

 private:
  ExpressionFinsler inner_;
};

// Class 1: L = e^psi u^{2-2 lambda} (v + rho u^2)^lambda.
class PowerLawFinsler : public FinslerFunction {
 public:
  PowerLawFinsler(ConnectionProfile conn, double lambda, Potential psi);
  Jet8 evaluate(const TangentPoint& p) const override;
  bool in_domain(const TangentPoint& p) const override;
  std::string formula() const override;

  double lambda() const { return lambda_; }
  Jet2 rho(double t, double r) const;
  const Potential& log_scale() const { return psi_; }

 private:
  ConnectionProfile conn_;
  double lambda_;
  Potential psi_;
};

// Class 2: L = e^psi u^2 exp(mu v / u^2).
class ExponentialFinsler : public FinslerFunction {
 public:
  ExponentialFinsler(ConnectionProfile conn, Potential psi);
  Jet8 evaluate(const TangentPoint& p) const override;
  bool in_domain(const TangentPoint& p) const override;
  std::string formula() const override;

  Jet2 mu(double t, double r) const;
  const Potential& log_scale() const { return psi_; }

 private:
  ConnectionProfile conn_;
  Potential psi_;
};

// Free function of one variable s.
class Theta {
 public:
  enum class Kind { kIdentity, kSquare, kExpression };
  Theta() = default;
  static Theta identity() { return Theta(); }
  static Theta square();
  static Theta expression(const std::string& source, const ParamMap& params = {});

  Kind kind() const { return kind_; }
  std::string describe() const;
  Jet8 operator()(const Jet8& s) const;

 private:
  Kind kind_ = Kind::kIdentity;
  std::string source_;
  Program program_;
};

// Potentials of Class 3: dG = (G, H), dK = (k8, k9) and
// dM = 2 e^{-(G - 2K)} b (k4, k6); M carries the chosen constant.
struct Class3Potentials {
  ConnectionProfile conn;
  Potential G, K, M;
  double M_shift = 0.0;

  // Delta = M e^G (2ab + c) - b^2 e^{2K}
  double delta(double t, double r) const;
};

// Class 3: L = e^G u^2 Theta(z e^{-(G - 2K)} + M), z = v / u^2.
class Class3Finsler : public FinslerFunction {
 public:
  Class3Finsler(std::shared_ptr<const Class3Potentials> pot, Theta theta);
  Jet8 evaluate(const TangentPoint& p) const override;
  bool in_domain(const TangentPoint& p) const override;
  std::string formula() const override;

 private:
  std::shared_ptr<const Class3Potentials> pot_;
  Theta theta_;
};

// Class 3: A = v e^{2K} + e^G M u^2.
class Class3Metric : public RiemannForm {
 public:
  explicit Class3Metric(std::shared_ptr<const Class3Potentials> pot) : pot_(std::move(pot)) {}
  Jet8 evaluate(const TangentPoint& p) const override;
  std::string formula() const override;
  const Class3Potentials& potentials() const { return *pot_; }

 private:
  std::shared_ptr<const Class3Potentials> pot_;
};

enum class Signature { kLorentzian, kEuclidean };

// Flat 2D metric h on the tr block transported by the connection.
class TransportedMetric {
 public:
  TransportedMetric(ConnectionProfile conn, const Grid& grid, std::array<double, 3> h0);
  // (h_tt, h_tr, h_rr) with first partials from the compatibility equation.
  std::array<Jet2, 3> jets(double t, double r) const;
  std::array<double, 3> value(double t, double r) const;
  Residual path_independence(double tol = 1e-8) const;

 private:
  std::array<double, 3> advance(std::array<double, 3> h, double t0, double r0, double t1,
                                double r1, bool t_first) const;
  std::array<double, 3> derivative(const std::array<double, 3>& h, double t, double r,
                                   int axis) const;

  ConnectionProfile conn_;
  Grid grid_;
  std::vector<std::array<double, 3>> nodes_;
};

// Class 4: A = h_tt tdot^2 + 2 h_tr tdot rdot + h_rr rdot^2 -/+ w^2.
class Class4Metric : public RiemannForm {
 public:
  Class4Metric(std::shared_ptr<const TransportedMetric> h, Signature sig) : h_(std::move(h)), sig_(sig) {}
  Jet8 evaluate(const TangentPoint& p) const override;
  std::string formula() const override;
  const TransportedMetric& transported() const { return *h_; }

 private:
  std::shared_ptr<const TransportedMetric> h_;
  Signature sig_;
};

// Class 5: A = C1 e^{-2 phi} |Q| + C2 w^2, Q = -a3 tdot^2 + 2 a1 tdot rdot + a2 rdot^2.
class Class5Metric : public RiemannForm {
 public:
  Class5Metric(ConnectionProfile conn, Potential phi, double c1, double c2);
  Jet8 evaluate(const TangentPoint& p) const override;
  bool in_domain(const TangentPoint& p) const override;
  std::string formula() const override;
  Vec4 reference_velocity(double t, double r) const override;
  int branch(const TangentPoint& p) const override;  // sign of Q

  const Potential& phi() const { return phi_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }

 private:
  ConnectionProfile conn_;
  Potential phi_;
  double c1_, c2_;
};

// One-forms whose potentials the builders integrate.
JetForm power_law_form(const ConnectionProfile& conn, double lambda);
JetForm exponential_form(const ConnectionProfile& conn);
OneForm class5_phi_form(const ConnectionProfile& conn);

struct MetrizeOptions {
  Signature signature = Signature::kLorentzian;
  double C1 = 1.0, C2 = -1.0;
  Theta theta;
  double closedness_tol = 1e-8;
  double lambda_tol = 1e-8;
};

struct Metrization {
  int class_label = 0;
  std::shared_ptr<const FinslerFunction> finsler;  // Classes 1-3
  std::shared_ptr<const RiemannForm> riemann;      // Classes 3-5
  std::map<std::string, double> constants;
  std::vector<Residual> certificates;              // closedness, path independence
  std::vector<Potential> potentials;               // for grid tables
};

// lambda = F/D, constant on the grid up to lambda_tol.
double power_law_lambda(const ConnectionProfile& conn, const Grid& grid, double tol = 1e-8);

std::shared_ptr<PowerLawFinsler> build_power_law(const ConnectionProfile& conn, const Grid& grid,
                                                 const MetrizeOptions& opt = {},
                                                 std::vector<Residual>* certs = nullptr);
std::shared_ptr<ExponentialFinsler> build_exponential(const ConnectionProfile& conn,
                                                      const Grid& grid,
                                                      const MetrizeOptions& opt = {},
                                                      std::vector<Residual>* certs = nullptr);
std::shared_ptr<const Class3Potentials> build_class3_potentials(
    const ConnectionProfile& conn, const Grid& grid, const MetrizeOptions& opt = {},
    std::vector<Residual>* certs = nullptr);
std::shared_ptr<Class4Metric> build_class4(const ConnectionProfile& conn, const Grid& grid,
                                           const MetrizeOptions& opt = {},
                                           std::vector<Residual>* certs = nullptr);
std::shared_ptr<Class5Metric> build_class5(const ConnectionProfile& conn, const Grid& grid,
                                           const MetrizeOptions& opt = {},
                                           std::vector<Residual>* certs = nullptr);

// Dispatches on the class label.
Metrization metrize(const ConnectionProfile& conn, const Grid& grid, int class_label,
                    const MetrizeOptions& opt = {});

}  // namespace berwald
