#include "berwald/scalar_field.hpp"

namespace berwald {

namespace {
const std::vector<std::string>& tr_names() {
  static const std::vector<std::string> names{"t", "r"};
  return names;
}
}  // namespace

ScalarField::ScalarField() : program_(expr_, tr_names(), {}) {}

ScalarField::ScalarField(Expression e, const ParamMap& params)
    : expr_(std::move(e)), program_(expr_, tr_names(), params) {}

ScalarField ScalarField::parse(std::string_view source, const ParamMap& params) {
  return ScalarField(berwald::parse(source), params);
}

Jet2 ScalarField::jet(double t, double r) const {
  const Jet2 vars[2] = {Jet2::variable(t, 0), Jet2::variable(r, 1)};
  return program_.evaluate(vars);
}

double ScalarField::value(double t, double r) const {
  const double vars[2] = {t, r};
  return program_.evaluate(vars);
}

Jet2 eval_jet2(const Expression& e, double t, double r, const ParamMap& params) {
  return ScalarField(e, params).jet(t, r);
}

}  // namespace berwald
