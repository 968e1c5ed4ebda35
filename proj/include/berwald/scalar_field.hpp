#pragma once

#include <string_view>

#include "berwald/expression.hpp"
#include "berwald/jet.hpp"

namespace berwald {

// A function of (t, r) given by an expression with its parameters bound.
class ScalarField {
 public:
  ScalarField();  // identically zero
  ScalarField(Expression e, const ParamMap& params);
  static ScalarField parse(std::string_view source, const ParamMap& params = {});

  Jet2 jet(double t, double r) const;
  double value(double t, double r) const;

  const Expression& expression() const { return expr_; }
  bool is_literal_zero() const { return expr_.is_literal_zero(); }

 private:
  Expression expr_;
  Program program_;
};

Jet2 eval_jet2(const Expression& e, double t, double r, const ParamMap& params);

}  // namespace berwald
