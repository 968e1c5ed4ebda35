#pragma once

// Closed-form expressions: parsing, printing and evaluation over any scalar
// type that supports the jet operations (double, Taylor<N>).

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "berwald/errors.hpp"
#include "berwald/jet.hpp"

namespace berwald {

using ParamMap = std::map<std::string, double>;

enum class Func { Sin, Cos, Tan, Exp, Ln, Sqrt, Abs };

struct ExprNode {
  enum class Kind { Number, Ident, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string name;
  Func func = Func::Sin;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

class Expression {
 public:
  Expression();  // the constant 0
  explicit Expression(std::shared_ptr<const ExprNode> root, std::string source = {});

  const ExprNode& root() const { return *root_; }
  const std::string& source() const { return source_; }

  // Fully parenthesised form; parses back to an equivalent tree.
  std::string print() const;
  // Free identifiers other than the constant pi, sorted and unique.
  std::vector<std::string> identifiers() const;
  bool is_literal_zero() const;

 private:
  std::shared_ptr<const ExprNode> root_;
  std::string source_;
};

Expression parse(std::string_view source);

// An expression with identifiers resolved to variable slots or constants.
// Immutable and safe to evaluate concurrently.
class Program {
 public:
  Program() = default;
  Program(const Expression& e, const std::vector<std::string>& variables, const ParamMap& params);

  // vars[i] is the value bound to variables[i]. If kink is non-null it is
  // set when abs() is evaluated exactly at 0.
  template <class T>
  T evaluate(const T* vars, bool* kink = nullptr) const;

  bool empty() const { return code_.empty(); }

 private:
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
  struct Instr {
    Op op;
    int slot;
    double value;
    Func func;
  };
  void emit(const ExprNode& n, const std::vector<std::string>& variables, const ParamMap& params,
            int depth);

  std::vector<Instr> code_;
  int max_depth_ = 0;
};

namespace detail {

inline double apply(Func f, double x, bool* kink) {
  switch (f) {
    case Func::Sin:
      return std::sin(x);
    case Func::Cos:
      return std::cos(x);
    case Func::Tan:
      if (std::cos(x) == 0.0) throw DomainError("tan at a pole");
      return std::tan(x);
    case Func::Exp:
      return std::exp(x);
    case Func::Ln:
      if (!(x > 0.0)) throw DomainError("ln of a non-positive value");
      return std::log(x);
    case Func::Sqrt:
      if (x < 0.0) throw DomainError("sqrt of a negative value");
      return std::sqrt(x);
    case Func::Abs:
      if (x == 0.0 && kink) *kink = true;
      return std::fabs(x);
  }
  return 0.0;
}

template <int N>
Taylor<N> apply(Func f, const Taylor<N>& x, bool* kink) {
  switch (f) {
    case Func::Sin:
      return sin(x);
    case Func::Cos:
      return cos(x);
    case Func::Tan:
      return tan(x);
    case Func::Exp:
      return exp(x);
    case Func::Ln:
      return log(x);
    case Func::Sqrt:
      return sqrt(x);
    case Func::Abs:
      if (x.v == 0.0 && kink) *kink = true;
      return abs(x);
  }
  return Taylor<N>();
}

inline double power(double a, double b) { return cpow(a, b); }

template <int N>
Taylor<N> power(const Taylor<N>& a, const Taylor<N>& b) {
  return pow(a, b);
}

}  // namespace detail

template <class T>
T Program::evaluate(const T* vars, bool* kink) const {
  std::vector<T> stack;
  stack.reserve(static_cast<std::size_t>(max_depth_) + 1);
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Const:
        stack.emplace_back(in.value);
        break;
      case Op::Var:
        stack.push_back(vars[in.slot]);
        break;
      case Op::Neg:
        stack.back() = -stack.back();
        break;
      case Op::Call:
        stack.back() = detail::apply(in.func, stack.back(), kink);
        break;
      default: {
        T b = std::move(stack.back());
        stack.pop_back();
        T& a = stack.back();
        switch (in.op) {
          case Op::Add:
            a = a + b;
            break;
          case Op::Sub:
            a = a - b;
            break;
          case Op::Mul:
            a = a * b;
            break;
          case Op::Div:
            if constexpr (std::is_same_v<T, double>) {
              if (b == 0.0) throw DomainError("division by zero");
            }
            a = a / b;
            break;
          case Op::Pow:
            a = detail::power(a, b);
            break;
          default:
            break;
        }
      }
    }
  }
  return stack.back();
}

}  // namespace berwald
