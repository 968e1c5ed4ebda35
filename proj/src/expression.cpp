#include "berwald/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <numbers>
#include <set>

namespace berwald {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_number(double x) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Number;
  n->number = x;
  return n;
}

NodePtr make_binary(ExprNode::Kind kind, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool lookup_function(std::string_view name, Func& out) {
  static const std::pair<const char*, Func> table[] = {
      {"sin", Func::Sin}, {"cos", Func::Cos},   {"tan", Func::Tan}, {"exp", Func::Exp},
      {"ln", Func::Ln},   {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
  };
  for (const auto& [n, f] : table) {
    if (name == n) {
      out = f;
      return true;
    }
  }
  return false;
}

const char* function_name(Func f) {
  switch (f) {
    case Func::Sin:
      return "sin";
    case Func::Cos:
      return "cos";
    case Func::Tan:
      return "tan";
    case Func::Exp:
      return "exp";
    case Func::Ln:
      return "ln";
    case Func::Sqrt:
      return "sqrt";
    case Func::Abs:
      return "abs";
  }
  return "?";
}

// Recursive descent over
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
// Unary minus binds looser than '^', so -x^2 is -(x^2).
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, kAtomStart, "empty expression");
    NodePtr e = expr();
    skip_ws();
    if (pos_ < src_.size()) {
      throw SyntaxError(pos_, "operator or end of input",
                        std::string("unexpected '") + src_[pos_] + "'");
    }
    return e;
  }

 private:
  static constexpr const char* kAtomStart = "number, identifier, '(' or '-'";

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(ExprNode::Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(ExprNode::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(ExprNode::Kind::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = make_binary(ExprNode::Kind::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    if (accept('-')) {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::Neg;
      n->lhs = factor();
      return n;
    }
    NodePtr base = atom();
    if (accept('^')) return make_binary(ExprNode::Kind::Pow, base, factor());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, kAtomStart, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) throw SyntaxError(pos_, "')'", "unbalanced parenthesis");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(pos_, kAtomStart, std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t nd = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) throw SyntaxError(start, "digit", "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // not an exponent; leave 'e' for the caller
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc()) throw SyntaxError(start, "number", "malformed number");
    return make_number(value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(src_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      Func f;
      if (!lookup_function(name, f)) throw UnknownIdentifier("unknown function '" + name + "'");
      ++pos_;
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::Call;
      n->func = f;
      n->name = name;
      n->lhs = expr();
      if (!accept(')')) throw SyntaxError(pos_, "')'", "unterminated call to " + name);
      return n;
    }
    Func f;
    if (lookup_function(name, f)) {
      throw SyntaxError(pos_, "'('", "function '" + name + "' used without an argument");
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Ident;
    n->name = std::move(name);
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

void print_node(const ExprNode& n, std::string& out) {
  using K = ExprNode::Kind;
  auto bin = [&](const char* op) {
    out += '(';
    print_node(*n.lhs, out);
    out += op;
    print_node(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case K::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      break;
    }
    case K::Ident:
      out += n.name;
      break;
    case K::Neg:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      break;
    case K::Add:
      bin(" + ");
      break;
    case K::Sub:
      bin(" - ");
      break;
    case K::Mul:
      bin(" * ");
      break;
    case K::Div:
      bin(" / ");
      break;
    case K::Pow:
      bin(" ^ ");
      break;
    case K::Call:
      out += function_name(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      break;
  }
}

void collect(const ExprNode& n, std::set<std::string>& names) {
  if (n.kind == ExprNode::Kind::Ident && n.name != "pi") names.insert(n.name);
  if (n.lhs) collect(*n.lhs, names);
  if (n.rhs) collect(*n.rhs, names);
}

}  // namespace

Expression::Expression() : root_(make_number(0.0)), source_("0") {}

Expression::Expression(std::shared_ptr<const ExprNode> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

std::string Expression::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

std::vector<std::string> Expression::identifiers() const {
  std::set<std::string> names;
  collect(*root_, names);
  return {names.begin(), names.end()};
}

bool Expression::is_literal_zero() const {
  return root_->kind == ExprNode::Kind::Number && root_->number == 0.0;
}

Expression parse(std::string_view source) {
  Parser p(source);
  return Expression(p.parse_all(), std::string(source));
}

Program::Program(const Expression& e, const std::vector<std::string>& variables,
                 const ParamMap& params) {
  emit(e.root(), variables, params, 1);
}

void Program::emit(const ExprNode& n, const std::vector<std::string>& variables,
                   const ParamMap& params, int depth) {
  using K = ExprNode::Kind;
  max_depth_ = std::max(max_depth_, depth);
  switch (n.kind) {
    case K::Number:
      code_.push_back({Op::Const, 0, n.number, Func::Sin});
      return;
    case K::Ident: {
      const auto it = std::find(variables.begin(), variables.end(), n.name);
      if (it != variables.end()) {
        code_.push_back({Op::Var, static_cast<int>(it - variables.begin()), 0.0, Func::Sin});
        return;
      }
      if (const auto p = params.find(n.name); p != params.end()) {
        code_.push_back({Op::Const, 0, p->second, Func::Sin});
        return;
      }
      if (n.name == "pi") {
        code_.push_back({Op::Const, 0, std::numbers::pi, Func::Sin});
        return;
      }
      throw UnboundParameter("no value bound to '" + n.name + "'");
    }
    case K::Neg:
      emit(*n.lhs, variables, params, depth);
      code_.push_back({Op::Neg, 0, 0.0, Func::Sin});
      return;
    case K::Call:
      emit(*n.lhs, variables, params, depth);
      code_.push_back({Op::Call, 0, 0.0, n.func});
      return;
    default:
      break;
  }
  emit(*n.lhs, variables, params, depth);
  emit(*n.rhs, variables, params, depth + 1);
  Op op = Op::Add;
  switch (n.kind) {
    case K::Add:
      op = Op::Add;
      break;
    case K::Sub:
      op = Op::Sub;
      break;
    case K::Mul:
      op = Op::Mul;
      break;
    case K::Div:
      op = Op::Div;
      break;
    case K::Pow:
      op = Op::Pow;
      break;
    default:
      break;
  }
  code_.push_back({op, 0, 0.0, Func::Sin});
}

}  // namespace berwald
