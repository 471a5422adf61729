#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dinv {

/// Truncated second-order forward jet: value, gradient and (exactly
/// symmetric) Hessian with respect to the declared chart variables.
struct Jet2 {
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;

    Jet2() = default;
    explicit Jet2(int nvars)
        : grad(Eigen::VectorXd::Zero(nvars)), hess(Eigen::MatrixXd::Zero(nvars, nvars)) {}

    static Jet2 constant(int nvars, double c) {
        Jet2 j(nvars);
        j.value = c;
        return j;
    }
    static Jet2 variable(int nvars, int index, double v) {
        Jet2 j(nvars);
        j.value = v;
        j.grad[index] = 1.0;
        return j;
    }
    int nvars() const { return static_cast<int>(grad.size()); }
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, size_t offset)
        : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable expression tree over declared variables and parameters.
/// Evaluation is pure; the same point and parameters give bit-identical
/// results, so instances are safe to share across threads.
class Expression {
public:
    enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Ln, Sqrt, Sinh, Cosh, Tanh };
    enum class BinaryOp { Add, Sub, Mul, Div, Pow };

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    Expression() = default;
    Expression(NodePtr root, std::vector<std::string> vars, std::vector<std::string> params);

    bool valid() const { return root_ != nullptr; }
    const std::vector<std::string>& variables() const { return vars_; }
    const std::vector<std::string>& parameters() const { return params_; }

    double eval(const Eigen::VectorXd& point,
                const std::map<std::string, double>& params = {}) const;
    Jet2 eval_jet2(const Eigen::VectorXd& point,
                   const std::map<std::string, double>& params = {}) const;

    /// Parenthesized round-trippable form.
    std::string to_string() const;

    const NodePtr& root() const { return root_; }

private:
    NodePtr root_;
    std::vector<std::string> vars_;
    std::vector<std::string> params_;
};

/// Recursive-descent parse over the fixed grammar. Unknown identifiers
/// (not a variable, parameter or unary function) are rejected.
Expression parse_expression(const std::string& text, const std::vector<std::string>& variables,
                            const std::vector<std::string>& parameters = {});

// Jet arithmetic (exposed for reuse in geometry code and tests).
Jet2 jet_add(const Jet2& a, const Jet2& b);
Jet2 jet_sub(const Jet2& a, const Jet2& b);
Jet2 jet_mul(const Jet2& a, const Jet2& b);
Jet2 jet_div(const Jet2& a, const Jet2& b);
Jet2 jet_neg(const Jet2& a);

}  // namespace dinv
