#include "dinv/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace dinv {

struct Expression::Node {
    enum class Kind { Constant, Variable, Parameter, Unary, Binary };
    Kind kind;
    double value = 0.0;        // Constant
    int var_index = -1;        // Variable
    std::string name;          // Variable/Parameter display name
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    NodePtr a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;
using UnaryOp = Expression::UnaryOp;
using BinaryOp = Expression::BinaryOp;

const std::array<std::pair<const char*, UnaryOp>, 10> kFunctions = {{
    {"neg", UnaryOp::Neg},
    {"sin", UnaryOp::Sin},
    {"cos", UnaryOp::Cos},
    {"tan", UnaryOp::Tan},
    {"exp", UnaryOp::Exp},
    {"ln", UnaryOp::Ln},
    {"sqrt", UnaryOp::Sqrt},
    {"sinh", UnaryOp::Sinh},
    {"cosh", UnaryOp::Cosh},
    {"tanh", UnaryOp::Tanh},
}};

const UnaryOp* lookup_function(const std::string& name) {
    for (const auto& [fname, op] : kFunctions)
        if (name == fname) return &op;
    return nullptr;
}

const char* function_name(UnaryOp op) {
    for (const auto& [fname, fop] : kFunctions)
        if (fop == op) return fname;
    return "?";
}

// ---------------------------------------------------------------------------
// Jet chain rule: g(u) with g, g', g'' evaluated at u.value.
Jet2 jet_chain(const Jet2& u, double f, double fp, double fpp) {
    Jet2 r(u.nvars());
    r.value = f;
    r.grad = fp * u.grad;
    // materialize the outer product before scaling: each entry is then a
    // single commutative product and the Hessian stays bit-exactly symmetric
    Eigen::MatrixXd outer = u.grad * u.grad.transpose();
    r.hess = fp * u.hess + fpp * outer;
    return r;
}

bool is_integer_exponent(double e, long long& out) {
    double r = std::nearbyint(e);
    if (std::abs(e - r) > 1e-12 || std::abs(r) > 1e9) return false;
    out = static_cast<long long>(r);
    return true;
}

template <typename T>
T scalar_one(const T& like);
template <>
double scalar_one(const double&) { return 1.0; }
template <>
Jet2 scalar_one(const Jet2& like) { return Jet2::constant(like.nvars(), 1.0); }

template <typename T>
double value_of(const T& x);
template <>
double value_of(const double& x) { return x; }
template <>
double value_of(const Jet2& x) { return x.value; }

template <typename T>
T mul_t(const T& a, const T& b);
template <>
double mul_t(const double& a, const double& b) { return a * b; }
template <>
Jet2 mul_t(const Jet2& a, const Jet2& b) { return jet_mul(a, b); }

template <typename T>
T recip_t(const T& a) {
    if (value_of(a) == 0.0) throw EvalError("division by zero");
    if constexpr (std::is_same_v<T, double>) {
        return 1.0 / a;
    } else {
        double w = 1.0 / a.value;
        return jet_chain(a, w, -w * w, 2.0 * w * w * w);
    }
}

template <typename T>
T int_pow(const T& base, long long e) {
    if (e < 0) return recip_t(int_pow(base, -e));
    T acc = scalar_one(base);
    T b = base;
    long long k = e;
    while (k > 0) {
        if (k & 1) acc = mul_t(acc, b);
        k >>= 1;
        if (k > 0) b = mul_t(b, b);
    }
    return acc;
}

template <typename T>
T apply_unary(UnaryOp op, const T& u) {
    const double v = value_of(u);
    auto chain = [&](double f, double fp, double fpp) -> T {
        if constexpr (std::is_same_v<T, double>) {
            (void)fp;
            (void)fpp;
            return f;
        } else {
            return jet_chain(u, f, fp, fpp);
        }
    };
    switch (op) {
        case UnaryOp::Neg:
            if constexpr (std::is_same_v<T, double>) {
                return -u;
            } else {
                return jet_neg(u);
            }
        case UnaryOp::Sin: return chain(std::sin(v), std::cos(v), -std::sin(v));
        case UnaryOp::Cos: return chain(std::cos(v), -std::sin(v), -std::cos(v));
        case UnaryOp::Tan: {
            double c = std::cos(v);
            if (c == 0.0) throw EvalError("tan at a pole");
            double t = std::tan(v), s2 = 1.0 / (c * c);
            return chain(t, s2, 2.0 * t * s2);
        }
        case UnaryOp::Exp: {
            double e = std::exp(v);
            return chain(e, e, e);
        }
        case UnaryOp::Ln:
            if (v <= 0.0) throw EvalError("ln of non-positive value");
            return chain(std::log(v), 1.0 / v, -1.0 / (v * v));
        case UnaryOp::Sqrt: {
            if (v < 0.0) throw EvalError("sqrt of negative value");
            double s = std::sqrt(v);
            if constexpr (std::is_same_v<T, double>) {
                return s;
            } else {
                if (v == 0.0) throw EvalError("sqrt derivative at zero");
                return jet_chain(u, s, 0.5 / s, -0.25 / (s * v));
            }
        }
        case UnaryOp::Sinh: return chain(std::sinh(v), std::cosh(v), std::sinh(v));
        case UnaryOp::Cosh: return chain(std::cosh(v), std::sinh(v), std::cosh(v));
        case UnaryOp::Tanh: {
            double t = std::tanh(v), s = 1.0 - t * t;
            return chain(t, s, -2.0 * t * s);
        }
    }
    throw EvalError("unreachable unary op");
}

template <typename T>
T apply_pow(const Node& node, const T& a, const T& b) {
    // Constant exponent: integer powers work for any base, real ones need a > 0.
    if (node.b->kind == Node::Kind::Constant) {
        double e = node.b->value;
        long long ei;
        if (is_integer_exponent(e, ei)) return int_pow(a, ei);
        double v = value_of(a);
        if (v <= 0.0) throw EvalError("x^c with non-integer exponent requires positive base");
        if constexpr (std::is_same_v<T, double>) {
            return std::pow(v, e);
        } else {
            double f = std::pow(v, e);
            return jet_chain(a, f, e * f / v, e * (e - 1.0) * f / (v * v));
        }
    }
    // Variable exponent: a^b = exp(b ln a), a > 0.
    double v = value_of(a);
    if (v <= 0.0) throw EvalError("a^b with non-constant exponent requires a > 0");
    if constexpr (std::is_same_v<T, double>) {
        return std::exp(b * std::log(v));
    } else {
        return apply_unary(UnaryOp::Exp, jet_mul(b, apply_unary(UnaryOp::Ln, a)));
    }
}

struct EvalContext {
    const Eigen::VectorXd& point;
    const std::map<std::string, double>& params;
    int nvars;
};

template <typename T>
T eval_node(const Node& node, const EvalContext& ctx) {
    switch (node.kind) {
        case Node::Kind::Constant:
            if constexpr (std::is_same_v<T, double>) {
                return node.value;
            } else {
                return Jet2::constant(ctx.nvars, node.value);
            }
        case Node::Kind::Variable:
            if constexpr (std::is_same_v<T, double>) {
                return ctx.point[node.var_index];
            } else {
                return Jet2::variable(ctx.nvars, node.var_index, ctx.point[node.var_index]);
            }
        case Node::Kind::Parameter: {
            auto it = ctx.params.find(node.name);
            if (it == ctx.params.end()) throw EvalError("unbound parameter '" + node.name + "'");
            if constexpr (std::is_same_v<T, double>) {
                return it->second;
            } else {
                return Jet2::constant(ctx.nvars, it->second);
            }
        }
        case Node::Kind::Unary:
            return apply_unary(node.uop, eval_node<T>(*node.a, ctx));
        case Node::Kind::Binary: {
            T a = eval_node<T>(*node.a, ctx);
            if (node.bop == BinaryOp::Pow) {
                T b = eval_node<T>(*node.b, ctx);
                return apply_pow(node, a, b);
            }
            T b = eval_node<T>(*node.b, ctx);
            if constexpr (std::is_same_v<T, double>) {
                switch (node.bop) {
                    case BinaryOp::Add: return a + b;
                    case BinaryOp::Sub: return a - b;
                    case BinaryOp::Mul: return a * b;
                    case BinaryOp::Div:
                        if (b == 0.0) throw EvalError("division by zero");
                        return a / b;
                    default: break;
                }
            } else {
                switch (node.bop) {
                    case BinaryOp::Add: return jet_add(a, b);
                    case BinaryOp::Sub: return jet_sub(a, b);
                    case BinaryOp::Mul: return jet_mul(a, b);
                    case BinaryOp::Div: return jet_div(a, b);
                    default: break;
                }
            }
        }
    }
    throw EvalError("unreachable node kind");
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars,
           const std::vector<std::string>& params)
        : s_(text), vars_(vars), params_(params) {}

    NodePtr parse() {
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("syntax error: unexpected input", pos_);
        return e;
    }

private:
    const std::string& s_;
    const std::vector<std::string>& vars_;
    const std::vector<std::string>& params_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr left = parse_term();
        for (;;) {
            if (eat('+')) {
                left = make_binary(BinaryOp::Add, left, parse_term());
            } else if (eat('-')) {
                left = make_binary(BinaryOp::Sub, left, parse_term());
            } else {
                return left;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr left = parse_factor();
        for (;;) {
            if (eat('*')) {
                left = make_binary(BinaryOp::Mul, left, parse_factor());
            } else if (eat('/')) {
                left = make_binary(BinaryOp::Div, left, parse_factor());
            } else {
                return left;
            }
        }
    }

    NodePtr parse_factor() {
        NodePtr base = parse_base();
        if (eat('^')) return make_binary(BinaryOp::Pow, base, parse_factor());
        return base;
    }

    NodePtr parse_base() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("syntax error: unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '-') {
            ++pos_;
            // unary minus binds looser than '^': -u1^2 == -(u1^2)
            return make_unary(UnaryOp::Neg, parse_factor());
        }
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            if (!eat(')')) throw ParseError("syntax error: expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError("syntax error: unexpected character", pos_);
    }

    NodePtr parse_number() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            size_t mark = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                pos_ = mark;  // 'e' belongs to something else (e.g. an identifier after a number is a syntax error anyway)
            } else {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double v = std::strtod(s_.substr(start, pos_ - start).c_str(), nullptr);
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Constant;
        n->value = v;
        return n;
    }

    NodePtr parse_ident() {
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name = s_.substr(start, pos_ - start);

        const UnaryOp* fn = lookup_function(name);
        if (fn) {
            if (!eat('(')) throw ParseError("arity mismatch: function '" + name + "' expects an argument", start);
            NodePtr arg = parse_expr();
            if (!eat(')')) throw ParseError("syntax error: expected ')'", pos_);
            return make_unary(*fn, arg);
        }
        if (peek() == '(')
            throw ParseError("arity mismatch: '" + name + "' is not a function", start);

        auto vit = std::find(vars_.begin(), vars_.end(), name);
        if (vit != vars_.end()) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Variable;
            n->var_index = static_cast<int>(vit - vars_.begin());
            n->name = name;
            return n;
        }
        if (std::find(params_.begin(), params_.end(), name) != params_.end()) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Parameter;
            n->name = name;
            return n;
        }
        throw ParseError("unknown identifier '" + name + "'", start);
    }

    NodePtr make_unary(UnaryOp op, NodePtr a) {
        if (a->kind == Node::Kind::Constant) {
            try {
                double v = apply_unary<double>(op, a->value);
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Constant;
                n->value = v;
                return n;
            } catch (const EvalError&) {
                // leave unfolded; reported at evaluation time
            }
        }
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Unary;
        n->uop = op;
        n->a = std::move(a);
        return n;
    }

    NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Binary;
        n->bop = op;
        n->a = std::move(a);
        n->b = std::move(b);
        if (n->a->kind == Node::Kind::Constant && n->b->kind == Node::Kind::Constant) {
            try {
                EvalContext ctx{Eigen::VectorXd(), {}, 0};
                double v = eval_node<double>(*n, ctx);
                auto c = std::make_shared<Node>();
                c->kind = Node::Kind::Constant;
                c->value = v;
                return c;
            } catch (const EvalError&) {
            }
        }
        return n;
    }
};

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Node::Kind::Constant: {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof(buf), n.value);
            out.append(buf, res.ptr);
            return;
        }
        case Node::Kind::Variable:
        case Node::Kind::Parameter:
            out += n.name;
            return;
        case Node::Kind::Unary:
            if (n.uop == UnaryOp::Neg) {
                out += "(-";
                print_node(*n.a, out);
                out += ')';
            } else {
                out += function_name(n.uop);
                out += '(';
                print_node(*n.a, out);
                out += ')';
            }
            return;
        case Node::Kind::Binary: {
            const char* op = "?";
            switch (n.bop) {
                case BinaryOp::Add: op = "+"; break;
                case BinaryOp::Sub: op = "-"; break;
                case BinaryOp::Mul: op = "*"; break;
                case BinaryOp::Div: op = "/"; break;
                case BinaryOp::Pow: op = "^"; break;
            }
            out += '(';
            print_node(*n.a, out);
            out += op;
            print_node(*n.b, out);
            out += ')';
            return;
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------

Jet2 jet_add(const Jet2& a, const Jet2& b) {
    Jet2 r(a.nvars());
    r.value = a.value + b.value;
    r.grad = a.grad + b.grad;
    r.hess = a.hess + b.hess;
    return r;
}

Jet2 jet_sub(const Jet2& a, const Jet2& b) {
    Jet2 r(a.nvars());
    r.value = a.value - b.value;
    r.grad = a.grad - b.grad;
    r.hess = a.hess - b.hess;
    return r;
}

Jet2 jet_mul(const Jet2& a, const Jet2& b) {
    Jet2 r(a.nvars());
    r.value = a.value * b.value;
    r.grad = a.value * b.grad + b.value * a.grad;
    // the cross term is symmetrized first so the Hessian stays bit-exactly
    // symmetric (elementwise addition commutes, association order matters)
    Eigen::MatrixXd cross = a.grad * b.grad.transpose();
    r.hess = a.value * b.hess + b.value * a.hess + (cross + Eigen::MatrixXd(cross.transpose()));
    return r;
}

Jet2 jet_div(const Jet2& a, const Jet2& b) { return jet_mul(a, recip_t(b)); }

Jet2 jet_neg(const Jet2& a) {
    Jet2 r(a.nvars());
    r.value = -a.value;
    r.grad = -a.grad;
    r.hess = -a.hess;
    return r;
}

Expression::Expression(NodePtr root, std::vector<std::string> vars, std::vector<std::string> params)
    : root_(std::move(root)), vars_(std::move(vars)), params_(std::move(params)) {}

double Expression::eval(const Eigen::VectorXd& point,
                        const std::map<std::string, double>& params) const {
    if (!root_) throw EvalError("empty expression");
    if (point.size() != static_cast<Eigen::Index>(vars_.size()))
        throw EvalError("point dimension mismatch");
    EvalContext ctx{point, params, static_cast<int>(vars_.size())};
    return eval_node<double>(*root_, ctx);
}

Jet2 Expression::eval_jet2(const Eigen::VectorXd& point,
                           const std::map<std::string, double>& params) const {
    if (!root_) throw EvalError("empty expression");
    if (point.size() != static_cast<Eigen::Index>(vars_.size()))
        throw EvalError("point dimension mismatch");
    EvalContext ctx{point, params, static_cast<int>(vars_.size())};
    return eval_node<Jet2>(*root_, ctx);
}

std::string Expression::to_string() const {
    if (!root_) return "";
    std::string out;
    print_node(*root_, out);
    return out;
}

Expression parse_expression(const std::string& text, const std::vector<std::string>& variables,
                            const std::vector<std::string>& parameters) {
    Parser p(text, variables, parameters);
    return Expression(p.parse(), variables, parameters);
}

}  // namespace dinv
