#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "alphaode/errors.hpp"

namespace alphaode {

using ParamMap = std::map<std::string, double>;

enum class UnaryOp { Neg, Exp, Log, Sin, Cos, Tan, Tanh, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

// ---------------------------------------------------------------------------
// Checked scalar operations shared by the generic evaluator.  The Jet
// counterparts live in jet.hpp and are found by argument-dependent lookup.

inline double checked_div(double a, double b) {
    if (b == 0.0) throw DomainError("division by zero");
    return a / b;
}

inline double checked_log(double a) {
    if (a <= 0.0) throw DomainError("log of non-positive value");
    return std::log(a);
}

inline double checked_sqrt(double a) {
    if (a < 0.0) throw DomainError("sqrt of negative value");
    return std::sqrt(a);
}

// Integer powers use repeated squaring and are valid for every base.
inline double pow_int(double base, long long n) {
    if (n < 0) return checked_div(1.0, pow_int(base, -n));
    double acc = 1.0, sq = base;
    while (n > 0) {
        if (n & 1) acc *= sq;
        sq *= sq;
        n >>= 1;
    }
    return acc;
}

// Non-integer exponents require a positive base.
inline double pow_general(double base, double expo) {
    if (base <= 0.0) throw DomainError("pow with non-integer exponent requires positive base");
    return std::pow(base, expo);
}

inline double constant_like(double /*model*/, double v) { return v; }

// ---------------------------------------------------------------------------
// Expr: immutable expression tree over x, y1..yn and named parameters.
// Subtrees may be shared; the only rewriting done at construction time is
// constant folding.

class Expr {
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Node {
        enum class Kind { Const, X, Y, Param, Unary, Binary, PowInt };
        Kind kind;
        double value = 0.0;        // Const
        std::size_t index = 0;     // Y
        std::string name;          // Param
        UnaryOp uop = UnaryOp::Neg;
        BinaryOp bop = BinaryOp::Add;
        long long exponent = 0;    // PowInt
        NodePtr a, b;
    };

    NodePtr node_;

    explicit Expr(NodePtr n) : node_(std::move(n)) {}

    static Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

public:
    Expr() : Expr(constant(0.0)) {}

    static Expr constant(double v) {
        Node n;
        n.kind = Node::Kind::Const;
        n.value = v;
        return make(std::move(n));
    }

    static Expr x() {
        Node n;
        n.kind = Node::Kind::X;
        return make(std::move(n));
    }

    /// State variable by zero-based index (y(0) prints as y1).
    static Expr y(std::size_t index) {
        Node n;
        n.kind = Node::Kind::Y;
        n.index = index;
        return make(std::move(n));
    }

    static Expr param(std::string name) {
        if (name.empty()) throw MalformedExpression("empty parameter name");
        Node n;
        n.kind = Node::Kind::Param;
        n.name = std::move(name);
        return make(std::move(n));
    }

    static Expr unary(UnaryOp op, Expr a) {
        if (a.is_constant()) {
            double v = a.node_->value;
            switch (op) {
                case UnaryOp::Neg: return constant(-v);
                case UnaryOp::Exp: return constant(std::exp(v));
                case UnaryOp::Log: return constant(checked_log(v));
                case UnaryOp::Sin: return constant(std::sin(v));
                case UnaryOp::Cos: return constant(std::cos(v));
                case UnaryOp::Tan: return constant(std::tan(v));
                case UnaryOp::Tanh: return constant(std::tanh(v));
                case UnaryOp::Sqrt: return constant(checked_sqrt(v));
            }
        }
        Node n;
        n.kind = Node::Kind::Unary;
        n.uop = op;
        n.a = a.node_;
        return make(std::move(n));
    }

    static Expr binary(BinaryOp op, Expr a, Expr b) {
        if (op == BinaryOp::Pow) {
            // A constant integral exponent becomes an integer power node,
            // valid for every base.
            if (b.is_constant()) {
                double e = b.node_->value;
                if (e == std::floor(e) && std::abs(e) <= 1e9) {
                    return powi(std::move(a), static_cast<long long>(e));
                }
            }
        }
        if (a.is_constant() && b.is_constant()) {
            double l = a.node_->value, r = b.node_->value;
            switch (op) {
                case BinaryOp::Add: return constant(l + r);
                case BinaryOp::Sub: return constant(l - r);
                case BinaryOp::Mul: return constant(l * r);
                case BinaryOp::Div: return constant(checked_div(l, r));
                case BinaryOp::Pow: return constant(pow_general(l, r));
            }
        }
        Node n;
        n.kind = Node::Kind::Binary;
        n.bop = op;
        n.a = a.node_;
        n.b = b.node_;
        return make(std::move(n));
    }

    static Expr powi(Expr base, long long exponent) {
        if (base.is_constant()) return constant(pow_int(base.node_->value, exponent));
        Node n;
        n.kind = Node::Kind::PowInt;
        n.exponent = exponent;
        n.a = base.node_;
        return make(std::move(n));
    }

    bool is_constant() const { return node_->kind == Node::Kind::Const; }

    double constant_value() const {
        if (!is_constant()) throw MalformedExpression("not a constant expression");
        return node_->value;
    }

    // Structural equality (shared subtrees compare by pointer first).
    friend bool operator==(const Expr& a, const Expr& b) { return equal(a.node_, b.node_); }

    template <class T>
    T eval(const T& x, std::span<const T> y, const ParamMap& params) const {
        return eval_node<T>(*node_, x, y, params);
    }

    double eval(double x, std::span<const double> y, const ParamMap& params = {}) const {
        return eval_node<double>(*node_, x, y, params);
    }

    /// The variable a derivative is taken with respect to.
    struct Var {
        enum class Kind { X, Y, Param };
        Kind kind;
        std::size_t index = 0;
        std::string name;

        static Var x() { return Var{Kind::X}; }
        static Var y(std::size_t i) { return Var{Kind::Y, i}; }
        static Var param(std::string n) { return Var{Kind::Param, 0, std::move(n)}; }
    };

    Expr diff(const Var& wrt) const { return diff_node(node_, wrt); }

    /// Collect referenced state-variable indices and parameter names.
    void collect_refs(std::vector<std::size_t>& y_indices, std::vector<std::string>& names) const {
        collect(node_, y_indices, names);
    }

    std::string to_string() const {
        std::ostringstream os;
        print(node_, os);
        return os.str();
    }

private:
    static bool equal(const NodePtr& a, const NodePtr& b) {
        if (a == b) return true;
        if (a->kind != b->kind) return false;
        switch (a->kind) {
            case Node::Kind::Const: return a->value == b->value;
            case Node::Kind::X: return true;
            case Node::Kind::Y: return a->index == b->index;
            case Node::Kind::Param: return a->name == b->name;
            case Node::Kind::Unary: return a->uop == b->uop && equal(a->a, b->a);
            case Node::Kind::Binary:
                return a->bop == b->bop && equal(a->a, b->a) && equal(a->b, b->b);
            case Node::Kind::PowInt: return a->exponent == b->exponent && equal(a->a, b->a);
        }
        return false;
    }

    template <class T>
    static T eval_node(const Node& n, const T& x, std::span<const T> y, const ParamMap& params) {
        switch (n.kind) {
            case Node::Kind::Const:
                return constant_like(x, n.value);
            case Node::Kind::X:
                return x;
            case Node::Kind::Y:
                if (n.index >= y.size())
                    throw MalformedExpression("state index y" + std::to_string(n.index + 1) +
                                              " out of range");
                return y[n.index];
            case Node::Kind::Param: {
                auto it = params.find(n.name);
                if (it == params.end()) throw UnboundParameter("unbound parameter: " + n.name);
                return constant_like(x, it->second);
            }
            case Node::Kind::Unary: {
                T v = eval_node<T>(*n.a, x, y, params);
                switch (n.uop) {
                    case UnaryOp::Neg: return -v;
                    case UnaryOp::Exp: {
                        using std::exp;
                        return exp(v);
                    }
                    case UnaryOp::Log: return checked_log(v);
                    case UnaryOp::Sin: {
                        using std::sin;
                        return sin(v);
                    }
                    case UnaryOp::Cos: {
                        using std::cos;
                        return cos(v);
                    }
                    case UnaryOp::Tan: {
                        using std::tan;
                        return tan(v);
                    }
                    case UnaryOp::Tanh: {
                        using std::tanh;
                        return tanh(v);
                    }
                    case UnaryOp::Sqrt: return checked_sqrt(v);
                }
                break;
            }
            case Node::Kind::Binary: {
                T l = eval_node<T>(*n.a, x, y, params);
                T r = eval_node<T>(*n.b, x, y, params);
                switch (n.bop) {
                    case BinaryOp::Add: return l + r;
                    case BinaryOp::Sub: return l - r;
                    case BinaryOp::Mul: return l * r;
                    case BinaryOp::Div: return checked_div(l, r);
                    case BinaryOp::Pow: return pow_general(l, r);
                }
                break;
            }
            case Node::Kind::PowInt:
                return pow_int(eval_node<T>(*n.a, x, y, params), n.exponent);
        }
        throw MalformedExpression("corrupt expression node");
    }

    static bool matches(const NodePtr& n, const Var& wrt) {
        switch (wrt.kind) {
            case Var::Kind::X: return n->kind == Node::Kind::X;
            case Var::Kind::Y: return n->kind == Node::Kind::Y && n->index == wrt.index;
            case Var::Kind::Param: return n->kind == Node::Kind::Param && n->name == wrt.name;
        }
        return false;
    }

    static Expr diff_node(const NodePtr& n, const Var& wrt) {
        switch (n->kind) {
            case Node::Kind::Const:
                return constant(0.0);
            case Node::Kind::X:
            case Node::Kind::Y:
            case Node::Kind::Param:
                return constant(matches(n, wrt) ? 1.0 : 0.0);
            case Node::Kind::Unary: {
                Expr u(n->a);
                Expr du = diff_node(n->a, wrt);
                switch (n->uop) {
                    case UnaryOp::Neg:
                        return unary(UnaryOp::Neg, du);
                    case UnaryOp::Exp:
                        return binary(BinaryOp::Mul, unary(UnaryOp::Exp, u), du);
                    case UnaryOp::Log:
                        return binary(BinaryOp::Div, du, u);
                    case UnaryOp::Sin:
                        return binary(BinaryOp::Mul, unary(UnaryOp::Cos, u), du);
                    case UnaryOp::Cos:
                        return binary(BinaryOp::Mul,
                                      unary(UnaryOp::Neg, unary(UnaryOp::Sin, u)), du);
                    case UnaryOp::Tan:
                        return binary(BinaryOp::Div, du, powi(unary(UnaryOp::Cos, u), 2));
                    case UnaryOp::Tanh:
                        return binary(BinaryOp::Mul,
                                      binary(BinaryOp::Sub, constant(1.0),
                                             powi(unary(UnaryOp::Tanh, u), 2)),
                                      du);
                    case UnaryOp::Sqrt:
                        return binary(BinaryOp::Div, du,
                                      binary(BinaryOp::Mul, constant(2.0), unary(UnaryOp::Sqrt, u)));
                }
                break;
            }
            case Node::Kind::Binary: {
                Expr l(n->a), r(n->b);
                Expr dl = diff_node(n->a, wrt), dr = diff_node(n->b, wrt);
                switch (n->bop) {
                    case BinaryOp::Add:
                        return binary(BinaryOp::Add, dl, dr);
                    case BinaryOp::Sub:
                        return binary(BinaryOp::Sub, dl, dr);
                    case BinaryOp::Mul:
                        return binary(BinaryOp::Add, binary(BinaryOp::Mul, dl, r),
                                      binary(BinaryOp::Mul, l, dr));
                    case BinaryOp::Div:
                        return binary(BinaryOp::Div,
                                      binary(BinaryOp::Sub, binary(BinaryOp::Mul, dl, r),
                                             binary(BinaryOp::Mul, l, dr)),
                                      powi(r, 2));
                    case BinaryOp::Pow:
                        // d(a^b) = a^b (b' log a + b a'/a)
                        return binary(
                            BinaryOp::Mul, binary(BinaryOp::Pow, l, r),
                            binary(BinaryOp::Add,
                                   binary(BinaryOp::Mul, dr, unary(UnaryOp::Log, l)),
                                   binary(BinaryOp::Div, binary(BinaryOp::Mul, r, dl), l)));
                }
                break;
            }
            case Node::Kind::PowInt: {
                if (n->exponent == 0) return constant(0.0);
                Expr b(n->a);
                Expr db = diff_node(n->a, wrt);
                return binary(BinaryOp::Mul, constant(static_cast<double>(n->exponent)),
                              binary(BinaryOp::Mul, powi(b, n->exponent - 1), db));
            }
        }
        throw MalformedExpression("corrupt expression node");
    }

    static void collect(const NodePtr& n, std::vector<std::size_t>& y_indices,
                        std::vector<std::string>& names) {
        switch (n->kind) {
            case Node::Kind::Y: y_indices.push_back(n->index); break;
            case Node::Kind::Param: names.push_back(n->name); break;
            case Node::Kind::Unary:
            case Node::Kind::PowInt: collect(n->a, y_indices, names); break;
            case Node::Kind::Binary:
                collect(n->a, y_indices, names);
                collect(n->b, y_indices, names);
                break;
            default: break;
        }
    }

    static void print(const NodePtr& n, std::ostream& os) {
        switch (n->kind) {
            case Node::Kind::Const: {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.17g", n->value);
                os << buf;
                break;
            }
            case Node::Kind::X: os << "x"; break;
            case Node::Kind::Y: os << "y" << (n->index + 1); break;
            case Node::Kind::Param: os << n->name; break;
            case Node::Kind::Unary: {
                static const char* names[] = {"neg", "exp", "log", "sin",
                                              "cos", "tan", "tanh", "sqrt"};
                os << "(" << names[static_cast<int>(n->uop)] << " ";
                print(n->a, os);
                os << ")";
                break;
            }
            case Node::Kind::Binary: {
                static const char* names[] = {"add", "sub", "mul", "div", "pow"};
                os << "(" << names[static_cast<int>(n->bop)] << " ";
                print(n->a, os);
                os << " ";
                print(n->b, os);
                os << ")";
                break;
            }
            case Node::Kind::PowInt:
                os << "(pow ";
                print(n->a, os);
                os << " " << n->exponent << ")";
                break;
        }
    }
};

// Operator sugar for building trees programmatically.
inline Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::Add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::Sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::Mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::Div, std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::unary(UnaryOp::Neg, std::move(a)); }
inline Expr operator+(double a, Expr b) { return Expr::constant(a) + std::move(b); }
inline Expr operator+(Expr a, double b) { return std::move(a) + Expr::constant(b); }
inline Expr operator-(double a, Expr b) { return Expr::constant(a) - std::move(b); }
inline Expr operator-(Expr a, double b) { return std::move(a) - Expr::constant(b); }
inline Expr operator*(double a, Expr b) { return Expr::constant(a) * std::move(b); }
inline Expr operator*(Expr a, double b) { return std::move(a) * Expr::constant(b); }
inline Expr operator/(double a, Expr b) { return Expr::constant(a) / std::move(b); }
inline Expr operator/(Expr a, double b) { return std::move(a) / Expr::constant(b); }

inline Expr exp(Expr a) { return Expr::unary(UnaryOp::Exp, std::move(a)); }
inline Expr log(Expr a) { return Expr::unary(UnaryOp::Log, std::move(a)); }
inline Expr sin(Expr a) { return Expr::unary(UnaryOp::Sin, std::move(a)); }
inline Expr cos(Expr a) { return Expr::unary(UnaryOp::Cos, std::move(a)); }
inline Expr tan(Expr a) { return Expr::unary(UnaryOp::Tan, std::move(a)); }
inline Expr tanh(Expr a) { return Expr::unary(UnaryOp::Tanh, std::move(a)); }
inline Expr sqrt(Expr a) { return Expr::unary(UnaryOp::Sqrt, std::move(a)); }
inline Expr pow(Expr a, Expr b) { return Expr::binary(BinaryOp::Pow, std::move(a), std::move(b)); }
inline Expr pow(Expr a, long long n) { return Expr::powi(std::move(a), n); }

inline Expr diff_expr(const Expr& e, const Expr::Var& wrt) { return e.diff(wrt); }

// ---------------------------------------------------------------------------
// Prefix-notation parser, e.g. "(mul 2 (mul mu (mul (sub 1 (pow y1 2)) y2)))".
// Variables are `x` and `y1..yn`; any other identifier is a named parameter.

namespace detail {

struct Tokenizer {
    std::string_view src;
    std::size_t pos = 0;

    std::string next() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos >= src.size()) return {};
        char c = src[pos];
        if (c == '(' || c == ')') {
            ++pos;
            return std::string(1, c);
        }
        std::size_t start = pos;
        while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) &&
               src[pos] != '(' && src[pos] != ')')
            ++pos;
        return std::string(src.substr(start, pos - start));
    }
};

inline Expr parse_tokens(Tokenizer& tz);

inline Expr parse_atom(const std::string& tok) {
    if (tok.empty()) throw MalformedExpression("unexpected end of expression");
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end && *end == '\0') return Expr::constant(v);
    if (tok == "x") return Expr::x();
    if (tok.size() >= 2 && tok[0] == 'y' &&
        tok.find_first_not_of("0123456789", 1) == std::string::npos) {
        long idx = std::strtol(tok.c_str() + 1, nullptr, 10);
        if (idx < 1) throw MalformedExpression("state variables are numbered from y1");
        return Expr::y(static_cast<std::size_t>(idx - 1));
    }
    return Expr::param(tok);
}

inline Expr parse_tokens(Tokenizer& tz) {
    std::string tok = tz.next();
    if (tok.empty()) throw MalformedExpression("unexpected end of expression");
    if (tok == ")") throw MalformedExpression("unexpected ')'");
    if (tok != "(") return parse_atom(tok);

    std::string op = tz.next();
    std::vector<Expr> args;
    for (;;) {
        std::size_t save = tz.pos;
        std::string t = tz.next();
        if (t.empty()) throw MalformedExpression("missing ')'");
        if (t == ")") break;
        tz.pos = save;
        args.push_back(parse_tokens(tz));
    }

    auto unary1 = [&](UnaryOp u) {
        if (args.size() != 1)
            throw MalformedExpression("operator '" + op + "' takes one argument");
        return Expr::unary(u, args[0]);
    };
    auto fold = [&](BinaryOp b) {
        if (args.size() < 2)
            throw MalformedExpression("operator '" + op + "' takes at least two arguments");
        Expr acc = args[0];
        for (std::size_t i = 1; i < args.size(); ++i) acc = Expr::binary(b, acc, args[i]);
        return acc;
    };

    if (op == "neg") return unary1(UnaryOp::Neg);
    if (op == "exp") return unary1(UnaryOp::Exp);
    if (op == "log") return unary1(UnaryOp::Log);
    if (op == "sin") return unary1(UnaryOp::Sin);
    if (op == "cos") return unary1(UnaryOp::Cos);
    if (op == "tan") return unary1(UnaryOp::Tan);
    if (op == "tanh") return unary1(UnaryOp::Tanh);
    if (op == "sqrt") return unary1(UnaryOp::Sqrt);
    if (op == "add") return fold(BinaryOp::Add);
    if (op == "mul") return fold(BinaryOp::Mul);
    if (op == "sub") {
        if (args.size() != 2) throw MalformedExpression("'sub' takes two arguments");
        return Expr::binary(BinaryOp::Sub, args[0], args[1]);
    }
    if (op == "div") {
        if (args.size() != 2) throw MalformedExpression("'div' takes two arguments");
        return Expr::binary(BinaryOp::Div, args[0], args[1]);
    }
    if (op == "pow") {
        if (args.size() != 2) throw MalformedExpression("'pow' takes two arguments");
        return Expr::binary(BinaryOp::Pow, args[0], args[1]);
    }
    throw MalformedExpression("unknown operator '" + op + "'");
}

}  // namespace detail

inline Expr parse_expr(std::string_view text) {
    detail::Tokenizer tz{text};
    Expr e = detail::parse_tokens(tz);
    std::string rest = tz.next();
    if (!rest.empty())
        throw MalformedExpression("trailing input after expression: '" + rest + "'");
    return e;
}

}  // namespace alphaode
