#pragma once

// Scalar expressions over named chart variables.
//
// Grammar (version 1):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative, binds tighter than unary minus
//   primary := number | 'pi' | identifier | function '(' expr ')' | '(' expr ')'
//   function: sin cos tan exp log sqrt sinh cosh
// Numbers accept decimal and exponent notation (1, 0.5, 2e-3).

#include "lz/core/error.hpp"
#include "lz/core/jet.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace lz {

inline constexpr int kExpressionGrammarVersion = 1;

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

// Constants are lifted into the scalar type of the evaluation through this
// customisation point.
inline double lift(double /*proto*/, double v) { return v; }
inline Jet lift(const Jet& proto, double v) { return Jet(proto.space(), v); }

class Expr {
public:
    enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Call };

    Expr() : Expr(constant(0.0)) {}

    static Expr constant(double v) {
        auto n = std::make_shared<Node>();
        n->op = Op::Const;
        n->value = v;
        return Expr(std::move(n));
    }
    static Expr variable(int index) {
        auto n = std::make_shared<Node>();
        n->op = Op::Var;
        n->var = index;
        return Expr(std::move(n));
    }

    static Expr parse(std::string_view text, const std::vector<std::string>& variables) {
        Parser p{text, variables, 0};
        Expr e = p.expr();
        p.skip_space();
        if (p.pos != text.size()) p.fail("unexpected character '" + std::string(1, text[p.pos]) + "'");
        return e;
    }

    Op op() const { return node_->op; }
    bool is_constant() const { return node_->op == Op::Const; }
    double constant_value() const { return node_->value; }

    // Evaluate with S = double or S = Jet. vars[i] is the value of variable i.
    template <class S>
    S eval(std::span<const S> vars) const {
        return eval_node<S>(*node_, vars);
    }

    // Exact symbolic derivative with light constant folding. No simplification
    // beyond what keeps trees small.
    Expr diff(int var) const { return diff_node(node_, var); }

    std::string to_string(const std::vector<std::string>& names = {}) const {
        std::ostringstream os;
        print(os, *node_, names);
        return os.str();
    }

    friend Expr operator+(const Expr& a, const Expr& b) {
        if (a.is_constant() && a.constant_value() == 0.0) return b;
        if (b.is_constant() && b.constant_value() == 0.0) return a;
        if (a.is_constant() && b.is_constant()) return constant(a.constant_value() + b.constant_value());
        return binary(Op::Add, a, b);
    }
    friend Expr operator-(const Expr& a, const Expr& b) {
        if (b.is_constant() && b.constant_value() == 0.0) return a;
        if (a.is_constant() && b.is_constant()) return constant(a.constant_value() - b.constant_value());
        if (a.is_constant() && a.constant_value() == 0.0) return -b;
        return binary(Op::Sub, a, b);
    }
    friend Expr operator*(const Expr& a, const Expr& b) {
        if (a.is_constant() && a.constant_value() == 0.0) return a;
        if (b.is_constant() && b.constant_value() == 0.0) return b;
        if (a.is_constant() && a.constant_value() == 1.0) return b;
        if (b.is_constant() && b.constant_value() == 1.0) return a;
        if (a.is_constant() && b.is_constant()) return constant(a.constant_value() * b.constant_value());
        return binary(Op::Mul, a, b);
    }
    friend Expr operator/(const Expr& a, const Expr& b) {
        if (a.is_constant() && a.constant_value() == 0.0) return a;
        if (b.is_constant() && b.constant_value() == 1.0) return a;
        return binary(Op::Div, a, b);
    }
    friend Expr operator-(const Expr& a) {
        if (a.is_constant()) return constant(-a.constant_value());
        if (a.op() == Op::Neg) return Expr(a.node_->lhs);
        auto n = std::make_shared<Node>();
        n->op = Op::Neg;
        n->lhs = a.node_;
        return Expr(std::move(n));
    }
    friend Expr pow(const Expr& a, const Expr& b) {
        if (b.is_constant() && b.constant_value() == 1.0) return a;
        if (b.is_constant() && b.constant_value() == 0.0) return constant(1.0);
        return binary(Op::Pow, a, b);
    }
    static Expr call(Func f, const Expr& a) {
        auto n = std::make_shared<Node>();
        n->op = Op::Call;
        n->func = f;
        n->lhs = a.node_;
        return Expr(std::move(n));
    }

private:
    struct Node {
        Op op = Op::Const;
        double value = 0.0;
        int var = -1;
        Func func = Func::Sin;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit Expr(NodePtr n) : node_(std::move(n)) {}

    static Expr binary(Op op, const Expr& a, const Expr& b) {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->lhs = a.node_;
        n->rhs = b.node_;
        return Expr(std::move(n));
    }

    template <class S>
    static S eval_node(const Node& n, std::span<const S> vars) {
        using std::cos;
        using std::cosh;
        using std::exp;
        using std::log;
        using std::pow;
        using std::sin;
        using std::sinh;
        using std::sqrt;
        using std::tan;
        switch (n.op) {
        case Op::Const: return lift(vars[0], n.value);
        case Op::Var: return vars[n.var];
        case Op::Add: return eval_node<S>(*n.lhs, vars) + eval_node<S>(*n.rhs, vars);
        case Op::Sub: return eval_node<S>(*n.lhs, vars) - eval_node<S>(*n.rhs, vars);
        case Op::Mul:
            if (n.lhs->op == Op::Const) return n.lhs->value * eval_node<S>(*n.rhs, vars);
            if (n.rhs->op == Op::Const) return eval_node<S>(*n.lhs, vars) * n.rhs->value;
            return eval_node<S>(*n.lhs, vars) * eval_node<S>(*n.rhs, vars);
        case Op::Div: {
            if (n.rhs->op == Op::Const) {
                if (n.rhs->value == 0.0) throw DomainError("division by zero");
                return eval_node<S>(*n.lhs, vars) / n.rhs->value;
            }
            S den = eval_node<S>(*n.rhs, vars);
            if (scalar_value(den) == 0.0) throw DomainError("division by zero");
            return eval_node<S>(*n.lhs, vars) / den;
        }
        case Op::Neg: return -eval_node<S>(*n.lhs, vars);
        case Op::Pow: {
            S base = eval_node<S>(*n.lhs, vars);
            if (n.rhs->op == Op::Const) return power(base, n.rhs->value);
            S ex = eval_node<S>(*n.rhs, vars);
            if (!(scalar_value(base) > 0.0)) throw DomainError("variable power of non-positive base");
            return exp(ex * log(base));
        }
        case Op::Call: {
            S a = eval_node<S>(*n.lhs, vars);
            switch (n.func) {
            case Func::Sin: return sin(a);
            case Func::Cos: return cos(a);
            case Func::Tan:
                if (std::abs(std::cos(scalar_value(a))) < 1e-300) throw DomainError("tan at a pole");
                return tan(a);
            case Func::Exp: return exp(a);
            case Func::Log:
                if (!(scalar_value(a) > 0.0)) throw DomainError("log of non-positive value");
                return log(a);
            case Func::Sqrt:
                if (scalar_value(a) < 0.0) throw DomainError("sqrt of negative value");
                return sqrt(a);
            case Func::Sinh: return sinh(a);
            case Func::Cosh: return cosh(a);
            }
        }
        }
        throw Error("corrupt expression node");
    }

    static double scalar_value(double x) { return x; }
    static double scalar_value(const Jet& j) { return j.value(); }

    static double power(double base, double p) {
        double r = std::round(p);
        if (r == p && std::abs(p) <= 64) {
            if (base == 0.0 && p < 0) throw DomainError("negative power of zero");
            return std::pow(base, p);
        }
        if (base < 0.0) throw DomainError("non-integer power of negative value");
        return std::pow(base, p);
    }
    static Jet power(const Jet& base, double p) { return pow(base, p); }

    static Expr diff_node(const NodePtr& np, int var) {
        const Node& n = *np;
        Expr self(np);
        switch (n.op) {
        case Op::Const: return constant(0.0);
        case Op::Var: return constant(n.var == var ? 1.0 : 0.0);
        case Op::Add: return diff_node(n.lhs, var) + diff_node(n.rhs, var);
        case Op::Sub: return diff_node(n.lhs, var) - diff_node(n.rhs, var);
        case Op::Neg: return -diff_node(n.lhs, var);
        case Op::Mul: {
            Expr a(n.lhs), b(n.rhs);
            return diff_node(n.lhs, var) * b + a * diff_node(n.rhs, var);
        }
        case Op::Div: {
            Expr a(n.lhs), b(n.rhs);
            Expr da = diff_node(n.lhs, var), db = diff_node(n.rhs, var);
            if (db.is_constant() && db.constant_value() == 0.0) return da / b;
            return (da * b - a * db) / (b * b);
        }
        case Op::Pow: {
            Expr a(n.lhs), b(n.rhs);
            Expr da = diff_node(n.lhs, var);
            if (b.is_constant()) {
                double p = b.constant_value();
                return constant(p) * pow(a, constant(p - 1.0)) * da;
            }
            Expr db = diff_node(n.rhs, var);
            // d(a^b) = a^b (b' log a + b a'/a)
            return self * (db * call(Func::Log, a) + b * da / a);
        }
        case Op::Call: {
            Expr a(n.lhs);
            Expr da = diff_node(n.lhs, var);
            if (da.is_constant() && da.constant_value() == 0.0) return constant(0.0);
            switch (n.func) {
            case Func::Sin: return call(Func::Cos, a) * da;
            case Func::Cos: return -(call(Func::Sin, a) * da);
            case Func::Tan: {
                Expr c = call(Func::Cos, a);
                return da / (c * c);
            }
            case Func::Exp: return self * da;
            case Func::Log: return da / a;
            case Func::Sqrt: return da / (constant(2.0) * self);
            case Func::Sinh: return call(Func::Cosh, a) * da;
            case Func::Cosh: return call(Func::Sinh, a) * da;
            }
        }
        }
        throw Error("corrupt expression node");
    }

    static void print(std::ostream& os, const Node& n, const std::vector<std::string>& names) {
        static const char* fnames[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh"};
        switch (n.op) {
        case Op::Const: os << n.value; return;
        case Op::Var:
            if (n.var < static_cast<int>(names.size())) os << names[n.var];
            else os << "x" << n.var;
            return;
        case Op::Neg: os << "(-"; print(os, *n.lhs, names); os << ")"; return;
        case Op::Call:
            os << fnames[static_cast<int>(n.func)] << "(";
            print(os, *n.lhs, names);
            os << ")";
            return;
        default: break;
        }
        const char* sym = n.op == Op::Add ? "+" : n.op == Op::Sub ? "-" : n.op == Op::Mul ? "*" : n.op == Op::Div ? "/" : "^";
        os << "(";
        print(os, *n.lhs, names);
        os << sym;
        print(os, *n.rhs, names);
        os << ")";
    }

    struct Parser {
        std::string_view text;
        const std::vector<std::string>& vars;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& msg) const {
            throw ParseError("expression error: " + msg + " in \"" + std::string(text) + "\"", 1,
                             static_cast<int>(pos) + 1);
        }
        void skip_space() {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        bool accept(char c) {
            skip_space();
            if (pos < text.size() && text[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        Expr expr() {
            Expr e = term();
            for (;;) {
                if (accept('+')) e = binary(Op::Add, e, term());
                else if (accept('-')) e = binary(Op::Sub, e, term());
                else return e;
            }
        }
        Expr term() {
            Expr e = unary();
            for (;;) {
                if (accept('*')) e = binary(Op::Mul, e, unary());
                else if (accept('/')) e = binary(Op::Div, e, unary());
                else return e;
            }
        }
        Expr unary() {
            if (accept('-')) return -unary();
            if (accept('+')) return unary();
            return power();
        }
        Expr power() {
            Expr base = primary();
            if (accept('^')) return binary(Op::Pow, base, unary());
            return base;
        }
        Expr primary() {
            skip_space();
            if (pos >= text.size()) fail("unexpected end of input");
            char c = text[pos];
            if (accept('(')) {
                Expr e = expr();
                if (!accept(')')) fail("expected ')'");
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos;
                while (pos < text.size() &&
                       (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                    ++pos;
                std::string id(text.substr(start, pos - start));
                static const std::pair<const char*, Func> funcs[] = {
                    {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
                    {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
                    {"sinh", Func::Sinh}, {"cosh", Func::Cosh}};
                for (const auto& [name, f] : funcs) {
                    if (id == name) {
                        if (!accept('(')) fail("expected '(' after " + id);
                        Expr arg = expr();
                        if (!accept(')')) fail("expected ')'");
                        return call(f, arg);
                    }
                }
                for (std::size_t i = 0; i < vars.size(); ++i)
                    if (vars[i] == id) return variable(static_cast<int>(i));
                if (id == "pi") return constant(std::numbers::pi);
                pos = start;
                fail("unknown identifier '" + id + "'");
            }
            fail("unexpected character '" + std::string(1, c) + "'");
        }
        Expr number() {
            std::size_t start = pos;
            while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) ++pos;
            if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
                std::size_t save = pos;
                ++pos;
                if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
                if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                } else {
                    pos = save;
                }
            }
            std::string s(text.substr(start, pos - start));
            try {
                std::size_t used = 0;
                double v = std::stod(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
                return constant(v);
            } catch (const std::exception&) {
                pos = start;
                fail("malformed number '" + s + "'");
            }
        }
    };

    NodePtr node_;
};

} // namespace lz
