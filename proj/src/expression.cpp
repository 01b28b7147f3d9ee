#include "fraclap/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "fraclap/errors.hpp"

namespace fraclap {

enum class Op { num, x, u, add, sub, mul, div, pow, neg, exp, log, sqrt };

struct Expression::Node {
    Op op;
    double value = 0.0;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr a = {}, NodePtr b = {}) {
    return std::make_shared<const Expression::Node>(Expression::Node{op, 0.0, std::move(a), std::move(b)});
}

NodePtr number(double v) { return std::make_shared<const Expression::Node>(Expression::Node{Op::num, v, {}, {}}); }

bool isConst(const NodePtr& n, double v) { return n->op == Op::num && n->value == v; }

// light simplification keeps derivative trees small
NodePtr add(NodePtr a, NodePtr b) {
    if (isConst(a, 0)) return b;
    if (isConst(b, 0)) return a;
    if (a->op == Op::num && b->op == Op::num) return number(a->value + b->value);
    return make(Op::add, a, b);
}
NodePtr sub(NodePtr a, NodePtr b) {
    if (isConst(b, 0)) return a;
    if (a->op == Op::num && b->op == Op::num) return number(a->value - b->value);
    return make(Op::sub, a, b);
}
NodePtr mul(NodePtr a, NodePtr b) {
    if (isConst(a, 0) || isConst(b, 0)) return number(0);
    if (isConst(a, 1)) return b;
    if (isConst(b, 1)) return a;
    if (a->op == Op::num && b->op == Op::num) return number(a->value * b->value);
    return make(Op::mul, a, b);
}
NodePtr div(NodePtr a, NodePtr b) {
    if (isConst(a, 0)) return number(0);
    if (isConst(b, 1)) return a;
    return make(Op::div, a, b);
}
NodePtr neg(NodePtr a) {
    if (a->op == Op::num) return number(-a->value);
    return make(Op::neg, a);
}

double eval(const Expression::Node& n, double x, double u) {
    switch (n.op) {
        case Op::num: return n.value;
        case Op::x: return x;
        case Op::u: return u;
        case Op::add: return eval(*n.a, x, u) + eval(*n.b, x, u);
        case Op::sub: return eval(*n.a, x, u) - eval(*n.b, x, u);
        case Op::mul: return eval(*n.a, x, u) * eval(*n.b, x, u);
        case Op::div: return eval(*n.a, x, u) / eval(*n.b, x, u);
        case Op::pow: return std::pow(eval(*n.a, x, u), eval(*n.b, x, u));
        case Op::neg: return -eval(*n.a, x, u);
        case Op::exp: return std::exp(eval(*n.a, x, u));
        case Op::log: return std::log(eval(*n.a, x, u));
        case Op::sqrt: return std::sqrt(eval(*n.a, x, u));
    }
    return 0.0;
}

bool mentions(const NodePtr& n, Op var) {
    if (!n) return false;
    return n->op == var || mentions(n->a, var) || mentions(n->b, var);
}

NodePtr derive(const NodePtr& n, Op var) {
    switch (n->op) {
        case Op::num: return number(0);
        case Op::x:
        case Op::u: return number(n->op == var ? 1 : 0);
        case Op::add: return add(derive(n->a, var), derive(n->b, var));
        case Op::sub: return sub(derive(n->a, var), derive(n->b, var));
        case Op::mul: return add(mul(derive(n->a, var), n->b), mul(n->a, derive(n->b, var)));
        case Op::div:
            return div(sub(mul(derive(n->a, var), n->b), mul(n->a, derive(n->b, var))), mul(n->b, n->b));
        case Op::pow: {
            const NodePtr da = derive(n->a, var);
            if (!mentions(n->b, var)) {
                // a^c: c a^(c-1) a'
                return mul(mul(n->b, make(Op::pow, n->a, sub(n->b, number(1)))), da);
            }
            // a^b (b' log a + b a'/a)
            const NodePtr db = derive(n->b, var);
            return mul(n, add(mul(db, make(Op::log, n->a)), div(mul(n->b, da), n->a)));
        }
        case Op::neg: return neg(derive(n->a, var));
        case Op::exp: return mul(n, derive(n->a, var));
        case Op::log: return div(derive(n->a, var), n->a);
        case Op::sqrt: return div(derive(n->a, var), mul(number(2), n));
    }
    return number(0);
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr run() {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParameterError("expression \"" + s_ + "\": " + what + " at position " + std::to_string(pos_ + 1));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // expr := term (('+'|'-') term)*
    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (eat('+'))
                n = make(Op::add, n, term());
            else if (eat('-'))
                n = make(Op::sub, n, term());
            else
                return n;
        }
    }
    // term := unary (('*'|'/') unary)*
    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (eat('*'))
                n = make(Op::mul, n, unary());
            else if (eat('/'))
                n = make(Op::div, n, unary());
            else
                return n;
        }
    }
    // unary := ('-'|'+') unary | power
    NodePtr unary() {
        if (eat('-')) return make(Op::neg, unary());
        if (eat('+')) return unary();
        return power();
    }
    // power := primary ('^' unary)?
    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make(Op::pow, base, unary());
        return base;
    }
    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (eat('(')) {
            NodePtr n = expr();
            if (!eat(')')) fail("missing ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return number(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            if (id == "x") return make(Op::x);
            if (id == "u") return make(Op::u);
            if (id == "pi") return number(std::numbers::pi);
            Op f;
            if (id == "exp")
                f = Op::exp;
            else if (id == "log")
                f = Op::log;
            else if (id == "sqrt")
                f = Op::sqrt;
            else {
                pos_ = start;
                fail("unknown name '" + id + "'");
            }
            if (!eat('(')) fail("expected '(' after " + id);
            NodePtr arg = expr();
            if (!eat(')')) fail("missing ')'");
            return make(f, arg);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text).run();
    return e;
}

double Expression::operator()(double x, double u) const { return eval(*root_, x, u); }

Expression Expression::dx() const {
    Expression e;
    e.root_ = derive(root_, Op::x);
    e.text_ = "d/dx(" + text_ + ")";
    return e;
}

Expression Expression::du() const {
    Expression e;
    e.root_ = derive(root_, Op::u);
    e.text_ = "d/du(" + text_ + ")";
    return e;
}

bool Expression::dependsOnU() const { return mentions(root_, Op::u); }

SourceTerm sourceFromExpression(const Expression& e) {
    const Expression dx = e.dx();
    const Expression du = e.du();
    if (!e.dependsOnU())
        return SourceTerm::pure([e](double x) { return e(x, 0.0); }, [dx](double x) { return dx(x, 0.0); });
    return SourceTerm::semilinear([e](double x, double q) { return e(x, q); },
                                  [dx](double x, double q) { return dx(x, q); },
                                  [du](double x, double q) { return du(x, q); });
}

}  // namespace fraclap
