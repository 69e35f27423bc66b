#include "wfa/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cctype>

namespace wfa {

ParseError::ParseError(std::size_t offset, std::string expected)
    : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
      offset_(offset),
      expected_(std::move(expected)) {}

EvalError::EvalError(const std::string& what, std::string subexpr)
    : std::runtime_error(what + " in '" + subexpr + "'"), subexpr_(std::move(subexpr)) {}

bool is_variable(std::string_view name) { return name == "u" || name == "v" || name == "x"; }

namespace {

Expr make(Op op, Expr a = nullptr, Expr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_num(const Expr& e, double v) { return e->op == Op::Num && e->value == v; }
bool is_num(const Expr& e) { return e->op == Op::Num; }

const char* fn_name(Op op) {
    switch (op) {
    case Op::Exp: return "exp";
    case Op::Ln: return "ln";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    default: return "?";
    }
}

}  // namespace

Expr num(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Num;
    n->value = v;
    return n;
}

Expr var(std::string_view name) {
    auto n = std::make_shared<Node>();
    n->op = is_variable(name) ? Op::Var : Op::Param;
    n->name = std::string(name);
    return n;
}

// constant folding and the 0/1 identities only
Expr add(Expr a, Expr b) {
    if (is_num(a) && is_num(b)) return num(a->value + b->value);
    if (is_num(a, 0.0)) return b;
    if (is_num(b, 0.0)) return a;
    return make(Op::Add, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
    if (is_num(a) && is_num(b)) return num(a->value - b->value);
    if (is_num(b, 0.0)) return a;
    if (is_num(a, 0.0)) return neg(std::move(b));
    return make(Op::Sub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
    if (is_num(a) && is_num(b)) return num(a->value * b->value);
    if (is_num(a, 0.0) || is_num(b, 0.0)) return num(0.0);
    if (is_num(a, 1.0)) return b;
    if (is_num(b, 1.0)) return a;
    return make(Op::Mul, std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
    if (is_num(a) && is_num(b) && b->value != 0.0) return num(a->value / b->value);
    if (is_num(a, 0.0)) return num(0.0);
    if (is_num(b, 1.0)) return a;
    return make(Op::Div, std::move(a), std::move(b));
}

Expr pow(Expr a, Expr b) {
    if (is_num(b, 1.0)) return a;
    if (is_num(b, 0.0)) return num(1.0);
    return make(Op::Pow, std::move(a), std::move(b));
}

Expr neg(Expr a) {
    if (is_num(a)) return num(-a->value);
    if (a->op == Op::Neg) return a->a;
    return make(Op::Neg, std::move(a));
}

Expr call(Op fn, Expr a) { return make(fn, std::move(a)); }

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expr run() {
        skip();
        if (pos_ >= s_.size()) throw ParseError(pos_, "expression");
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) throw ParseError(pos_, "end of input");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

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

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (eat('+'))
                e = make(Op::Add, e, term());
            else if (eat('-'))
                e = make(Op::Sub, e, term());
            else
                return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (eat('*'))
                e = make(Op::Mul, e, factor());
            else if (eat('/'))
                e = make(Op::Div, e, factor());
            else
                return e;
        }
    }

    Expr factor() {
        if (eat('-')) return make(Op::Neg, factor());
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (eat('^')) return make(Op::Pow, base, factor());
        return base;
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size()) throw ParseError(pos_, "expression");
        char ch = s_[pos_];
        if (ch == '(') {
            ++pos_;
            Expr e = expr();
            if (!eat(')')) throw ParseError(pos_, "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string_view id = s_.substr(start, pos_ - start);
            skip();
            if (pos_ < s_.size() && s_[pos_] == '(') {
                Op fn;
                if (id == "exp")
                    fn = Op::Exp;
                else if (id == "ln")
                    fn = Op::Ln;
                else if (id == "sin")
                    fn = Op::Sin;
                else if (id == "cos")
                    fn = Op::Cos;
                else
                    throw ParseError(start, "function name (exp, ln, sin, cos)");
                ++pos_;
                Expr arg = expr();
                if (!eat(')')) throw ParseError(pos_, "')'");
                return make(fn, arg);
            }
            return var(id);
        }
        throw ParseError(pos_, "expression");
    }

    Expr number() {
        std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t k = pos_ + 1;
            if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
            if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
                pos_ = k;
                digits();
            }
        }
        double v = 0.0;
        auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (ec != std::errc() || p != s_.data() + pos_) throw ParseError(start, "number");
        return num(v);
    }
};

int prec(const Expr& e) {
    switch (e->op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Num: return e->value < 0 || std::signbit(e->value) ? 0 : 5;
    default: return 5;
    }
}

void print_into(const Expr& e, std::string& out);

void wrap(const Expr& e, int need, std::string& out) {
    if (prec(e) < need) {
        out += '(';
        print_into(e, out);
        out += ')';
    } else {
        print_into(e, out);
    }
}

void print_into(const Expr& e, std::string& out) {
    switch (e->op) {
    case Op::Num: {
        std::array<char, 32> buf{};
        auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), e->value);
        out.append(buf.data(), p);
        break;
    }
    case Op::Var:
    case Op::Param: out += e->name; break;
    case Op::Add:
    case Op::Sub:
        wrap(e->a, 1, out);
        out += e->op == Op::Add ? " + " : " - ";
        wrap(e->b, 2, out);
        break;
    case Op::Mul:
    case Op::Div:
        wrap(e->a, 2, out);
        out += e->op == Op::Mul ? "*" : "/";
        wrap(e->b, 3, out);
        break;
    case Op::Neg:
        out += '-';
        wrap(e->a, 3, out);
        break;
    case Op::Pow:
        wrap(e->a, 5, out);
        out += '^';
        wrap(e->b, 3, out);
        break;
    default:
        out += fn_name(e->op);
        out += '(';
        print_into(e->a, out);
        out += ')';
    }
}

void collect(const Expr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->op == Op::Var || e->op == Op::Param) out.insert(e->name);
    collect(e->a, out);
    collect(e->b, out);
}

double checked(Op op, double a, double b, const Expr& e) {
    switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div:
        if (b == 0.0) throw EvalError("division by zero", print(e));
        return a / b;
    case Op::Pow: {
        double r = std::pow(a, b);
        if (std::isnan(r) && !std::isnan(a) && !std::isnan(b)) throw EvalError("pow domain error", print(e));
        return r;
    }
    case Op::Neg: return -a;
    case Op::Exp: return std::exp(a);
    case Op::Ln:
        if (!(a > 0.0)) throw EvalError("ln of non-positive value", print(e));
        return std::log(a);
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    default: return 0.0;
    }
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

std::string print(const Expr& e) {
    std::string out;
    print_into(e, out);
    return out;
}

bool equal(const Expr& a, const Expr& b) {
    if (!a || !b) return !a && !b;
    if (a->op != b->op) return false;
    switch (a->op) {
    case Op::Num: return a->value == b->value;
    case Op::Var:
    case Op::Param: return a->name == b->name;
    default: return equal(a->a, b->a) && equal(a->b, b->b);
    }
}

std::set<std::string> free_names(const Expr& e) {
    std::set<std::string> out;
    collect(e, out);
    return out;
}

double eval(const Expr& e, const Bindings& bindings) {
    switch (e->op) {
    case Op::Num: return e->value;
    case Op::Var:
    case Op::Param: {
        auto it = bindings.find(e->name);
        if (it == bindings.end()) throw EvalError("unbound variable '" + e->name + "'", e->name);
        return it->second;
    }
    default: {
        double a = eval(e->a, bindings);
        double b = e->b ? eval(e->b, bindings) : 0.0;
        return checked(e->op, a, b, e);
    }
    }
}

Expr diff(const Expr& e, std::string_view x) {
    switch (e->op) {
    case Op::Num: return num(0.0);
    case Op::Var:
    case Op::Param: return num(e->name == x ? 1.0 : 0.0);
    case Op::Add: return add(diff(e->a, x), diff(e->b, x));
    case Op::Sub: return sub(diff(e->a, x), diff(e->b, x));
    case Op::Mul: return add(mul(diff(e->a, x), e->b), mul(e->a, diff(e->b, x)));
    case Op::Div:
        return div(sub(mul(diff(e->a, x), e->b), mul(e->a, diff(e->b, x))), pow(e->b, num(2.0)));
    case Op::Neg: return neg(diff(e->a, x));
    case Op::Pow: {
        Expr db = diff(e->b, x);
        Expr da = diff(e->a, x);
        if (is_num(db, 0.0)) return mul(mul(e->b, pow(e->a, sub(e->b, num(1.0)))), da);
        // a^b (b' ln a + b a'/a)
        return mul(e, add(mul(db, call(Op::Ln, e->a)), div(mul(e->b, da), e->a)));
    }
    case Op::Exp: return mul(e, diff(e->a, x));
    case Op::Ln: return div(diff(e->a, x), e->a);
    case Op::Sin: return mul(call(Op::Cos, e->a), diff(e->a, x));
    case Op::Cos: return neg(mul(call(Op::Sin, e->a), diff(e->a, x)));
    }
    return num(0.0);
}

Expr substitute(const Expr& e, std::string_view name, const Expr& with) {
    if ((e->op == Op::Var || e->op == Op::Param) && e->name == name) return with;
    if (!e->a) return e;
    Expr a = substitute(e->a, name, with);
    Expr b = e->b ? substitute(e->b, name, with) : nullptr;
    if (a == e->a && b == e->b) return e;
    return make(e->op, a, b);
}

// ---------------------------------------------------------------- compiled

Compiled::Compiled(const Expr& e, const Bindings& params) {
    int depth = 0;
    auto emit = [&](auto&& self, const Expr& n) -> void {
        switch (n->op) {
        case Op::Num:
            code_.push_back({Op::Num, n->value, 0, -1});
            depth_ = std::max(depth_, ++depth);
            return;
        case Op::Var:
            code_.push_back({Op::Var, 0.0, n->name == "u" ? 0 : n->name == "v" ? 1 : 2, -1});
            depth_ = std::max(depth_, ++depth);
            return;
        case Op::Param: {
            auto it = params.find(n->name);
            if (it == params.end()) throw EvalError("unbound variable '" + n->name + "'", n->name);
            code_.push_back({Op::Num, it->second, 0, -1});
            depth_ = std::max(depth_, ++depth);
            return;
        }
        default:
            self(self, n->a);
            if (n->b) {
                self(self, n->b);
                --depth;
            }
            nodes_.push_back(n);
            code_.push_back({n->op, 0.0, 0, static_cast<int>(nodes_.size()) - 1});
        }
    };
    emit(emit, e);
}

double Compiled::operator()(double u, double v, double x) const {
    std::array<double, 64> small{};
    std::vector<double> big;
    double* st = small.data();
    if (depth_ > 64) {
        big.resize(depth_);
        st = big.data();
    }
    const double vars[3] = {u, v, x};
    int sp = 0;
    for (const Ins& in : code_) {
        switch (in.op) {
        case Op::Num: st[sp++] = in.value; break;
        case Op::Var: st[sp++] = vars[in.slot]; break;
        case Op::Add: --sp; st[sp - 1] += st[sp]; break;
        case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
        case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
        case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
        case Op::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
        case Op::Div:
        case Op::Pow:
            --sp;
            st[sp - 1] = checked(in.op, st[sp - 1], st[sp], nodes_[in.src]);
            break;
        default: st[sp - 1] = checked(in.op, st[sp - 1], 0.0, nodes_[in.src]);
        }
    }
    return st[0];
}

}  // namespace wfa
