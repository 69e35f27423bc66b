#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wfa {

enum class Op { Num, Var, Param, Add, Sub, Mul, Div, Pow, Neg, Exp, Ln, Sin, Cos };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    double value = 0.0;  // Num
    std::string name;    // Var, Param
    Expr a, b;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string expected);
    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& what, std::string subexpr);
    const std::string& subexpr() const { return subexpr_; }

private:
    std::string subexpr_;
};

using Bindings = std::map<std::string, double, std::less<>>;

bool is_variable(std::string_view name);  // u, v, x

Expr num(double v);
Expr var(std::string_view name);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr pow(Expr a, Expr b);
Expr neg(Expr a);
Expr call(Op fn, Expr a);

Expr parse(std::string_view text);
std::string print(const Expr& e);
bool equal(const Expr& a, const Expr& b);
std::set<std::string> free_names(const Expr& e);

double eval(const Expr& e, const Bindings& bindings);
Expr diff(const Expr& e, std::string_view var);
Expr substitute(const Expr& e, std::string_view name, const Expr& with);

// Flattened evaluator over the variables (u, v, x) with parameters bound at
// compile time. Immutable once built.
class Compiled {
public:
    Compiled() = default;
    Compiled(const Expr& e, const Bindings& params);
    double operator()(double u, double v, double x = 0.0) const;
    bool empty() const { return code_.empty(); }

private:
    struct Ins {
        Op op;
        double value;
        int slot;
        int src;  // index into nodes_ for error reports
    };
    std::vector<Ins> code_;
    std::vector<Expr> nodes_;
    int depth_ = 0;
};

}  // namespace wfa
