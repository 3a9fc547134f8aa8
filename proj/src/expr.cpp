#include "mulrk/expr.hpp"

#include "mulrk/format.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <variant>

namespace mulrk::expr {

SyntaxError::SyntaxError(std::size_t offset, std::string expected)
    : Error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::size_t offset, std::string name)
    : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      offset_(offset),
      name_(std::move(name)) {}

enum class Func { exp, ln, sqrt, sin, cos };
enum class Var { x, y };

struct Number {
    double value;
};
struct Variable {
    Var var;
};
struct Binary {
    char op;
    std::shared_ptr<const Node> lhs, rhs;
};
struct Negate {
    std::shared_ptr<const Node> operand;
};
struct Call {
    Func func;
    std::shared_ptr<const Node> arg;
};

struct Node {
    std::variant<Number, Variable, Binary, Negate, Call> v;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

template <class T>
NodePtr make(T t) {
    return std::make_shared<const Node>(Node{std::move(t)});
}

constexpr std::array<std::pair<std::string_view, Func>, 5> functions{{
    {"exp", Func::exp},
    {"ln", Func::ln},
    {"sqrt", Func::sqrt},
    {"sin", Func::sin},
    {"cos", Func::cos},
}};

std::string_view func_name(Func f) {
    for (const auto& [name, fn] : functions) {
        if (fn == f) return name;
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse_all() {
        NodePtr e = sum();
        skip_ws();
        if (pos_ != src_.size()) {
            throw SyntaxError(pos_, "operator or end of input");
        }
        return e;
    }

private:
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

    void expect(char c) {
        if (!accept(c)) throw SyntaxError(pos_, std::string("'") + c + "'");
    }

    NodePtr sum() {
        NodePtr lhs = product();
        for (;;) {
            if (accept('+')) {
                lhs = make(Binary{'+', lhs, product()});
            } else if (accept('-')) {
                lhs = make(Binary{'-', lhs, product()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr product() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Binary{'*', lhs, unary()});
            } else if (accept('/')) {
                lhs = make(Binary{'/', lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Negate{unary()});
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make(Binary{'^', base, unary()});
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw SyntaxError(pos_, "number, variable, function or '('");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw SyntaxError(pos_, "number, variable, function or '('");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
                pos_ = p;
            }
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (ec != std::errc{} || ptr != src_.data() + pos_) {
            throw SyntaxError(start, "a finite numeric literal");
        }
        return make(Number{v});
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return make(Variable{Var::x});
        if (name == "y") return make(Variable{Var::y});
        for (const auto& [fname, fn] : functions) {
            if (name == fname) {
                expect('(');
                NodePtr arg = sum();
                expect(')');
                return make(Call{fn, arg});
            }
        }
        throw UnknownIdentifier(start, std::string(name));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Complex checked(Complex z, const char* what) {
    if (!finite(z)) throw EvalError(std::string("non-finite result in ") + what);
    return z;
}

Complex int_power(Complex base, long long n) {
    Complex result{1.0, 0.0};
    Complex b = base;
    unsigned long long k = static_cast<unsigned long long>(n < 0 ? -n : n);
    while (k) {
        if (k & 1ULL) result *= b;
        b *= b;
        k >>= 1;
    }
    if (n < 0) {
        if (result == Complex{0.0, 0.0}) throw EvalError("division by zero in '^'");
        result = 1.0 / result;
    }
    return result;
}

Complex power(Complex a, Complex b) {
    if (b.imag() == 0.0) {
        const double e = b.real();
        if (e == std::trunc(e) && std::abs(e) <= 1024.0) return int_power(a, static_cast<long long>(e));
        if (a.imag() == 0.0 && a.real() > 0.0) return std::pow(a.real(), e);
    }
    if (a == Complex{0.0, 0.0}) {
        if (b.imag() == 0.0 && b.real() > 0.0) return 0.0;
        throw EvalError("0 raised to a non-positive power");
    }
    return std::exp(b * std::log(a));
}

Complex eval_node(const Node& n, double x, Complex y) {
    return std::visit(
        [&](const auto& v) -> Complex {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Number>) {
                return v.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return v.var == Var::x ? Complex{x, 0.0} : y;
            } else if constexpr (std::is_same_v<T, Negate>) {
                // 0 - z keeps +0 imaginary parts, so ln(-1) lands on +pi.
                return Complex{0.0, 0.0} - eval_node(*v.operand, x, y);
            } else if constexpr (std::is_same_v<T, Call>) {
                const Complex a = eval_node(*v.arg, x, y);
                switch (v.func) {
                    case Func::exp: return checked(std::exp(a), "exp");
                    case Func::ln:
                        if (a == Complex{0.0, 0.0}) throw EvalError("ln(0)");
                        return checked(std::log(a), "ln");
                    case Func::sqrt: return checked(std::sqrt(a), "sqrt");
                    case Func::sin: return checked(std::sin(a), "sin");
                    case Func::cos: return checked(std::cos(a), "cos");
                }
                return {};
            } else {
                const Complex a = eval_node(*v.lhs, x, y);
                const Complex b = eval_node(*v.rhs, x, y);
                switch (v.op) {
                    case '+': return checked(a + b, "'+'");
                    case '-': return checked(a - b, "'-'");
                    case '*': return checked(a * b, "'*'");
                    case '/':
                        if (b == Complex{0.0, 0.0}) throw EvalError("division by zero");
                        return checked(a / b, "'/'");
                    default: return checked(power(a, b), "'^'");
                }
            }
        },
        n.v);
}

// Binding strength used by the printer: sum 1, product 2, unary 3, power 4, atom 5.
int precedence(const Node& n) {
    if (const auto* b = std::get_if<Binary>(&n.v)) {
        if (b->op == '+' || b->op == '-') return 1;
        if (b->op == '*' || b->op == '/') return 2;
        return 4;
    }
    if (std::holds_alternative<Negate>(n.v)) return 3;
    return 5;
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& n, int min_prec, std::string& out) {
    if (precedence(n) < min_prec) {
        out += '(';
        print_node(n, out);
        out += ')';
    } else {
        print_node(n, out);
    }
}

void print_node(const Node& n, std::string& out) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Number>) {
                std::array<char, 32> buf{};
                const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v.value);
                out.append(buf.data(), res.ptr);
            } else if constexpr (std::is_same_v<T, Variable>) {
                out += v.var == Var::x ? 'x' : 'y';
            } else if constexpr (std::is_same_v<T, Negate>) {
                out += '-';
                print_child(*v.operand, 3, out);
            } else if constexpr (std::is_same_v<T, Call>) {
                out += func_name(v.func);
                out += '(';
                print_node(*v.arg, out);
                out += ')';
            } else {
                const int p = precedence(n);
                if (v.op == '^') {
                    print_child(*v.lhs, 5, out);
                    out += '^';
                    print_child(*v.rhs, 3, out);
                } else {
                    print_child(*v.lhs, p, out);
                    out += v.op;
                    print_child(*v.rhs, p + 1, out);
                }
            }
        },
        n.v);
}

bool uses_y_node(const Node& n) {
    return std::visit(
        [](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Number>) {
                return false;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return v.var == Var::y;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return uses_y_node(*v.operand);
            } else if constexpr (std::is_same_v<T, Call>) {
                return uses_y_node(*v.arg);
            } else {
                return uses_y_node(*v.lhs) || uses_y_node(*v.rhs);
            }
        },
        n.v);
}

} // namespace

Complex Expr::eval(double x, Complex y) const { return eval_node(*root_, x, y); }

std::string Expr::print() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

bool Expr::uses_y() const { return uses_y_node(*root_); }

Expr parse(std::string_view src) { return Expr(Parser(src).parse_all()); }

} // namespace mulrk::expr
