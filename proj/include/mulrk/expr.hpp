#pragma once

// Arithmetic expressions in x (real) and y (complex) for user-supplied
// right-hand sides.
//
//   expr    := sum
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' unary)?          right-associative
//   atom    := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
//   func    := exp | ln | sqrt | sin | cos

#include "mulrk/errors.hpp"
#include "mulrk/geomcalc.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace mulrk::expr {

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::string expected);

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
    [[nodiscard]] const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t offset, std::string name);

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::size_t offset_;
    std::string name_;
};

class EvalError : public Error {
public:
    using Error::Error;
};

struct Node;

/// Immutable parsed expression; cheap to copy and safe to share between threads.
class Expr {
public:
    /// Complex evaluation. ln and sqrt use principal branches. Throws EvalError
    /// on division by exact zero or a non-finite intermediate.
    [[nodiscard]] Complex eval(double x, Complex y) const;

    /// Canonical text that parses back to an equal tree.
    [[nodiscard]] std::string print() const;

    [[nodiscard]] bool uses_y() const;

private:
    friend Expr parse(std::string_view src);
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    std::shared_ptr<const Node> root_;
};

[[nodiscard]] Expr parse(std::string_view src);

} // namespace mulrk::expr
