#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ergodic {

/**
 * Compiled arithmetic expression over the variables `u` (control) and `x`
 * (state).
 *
 * Grammar:
 *
 *     expr    := term (('+' | '-') term)*
 *     term    := unary (('*' | '/') unary)*
 *     unary   := ('-' | '+') unary | power
 *     power   := primary ('^' unary)?          right associative
 *     primary := number | 'u' | 'x' | 'pi' | name '(' expr (',' expr)* ')'
 *              | '(' expr ')'
 *
 * Functions: exp, log, sqrt, sin, cos, tanh, abs, sign (one argument) and
 * min, max (two arguments). `-x^2` parses as `-(x^2)`.
 *
 * The text is compiled once to a postfix program; an Expression is immutable
 * and cheap to copy, so it can be shared freely between threads.
 */
class Expression {
public:
    /// Parses `source`. Throws ParseError with the byte offset of the fault.
    static Expression parse(std::string_view source);

    /// Evaluates at (u, x). Throws DomainError naming the first
    /// sub-expression whose value is not finite.
    double operator()(double u, double x) const;

    /// Same as operator().
    double evaluate(double u, double x) const { return (*this)(u, x); }

    const std::string& source() const noexcept;

    /// True when the expression never reads `u`.
    bool is_control_free() const noexcept;

    /// True when the expression reads neither `u` nor `x`.
    bool is_constant() const noexcept;

    struct Program;

private:
    explicit Expression(std::shared_ptr<const Program> program) : program_(std::move(program)) {}

    std::shared_ptr<const Program> program_;
};

}  // namespace ergodic
