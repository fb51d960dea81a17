#include "ergodic/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "ergodic/error.hpp"

namespace ergodic {

namespace {

enum class OpCode : std::uint8_t {
    Const,
    VarU,
    VarX,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Tanh,
    Abs,
    Sign,
    Min,
    Max,
};

struct Instruction {
    OpCode op;
    double value = 0.0;
    std::uint32_t begin = 0;  // source span of the sub-expression this op completes
    std::uint32_t end = 0;
};

struct Span {
    std::size_t begin;
    std::size_t end;
};

struct FunctionInfo {
    std::string_view name;
    OpCode op;
    int arity;
};

constexpr std::array<FunctionInfo, 11> kFunctions{{
    {"exp", OpCode::Exp, 1},
    {"log", OpCode::Log, 1},
    {"sqrt", OpCode::Sqrt, 1},
    {"sin", OpCode::Sin, 1},
    {"cos", OpCode::Cos, 1},
    {"tanh", OpCode::Tanh, 1},
    {"abs", OpCode::Abs, 1},
    {"sign", OpCode::Sign, 1},
    {"min", OpCode::Min, 2},
    {"max", OpCode::Max, 2},
    {"pow", OpCode::Pow, 2},
}};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::vector<Instruction> run() {
        skip_space();
        if (pos_ >= text_.size()) {
            throw ParseError("empty expression", pos_);
        }
        parse_expr();
        skip_space();
        if (pos_ != text_.size()) {
            throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
        }
        return std::move(code_);
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void emit(OpCode op, Span span, double value = 0.0) {
        code_.push_back({op, value, static_cast<std::uint32_t>(span.begin),
                         static_cast<std::uint32_t>(span.end)});
    }

    Span parse_expr() {
        Span lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                Span rhs = parse_term();
                lhs = {lhs.begin, rhs.end};
                emit(OpCode::Add, lhs);
            } else if (accept('-')) {
                Span rhs = parse_term();
                lhs = {lhs.begin, rhs.end};
                emit(OpCode::Sub, lhs);
            } else {
                return lhs;
            }
        }
    }

    Span parse_term() {
        Span lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                Span rhs = parse_unary();
                lhs = {lhs.begin, rhs.end};
                emit(OpCode::Mul, lhs);
            } else if (accept('/')) {
                Span rhs = parse_unary();
                lhs = {lhs.begin, rhs.end};
                emit(OpCode::Div, lhs);
            } else {
                return lhs;
            }
        }
    }

    Span parse_unary() {
        skip_space();
        const std::size_t start = pos_;
        if (accept('-')) {
            Span operand = parse_unary();
            Span span{start, operand.end};
            emit(OpCode::Neg, span);
            return span;
        }
        if (accept('+')) {
            Span operand = parse_unary();
            return {start, operand.end};
        }
        return parse_power();
    }

    Span parse_power() {
        Span base = parse_primary();
        if (accept('^')) {
            Span exponent = parse_unary();
            Span span{base.begin, exponent.end};
            emit(OpCode::Pow, span);
            return span;
        }
        return base;
    }

    Span parse_primary() {
        skip_space();
        const std::size_t start = pos_;
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of expression", pos_);
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            parse_expr();
            if (!accept(')')) {
                throw ParseError("expected ')'", pos_);
            }
            return {start, pos_};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return parse_identifier();
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    Span parse_number() {
        const std::size_t start = pos_;
        std::size_t end = pos_;
        bool digits = false;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
            ++end;
            digits = true;
        }
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
                ++end;
                digits = true;
            }
        }
        if (!digits) {
            throw ParseError("malformed number", start);
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t exp_end = end + 1;
            if (exp_end < text_.size() && (text_[exp_end] == '+' || text_[exp_end] == '-')) {
                ++exp_end;
            }
            if (exp_end >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[exp_end]))) {
                throw ParseError("malformed exponent", end);
            }
            while (exp_end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp_end]))) {
                ++exp_end;
            }
            end = exp_end;
        }
        const std::string literal(text_.substr(start, end - start));
        const double value = std::strtod(literal.c_str(), nullptr);
        if (!std::isfinite(value)) {
            throw ParseError("numeric literal out of range", start);
        }
        pos_ = end;
        Span span{start, end};
        emit(OpCode::Const, span, value);
        return span;
    }

    Span parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        skip_space();
        const bool call = pos_ < text_.size() && text_[pos_] == '(';
        if (!call) {
            Span span{start, start + name.size()};
            if (name == "u") {
                emit(OpCode::VarU, span);
            } else if (name == "x") {
                emit(OpCode::VarX, span);
            } else if (name == "pi") {
                emit(OpCode::Const, span, std::numbers::pi);
            } else {
                throw ParseError("unknown identifier '" + std::string(name) + "'", start);
            }
            return span;
        }
        const FunctionInfo* fn = nullptr;
        for (const auto& candidate : kFunctions) {
            if (candidate.name == name) {
                fn = &candidate;
            }
        }
        if (fn == nullptr) {
            throw ParseError("unknown function '" + std::string(name) + "'", start);
        }
        ++pos_;  // '('
        int args = 0;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ')') {
            ++pos_;
        } else {
            do {
                parse_expr();
                ++args;
            } while (accept(','));
            if (!accept(')')) {
                throw ParseError("expected ')' or ','", pos_);
            }
        }
        if (args != fn->arity) {
            throw ParseError("function '" + std::string(name) + "' expects " +
                                 std::to_string(fn->arity) + " argument(s), got " +
                                 std::to_string(args),
                             start);
        }
        Span span{start, pos_};
        emit(fn->op, span);
        return span;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<Instruction> code_;
};

double sign_of(double v) {
    return static_cast<double>((v > 0.0) - (v < 0.0));
}

}  // namespace

struct Expression::Program {
    std::string source;
    std::vector<Instruction> code;
    std::size_t max_depth = 0;
    bool uses_u = false;
    bool uses_x = false;
};

Expression Expression::parse(std::string_view source) {
    auto program = std::make_shared<Program>();
    program->source = std::string(source);
    program->code = Parser(program->source).run();

    std::size_t depth = 0;
    for (const auto& ins : program->code) {
        switch (ins.op) {
            case OpCode::Const:
            case OpCode::VarU:
            case OpCode::VarX:
                ++depth;
                break;
            case OpCode::Add:
            case OpCode::Sub:
            case OpCode::Mul:
            case OpCode::Div:
            case OpCode::Pow:
            case OpCode::Min:
            case OpCode::Max:
                --depth;
                break;
            default:
                break;
        }
        program->max_depth = std::max(program->max_depth, depth);
        program->uses_u |= ins.op == OpCode::VarU;
        program->uses_x |= ins.op == OpCode::VarX;
    }
    return Expression(std::move(program));
}

const std::string& Expression::source() const noexcept { return program_->source; }

bool Expression::is_control_free() const noexcept { return !program_->uses_u; }

bool Expression::is_constant() const noexcept { return !program_->uses_u && !program_->uses_x; }

double Expression::operator()(double u, double x) const {
    const Program& prog = *program_;
    constexpr std::size_t kInline = 32;
    std::array<double, kInline> inline_stack{};
    std::vector<double> heap_stack;
    double* stack = inline_stack.data();
    if (prog.max_depth > kInline) {
        heap_stack.resize(prog.max_depth);
        stack = heap_stack.data();
    }

    std::size_t top = 0;  // number of live entries
    for (const Instruction& ins : prog.code) {
        double r;
        switch (ins.op) {
            case OpCode::Const: stack[top++] = ins.value; continue;
            case OpCode::VarU: stack[top++] = u; continue;
            case OpCode::VarX: stack[top++] = x; continue;
            case OpCode::Neg: r = -stack[top - 1]; break;
            case OpCode::Exp: r = std::exp(stack[top - 1]); break;
            case OpCode::Log: r = std::log(stack[top - 1]); break;
            case OpCode::Sqrt: r = std::sqrt(stack[top - 1]); break;
            case OpCode::Sin: r = std::sin(stack[top - 1]); break;
            case OpCode::Cos: r = std::cos(stack[top - 1]); break;
            case OpCode::Tanh: r = std::tanh(stack[top - 1]); break;
            case OpCode::Abs: r = std::fabs(stack[top - 1]); break;
            case OpCode::Sign: r = sign_of(stack[top - 1]); break;
            default: {
                const double rhs = stack[--top];
                const double lhs = stack[top - 1];
                switch (ins.op) {
                    case OpCode::Add: r = lhs + rhs; break;
                    case OpCode::Sub: r = lhs - rhs; break;
                    case OpCode::Mul: r = lhs * rhs; break;
                    case OpCode::Div: r = lhs / rhs; break;
                    case OpCode::Pow: r = std::pow(lhs, rhs); break;
                    case OpCode::Min: r = std::fmin(lhs, rhs); break;
                    default: r = std::fmax(lhs, rhs); break;
                }
            }
        }
        if (!std::isfinite(r)) {
            throw DomainError(prog.source.substr(ins.begin, ins.end - ins.begin), u, x);
        }
        stack[top - 1] = r;
    }
    return stack[0];
}

}  // namespace ergodic
