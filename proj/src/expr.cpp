#include "orbitcert/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <utility>

namespace orbitcert {

struct Expression::Node {
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt };
    Kind kind;
    double value = 0.0;
    int var_index = -1;
    std::unique_ptr<Node> lhs;
    std::unique_ptr<Node> rhs;

    [[nodiscard]] std::unique_ptr<Node> clone() const {
        auto copy = std::make_unique<Node>();
        copy->kind = kind;
        copy->value = value;
        copy->var_index = var_index;
        if (lhs) copy->lhs = lhs->clone();
        if (rhs) copy->rhs = rhs->clone();
        return copy;
    }

    [[nodiscard]] double eval(std::span<const double> values) const {
        switch (kind) {
            case Kind::Constant: return value;
            case Kind::Variable: return values[static_cast<std::size_t>(var_index)];
            case Kind::Add: return lhs->eval(values) + rhs->eval(values);
            case Kind::Sub: return lhs->eval(values) - rhs->eval(values);
            case Kind::Mul: return lhs->eval(values) * rhs->eval(values);
            case Kind::Div: return lhs->eval(values) / rhs->eval(values);
            case Kind::Pow: return std::pow(lhs->eval(values), rhs->eval(values));
            case Kind::Neg: return -lhs->eval(values);
            case Kind::Sin: return std::sin(lhs->eval(values));
            case Kind::Cos: return std::cos(lhs->eval(values));
            case Kind::Exp: return std::exp(lhs->eval(values));
            case Kind::Sqrt: return std::sqrt(lhs->eval(values));
        }
        return 0.0;
    }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

struct Parser {
    const std::string& text;
    const std::vector<std::string>& variables;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[nodiscard]] char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    static NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
        auto node = std::make_unique<Node>();
        node->kind = kind;
        node->lhs = std::move(lhs);
        node->rhs = std::move(rhs);
        return node;
    }

    NodePtr parse_expression() {
        NodePtr node = parse_term();
        while (true) {
            if (consume('+')) {
                node = make(Node::Kind::Add, std::move(node), parse_term());
            } else if (consume('-')) {
                node = make(Node::Kind::Sub, std::move(node), parse_term());
            } else {
                return node;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr node = parse_unary();
        while (true) {
            if (consume('*')) {
                node = make(Node::Kind::Mul, std::move(node), parse_unary());
            } else if (consume('/')) {
                node = make(Node::Kind::Div, std::move(node), parse_unary());
            } else {
                return node;
            }
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) return make(Node::Kind::Neg, parse_unary());
        if (consume('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (consume('^')) {
            return make(Node::Kind::Pow, std::move(base), parse_unary());
        }
        return base;
    }

    NodePtr parse_primary() {
        const char c = peek();
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expression();
            if (!consume(')')) throw ExprError("expected ')'", pos);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text.c_str() + pos;
            char* end = nullptr;
            const double value = std::strtod(begin, &end);
            if (end == begin) throw ExprError("malformed number", pos);
            pos += static_cast<std::size_t>(end - begin);
            auto node = make(Node::Kind::Constant);
            node->value = value;
            return node;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
                ++pos;
            }
            const std::string name = text.substr(start, pos - start);
            if (consume('(')) {
                Node::Kind kind;
                if (name == "sin") {
                    kind = Node::Kind::Sin;
                } else if (name == "cos") {
                    kind = Node::Kind::Cos;
                } else if (name == "exp") {
                    kind = Node::Kind::Exp;
                } else if (name == "sqrt") {
                    kind = Node::Kind::Sqrt;
                } else {
                    throw ExprError("unknown function '" + name + "'", start);
                }
                NodePtr arg = parse_expression();
                if (!consume(')')) throw ExprError("expected ')' after function argument", pos);
                return make(kind, std::move(arg));
            }
            if (name == "pi") {
                auto node = make(Node::Kind::Constant);
                node->value = std::numbers::pi;
                return node;
            }
            for (std::size_t i = 0; i < variables.size(); ++i) {
                if (variables[i] == name) {
                    auto node = make(Node::Kind::Variable);
                    node->var_index = static_cast<int>(i);
                    return node;
                }
            }
            throw ExprError("unknown identifier '" + name + "'", start);
        }
        throw ExprError("unexpected character", pos);
    }
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
    Parser parser{text, variables};
    NodePtr root = parser.parse_expression();
    parser.skip_space();
    if (parser.pos != text.size()) {
        throw ExprError("trailing characters after expression", parser.pos);
    }
    return Expression(std::move(root));
}

double Expression::eval(std::span<const double> values) const {
    return root_->eval(values);
}

Expression::Expression(std::unique_ptr<Node> root) : root_(std::move(root)) {}
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::Expression(const Expression& other) : root_(other.root_->clone()) {}
Expression& Expression::operator=(const Expression& other) {
    if (this != &other) root_ = other.root_->clone();
    return *this;
}
Expression::~Expression() = default;

}  // namespace orbitcert
