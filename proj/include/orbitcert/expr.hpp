#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitcert {

class ExprError : public std::runtime_error {
  public:
    ExprError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (column " + std::to_string(position + 1) + ")"),
          position_(position) {}

    [[nodiscard]] std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

/// Small arithmetic expression: variables by name, operators + - * / ^,
/// functions sin cos exp sqrt, constant pi, scientific-notation literals.
class Expression {
  public:
    /// Throws ExprError on malformed input or unknown identifiers.
    static Expression parse(const std::string& text, const std::vector<std::string>& variables);

    /// values must be parallel to the variable list given at parse time.
    [[nodiscard]] double eval(std::span<const double> values) const;

    Expression(Expression&&) noexcept;
    Expression& operator=(Expression&&) noexcept;
    Expression(const Expression&);
    Expression& operator=(const Expression&);
    ~Expression();

    struct Node;  // AST node, defined in the implementation

  private:
    explicit Expression(std::unique_ptr<Node> root);
    std::unique_ptr<Node> root_;
};

}  // namespace orbitcert
