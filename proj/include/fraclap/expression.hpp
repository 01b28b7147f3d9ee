#pragma once

#include <memory>
#include <string>

#include "fraclap/solver.hpp"

namespace fraclap {

/// Arithmetic expression in the variables x and u:
///   numbers, x, u, pi, + - * / ^ (right-associative), unary minus,
///   exp(), log(), sqrt(), parentheses.
/// Parse failures raise ParameterError with the offending position.
class Expression {
public:
    struct Node;

    static Expression parse(const std::string& text);

    double operator()(double x, double u) const;
    /// Symbolic partial derivative in x or u.
    Expression dx() const;
    Expression du() const;
    bool dependsOnU() const;
    const std::string& text() const { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

/// A pure-space source when the expression does not mention u, a semilinear
/// one otherwise; both carry the symbolic partials.
SourceTerm sourceFromExpression(const Expression& e);

}  // namespace fraclap
