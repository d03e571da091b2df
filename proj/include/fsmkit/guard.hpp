#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fsmkit {

using InputValuation = std::map<std::string, bool>;

/// Immutable boolean expression over input signals. Copies share structure.
class Guard {
public:
    enum class Kind { Constant, Variable, Not, And, Or };

    static Guard constant(bool value);
    static Guard variable(std::string name);
    static Guard negate(Guard operand);
    static Guard both(Guard lhs, Guard rhs);
    static Guard either(Guard lhs, Guard rhs);

    Kind kind() const;
    bool value() const;              // Constant only
    const std::string& name() const; // Variable only
    const Guard& operand() const;    // Not only
    const Guard& lhs() const;        // And / Or
    const Guard& rhs() const;        // And / Or

    friend bool operator==(const Guard& a, const Guard& b);

private:
    struct Node;
    explicit Guard(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Throws StructuralError naming the first variable missing from `v`.
bool eval_guard(const Guard& expr, const InputValuation& v);

/// Evaluates against a packed valuation: bit i of `mask` is the value of inputs[i].
bool eval_guard(const Guard& expr, std::span<const std::string> inputs, std::uint32_t mask);

/// Distinct variable names in first-occurrence order.
std::vector<std::string> guard_variables(const Guard& expr);

/// Operator spellings for rendering a guard in a concrete syntax.
struct GuardSyntax {
    std::string not_op = "!";
    std::string and_op = " & ";
    std::string or_op = " | ";
    std::string false_lit = "0";
    std::string true_lit = "1";
};

/// Renders with the minimum parentheses needed to reparse to the same tree
/// under the precedence ! > & > | with left-associative binaries.
std::string render_guard(const Guard& expr, const GuardSyntax& syntax = {});

} // namespace fsmkit
