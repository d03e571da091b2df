#include "fsmkit/guard.hpp"

#include "fsmkit/errors.hpp"

#include <algorithm>
#include <cassert>

namespace fsmkit {

struct Guard::Node {
    Kind kind;
    bool value = false;
    std::string name;
    std::vector<Guard> children;
};

Guard Guard::constant(bool value) {
    return Guard(std::make_shared<const Node>(Node{Kind::Constant, value, {}, {}}));
}

Guard Guard::variable(std::string name) {
    return Guard(std::make_shared<const Node>(Node{Kind::Variable, false, std::move(name), {}}));
}

Guard Guard::negate(Guard operand) {
    return Guard(std::make_shared<const Node>(Node{Kind::Not, false, {}, {std::move(operand)}}));
}

Guard Guard::both(Guard lhs, Guard rhs) {
    return Guard(std::make_shared<const Node>(Node{Kind::And, false, {}, {std::move(lhs), std::move(rhs)}}));
}

Guard Guard::either(Guard lhs, Guard rhs) {
    return Guard(std::make_shared<const Node>(Node{Kind::Or, false, {}, {std::move(lhs), std::move(rhs)}}));
}

Guard::Kind Guard::kind() const { return node_->kind; }

bool Guard::value() const {
    assert(node_->kind == Kind::Constant);
    return node_->value;
}

const std::string& Guard::name() const {
    assert(node_->kind == Kind::Variable);
    return node_->name;
}

const Guard& Guard::operand() const {
    assert(node_->kind == Kind::Not);
    return node_->children[0];
}

const Guard& Guard::lhs() const {
    assert(node_->children.size() == 2);
    return node_->children[0];
}

const Guard& Guard::rhs() const {
    assert(node_->children.size() == 2);
    return node_->children[1];
}

bool operator==(const Guard& a, const Guard& b) {
    if (a.node_ == b.node_)
        return true;
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case Guard::Kind::Constant:
        return a.value() == b.value();
    case Guard::Kind::Variable:
        return a.name() == b.name();
    default:
        return a.node_->children == b.node_->children;
    }
}

namespace {

template <typename Lookup>
bool evaluate(const Guard& e, const Lookup& lookup) {
    switch (e.kind()) {
    case Guard::Kind::Constant:
        return e.value();
    case Guard::Kind::Variable:
        return lookup(e.name());
    case Guard::Kind::Not:
        return !evaluate(e.operand(), lookup);
    case Guard::Kind::And:
        // Both sides are evaluated so unknown variables surface regardless of short-circuiting.
        return evaluate(e.lhs(), lookup) & evaluate(e.rhs(), lookup);
    case Guard::Kind::Or:
        return evaluate(e.lhs(), lookup) | evaluate(e.rhs(), lookup);
    }
    return false;
}

void collect(const Guard& e, std::vector<std::string>& out) {
    switch (e.kind()) {
    case Guard::Kind::Constant:
        return;
    case Guard::Kind::Variable:
        if (std::find(out.begin(), out.end(), e.name()) == out.end())
            out.push_back(e.name());
        return;
    case Guard::Kind::Not:
        collect(e.operand(), out);
        return;
    default:
        collect(e.lhs(), out);
        collect(e.rhs(), out);
    }
}

int precedence(Guard::Kind k) {
    switch (k) {
    case Guard::Kind::Or:
        return 1;
    case Guard::Kind::And:
        return 2;
    case Guard::Kind::Not:
        return 3;
    default:
        return 4;
    }
}

void render(const Guard& e, const GuardSyntax& syn, std::string& out) {
    auto sub = [&](const Guard& child, bool parens) {
        if (parens)
            out += '(';
        render(child, syn, out);
        if (parens)
            out += ')';
    };
    switch (e.kind()) {
    case Guard::Kind::Constant:
        out += e.value() ? syn.true_lit : syn.false_lit;
        return;
    case Guard::Kind::Variable:
        out += e.name();
        return;
    case Guard::Kind::Not:
        out += syn.not_op;
        sub(e.operand(), precedence(e.operand().kind()) < 3);
        return;
    case Guard::Kind::And:
    case Guard::Kind::Or: {
        const int p = precedence(e.kind());
        sub(e.lhs(), precedence(e.lhs().kind()) < p);
        out += e.kind() == Guard::Kind::And ? syn.and_op : syn.or_op;
        sub(e.rhs(), precedence(e.rhs().kind()) <= p);
        return;
    }
    }
}

} // namespace

bool eval_guard(const Guard& expr, const InputValuation& v) {
    return evaluate(expr, [&](const std::string& name) {
        auto it = v.find(name);
        if (it == v.end())
            throw StructuralError("guard references unknown variable '" + name + "'");
        return it->second;
    });
}

bool eval_guard(const Guard& expr, std::span<const std::string> inputs, std::uint32_t mask) {
    return evaluate(expr, [&](const std::string& name) {
        auto it = std::find(inputs.begin(), inputs.end(), name);
        if (it == inputs.end())
            throw StructuralError("guard references unknown variable '" + name + "'");
        return ((mask >> (it - inputs.begin())) & 1u) != 0;
    });
}

std::vector<std::string> guard_variables(const Guard& expr) {
    std::vector<std::string> out;
    collect(expr, out);
    return out;
}

std::string render_guard(const Guard& expr, const GuardSyntax& syntax) {
    std::string out;
    render(expr, syntax, out);
    return out;
}

} // namespace fsmkit
