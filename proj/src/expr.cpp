#include "few/expr.hpp"

#include <array>
#include <cassert>
#include <charconv>
#include <cstdio>
#include <string>

#include "few/errors.hpp"
#include "few/kernels.hpp"

namespace few::expr {

namespace {

constexpr int kOpCount = 20;

constexpr std::array<OpInfo, kOpCount> kOpTable = {{
    {"add", 2, ValueType::number, ValueType::number},
    {"sub", 2, ValueType::number, ValueType::number},
    {"mul", 2, ValueType::number, ValueType::number},
    {"div", 2, ValueType::number, ValueType::number},
    {"sin", 1, ValueType::number, ValueType::number},
    {"cos", 1, ValueType::number, ValueType::number},
    {"exp", 1, ValueType::number, ValueType::number},
    {"log", 1, ValueType::number, ValueType::number},
    {"sqrt", 1, ValueType::number, ValueType::number},
    {"square", 1, ValueType::number, ValueType::number},
    {"cube", 1, ValueType::number, ValueType::number},
    {"and", 2, ValueType::boolean, ValueType::boolean},
    {"or", 2, ValueType::boolean, ValueType::boolean},
    {"xor", 2, ValueType::boolean, ValueType::boolean},
    {"not", 1, ValueType::boolean, ValueType::boolean},
    {"eq", 2, ValueType::boolean, ValueType::number},
    {"gt", 2, ValueType::boolean, ValueType::number},
    {"geq", 2, ValueType::boolean, ValueType::number},
    {"lt", 2, ValueType::boolean, ValueType::number},
    {"leq", 2, ValueType::boolean, ValueType::number},
}};

}  // namespace

const OpInfo& op_info(Op op) noexcept { return kOpTable[static_cast<std::size_t>(op)]; }

bool lookup_op(std::string_view name, Op& out) noexcept {
    for (int i = 0; i < kOpCount; ++i) {
        if (kOpTable[static_cast<std::size_t>(i)].name == name) {
            out = static_cast<Op>(i);
            return true;
        }
    }
    return false;
}

std::size_t subtree_end(std::span<const Node> nodes, std::size_t pos) {
    std::size_t remaining = 1;
    std::size_t i = pos;
    while (remaining > 0) {
        if (i >= nodes.size()) throw Error("truncated node list");
        remaining += static_cast<std::size_t>(nodes[i].arity());
        --remaining;
        ++i;
    }
    return i;
}

namespace {

// Returns (end, depth) of the subtree at pos, checking arity and structure.
// Child value types are not restricted here: logical operators coerce numeric
// children at evaluation time (nonzero counts as true), which is what lets
// expressions like "(xor x18 x19)" over raw attributes round-trip. Generation
// still only produces strictly typed trees.
std::pair<std::size_t, int> check_subtree(std::span<const Node> nodes, std::size_t pos) {
    if (pos >= nodes.size()) throw Error("truncated node list");
    const Node& n = nodes[pos];
    if (n.kind != Node::Kind::op) return {pos + 1, 1};
    const OpInfo& info = op_info(n.op);
    std::size_t cursor = pos + 1;
    int child_depth = 0;
    for (int c = 0; c < info.arity; ++c) {
        if (cursor >= nodes.size()) throw Error("operator is missing a child");
        auto [end, depth] = check_subtree(nodes, cursor);
        child_depth = std::max(child_depth, depth);
        cursor = end;
    }
    return {cursor, child_depth + 1};
}

}  // namespace

int compute_depth(std::span<const Node> nodes) { return check_subtree(nodes, 0).second; }

FeatureTree make_tree(std::vector<Node> nodes) {
    if (nodes.empty()) throw Error("empty node list");
    auto [end, depth] = check_subtree(nodes, 0);
    if (end != nodes.size()) throw Error("trailing nodes after the root subtree");
    FeatureTree tree;
    tree.output_type = nodes.front().value_type();
    tree.depth = depth;
    tree.nodes = std::move(nodes);
    return tree;
}

void validate_tree(const FeatureTree& tree, int n_attributes, int max_depth) {
    auto [end, depth] = check_subtree(tree.nodes, 0);
    if (end != tree.nodes.size()) throw Error("trailing nodes after the root subtree");
    if (depth != tree.depth) throw Error("stored depth does not match the node list");
    if (tree.output_type != tree.nodes.front().value_type()) {
        throw Error("stored output type does not match the root");
    }
    if (max_depth > 0 && depth > max_depth) throw Error("tree exceeds the depth bound");
    for (const Node& n : tree.nodes) {
        if (n.kind == Node::Kind::variable &&
            (n.variable < 0 || n.variable >= n_attributes)) {
            throw Error("variable index out of range: x" + std::to_string(n.variable));
        }
    }
}

namespace {

// Recursive column evaluator over the pre-order list. `pos` is advanced past
// the evaluated subtree.
std::vector<double> eval_subtree(std::span<const Node> nodes, std::size_t& pos, const Matrix& X) {
    const Node& n = nodes[pos++];
    const std::size_t rows = X.rows();
    switch (n.kind) {
        case Node::Kind::variable: {
            if (n.variable < 0 || static_cast<std::size_t>(n.variable) >= X.cols()) {
                throw Error("variable index out of range: x" + std::to_string(n.variable));
            }
            auto src = X.col(static_cast<std::size_t>(n.variable));
            return {src.begin(), src.end()};
        }
        case Node::Kind::constant:
            return std::vector<double>(rows, n.value);
        case Node::Kind::op:
            break;
    }
    const bool is_logical = n.op == Op::logical_and || n.op == Op::logical_or ||
                            n.op == Op::logical_xor || n.op == Op::logical_not;
    std::vector<double> left = eval_subtree(nodes, pos, X);
    if (is_logical) kernels::to_bool(left, left);
    if (op_info(n.op).arity == 1) {
        switch (n.op) {
            case Op::sin: kernels::sin(left, left); break;
            case Op::cos: kernels::cos(left, left); break;
            case Op::exp: kernels::exp_capped(left, left); break;
            case Op::log: kernels::log_protected(left, left); break;
            case Op::sqrt: kernels::sqrt_abs(left, left); break;
            case Op::square: kernels::square(left, left); break;
            case Op::cube: kernels::cube(left, left); break;
            case Op::logical_not: kernels::logic_not(left, left); break;
            default: assert(false);
        }
        return left;
    }
    std::vector<double> right = eval_subtree(nodes, pos, X);
    if (is_logical) kernels::to_bool(right, right);
    switch (n.op) {
        case Op::add: kernels::add(left, right, left); break;
        case Op::sub: kernels::sub(left, right, left); break;
        case Op::mul: kernels::mul(left, right, left); break;
        case Op::div: kernels::div_protected(left, right, left); break;
        case Op::logical_and: kernels::logic_and(left, right, left); break;
        case Op::logical_or: kernels::logic_or(left, right, left); break;
        case Op::logical_xor: kernels::logic_xor(left, right, left); break;
        case Op::eq: kernels::cmp_eq(left, right, left); break;
        case Op::gt: kernels::cmp_gt(left, right, left); break;
        case Op::geq: kernels::cmp_geq(left, right, left); break;
        case Op::lt: kernels::cmp_lt(left, right, left); break;
        case Op::leq: kernels::cmp_leq(left, right, left); break;
        default: assert(false);
    }
    return left;
}

}  // namespace

std::vector<double> eval_tree(const FeatureTree& tree, const Matrix& X) {
    if (X.rows() == 0) throw ShapeError("cannot evaluate a tree over zero rows");
    std::size_t pos = 0;
    std::vector<double> out = eval_subtree(tree.nodes, pos, X);
    assert(pos == tree.nodes.size());
    return out;
}

namespace {

constexpr double kLeafVariableProb = 0.7;  // else a fresh constant in [-1, 1]
constexpr double kEarlyLeafProb = 0.3;     // grow method

Node random_leaf(int n_attributes, Rng& rng) {
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < kLeafVariableProb) {
        return Node::make_variable(
            std::uniform_int_distribution<std::int32_t>(0, n_attributes - 1)(rng));
    }
    return Node::make_constant(std::uniform_real_distribution<double>(-1.0, 1.0)(rng));
}

const std::array<Op, 11> kNumberOps = {Op::add, Op::sub, Op::mul, Op::div, Op::sin, Op::cos,
                                       Op::exp, Op::log, Op::sqrt, Op::square, Op::cube};
// Boolean-result operators: logical gates need boolean children (so depth
// budget >= 3), comparisons work directly over numeric subtrees.
const std::array<Op, 9> kBooleanOps = {Op::logical_and, Op::logical_or, Op::logical_xor,
                                       Op::logical_not, Op::eq, Op::gt, Op::geq, Op::lt, Op::leq};
const std::array<Op, 5> kComparisonOps = {Op::eq, Op::gt, Op::geq, Op::lt, Op::leq};

void grow(std::vector<Node>& out, int budget, ValueType want, int n_attributes, Rng& rng) {
    if (want == ValueType::number) {
        const bool force_leaf = budget <= 1;
        const bool early_leaf =
            std::uniform_real_distribution<double>(0.0, 1.0)(rng) < kEarlyLeafProb;
        if (force_leaf || early_leaf) {
            out.push_back(random_leaf(n_attributes, rng));
            return;
        }
        const Op op = kNumberOps[std::uniform_int_distribution<std::size_t>(
            0, kNumberOps.size() - 1)(rng)];
        out.push_back(Node::make_op(op));
        for (int c = 0; c < op_info(op).arity; ++c) grow(out, budget - 1, want, n_attributes, rng);
        return;
    }
    // Boolean position. A comparison consumes 2 levels (itself + numeric
    // children); a logical gate needs boolean children, i.e. 3 levels.
    Op op;
    if (budget >= 3) {
        op = kBooleanOps[std::uniform_int_distribution<std::size_t>(0, kBooleanOps.size() - 1)(rng)];
    } else {
        op = kComparisonOps[std::uniform_int_distribution<std::size_t>(
            0, kComparisonOps.size() - 1)(rng)];
    }
    out.push_back(Node::make_op(op));
    const OpInfo& info = op_info(op);
    for (int c = 0; c < info.arity; ++c) grow(out, budget - 1, info.operand, n_attributes, rng);
}

}  // namespace

FeatureTree random_tree(int max_depth, ValueType output_type, int n_attributes, Rng& rng) {
    if (max_depth < 1) throw Error("max_depth must be >= 1");
    if (n_attributes < 1) throw Error("n_attributes must be >= 1");
    if (output_type == ValueType::boolean && max_depth < 2) {
        throw Error("boolean trees need max_depth >= 2 (leaves are numeric)");
    }
    std::vector<Node> nodes;
    grow(nodes, max_depth, output_type, n_attributes, rng);
    return make_tree(std::move(nodes));
}

namespace {

void format_double(std::string& out, double v) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    assert(ec == std::errc());
    out.append(buf.data(), ptr);
}

void print_subtree(std::string& out, std::span<const Node> nodes, std::size_t& pos) {
    const Node& n = nodes[pos++];
    switch (n.kind) {
        case Node::Kind::variable:
            out += 'x';
            out += std::to_string(n.variable);
            return;
        case Node::Kind::constant:
            format_double(out, n.value);
            return;
        case Node::Kind::op:
            break;
    }
    out += '(';
    out += op_info(n.op).name;
    for (int c = 0; c < op_info(n.op).arity; ++c) {
        out += ' ';
        print_subtree(out, nodes, pos);
    }
    out += ')';
}

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    int n_attributes;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                     text[pos] == '\r')) {
            ++pos;
        }
    }

    [[noreturn]] void fail(const std::string& message, std::size_t at) const {
        throw ParseError(message, at);
    }

    std::string_view token() {
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] != ' ' && text[pos] != '\t' && text[pos] != '\n' &&
               text[pos] != '\r' && text[pos] != '(' && text[pos] != ')') {
            ++pos;
        }
        if (pos == start) fail("expected a token", start);
        return text.substr(start, pos - start);
    }

    void parse_expr(std::vector<Node>& out) {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input", pos);
        if (text[pos] == '(') {
            const std::size_t open_at = pos;
            ++pos;
            skip_ws();
            const std::size_t sym_at = pos;
            std::string_view sym = token();
            Op op;
            if (!lookup_op(sym, op)) fail("unknown symbol '" + std::string(sym) + "'", sym_at);
            out.push_back(Node::make_op(op));
            for (int c = 0; c < op_info(op).arity; ++c) parse_expr(out);
            skip_ws();
            if (pos >= text.size() || text[pos] != ')') {
                fail("expected ')' to close '(' ", open_at);
            }
            ++pos;
            return;
        }
        if (text[pos] == ')') fail("unexpected ')'", pos);
        const std::size_t tok_at = pos;
        std::string_view tok = token();
        if (tok.size() >= 2 && tok[0] == 'x' && tok[1] >= '0' && tok[1] <= '9') {
            int index = 0;
            auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), index);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                fail("bad variable name '" + std::string(tok) + "'", tok_at);
            }
            if (index < 0 || index >= n_attributes) {
                fail("variable index out of range: " + std::string(tok), tok_at);
            }
            out.push_back(Node::make_variable(index));
            return;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            fail("unknown symbol '" + std::string(tok) + "'", tok_at);
        }
        out.push_back(Node::make_constant(value));
    }
};

}  // namespace

std::string tree_to_text(const FeatureTree& tree) {
    std::string out;
    std::size_t pos = 0;
    print_subtree(out, tree.nodes, pos);
    return out;
}

FeatureTree parse_tree(std::string_view text, int n_attributes) {
    Parser parser{text, 0, n_attributes};
    std::vector<Node> nodes;
    parser.parse_expr(nodes);
    parser.skip_ws();
    if (parser.pos != text.size()) {
        throw ParseError("trailing text after expression", parser.pos);
    }
    try {
        return make_tree(std::move(nodes));
    } catch (const Error& e) {
        throw ParseError(e.what(), 0);
    }
}

}  // namespace few::expr
