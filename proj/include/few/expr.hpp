#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "few/matrix.hpp"
#include "few/rng.hpp"

namespace few::expr {

// Every value in a tree is either a plain number or a {0,1}-encoded boolean.
enum class ValueType : std::uint8_t { number, boolean };

enum class Op : std::uint8_t {
    // number -> number
    add, sub, mul, div, sin, cos, exp, log, sqrt, square, cube,
    // boolean -> boolean
    logical_and, logical_or, logical_xor, logical_not,
    // number -> boolean (comparisons)
    eq, gt, geq, lt, leq,
};

struct OpInfo {
    std::string_view name;
    int arity;            // 1 or 2
    ValueType result;     // type this operator produces
    ValueType operand;    // child type generation/variation uses; evaluation
                          // coerces numeric children of logical ops instead
};

const OpInfo& op_info(Op op) noexcept;
// Maps an s-expression symbol ("add", "xor", "geq", ...) to its operator.
bool lookup_op(std::string_view name, Op& out) noexcept;

struct Node {
    enum class Kind : std::uint8_t { op, variable, constant };
    Kind kind = Kind::constant;
    Op op = Op::add;
    std::int32_t variable = 0;
    double value = 0.0;

    static Node make_op(Op o) { return {Kind::op, o, 0, 0.0}; }
    static Node make_variable(std::int32_t index) { return {Kind::variable, Op::add, index, 0.0}; }
    static Node make_constant(double v) { return {Kind::constant, Op::add, 0, v}; }

    ValueType value_type() const noexcept {
        return kind == Kind::op ? op_info(op).result : ValueType::number;
    }
    int arity() const noexcept { return kind == Kind::op ? op_info(op).arity : 0; }
    bool operator==(const Node& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::op: return op == o.op;
            case Kind::variable: return variable == o.variable;
            case Kind::constant: return value == o.value;
        }
        return false;
    }
};

// One GP individual: a flat pre-order encoding of a typed expression tree.
// `depth` counts nodes on the longest root-to-leaf path, so a bare leaf has
// depth 1 and an operator over leaves has depth 2.
struct FeatureTree {
    std::vector<Node> nodes;
    ValueType output_type = ValueType::number;
    int depth = 0;

    bool operator==(const FeatureTree& o) const {
        return nodes == o.nodes && output_type == o.output_type && depth == o.depth;
    }
};

// Index one past the subtree rooted at `pos`.
std::size_t subtree_end(std::span<const Node> nodes, std::size_t pos);
int compute_depth(std::span<const Node> nodes);
// Builds a tree from raw pre-order nodes, checking arity/typing and filling
// in output_type and depth. Throws few::Error on an ill-formed node list.
FeatureTree make_tree(std::vector<Node> nodes);
// Checks all FeatureTree invariants against an attribute count (and optional
// depth bound); throws few::Error with a description on violation.
void validate_tree(const FeatureTree& tree, int n_attributes, int max_depth = -1);

// Evaluates the tree column-wise over an N x d attribute matrix. Pure; the
// output is finite for any finite input and boolean trees yield only 0/1.
std::vector<double> eval_tree(const FeatureTree& tree, const Matrix& X);

// Grow-method generator: positions that could be internal become leaves with
// probability 0.3 before the depth budget runs out. Boolean output requires
// max_depth >= 2 because leaves are numeric.
FeatureTree random_tree(int max_depth, ValueType output_type, int n_attributes, Rng& rng);

// Prefix s-expression text, e.g. "(xor x18 x19)" or "(add x0 -0.25)".
std::string tree_to_text(const FeatureTree& tree);
// Inverse of tree_to_text; throws few::ParseError (with byte position) on
// malformed text, unknown symbols, or variable indices >= n_attributes.
FeatureTree parse_tree(std::string_view text, int n_attributes);

}  // namespace few::expr
