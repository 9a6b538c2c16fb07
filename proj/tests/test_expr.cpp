#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "few/errors.hpp"
#include "few/expr.hpp"
#include "few/kernels.hpp"

using namespace few;
using namespace few::expr;

namespace {

Matrix single_row(std::initializer_list<double> values) {
    Matrix m(1, values.size());
    std::size_t j = 0;
    for (double v : values) m(0, j++) = v;
    return m;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    std::uniform_real_distribution<double> val(-50.0, 50.0);
    std::uniform_int_distribution<int> pick(0, 5);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            const int p = pick(rng);
            m(i, j) = p == 0 ? 0.0 : (p == 1 ? -1.0 : val(rng));
        }
    }
    return m;
}

}  // namespace

TEST_CASE("variable projection") {
    const FeatureTree t = parse_tree("x3", 4);
    const Matrix X = single_row({5, 6, 7, 8});
    CHECK(eval_tree(t, X) == std::vector<double>{8.0});
    CHECK(t.depth == 1);
    CHECK(t.output_type == ValueType::number);
}

TEST_CASE("xor truth table") {
    const FeatureTree t = parse_tree("(xor (gt x0 0.5) (gt x1 0.5))", 2);
    Matrix X(4, 2);
    const double rows[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (int i = 0; i < 4; ++i) {
        X(i, 0) = rows[i][0];
        X(i, 1) = rows[i][1];
    }
    CHECK(eval_tree(t, X) == std::vector<double>{0.0, 1.0, 1.0, 0.0});
}

TEST_CASE("protected division through a tree") {
    const FeatureTree t = parse_tree("(div 1 0)", 1);
    CHECK(eval_tree(t, single_row({42.0}))[0] == 1.0);
}

TEST_CASE("depth bookkeeping counts nodes on the longest path") {
    CHECK(parse_tree("x0", 1).depth == 1);
    CHECK(parse_tree("(add x0 x0)", 1).depth == 2);
    CHECK(parse_tree("(add (mul x0 x0) x0)", 1).depth == 3);
    CHECK(parse_tree("(xor (eq x0 x1) (geq x1 0.25))", 2).depth == 3);
}

TEST_CASE("random_tree respects the depth bound and typing") {
    Rng rng(2024);
    int max_seen = 0;
    for (int i = 0; i < 10000; ++i) {
        const FeatureTree t = random_tree(3, ValueType::number, 5, rng);
        validate_tree(t, 5, 3);
        max_seen = std::max(max_seen, t.depth);
        CHECK(t.depth <= 3);
        CHECK(t.output_type == ValueType::number);
    }
    CHECK(max_seen == 3);

    for (int i = 0; i < 2000; ++i) {
        const FeatureTree t = random_tree(3, ValueType::boolean, 5, rng);
        validate_tree(t, 5, 3);
        CHECK(t.output_type == ValueType::boolean);
        CHECK(t.nodes.front().kind == Node::Kind::op);
    }
}

TEST_CASE("depth-1 trees are bare leaves; boolean needs depth 2") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const FeatureTree t = random_tree(1, ValueType::number, 3, rng);
        CHECK(t.nodes.size() == 1);
        CHECK(t.nodes.front().kind != Node::Kind::op);
    }
    for (int i = 0; i < 200; ++i) {
        const FeatureTree t = random_tree(2, ValueType::boolean, 3, rng);
        CHECK(t.depth == 2);
        CHECK(op_info(t.nodes.front().op).result == ValueType::boolean);
    }
    CHECK_THROWS_AS(random_tree(1, ValueType::boolean, 3, rng), Error);
}

TEST_CASE("print/parse round trip is the identity") {
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const auto type = (i % 2 == 0) ? ValueType::number : ValueType::boolean;
        const FeatureTree t = random_tree(4, type, 7, rng);
        const std::string text = tree_to_text(t);
        const FeatureTree back = parse_tree(text, 7);
        CHECK(back == t);
    }
}

TEST_CASE("table-style expression parses and evaluates with truthiness coercion") {
    const FeatureTree t = parse_tree("(xor x18 x19)", 20);
    REQUIRE(t.nodes.size() == 3);
    CHECK(t.nodes[0].op == Op::logical_xor);
    CHECK(t.nodes[1].variable == 18);
    CHECK(t.nodes[2].variable == 19);
    CHECK(t.output_type == ValueType::boolean);

    // Genotype-style values: any nonzero value counts as true.
    Matrix X(9, 20);
    std::size_t r = 0;
    for (int a = 0; a <= 2; ++a) {
        for (int b = 0; b <= 2; ++b) {
            X(r, 18) = a;
            X(r, 19) = b;
            ++r;
        }
    }
    const auto out = eval_tree(t, X);
    r = 0;
    for (int a = 0; a <= 2; ++a) {
        for (int b = 0; b <= 2; ++b) {
            CHECK(out[r++] == (((a != 0) != (b != 0)) ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("parse failures carry a position") {
    CHECK_THROWS_AS(parse_tree("(plus x0)", 4), ParseError);
    CHECK_THROWS_AS(parse_tree("(add x0 x9)", 4), ParseError);
    CHECK_THROWS_AS(parse_tree("(add x0", 4), ParseError);
    CHECK_THROWS_AS(parse_tree("(add x0 x1) extra", 4), ParseError);
    CHECK_THROWS_AS(parse_tree("", 4), ParseError);
    try {
        parse_tree("(plus x0)", 4);
    } catch (const ParseError& e) {
        CHECK(e.position == 1);
    }
}

TEST_CASE("evaluation is pure and total") {
    Rng rng(31);
    const Matrix X = random_matrix(97, 6, rng);
    for (int i = 0; i < 1500; ++i) {
        const auto type = (i % 3 == 0) ? ValueType::boolean : ValueType::number;
        const FeatureTree t = random_tree(4, type, 6, rng);
        const std::vector<double> a = eval_tree(t, X);
        const std::vector<double> b = eval_tree(t, X);
        CHECK(a == b);  // bit-identical replay
        for (double v : a) {
            CHECK(std::isfinite(v));
            if (type == ValueType::boolean) CHECK((v == 0.0 || v == 1.0));
        }
    }
}

TEST_CASE("evaluation rejects out-of-range variables") {
    FeatureTree t = parse_tree("x2", 3);
    const Matrix X = single_row({1.0, 2.0});
    CHECK_THROWS_AS(eval_tree(t, X), Error);
}

TEST_CASE("boolean trees match their scalar truth semantics") {
    Rng rng(13);
    const Matrix X = random_matrix(64, 4, rng);
    const FeatureTree t = parse_tree("(and (geq x0 x1) (not (lt x2 x3)))", 4);
    const auto out = eval_tree(t, X);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const bool expect = (X(i, 0) >= X(i, 1)) && !(X(i, 2) < X(i, 3));
        CHECK(out[i] == (expect ? 1.0 : 0.0));
    }
}
