#include "opinion/transform.hpp"

#include "opinion/errors.hpp"

#include <doctest.h>

#include "oracles.hpp"

using namespace opinion;

namespace {

Eigen::MatrixXd graph1() {
    Eigen::MatrixXd a(3, 3);
    a << 0, -1, 0, 0, 0, 4, -2, 0, 0;
    return a;
}

Eigen::VectorXd vec3(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

} // namespace

TEST_CASE("membership: the paper gauge is a member, the identity is not") {
    const TransformMatrix gauge = TransformMatrix::diagonal(vec3(2, -2, -2));
    CHECK(check_membership(graph1(), gauge));

    const TransformMatrix identity = TransformMatrix::diagonal(vec3(1, 1, 1));
    CHECK_FALSE(check_membership(graph1(), identity)); // A itself has negatives

    const TransformMatrix zero = TransformMatrix::full(Eigen::MatrixXd::Zero(3, 3));
    CHECK_THROWS_AS(check_membership(graph1(), zero), NumericError); // singular, not "no"
}

TEST_CASE("gauge design reproduces diag(2,-2,-2) for graph 1") {
    const BalanceCertificate cert = classify(SignedDigraph{graph1()});
    const TransformMatrix p = gauge_design(cert, vec3(2, 2, 2), 3);
    CHECK(p.kind == TransformKind::Diagonal);
    CHECK(p.P.diagonal() == vec3(2, -2, -2)); // canonical sign: first entry positive
    CHECK(check_membership(graph1(), p));
}

TEST_CASE("gauge design on an unsigned graph is the positive diagonal") {
    Eigen::MatrixXd a(3, 3);
    a << 0, 1, 0, 0, 0, 2, 3, 0, 0;
    const BalanceCertificate cert = classify(SignedDigraph{a});
    const TransformMatrix p = gauge_design(cert, vec3(1, 1, 1), 3);
    CHECK(p.P == Eigen::MatrixXd::Identity(3, 3));
}

TEST_CASE("gauge design rejects unusable certificates and bad magnitudes") {
    Eigen::MatrixXd a(3, 3);
    a << 0, 1, 1, 1, 0, -1, 1, -1, 0; // unbalanced triangle
    const BalanceCertificate cert = classify(SignedDigraph{a});
    CHECK(cert.cls == GraphClass::Unbalanced);
    CHECK_THROWS_AS(gauge_design(cert, vec3(1, 1, 1), 3), InputError);

    const BalanceCertificate good = classify(SignedDigraph{graph1()});
    CHECK_THROWS_AS(gauge_design(good, vec3(1, -1, 1), 3), InputError);
    CHECK_THROWS_AS(gauge_design(good, Eigen::VectorXd::Ones(2), 3), InputError);
}

TEST_CASE("gauge design always passes membership on random balanced digraphs") {
    std::mt19937 rng(101);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 3 + static_cast<int>(rng() % 8); // 3..10
        const Eigen::MatrixXd base = oracle::random_strong_unsigned(rng, n, 0.3);
        const Eigen::MatrixXd a = oracle::apply_gauge(base, oracle::random_signs(rng, n));
        const BalanceCertificate cert = classify(SignedDigraph{a});
        const Eigen::VectorXd mags = oracle::random_vector(rng, n, 0.5, 3.0);
        const TransformMatrix p = gauge_design(cert, mags, n);
        CHECK(check_membership(a, p));
    }
}

TEST_CASE("reverse design: fixed point, violated constraint, worked example") {
    // requesting the initial state back satisfies the constraint identically
    const TransformMatrix fixed = reverse_design(vec3(10, 20, 50), vec3(10, 20, 50));
    CHECK(fixed.P.diagonal().isApprox(vec3(0.1, 0.05, 0.02), 1e-15));

    CHECK_THROWS_WITH_AS(static_cast<void>(reverse_design(vec3(10, 20, 50), vec3(20, 20, 50))),
                         doctest::Contains("residual"), InputError);

    // 1/3 + 1 + 5/3 = 3
    const TransformMatrix p = reverse_design(vec3(1, 1, 1), vec3(3, 1, 0.6));
    CHECK(p.P.diagonal().isApprox(vec3(1.0 / 3.0, 1.0, 5.0 / 3.0), 1e-12));

    CHECK_THROWS_AS(static_cast<void>(reverse_design(vec3(1, 1, 1), vec3(1, 0, 1))),
                    InputError); // zero target
}

TEST_CASE("ratio design: sign-compatible ratios pass, mismatched ones fail") {
    const SignedDigraph g{graph1()};
    const BalanceCertificate cert = classify(g);

    const RatioDesign rd = ratio_design(g, cert, vec3(-1, 1, 1));
    CHECK(rd.P.P.diagonal() == vec3(-1, 1, 1));
    CHECK(check_membership(g.A, rd.P));
    CHECK(rd.direction == vec3(-1, 1, 1));

    CHECK_THROWS_AS(ratio_design(g, cert, vec3(1, 1, 1)), InputError);  // same camp sign
    CHECK_THROWS_AS(ratio_design(g, cert, vec3(-1, 0, 1)), InputError); // zero ratio
}

TEST_CASE("ratio design on an unsigned graph accepts uniform ratios") {
    Eigen::MatrixXd a(3, 3);
    a << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    const SignedDigraph g{a};
    const RatioDesign rd = ratio_design(g, classify(g), vec3(1, 1, 1));
    CHECK(rd.P.P == Eigen::MatrixXd::Identity(3, 3));
}

TEST_CASE("transform files round trip for every kind") {
    const TransformMatrix diag = TransformMatrix::diagonal(vec3(2, -2, -2));
    const TransformMatrix back = load_transform(write_transform(diag));
    CHECK(back.kind == TransformKind::Diagonal);
    CHECK(back.P == diag.P);

    Eigen::MatrixXd full(3, 3);
    full << -2, -1, 2, -2, 1, -2, 2, 1, 2;
    const TransformMatrix f = TransformMatrix::full(full);
    CHECK(load_transform(write_transform(f)).P == full);

    const TransformMatrix blk =
        TransformMatrix::block_diagonal(full, Eigen::MatrixXd::Identity(2, 2));
    const TransformMatrix blk_back = load_transform(write_transform(blk));
    CHECK(blk_back.kind == TransformKind::BlockDiagonal);
    CHECK(blk_back.r == 3);
    CHECK(blk_back.P == blk.P);

    CHECK_THROWS_AS(load_transform(R"({"kind": "diagonal"})"), InputError);
    CHECK_THROWS_AS(load_transform(R"({"kind": "??", "values": [1]})"), InputError);
    // off-diagonal blocks must be zero for kind block
    CHECK_THROWS_AS(
        load_transform(R"({"kind": "block", "r": 1, "rows": [[1, 1], [0, 1]]})"),
        InputError);
}

TEST_CASE("blockwise inverse keeps structural zeros exact") {
    Eigen::MatrixXd p1(2, 2);
    p1 << 3, 1, 2, 1;
    Eigen::MatrixXd p2(2, 2);
    p2 << 1, 4, 1, 5;
    const TransformMatrix t = TransformMatrix::block_diagonal(p1, p2);
    const Eigen::MatrixXd inv = t.inverse();
    CHECK(inv.topRightCorner(2, 2).isZero(0.0));
    CHECK(inv.bottomLeftCorner(2, 2).isZero(0.0));
    CHECK((t.P * inv).isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-12));
}
