#include <catch2/catch_amalgamated.hpp>

#include "eqcorners/linalg.hpp"

using namespace eqc;

namespace {

Vec vec(std::initializer_list<int> xs) {
    Vec v;
    for (int x : xs)
        v.push_back(Rational(x));
    return v;
}

Mat mat2(int a, int b, int c, int d) {
    Mat m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

Subspace random_subspace(SplitMix64& rng, int ambient) {
    int k = static_cast<int>(rng.range(0, ambient));
    std::vector<Vec> rows;
    for (int i = 0; i < k; ++i) {
        Vec v(ambient);
        for (int j = 0; j < ambient; ++j)
            v[j] = Rational(rng.range(-4, 4));
        rows.push_back(std::move(v));
    }
    return Subspace::span(ambient, std::move(rows));
}

} // namespace

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-3/4") == Rational(-3, 4));
    CHECK(parse_rational("6/8") == Rational(3, 4));
    CHECK(parse_rational("5") == Rational(5));
    CHECK(format_rational(Rational(-10, 4)) == "-5/2");
    CHECK(format_rational(Rational(7)) == "7");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
}

TEST_CASE("fixed subspaces of matrix sets") {
    SECTION("empty set fixes the ambient space") {
        Subspace s = fixed_subspace({}, 2);
        CHECK(s == Subspace::full(2));
    }
    SECTION("a reflection fixes its mirror") {
        Subspace s = fixed_subspace({mat2(1, 0, 0, -1)}, 2);
        REQUIRE(s.dim() == 1);
        CHECK(s.contains_vector(vec({1, 0})));
    }
    SECTION("a quarter rotation fixes only the origin") {
        // (M - I)v = 0 has full rank for the rotation by 90 degrees
        Subspace s = fixed_subspace({mat2(0, -1, 1, 0)}, 2);
        CHECK(s.dim() == 0);
    }
}

TEST_CASE("subspace intersection") {
    Subspace x = Subspace::span(2, {vec({1, 0})});
    Subspace y = Subspace::span(2, {vec({0, 1})});
    CHECK(intersect(x, y).dim() == 0);

    Subspace a = Subspace::span(3, {vec({1, 0, 0}), vec({0, 1, 0})});
    Subspace b = Subspace::span(3, {vec({0, 1, 0}), vec({0, 0, 1})});
    Subspace e2 = Subspace::span(3, {vec({0, 1, 0})});
    CHECK(intersect(a, b) == e2);

    // span{(1,1)} and span{(1,-1)} solve to the origin
    Subspace d1 = Subspace::span(2, {vec({1, 1})});
    Subspace d2 = Subspace::span(2, {vec({1, -1})});
    CHECK(intersect(d1, d2).dim() == 0);

    Subspace other(3);
    CHECK_THROWS_AS(intersect(x, Subspace::full(3)), DimensionMismatch);
}

TEST_CASE("subspace containment") {
    Subspace amb = Subspace::full(2);
    CHECK(amb.contains(Subspace::span(2, {vec({3, -7})})));
    CHECK_FALSE(Subspace::span(2, {vec({1, 0})}).contains(Subspace::span(2, {vec({1, 1})})));
    // membership by row reduction in n=3
    Subspace plane = Subspace::span(3, {vec({1, 0, 0}), vec({0, 1, 0})});
    CHECK(plane.contains(Subspace::span(3, {vec({1, 1, 0})})));
}

TEST_CASE("orthogonal complements") {
    CHECK(orthogonal_complement(Subspace::zero(2)) == Subspace::full(2));
    CHECK(orthogonal_complement(Subspace::span(2, {vec({1, 0})})) ==
          Subspace::span(2, {vec({0, 1})}));
    Subspace d = Subspace::span(2, {vec({1, 1})});
    Subspace dperp = orthogonal_complement(d);
    REQUIRE(dperp.dim() == 1);
    CHECK(dperp.contains_vector(vec({1, -1})));
}

TEST_CASE("canonical form is idempotent and hashable") {
    // the same subspace from different spanning sets compares equal bitwise
    Subspace a = Subspace::span(3, {vec({2, 4, 0}), vec({1, 1, 1})});
    Subspace b = Subspace::span(3, {vec({1, 2, 0}), vec({3, 5, 1}), vec({4, 7, 1})});
    CHECK(a == b);
    Subspace again = Subspace::span(3, a.basis());
    CHECK(a == again);
}

TEST_CASE("rank-nullity on random rational subspaces") {
    SplitMix64 rng(20240811u);
    for (int trial = 0; trial < 50; ++trial) {
        int ambient = static_cast<int>(rng.range(1, 4));
        Subspace a = random_subspace(rng, ambient);
        Subspace b = random_subspace(rng, ambient);
        CHECK(intersect(a, b).dim() + sum(a, b).dim() == a.dim() + b.dim());
    }
}

TEST_CASE("complement is an involution") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        int ambient = static_cast<int>(rng.range(1, 5));
        Subspace a = random_subspace(rng, ambient);
        CHECK(orthogonal_complement(orthogonal_complement(a)) == a);
        CHECK(orthogonal_complement(a).dim() == ambient - a.dim());
        CHECK(intersect(a, orthogonal_complement(a)).dim() == 0);
    }
}

TEST_CASE("orthogonal matrices preserve fixed space and its complement") {
    std::vector<Mat> cases = {mat2(1, 0, 0, -1), mat2(0, -1, 1, 0), mat2(0, 1, 1, 0)};
    for (const Mat& m : cases) {
        REQUIRE(m.is_orthogonal());
        Subspace fixed = fixed_subspace({m}, 2);
        Subspace comp = orthogonal_complement(fixed);
        for (const Vec& b : fixed.basis())
            CHECK(fixed.contains_vector(m.apply(b)));
        for (const Vec& b : comp.basis())
            CHECK(comp.contains_vector(m.apply(b)));
    }
}

TEST_CASE("coordinates round trip") {
    Subspace s = Subspace::span(3, {vec({1, 2, 0}), vec({0, 1, 1})});
    Vec v = vec({2, 5, 1});
    REQUIRE(s.contains_vector(v));
    CHECK(from_coordinates(s, coordinates_in(s, v)) == v);
}
