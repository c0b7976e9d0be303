#include <catch2/catch_amalgamated.hpp>

#include "eqcorners/group.hpp"
#include "eqcorners/strata.hpp"

using namespace eqc;

namespace {

Vec vec(std::initializer_list<int> xs) {
    Vec v;
    for (int x : xs)
        v.push_back(Rational(x));
    return v;
}

Mat mat2(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
    Mat m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

Mat diag(std::initializer_list<int> entries) {
    Mat m(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
    int i = 0;
    for (int e : entries)
        m(i, i) = e, ++i;
    return m;
}

const Mat rot90 = mat2(0, -1, 1, 0);

MatrixGroup klein2() {
    return MatrixGroup::generate({diag({-1, 1}), diag({1, -1})});
}

} // namespace

TEST_CASE("group generation") {
    SECTION("sign flip on the line") {
        Mat neg(1, 1);
        neg(0, 0) = -1;
        CHECK(MatrixGroup::generate({neg}, 10).order() == 2);
    }
    SECTION("sign changes of the plane") {
        CHECK(klein2().order() == 4);
    }
    SECTION("cyclic four from a quarter turn") {
        CHECK(MatrixGroup::generate({rot90}, 10).order() == 4);
    }
    SECTION("rational rotation of infinite order hits the cap") {
        Mat m = mat2(Rational(3, 5), Rational(-4, 5), Rational(4, 5), Rational(3, 5));
        REQUIRE(m.is_orthogonal());
        CHECK_THROWS_AS(MatrixGroup::generate({m}, 100), CapExceeded);
    }
    SECTION("non-orthogonal generators are rejected") {
        CHECK_THROWS_AS(MatrixGroup::generate({mat2(1, 1, 0, 1)}, 10), NotOrthogonal);
    }
    SECTION("ids are breadth-first deterministic") {
        MatrixGroup g = MatrixGroup::generate({rot90}, 10);
        CHECK(g.matrix(0).is_identity());
        CHECK(g.matrix(1) == rot90);
        CHECK(g.matrix(2) == rot90 * rot90);
    }
}

TEST_CASE("point stabilizers") {
    MatrixGroup k = klein2();
    CHECK(point_stabilizer(k, vec({0, 0})).order() == 4);
    Subgroup s = point_stabilizer(k, vec({1, 0}));
    CHECK(s.order() == 2);
    bool has_y_flip = false;
    for (int id : s.ids())
        if (k.matrix(id) == diag({1, -1}))
            has_y_flip = true;
    CHECK(has_y_flip);

    MatrixGroup z4 = MatrixGroup::generate({rot90}, 10);
    CHECK(point_stabilizer(z4, vec({1, 0})).order() == 1);
    CHECK_THROWS_AS(point_stabilizer(z4, vec({1, 0, 0})), DimensionMismatch);
}

TEST_CASE("pointwise stabilizers") {
    MatrixGroup k = klein2();
    CHECK(pointwise_stabilizer(k, Subspace::zero(2)).order() == 4);
    CHECK(pointwise_stabilizer(k, Subspace::span(2, {vec({1, 0})})).order() == 2);
    // the full space leaves only the representation kernel
    CHECK(pointwise_stabilizer(k, Subspace::full(2)).order() == 1);
}

TEST_CASE("normalizers") {
    MatrixGroup k = klein2();
    CHECK(normalizer(k, trivial_subgroup(k)).order() == 4);
    CHECK(normalizer(k, whole_group(k)).order() == 4);
    Subgroup refl = pointwise_stabilizer(k, Subspace::span(2, {vec({1, 0})}));
    CHECK(normalizer(k, refl).order() == 4); // abelian
}

TEST_CASE("subgroup conjugacy") {
    SECTION("identity witness for equal subgroups") {
        MatrixGroup k = klein2();
        Subgroup s = point_stabilizer(k, vec({1, 0}));
        auto w = are_conjugate(k, s, s);
        REQUIRE(w.has_value());
        CHECK(*w == 0);
    }
    SECTION("the two reflections of the sign group are not conjugate") {
        MatrixGroup k = klein2();
        Subgroup sx = point_stabilizer(k, vec({1, 0}));
        Subgroup sy = point_stabilizer(k, vec({0, 1}));
        CHECK_FALSE(are_conjugate(k, sx, sy).has_value());
    }
    SECTION("dihedral four conjugates the axis reflections") {
        MatrixGroup d4 = MatrixGroup::generate({rot90, diag({1, -1})}, 20);
        REQUIRE(d4.order() == 8);
        Subgroup horiz = pointwise_stabilizer(d4, Subspace::span(2, {vec({1, 0})}));
        Subgroup vert = pointwise_stabilizer(d4, Subspace::span(2, {vec({0, 1})}));
        Subgroup diag_refl = pointwise_stabilizer(d4, Subspace::span(2, {vec({1, 1})}));
        auto w = are_conjugate(d4, horiz, vert);
        REQUIRE(w.has_value());
        CHECK(conjugate_subgroup(d4, horiz, *w) == vert);
        // swap and axis reflection lie in different classes
        CHECK_FALSE(are_conjugate(d4, horiz, diag_refl).has_value());
    }
}

TEST_CASE("representation kernel") {
    SECTION("effective groups have trivial kernel") {
        CHECK(representation_kernel(klein2()).order() == 1);
    }
    SECTION("the trivial group is its own kernel") {
        MatrixGroup t = MatrixGroup::generate({Mat::identity(2)}, 4);
        CHECK(representation_kernel(t).order() == 1);
        CHECK(t.order() == 1);
    }
    SECTION("explicit table with one factor acting trivially") {
        // Z2 x Z2 where the first factor maps to the identity matrix
        Mat id2 = Mat::identity(2);
        Mat neg = diag({-1, -1});
        std::vector<Mat> elems = {id2, id2, neg, neg};
        std::vector<std::vector<int>> table = {
            {0, 1, 2, 3},
            {1, 0, 3, 2},
            {2, 3, 0, 1},
            {3, 2, 1, 0},
        };
        MatrixGroup g = MatrixGroup::from_table(elems, table);
        CHECK(g.order() == 4);
        CHECK(representation_kernel(g).order() == 2);
    }
}

TEST_CASE("Lagrange and stabilizer identities on random data") {
    MatrixGroup d4 = MatrixGroup::generate({rot90, diag({1, -1})}, 20);
    SplitMix64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        Vec v = {rng.small_rational(), rng.small_rational()};
        Subgroup s = point_stabilizer(d4, v);
        CHECK(d4.order() % s.order() == 0);
        CHECK(s == pointwise_stabilizer(d4, Subspace::span(2, {v})));
    }
}

TEST_CASE("pointwise stabilizer is antitone") {
    MatrixGroup d4 = MatrixGroup::generate({rot90, diag({1, -1})}, 20);
    std::vector<Subspace> chain = {
        Subspace::zero(2),
        Subspace::span(2, {vec({1, 0})}),
        Subspace::full(2),
    };
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        Subgroup big = pointwise_stabilizer(d4, chain[i]);
        Subgroup small = pointwise_stabilizer(d4, chain[i + 1]);
        CHECK(big.contains(small));
    }
}

TEST_CASE("conjugacy is an equivalence with composable witnesses") {
    MatrixGroup d4 = MatrixGroup::generate({rot90, diag({1, -1})}, 20);
    std::vector<Subgroup> sample;
    for (const Subspace& w : intersection_lattice(d4))
        sample.push_back(pointwise_stabilizer(d4, w));
    for (const Subgroup& a : sample) {
        CHECK(are_conjugate(d4, a, a).has_value());
        for (const Subgroup& b : sample) {
            auto ab = are_conjugate(d4, a, b);
            CHECK(ab.has_value() == are_conjugate(d4, b, a).has_value());
            if (!ab)
                continue;
            for (const Subgroup& c : sample) {
                auto bc = are_conjugate(d4, b, c);
                if (bc) {
                    // witnesses compose
                    int w = d4.mul(*bc, *ab);
                    CHECK(conjugate_subgroup(d4, a, w) == c);
                }
            }
        }
    }
}
