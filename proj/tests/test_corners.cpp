#include <catch2/catch_amalgamated.hpp>

#include "eqcorners/corners.hpp"

using namespace eqc;

namespace {

Mat rot90() {
    Mat m(2, 2);
    m(0, 1) = -1;
    m(1, 0) = 1;
    return m;
}

Mat diag(std::initializer_list<int> entries) {
    Mat m(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
    int i = 0;
    for (int e : entries)
        m(i, i) = e, ++i;
    return m;
}

// chains of length k in the face poset, counting only proper faces
int count_chains(const CornerComplex& c, int k) {
    std::vector<std::vector<int>> chains = {{}};
    for (int step = 0; step < k; ++step) {
        std::vector<std::vector<int>> next;
        for (const auto& ch : chains)
            for (int f = 0; f < c.num_faces(); ++f) {
                if (c.face(f).codim < 1)
                    continue;
                if (!ch.empty() && !(c.leq(f, ch.back()) && f != ch.back()))
                    continue;
                auto ext = ch;
                ext.push_back(f);
                next.push_back(std::move(ext));
            }
        chains = std::move(next);
    }
    return static_cast<int>(chains.size());
}

} // namespace

TEST_CASE("box and ball complexes") {
    CornerComplex square = box_complex(2);
    CHECK(square.num_hypersurfaces() == 4);
    CHECK(square.census_by_codim() == std::vector<int>{1, 4, 4});
    CHECK(square.num_components() == 1);

    CornerComplex cube = box_complex(3);
    CHECK(cube.census_by_codim() == std::vector<int>{1, 6, 12, 8});

    CornerComplex disk = ball_complex(2);
    CHECK(disk.num_hypersurfaces() == 1);
    CHECK(disk.num_faces() == 2);
}

TEST_CASE("boundary intersection freedom") {
    CornerComplex square = box_complex(2);
    SECTION("the quarter turn has boundary intersection") {
        LatticeAction a = LatticeAction::from_matrix_group(square, MatrixGroup::generate({rot90()}), true);
        BifResult r = check_boundary_intersection_free(square, a);
        REQUIRE_FALSE(r.ok);
        // witness: two edges in one orbit sharing a corner
        CHECK(square.hyps_intersect(r.witness.first, r.witness.second));
        REQUIRE(r.partition.size() == 1);
        CHECK(r.partition[0].size() == 4);
    }
    SECTION("the sign action is boundary intersection free") {
        LatticeAction a = LatticeAction::from_matrix_group(
            square, MatrixGroup::generate({diag({-1, 1}), diag({1, -1})}), true);
        BifResult r = check_boundary_intersection_free(square, a);
        REQUIRE(r.ok);
        CHECK(r.partition.size() == 2); // {left,right} and {top,bottom}
    }
    SECTION("a trivial action partitions into singletons") {
        LatticeAction a = LatticeAction::trivial(square);
        BifResult r = check_boundary_intersection_free(square, a);
        REQUIRE(r.ok);
        CHECK(r.partition.size() == 4);
    }
}

TEST_CASE("total boundary blow-up") {
    SECTION("the interval is already resolved") {
        CornerComplex interval = box_complex(1);
        BlowupResult r = total_boundary_blowup(interval, LatticeAction::trivial(interval));
        CHECK(r.complex.num_hypersurfaces() == 2);
        CHECK(r.complex.census_by_codim() == std::vector<int>{1, 2});
        CHECK(r.blown_faces.empty());
    }
    SECTION("the square grows corner front faces") {
        CornerComplex square = box_complex(2);
        BlowupResult r = total_boundary_blowup(square, LatticeAction::trivial(square));
        CHECK(r.complex.num_hypersurfaces() == 8);
        CHECK(r.complex.census_by_codim() == std::vector<int>{1, 8, 8});
    }
    SECTION("cube counts follow the chains of the face poset") {
        CornerComplex cube = box_complex(3);
        BlowupResult r = total_boundary_blowup(cube, LatticeAction::trivial(cube));
        CHECK(r.complex.num_hypersurfaces() == 26); // 6 + 12 + 8
        auto census = r.complex.census_by_codim();
        REQUIRE(census.size() == 4);
        for (int k = 1; k <= 3; ++k)
            CHECK(census[k] == count_chains(cube, k));
        CHECK(census[3] == 48); // full flags
    }
    SECTION("every action becomes boundary intersection free") {
        CornerComplex square = box_complex(2);
        for (MatrixGroup g : {MatrixGroup::generate({rot90()}),
                              MatrixGroup::generate({diag({-1, 1}), diag({1, -1})}),
                              MatrixGroup::generate({rot90(), diag({1, -1})}, 20)}) {
            LatticeAction a = LatticeAction::from_matrix_group(square, g, true);
            BlowupResult r = total_boundary_blowup(square, a);
            CHECK(check_boundary_intersection_free(r.complex, r.action).ok);
        }
    }
}

TEST_CASE("partial boundary blow-up") {
    CornerComplex square = box_complex(2);
    SECTION("the quarter turn blows exactly the four corners") {
        LatticeAction a = LatticeAction::from_matrix_group(square, MatrixGroup::generate({rot90()}), true);
        BlowupResult r = partial_boundary_blowup(square, a);
        CHECK(r.blown_faces.size() == 4);
        CHECK(r.complex.num_hypersurfaces() == 8);
        CHECK(r.complex.census_by_codim() == std::vector<int>{1, 8, 8});
        CHECK(check_boundary_intersection_free(r.complex, r.action).ok);
    }
    SECTION("a trivial action blows nothing") {
        BlowupResult r = partial_boundary_blowup(square, LatticeAction::trivial(square));
        CHECK(r.blown_faces.empty());
        CHECK(r.complex.num_hypersurfaces() == 4);
    }
    SECTION("the sign action leaves the square untouched") {
        LatticeAction a = LatticeAction::from_matrix_group(
            square, MatrixGroup::generate({diag({-1, 1}), diag({1, -1})}), true);
        BlowupResult r = partial_boundary_blowup(square, a);
        CHECK(r.blown_faces.empty());
        CHECK(r.complex.num_hypersurfaces() == 4);
    }
}

TEST_CASE("doubling") {
    SECTION("the interval across one endpoint") {
        CornerComplex interval = box_complex(1);
        DoubleResult r = double_across(interval, LatticeAction::trivial(interval), {1}); // x=-1
        CHECK(r.complex.num_hypersurfaces() == 2);
        CHECK(r.complex.num_components() == 1);
        CHECK(r.complex.census_by_codim() == std::vector<int>{1, 2});
    }
    SECTION("the square across left and right becomes a cylinder") {
        CornerComplex square = box_complex(2);
        DoubleResult r = double_across(square, LatticeAction::trivial(square), {0, 1}); // x1 = +-1
        CHECK(r.complex.num_hypersurfaces() == 2);
        CHECK(r.complex.num_components() == 1);
        CHECK(r.complex.max_codim() == 1); // corners became interior
    }
    SECTION("intersecting collections are rejected") {
        CornerComplex square = box_complex(2);
        CHECK_THROWS_AS(double_across(square, LatticeAction::trivial(square), {0, 2}),
                        CollectionNotDisjoint);
    }
    SECTION("non-invariant collections are rejected") {
        CornerComplex square = box_complex(2);
        LatticeAction a = LatticeAction::from_matrix_group(square, MatrixGroup::generate({rot90()}), true);
        CHECK_THROWS_AS(double_across(square, a, {0, 1}), CollectionNotInvariant);
    }
    SECTION("doubling the square twice yields the torus") {
        CornerComplex square = box_complex(2);
        MatrixGroup klein = MatrixGroup::generate({diag({-1, 1}), diag({1, -1})});
        LatticeAction a = LatticeAction::from_matrix_group(square, klein, true);
        BifResult bif = check_boundary_intersection_free(square, a);
        REQUIRE(bif.ok);
        REQUIRE(bif.partition.size() == 2);
        DoubleResult first = double_across(square, a, bif.partition[0]);
        // the second collection survives as doubled hypersurfaces
        std::vector<int> second;
        for (int h = 0; h < first.complex.num_hypersurfaces(); ++h)
            second.push_back(h);
        REQUIRE(second.size() == 2);
        DoubleResult torus = double_across(first.complex, first.action, second);
        CHECK(torus.complex.num_hypersurfaces() == 0);
        CHECK(torus.complex.num_components() == 1);
        // the two swaps generate a faithful Klein group of involutions
        const LatticeAction& act = torus.action;
        int m = act.order();
        CHECK(m == 4 * klein.order());
        // swap generators: id*swap of the second double and the image of the first swap
        for (int e = 0; e < m; ++e)
            CHECK(act.mul(e, e) >= 0); // table closed (sanity)
    }
}

TEST_CASE("doubling across a full partition kills the boundary") {
    CornerComplex cube = box_complex(3);
    MatrixGroup signs = MatrixGroup::generate({diag({-1, 1, 1}), diag({1, -1, 1}), diag({1, 1, -1})});
    LatticeAction a = LatticeAction::from_matrix_group(cube, signs, true);
    BifResult bif = check_boundary_intersection_free(cube, a);
    REQUIRE(bif.ok);
    CornerComplex c = cube;
    LatticeAction act = a;
    int rounds = 0;
    while (c.num_hypersurfaces() > 0) {
        auto part = check_boundary_intersection_free(c, act);
        REQUIRE(part.ok);
        DoubleResult r = double_across(c, act, part.partition[0]);
        c = std::move(r.complex);
        act = std::move(r.action);
        ++rounds;
        REQUIRE(rounds <= 3);
    }
    CHECK(rounds == 3);
    CHECK(act.order() == 8 * signs.order());
}

TEST_CASE("products") {
    CornerComplex interval = box_complex(1);
    CornerComplex sq = product_complex(interval, interval);
    CHECK(sq.num_hypersurfaces() == 4);
    CHECK(sq.census_by_codim() == std::vector<int>{1, 4, 4});

    // two two-component intervals give a four-component product
    CornerComplex two = CornerComplex(
        {"a+", "a-", "b+", "b-"},
        {{0, {}, "A"}, {0, {}, "B"}, {1, {0}, "a+"}, {1, {1}, "a-"}, {1, {2}, "b+"}, {1, {3}, "b-"}},
        IncidenceMode::Explicit,
        {{2, 0}, {3, 0}, {4, 1}, {5, 1}});
    CHECK(two.num_components() == 2);
    CornerComplex prod = product_complex(two, two);
    CHECK(prod.num_components() == 4);
    auto per_comp = prod.hyps_per_component();
    CHECK(per_comp == std::vector<int>{4, 4, 4, 4});
}

TEST_CASE("actions preserve the grading") {
    CornerComplex square = box_complex(2);
    MatrixGroup d4 = MatrixGroup::generate({rot90(), diag({1, -1})}, 20);
    LatticeAction a = LatticeAction::from_matrix_group(square, d4, true);
    for (int e = 0; e < a.order(); ++e)
        for (int f = 0; f < square.num_faces(); ++f)
            CHECK(square.face(a.face_image(e, f)).codim == square.face(f).codim);
}
