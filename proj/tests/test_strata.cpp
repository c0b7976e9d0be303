#include <catch2/catch_amalgamated.hpp>

#include "eqcorners/strata.hpp"

using namespace eqc;

namespace {

Vec vec(std::initializer_list<int> xs) {
    Vec v;
    for (int x : xs)
        v.push_back(Rational(x));
    return v;
}

Mat diag(std::initializer_list<int> entries) {
    Mat m(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
    int i = 0;
    for (int e : entries)
        m(i, i) = e, ++i;
    return m;
}

Mat rot90() {
    Mat m(2, 2);
    m(0, 1) = -1;
    m(1, 0) = 1;
    return m;
}

MatrixGroup klein2() {
    return MatrixGroup::generate({diag({-1, 1}), diag({1, -1})});
}

} // namespace

TEST_CASE("intersection lattices") {
    SECTION("trivial group") {
        MatrixGroup t = MatrixGroup::generate({Mat::identity(2)});
        auto lattice = intersection_lattice(t);
        REQUIRE(lattice.size() == 1);
        CHECK(lattice[0] == Subspace::full(2));
    }
    SECTION("sign flip on the line") {
        Mat neg(1, 1);
        neg(0, 0) = -1;
        auto lattice = intersection_lattice(MatrixGroup::generate({neg}));
        CHECK(lattice.size() == 2);
    }
    SECTION("sign changes of the plane: both axes and the origin") {
        auto lattice = intersection_lattice(klein2());
        REQUIRE(lattice.size() == 4);
        std::set<int> dims;
        for (const Subspace& w : lattice)
            dims.insert(w.dim());
        CHECK(dims == std::set<int>{0, 1, 2});
    }
}

TEST_CASE("isotropy posets") {
    SECTION("reflection of the line") {
        Mat neg(1, 1);
        neg(0, 0) = -1;
        IsotropyPoset p = isotropy_poset(MatrixGroup::generate({neg}));
        REQUIRE(p.types.size() == 2);
        CHECK(p.types[0].group_order == 2); // the origin class sorts first
        CHECK(p.types[0].stratum_codim == 1);
        CHECK(p.principal == 1);
        CHECK(p.minimal_types() == std::vector<int>{0});
        CHECK(p.leq(0, 1));
        CHECK_FALSE(p.leq(1, 0));
    }
    SECTION("sign changes of the plane") {
        IsotropyPoset p = isotropy_poset(klein2());
        REQUIRE(p.types.size() == 4);
        CHECK(p.types[0].group_order == 4);
        CHECK(p.minimal_types() == std::vector<int>{0});
        // the two reflection classes are incomparable
        CHECK_FALSE(p.leq(1, 2));
        CHECK_FALSE(p.leq(2, 1));
        CHECK(p.leq(0, 1));
        CHECK(p.leq(0, 3));
        CHECK(p.principal == 3);
    }
    SECTION("quarter-turn rotations") {
        IsotropyPoset p = isotropy_poset(MatrixGroup::generate({rot90()}));
        REQUIRE(p.types.size() == 2);
        CHECK(p.types[0].group_order == 4);
        CHECK(p.types[0].fixed_space.dim() == 0);
        CHECK(p.principal == 1);
    }
    SECTION("conjugate mirrors share one class") {
        MatrixGroup d4 = MatrixGroup::generate({rot90(), diag({1, -1})}, 20);
        IsotropyPoset p = isotropy_poset(d4);
        // origin, axis pair, diagonal pair, principal
        REQUIRE(p.types.size() == 4);
        int two_member_orbits = 0;
        for (const IsotropyType& t : p.types)
            if (t.orbit_subspaces.size() == 2)
                ++two_member_orbits;
        CHECK(two_member_orbits == 2);
    }
}

TEST_CASE("stratum sampling") {
    IsotropyPoset p = isotropy_poset(klein2());
    for (const IsotropyType& t : p.types) {
        auto pts = stratum_points(p, t, 3, 42);
        REQUIRE(pts.size() == 3);
        for (const Vec& z : pts) {
            Subgroup stab = point_stabilizer(p.group, z);
            CHECK(are_conjugate(p.group, stab, t.representative).has_value());
            for (const Rational& x : z)
                CHECK(abs(x) < 1);
        }
    }
    // samples are deterministic in the seed
    auto a = stratum_points(p, p.types[1], 2, 7);
    auto b = stratum_points(p, p.types[1], 2, 7);
    CHECK(a == b);
}

TEST_CASE("closure incidence") {
    SECTION("axes close onto the origin") {
        IsotropyPoset p = isotropy_poset(klein2());
        auto pairs = closure_incidence(p);
        // (axis class, origin class) twice; nothing between the two axes
        int axis_to_origin = 0;
        for (auto [i, j] : pairs) {
            CHECK(p.types[i].fixed_space.dim() > p.types[j].fixed_space.dim());
            if (p.types[i].group_order == 2 && p.types[j].group_order == 4)
                ++axis_to_origin;
            CHECK_FALSE((p.types[i].group_order == 2 && p.types[j].group_order == 2));
        }
        CHECK(axis_to_origin == 2);
    }
    SECTION("rotations see only the origin under the principal class") {
        IsotropyPoset p = isotropy_poset(MatrixGroup::generate({rot90()}));
        auto pairs = closure_incidence(p);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].first == p.principal);
    }
}

TEST_CASE("Galois correspondence on the lattice") {
    for (const MatrixGroup& g :
         {klein2(), MatrixGroup::generate({rot90()}), MatrixGroup::generate({rot90(), diag({1, -1})}, 20)}) {
        CheckReport r = galois_check(g, Subspace::full(2));
        INFO((r.failures.empty() ? std::string() : r.failures.front()));
        CHECK(r.pass);
    }
}

TEST_CASE("nearby stabilizers shrink") {
    for (const MatrixGroup& g :
         {klein2(), MatrixGroup::generate({rot90(), diag({1, -1})}, 20)}) {
        IsotropyPoset p = isotropy_poset(g);
        CheckReport r = isotropy_shrink_check(p, 3, 2024);
        INFO((r.failures.empty() ? std::string() : r.failures.front()));
        CHECK(r.pass);
    }
}

TEST_CASE("random sampling realizes only enumerated classes") {
    IsotropyPoset p = isotropy_poset(MatrixGroup::generate({rot90(), diag({1, -1})}, 20));
    CheckReport r = sampling_oracle_check(p, 100, 5);
    CHECK(r.pass);
}

TEST_CASE("the class with the largest groups is the unique minimum") {
    for (const MatrixGroup& g :
         {klein2(), MatrixGroup::generate({rot90()}), MatrixGroup::generate({rot90(), diag({1, -1})}, 20)}) {
        IsotropyPoset p = isotropy_poset(g);
        auto mins = p.minimal_types();
        REQUIRE(mins.size() == 1);
        for (const IsotropyType& t : p.types)
            CHECK(p.types[mins[0]].group_order >= t.group_order);
    }
}
