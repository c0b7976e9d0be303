#include <catch2/catch_amalgamated.hpp>

#include "eqcorners/feasibility.hpp"

using namespace eqc;

namespace {

Vec vec(std::initializer_list<int> xs) {
    Vec v;
    for (int x : xs)
        v.push_back(Rational(x));
    return v;
}

} // namespace

TEST_CASE("strict system feasibility") {
    SECTION("simple box slice") {
        StrictSystem s(1);
        s.add(vec({1}), Rational(1));  // t > -1
        s.add(vec({-1}), Rational(1)); // t < 1
        REQUIRE(s.feasible());
        Vec t = *s.sample();
        CHECK(t[0] > -1);
        CHECK(t[0] < 1);
    }
    SECTION("contradictory strict homogeneous pair") {
        StrictSystem s(2);
        s.add_homogeneous(vec({1, 0}));
        s.add_homogeneous(vec({-1, 0}));
        CHECK_FALSE(s.feasible());
    }
    SECTION("strict cone in the plane") {
        StrictSystem s(2);
        s.add_homogeneous(vec({1, 1}));
        s.add_homogeneous(vec({1, -1}));
        REQUIRE(s.feasible());
        Vec t = *s.sample();
        CHECK(t[0] + t[1] > 0);
        CHECK(t[0] - t[1] > 0);
    }
    SECTION("infeasible through combination") {
        // t0 > 0, t1 > 0, t0 + t1 < 0
        StrictSystem s(2);
        s.add_homogeneous(vec({1, 0}));
        s.add_homogeneous(vec({0, 1}));
        s.add_homogeneous(vec({-1, -1}));
        CHECK_FALSE(s.feasible());
    }
    SECTION("zero-dimensional systems") {
        StrictSystem good(0);
        CHECK(good.feasible());
    }
}

TEST_CASE("region enumeration matches hand counts") {
    SECTION("two crossing lines give four regions") {
        StrictSystem base(2);
        auto regions = enumerate_regions(base, {vec({1, 0}), vec({0, 1})});
        CHECK(regions.size() == 4);
    }
    SECTION("three concurrent lines give six regions") {
        StrictSystem base(2);
        auto regions = enumerate_regions(base, {vec({1, 0}), vec({0, 1}), vec({1, -1})});
        CHECK(regions.size() == 6);
    }
    SECTION("restricting to a halfplane halves the count") {
        StrictSystem base(2);
        base.add_homogeneous(vec({1, 1}));
        auto regions = enumerate_regions(base, {vec({1, 0}), vec({0, 1})});
        CHECK(regions.size() == 3);
    }
    SECTION("samples land in their regions") {
        StrictSystem base(2);
        std::vector<Vec> queries = {vec({1, 0}), vec({0, 1}), vec({1, 1}), vec({2, -3})};
        for (const Region& r : enumerate_regions(base, queries)) {
            REQUIRE(r.signs.size() == queries.size());
            for (std::size_t i = 0; i < queries.size(); ++i)
                CHECK(sign(dot(r.sample, queries[i])) == r.signs[i]);
        }
    }
}
