#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "creol2ta/analysis/dbm.hpp"
#include "doctest.h"

using namespace creol2ta::analysis;

TEST_CASE("delay closure of the zero zone keeps clocks equal") {
    Zone z = Zone::zero(2);
    z.up();
    // x1 - x2 == 0 (both directions), lower bounds 0, no upper bounds.
    CHECK(z.at(1, 2) == make_raw(0, false));
    CHECK(z.at(2, 1) == make_raw(0, false));
    CHECK(z.at(0, 1) == make_raw(0, false));
    CHECK(z.at(1, 0) == kRawInf);
    CHECK(z.is_canonical());
}

TEST_CASE("reset detaches one clock") {
    Zone z = Zone::zero(2);
    z.up();
    // x1 == x2 == 5
    CHECK(z.constrain(1, 0, 5, false));
    CHECK(z.constrain(0, 1, -5, false));
    z.reset(1);
    CHECK(z.at(1, 0) == make_raw(0, false));
    CHECK(z.at(0, 1) == make_raw(0, false));
    CHECK(z.at(2, 0) == make_raw(5, false));
    CHECK(z.at(0, 2) == make_raw(-5, false));
    CHECK(z.is_canonical());
}

TEST_CASE("inclusion on nested upper bounds") {
    Zone a = Zone::zero(1);
    a.up();
    Zone b = a;
    CHECK(a.constrain(1, 0, 3, false));
    CHECK(b.constrain(1, 0, 5, false));
    CHECK(b.includes(a));
    CHECK(!a.includes(b));
    CHECK(a.includes(a));
}

TEST_CASE("unsatisfiable constraints empty the zone") {
    Zone z = Zone::zero(1);
    z.up();
    CHECK(z.constrain(1, 0, 4, false));   // x <= 4
    CHECK(!z.constrain(0, 1, -5, false)); // x >= 5
    CHECK(z.is_empty());
}

namespace {

std::vector<Zone> random_zones(int count, int clocks, int max_const, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> bound(0, max_const);
    std::uniform_int_distribution<int> clock(1, clocks);
    std::uniform_int_distribution<int> n_constraints(0, 6);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<Zone> out;
    while (static_cast<int>(out.size()) < count) {
        Zone z = Zone::zero(clocks);
        z.up();
        int n = n_constraints(rng);
        bool alive = true;
        for (int k = 0; k < n && alive; ++k) {
            int c = clock(rng);
            int b = bound(rng);
            if (coin(rng))
                alive = z.constrain(c, 0, b, coin(rng));
            else
                alive = z.constrain(0, c, -b, coin(rng));
            if (alive && coin(rng)) {
                z.reset(clock(rng));
                z.up();
            }
        }
        if (alive && !z.is_empty()) out.push_back(z);
    }
    return out;
}

}  // namespace

TEST_CASE("canonical form is stable under re-closing (1000 random zones)") {
    auto zones = random_zones(1000, 3, 9, 20250810);
    for (const auto& z : zones) {
        CHECK(z.is_canonical());
        Zone w = z;
        w.close();
        CHECK(w == z);
    }
}

TEST_CASE("up/reset/constrain preserve canonical form") {
    auto zones = random_zones(300, 3, 9, 42);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> clock(1, 3);
    std::uniform_int_distribution<int> bound(0, 9);
    std::uniform_int_distribution<int> coin(0, 1);
    for (Zone z : zones) {
        z.up();
        CHECK(z.is_canonical());
        z.reset(clock(rng));
        CHECK(z.is_canonical());
        if (z.constrain(clock(rng), 0, bound(rng), coin(rng))) CHECK(z.is_canonical());
    }
}

TEST_CASE("extrapolation widens and stays canonical") {
    auto zones = random_zones(300, 3, 9, 99);
    std::vector<std::int32_t> max = {0, 4, 4, 4};
    for (Zone z : zones) {
        Zone orig = z;
        z.extrapolate(max);
        CHECK(z.is_canonical());
        CHECK(z.includes(orig));
        // idempotent
        Zone again = z;
        again.extrapolate(max);
        CHECK(again == z);
    }
}

TEST_CASE("sample returns a point inside the zone") {
    auto zones = random_zones(200, 3, 9, 123);
    for (const auto& z : zones) {
        auto pt = z.sample();
        REQUIRE(pt.size() == 4);
        // check all pairwise difference bounds
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                raw_t b = z.at(i, j);
                if (b >= kRawInf) continue;
                long diff = pt[static_cast<std::size_t>(i)] - pt[static_cast<std::size_t>(j)];
                if (raw_strict(b))
                    CHECK(diff < raw_bound(b));
                else
                    CHECK(diff <= raw_bound(b));
            }
    }
}
