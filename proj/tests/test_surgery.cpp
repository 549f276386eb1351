#include "ptsys/surgery.hpp"

#include <doctest.h>

using namespace ptsys;
using closure::SurgeryPresentation;
using mcg::SurfaceModel;
using mcg::TwistWord;

namespace {

const SurfaceModel surf{2, std::nullopt};

TwistWord word(std::vector<int> signs) {
    TwistWord w{surf, {}};
    for (int s : signs) w.letters.push_back({mcg::curve_a(surf, 1), s});
    return w;
}

} // namespace

TEST_CASE("one positive letter sits at height one half") {
    SurgeryPresentation p = closure::build_surgery(word({1}));
    REQUIRE(p.entries.size() == 1);
    CHECK(p.entries[0].height == make_rat(1, 2));
    CHECK(p.entries[0].framing == -1);
    CHECK_FALSE(p.entries[0].cancelling_partner.has_value());
}

TEST_CASE("positive letters spread evenly below the top") {
    SurgeryPresentation p = closure::build_surgery(word({1, 1}));
    REQUIRE(p.entries.size() == 2);
    CHECK(p.entries[0].height == make_rat(7, 12));
    CHECK(p.entries[1].height == make_rat(5, 12));

    SurgeryPresentation q = closure::build_surgery(word({1, 1, 1}));
    REQUIRE(q.entries.size() == 3);
    CHECK(q.entries[0].height == make_rat(5, 8));
    CHECK(q.entries[2].height == make_rat(3, 8));
}

TEST_CASE("a negative letter is undone just above") {
    SurgeryPresentation p = closure::build_surgery(word({-1}));
    REQUIRE(p.entries.size() == 2);
    CHECK(p.entries[0].framing == -1);
    CHECK(p.entries[0].height == make_rat(5, 8)); // halfway between 1/2 and the top
    CHECK(p.entries[1].framing == 1);
    CHECK(p.entries[1].height == make_rat(1, 2));
    REQUIRE(p.entries[1].cancelling_partner.has_value());
    CHECK(*p.entries[1].cancelling_partner == p.entries[0].height);
    CHECK(p.entries[0].curve.vec == p.entries[1].curve.vec);
}

TEST_CASE("two bands occupy disjoint height windows") {
    SurgeryPresentation p = closure::build_surgery_two_part(word({1, -1}), word({1}));
    for (const auto& e : p.entries) {
        CHECK(e.height > make_rat(-3, 4));
        CHECK(e.height < make_rat(3, 4));
    }
    // the a band stays above 1/4, the b band below -1/4
    CHECK(p.entries.front().height > make_rat(1, 4));
    CHECK(p.entries.back().height == make_rat(-1, 2));
    for (std::size_t i = 1; i < p.entries.size(); ++i)
        CHECK(p.entries[i].height < p.entries[i - 1].height);

    CHECK(closure::build_surgery_two_part(word({}), word({})).entries.empty());
}

TEST_CASE("validation rejects malformed presentations") {
    SurgeryPresentation good = closure::build_surgery(word({1, -1, 1}));
    CHECK_NOTHROW(closure::validate_surgery(good));

    SurgeryPresentation p = good;
    p.entries[0].height = Rat(1);
    CHECK_THROWS_AS(closure::validate_surgery(p), Error);

    p = good;
    p.entries[0].framing = 0;
    CHECK_THROWS_AS(closure::validate_surgery(p), Error);

    p = good;
    std::swap(p.entries[0], p.entries[1]);
    CHECK_THROWS_AS(closure::validate_surgery(p), Error);

    p = good;
    for (auto& e : p.entries) e.cancelling_partner.reset();
    CHECK_THROWS_AS(closure::validate_surgery(p), Error);

    // partner must ride the same curve
    p = good;
    for (auto& e : p.entries)
        if (e.framing == 1) e.curve = mcg::curve_b(surf, 2);
    CHECK_THROWS_AS(closure::validate_surgery(p), Error);

    p = good;
    p.entries[0].cancelling_partner = p.entries[0].height;
    CHECK_THROWS_AS(closure::validate_surgery(p), Error);
}
