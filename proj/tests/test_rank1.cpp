#include "ptsys/gen.hpp"
#include "ptsys/rank1.hpp"

#include <doctest.h>

using namespace ptsys;
using closure::ClosureDescriptor;
using closure::MorphismWord;
using rank1::RankOneAssignment;

namespace {

RingElem nov(const novikov::NovikovElement& e) { return RingElem::novikov(e); }

novikov::NovikovElement t_pow(long num, long den = 1) {
    return novikov::NovikovElement(make_rat(num, den), Int(1));
}

} // namespace

TEST_CASE("letter values multiply along the word") {
    RankOneAssignment a;
    a.ring = RingSpec{RingKind::NovikovOverIntegers, UnitGroup::FullUnits};
    a.label_unit.emplace("x", nov(t_pow(2)));
    a.label_unit.emplace("y", nov(t_pow(1)));
    CHECK_NOTHROW(rank1::validate_rank_one(a));

    ClosureDescriptor d = gen::make_closure("d", "K", 2, {0, 1, 0, 0});
    MorphismWord w{d,
                   d,
                   {closure::make_xi(d, "x", 1),
                    closure::make_unit(d, nov(novikov::NovikovElement(Int(-1)))),
                    closure::make_xi(d, "y", -1)}};
    // t^2 * (-1) * t^{-1}
    CHECK(rank1::evaluate_rank_one(a, w) ==
          nov(novikov::NovikovElement(Rat(1), Int(-1))));

    CHECK(rank1::evaluate_rank_one(a, closure::identity_word(d)) ==
          ring_one(RingKind::NovikovOverIntegers));

    // unlisted keys default to 1
    MorphismWord other{d, d, {closure::make_xi(d, "unlisted", 1)}};
    CHECK(rank1::evaluate_rank_one(a, other) == ring_one(RingKind::NovikovOverIntegers));
}

TEST_CASE("assignment validation") {
    RankOneAssignment a;
    a.ring = RingSpec{RingKind::Integers, UnitGroup::Signs};

    RankOneAssignment bad = a;
    bad.label_unit.emplace("x", RingElem::integers(Int(2)));
    CHECK_THROWS_AS(rank1::validate_rank_one(bad), Error);

    bad = a;
    bad.closure_unit.emplace("d", RingElem::rationals(Rat(1)));
    CHECK_THROWS_AS(rank1::validate_rank_one(bad), Error); // wrong ring

    bad = a;
    bad.ring = RingSpec{RingKind::NovikovOverIntegers, UnitGroup::FullUnits};
    // 1 + t is a unit of the completed ring but has no exact inverse
    novikov::NovikovElement one_plus_t =
        novikov::add(novikov::NovikovElement(Int(1)), t_pow(1));
    bad.label_unit.emplace("x", nov(one_plus_t));
    CHECK_THROWS_AS(rank1::validate_rank_one(bad), Error);

    bad = a;
    bad.handle_unit.emplace(7u, RingElem::integers(Int(-1)));
    CHECK_NOTHROW(rank1::validate_rank_one(bad));
}

TEST_CASE("closure units act as a coboundary") {
    gen::Rng r(61);
    ClosureDescriptor d = gen::random_closure(r, "d", "K", 2);
    ClosureDescriptor dp = gen::random_closure(r, "dp", "K", 2);
    closure::GluingData g = gen::random_gluing(r, d, dp, 4);
    MorphismWord w = closure::psi_same_genus(d, dp, g);
    MorphismWord loop = closure::concat(w, closure::inverse(w));

    RankOneAssignment a;
    a.ring = RingSpec{RingKind::NovikovOverIntegers, UnitGroup::FullUnits};
    a.closure_unit.emplace(d.id, nov(t_pow(3)));
    a.closure_unit.emplace(dp.id, nov(t_pow(-1, 2)));
    // intermediate ids telescope away on any loop
    CHECK(rank1::evaluate_rank_one(a, loop) == ring_one(RingKind::NovikovOverIntegers));

    // on the open word only the endpoints survive: chi_tgt * chi_src^{-1}
    CHECK(rank1::evaluate_rank_one(a, w) == nov(t_pow(-7, 2)));
}

TEST_CASE("coherent words evaluate to the same class") {
    gen::Rng r(67);
    for (int i = 0; i < 5; ++i) {
        ClosureDescriptor d0 = gen::random_closure(r, "d0", "K", 2);
        ClosureDescriptor d1 = gen::random_closure(r, "d1", "K", 2);
        ClosureDescriptor d2 = gen::random_closure(r, "d2", "K", 2);
        closure::GluingData g1 = gen::random_gluing(r, d0, d1, 4);
        closure::GluingData g2 = gen::random_gluing(r, d1, d2, 4);
        MorphismWord w1 =
            closure::psi_same_genus(d0, d2, closure::compose_gluings(g1, g2));
        MorphismWord w2 = closure::concat(closure::psi_same_genus(d0, d1, g1),
                                          closure::psi_same_genus(d1, d2, g2));
        REQUIRE(closure::coherence_check(w1, w2).ok);

        for (RingSpec spec : {RingSpec{RingKind::Integers, UnitGroup::Signs},
                              RingSpec{RingKind::NovikovOverIntegers, UnitGroup::FullUnits}}) {
            RankOneAssignment a = gen::random_assignment(r, spec, {&w1, &w2});
            RingElem v1 = rank1::evaluate_rank_one(a, w1);
            RingElem v2 = rank1::evaluate_rank_one(a, w2);
            CHECK(ring_ratio_in_group(v1, v2, spec.unit_group));
        }
    }
}
