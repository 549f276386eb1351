#include "ptsys/gen.hpp"
#include "ptsys/systems.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ptsys;
using modalg::FreeModule;
using modalg::GClassHom;
using modalg::Homomorphism;
using systems::Label;
using systems::LabelPair;
using systems::TransitiveSystem;

namespace {

bool has_violation(const std::vector<systems::Violation>& vs, const std::string& kind) {
    return std::any_of(vs.begin(), vs.end(),
                       [&](const systems::Violation& v) { return v.kind == kind; });
}

// Every map the identity; valid over any ring and unit group.
TransitiveSystem const_system(const RingSpec& spec, std::vector<Label> idx, std::size_t rank) {
    TransitiveSystem S;
    S.ring = spec;
    S.indices = std::move(idx);
    FreeModule m{spec, rank};
    for (const Label& a : S.indices) S.modules.emplace(a, m);
    for (const Label& a : S.indices)
        for (const Label& b : S.indices)
            S.maps.emplace(LabelPair{a, b}, GClassHom{modalg::identity_hom(m), spec.unit_group});
    return S;
}

Homomorphism scaled_identity(const FreeModule& m, long s) {
    return modalg::scale_hom(modalg::identity_hom(m), RingElem::integers(Int(s)));
}

} // namespace

TEST_CASE("the constant system is valid and random systems are too") {
    RingSpec zt{RingKind::Integers, UnitGroup::Trivial};
    CHECK(systems::validate_system(const_system(zt, {"a", "b"}, 1)).empty());

    gen::Rng r(3);
    for (RingKind k : {RingKind::Integers, RingKind::RationalField, RingKind::NovikovOverIntegers}) {
        RingSpec spec{k, UnitGroup::Signs};
        TransitiveSystem S = gen::random_system(r, spec, {"p", "q", "s"}, 2, 3);
        CHECK(systems::validate_system(S).empty());
    }
}

TEST_CASE("each defect kind is reported") {
    RingSpec zt{RingKind::Integers, UnitGroup::Trivial};
    TransitiveSystem base = const_system(zt, {"a", "b", "c"}, 1);
    FreeModule m{zt, 1};

    TransitiveSystem s1 = base;
    s1.maps.erase(LabelPair{"a", "b"});
    CHECK(has_violation(systems::validate_system(s1), "structure"));

    TransitiveSystem s2 = base;
    s2.maps.at(LabelPair{"a", "b"}) = GClassHom{scaled_identity(m, 2), zt.unit_group};
    CHECK(has_violation(systems::validate_system(s2), "not_isomorphism"));

    TransitiveSystem s3 = base;
    s3.maps.at(LabelPair{"a", "a"}) = GClassHom{scaled_identity(m, -1), zt.unit_group};
    CHECK(has_violation(systems::validate_system(s3), "identity"));

    TransitiveSystem s4 = base;
    s4.maps.at(LabelPair{"a", "c"}) = GClassHom{scaled_identity(m, -1), zt.unit_group};
    CHECK(has_violation(systems::validate_system(s4), "cocycle"));

    // with the sign group the same flip is invisible
    RingSpec zs{RingKind::Integers, UnitGroup::Signs};
    FreeModule ms{zs, 1};
    TransitiveSystem s5 = const_system(zs, {"a", "b", "c"}, 1);
    s5.maps.at(LabelPair{"a", "c"}) = GClassHom{scaled_identity(ms, -1), zs.unit_group};
    CHECK(systems::validate_system(s5).empty());
}

TEST_CASE("injected defects are caught") {
    gen::Rng r(9);
    RingSpec spec{RingKind::Integers, UnitGroup::Signs};
    for (int i = 0; i < 10; ++i) {
        TransitiveSystem S = gen::random_system(r, spec, {"a", "b", "c", "d"}, 2, 3);
        CHECK_FALSE(systems::validate_system(gen::inject_defect(r, S)).empty());
    }
}

TEST_CASE("morphism validation, identity, composition, inverse") {
    gen::Rng r(17);
    RingSpec spec{RingKind::Integers, UnitGroup::Signs};
    TransitiveSystem S = gen::random_system(r, spec, {"a", "b"}, 2, 3);
    TransitiveSystem T = gen::random_system(r, spec, {"x", "y", "z"}, 2, 3);

    systems::SystemMorphism id_s = systems::identity_morphism(S);
    CHECK(systems::validate_morphism(id_s).empty());

    // a valid morphism S -> T: seed one map M_a -> M_x and propagate through
    // the structure maps, so every compatibility square commutes up to units
    systems::SystemMorphism f;
    f.source = S;
    f.target = T;
    GClassHom seed{gen::random_iso(r, S.modules.at("a"), 3), spec.unit_group};
    for (const Label& a : S.indices)
        for (const Label& g : T.indices)
            f.components.emplace(
                LabelPair{a, g},
                modalg::compose(T.maps.at(LabelPair{"x", g}),
                                modalg::compose(seed, S.maps.at(LabelPair{a, "a"}))));
    CHECK(systems::validate_morphism(f).empty());

    CHECK(systems::morphisms_equal(systems::compose_system_morphisms(f, id_s), f));

    systems::SystemMorphism finv = systems::inverse_system_morphism(f);
    CHECK(systems::validate_morphism(finv).empty());
    CHECK(systems::morphisms_equal(systems::compose_system_morphisms(finv, f),
                                   systems::identity_morphism(S)));

    // ring mismatch is a compatibility violation
    systems::SystemMorphism bad = id_s;
    bad.target = gen::random_system(r, RingSpec{RingKind::RationalField, UnitGroup::Signs},
                                    {"a", "b"}, 2, 3);
    CHECK(has_violation(systems::validate_morphism(bad), "compat"));
}

TEST_CASE("quotient identifications commute with the structure maps") {
    gen::Rng r(23);
    RingSpec zt{RingKind::Integers, UnitGroup::Trivial};
    for (int i = 0; i < 10; ++i) {
        TransitiveSystem S = gen::random_system(r, zt, {"a", "b", "c"}, 3, 4);
        REQUIRE(systems::validate_system(S).empty());
        systems::QuotientResult q = systems::quotient_module(S);
        CHECK(q.module == S.modules.at(S.indices.front()));
        for (const Label& a : S.indices) {
            CHECK(modalg::is_isomorphism(q.identifications.at(a)));
            for (const Label& b : S.indices) {
                Homomorphism lhs = modalg::compose_hom(q.identifications.at(b),
                                                       S.maps.at(LabelPair{a, b}).rep);
                CHECK(lhs == q.identifications.at(a));
            }
        }
    }
}

TEST_CASE("base change to the series ring") {
    gen::Rng r(31);
    RingSpec zs{RingKind::Integers, UnitGroup::Signs};
    RingSpec target{RingKind::NovikovOverIntegers, UnitGroup::FullUnits};
    TransitiveSystem S = gen::random_system(r, zs, {"a", "b"}, 2, 3);
    TransitiveSystem T = systems::tensor_system(S, target);
    CHECK(T.ring == target);
    CHECK(systems::validate_system(T).empty());
    const Homomorphism& before = S.maps.at(LabelPair{"a", "b"}).rep;
    const Homomorphism& after = T.maps.at(LabelPair{"a", "b"}).rep;
    for (std::size_t i = 0; i < before.matrix.size(); ++i)
        CHECK(after.matrix[i] == ring_from_int(target.kind, before.matrix[i].as_int()));

    systems::SystemMorphism tm = systems::tensor_morphism(systems::identity_morphism(S), target);
    CHECK(systems::validate_morphism(tm).empty());
}

TEST_CASE("spanning tree completion") {
    RingSpec zs{RingKind::Integers, UnitGroup::Signs};
    FreeModule m{zs, 2};
    Homomorphism shear = modalg::make_hom(
        m, m,
        {RingElem::integers(Int(1)), RingElem::integers(Int(1)), RingElem::integers(Int(0)),
         RingElem::integers(Int(1))});

    TransitiveSystem partial;
    partial.ring = zs;
    partial.indices = {"a", "b", "c"};
    for (const Label& a : partial.indices) partial.modules.emplace(a, m);
    partial.maps.emplace(LabelPair{"a", "b"}, GClassHom{shear, zs.unit_group});
    partial.maps.emplace(LabelPair{"c", "b"}, GClassHom{shear, zs.unit_group});

    TransitiveSystem full = systems::complete_system(partial);
    CHECK(systems::validate_system(full).empty());
    CHECK(full.maps.size() == 9);
    CHECK(full.maps.at(LabelPair{"a", "b"}).equals(GClassHom{shear, zs.unit_group}));
    // a -> c is forced: inverse of (c -> b) after (a -> b)
    Homomorphism forced = modalg::compose_hom(systems::hom_inverse(shear), shear);
    CHECK(full.maps.at(LabelPair{"a", "c"}).equals(GClassHom{forced, zs.unit_group}));

    TransitiveSystem disconnected = partial;
    disconnected.indices.push_back("d");
    disconnected.modules.emplace("d", m);
    CHECK_THROWS_AS(systems::complete_system(disconnected), Error);
}

TEST_CASE("systems of systems flatten to one big system") {
    gen::Rng r(41);
    RingSpec zs{RingKind::Integers, UnitGroup::Signs};

    systems::SystemOfSystems T;
    T.outer = {"u", "v"};
    TransitiveSystem inner = gen::random_system(r, zs, {"a", "b"}, 2, 3);
    T.inner.emplace("u", inner);
    T.inner.emplace("v", inner);
    systems::SystemMorphism id_m = systems::identity_morphism(inner);
    for (const Label& o : T.outer)
        for (const Label& p : T.outer)
            T.connectors.emplace(LabelPair{o, p}, id_m);

    CHECK(systems::validate_system_of_systems(T).empty());
    TransitiveSystem flat = systems::flatten_system_of_systems(T);
    CHECK(systems::validate_system(flat).empty());
    CHECK(flat.indices.size() == 4);
    CHECK(flat.modules.count("u/a") == 1);
    CHECK(flat.maps.count(LabelPair{"u/a", "v/b"}) == 1);

    // breaking one connector's component breaks the outer cocycle
    systems::SystemOfSystems bad = T;
    modalg::GClassHom& comp = bad.connectors.at(LabelPair{"u", "v"}).components.begin()->second;
    comp = GClassHom{modalg::scale_hom(comp.rep, RingElem::integers(Int(3))), comp.unit_group};
    CHECK_FALSE(systems::validate_system_of_systems(bad).empty());
}
