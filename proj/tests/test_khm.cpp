#include "ptsys/gen.hpp"
#include "ptsys/khm.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ptsys;
using systems::Label;
using systems::LabelPair;

namespace {

// Two tags nested in a common refinement, all systems equal, all generators
// the identity.
khm::KhmModel tiny_model() {
    RingSpec spec{RingKind::Integers, UnitGroup::Signs};
    khm::KhmModel m;
    m.ring = spec;
    m.tags = {"a", "b", "r"};

    systems::TransitiveSystem S;
    S.ring = spec;
    S.indices = {"i", "j"};
    modalg::FreeModule mod{spec, 2};
    for (const Label& x : S.indices) S.modules.emplace(x, mod);
    for (const Label& x : S.indices)
        for (const Label& y : S.indices)
            S.maps.emplace(LabelPair{x, y},
                           modalg::GClassHom{modalg::identity_hom(mod), spec.unit_group});

    for (const std::string& t : m.tags) m.tag_systems.emplace(t, S);
    systems::SystemMorphism id_m = systems::identity_morphism(S);
    m.edges.push_back({"a", "r", id_m});
    m.edges.push_back({"b", "r", id_m});
    return m;
}

} // namespace

TEST_CASE("nesting validation and refinements") {
    khm::KhmModel m = tiny_model();
    CHECK(khm::validate_khm(m).empty());

    std::vector<std::string> ra = khm::khm_refinements(m, "a");
    CHECK(std::find(ra.begin(), ra.end(), "a") != ra.end());
    CHECK(std::find(ra.begin(), ra.end(), "r") != ra.end());
    CHECK(std::find(ra.begin(), ra.end(), "b") == ra.end());
    CHECK(khm::khm_refinements(m, "r") == std::vector<std::string>{"r"});

    // a cycle in the nesting order is rejected
    khm::KhmModel cyc = m;
    cyc.edges.push_back({"r", "a", systems::identity_morphism(m.tag_systems.at("r"))});
    CHECK_FALSE(khm::validate_khm(cyc).empty());
}

TEST_CASE("transports and pairwise comparisons on the tiny model") {
    khm::KhmModel m = tiny_model();
    systems::SystemMorphism tr = khm::khm_transport(m, "a", "r");
    CHECK(systems::morphisms_equal(tr, systems::identity_morphism(m.tag_systems.at("a"))));

    systems::SystemMorphism psi = khm::khm_psi(m, "a", "b");
    CHECK(systems::validate_morphism(psi).empty());
    CHECK(systems::morphisms_equal(
        systems::compose_system_morphisms(khm::khm_psi(m, "b", "a"), psi),
        systems::identity_morphism(m.tag_systems.at("a"))));
}

TEST_CASE("random nesting models pass every independence check") {
    gen::Rng r(71);
    for (int i = 0; i < 5; ++i) {
        khm::KhmModel m = gen::random_khm_model(r, 4, 2, 2);
        CHECK(khm::validate_khm(m).empty());

        for (const std::string& a : m.tags)
            for (const std::string& b : m.tags) {
                systems::SystemMorphism f = khm::khm_psi(m, a, b);
                CHECK(systems::validate_morphism(f).empty());
                systems::SystemMorphism g = khm::khm_psi(m, b, a);
                CHECK(systems::morphisms_equal(
                    systems::compose_system_morphisms(g, f),
                    systems::identity_morphism(m.tag_systems.at(a))));
            }
    }
}

TEST_CASE("the assembled two-level system flattens cleanly") {
    gen::Rng r(73);
    khm::KhmModel m = gen::random_khm_model(r, 3, 2, 2);
    REQUIRE(khm::validate_khm(m).empty());

    systems::SystemOfSystems sos = khm::khm_system_of_systems(m);
    CHECK(sos.outer == m.tags);
    CHECK(systems::validate_system_of_systems(sos).empty());

    systems::TransitiveSystem flat = systems::flatten_system_of_systems(sos);
    CHECK(systems::validate_system(flat).empty());
    CHECK(flat.indices.size() == m.tags.size() * m.tag_systems.begin()->second.indices.size());
}

TEST_CASE("a corrupted generator is detected") {
    gen::Rng r(79);
    khm::KhmModel m = gen::random_khm_model(r, 3, 2, 2);
    REQUIRE(khm::validate_khm(m).empty());

    khm::KhmModel bad = m;
    modalg::GClassHom& c = bad.edges.front().gen.components.begin()->second;
    c = modalg::GClassHom{modalg::scale_hom(c.rep, RingElem::integers(Int(3))), c.unit_group};
    CHECK_FALSE(khm::validate_khm(bad).empty());
}
