#include "ptsys/gen.hpp"
#include "ptsys/json_io.hpp"

#include <doctest.h>

using namespace ptsys;
using io::Json;

namespace {

// Serialize, parse back through text, serialize again; both dumps must match
// byte for byte and the reparsed value must equal the original.
template <class T, class ToJson, class FromJson>
void round_trip(const T& value, ToJson to, FromJson from,
                bool (*equal)(const T&, const T&)) {
    std::string text = to(value).dump(2);
    T back = from(io::parse_text(text));
    CHECK(equal(value, back));
    CHECK(to(back).dump(2) == text);
}

} // namespace

TEST_CASE("parse errors carry a byte position") {
    try {
        io::parse_text("{\"a\": [1, }");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        CHECK(e.position().has_value());
    }
    CHECK_THROWS_AS(io::parse_file("/nonexistent/x.json"), Error);
}

TEST_CASE("missing fields name the key") {
    try {
        io::ring_spec_from_json(io::parse_text("{\"ring\": \"integers\"}"));
        FAIL("expected a missing-field error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("unit_group") != std::string::npos);
    }
}

TEST_CASE("ring specs and homomorphisms round trip") {
    RingSpec spec{RingKind::NovikovOverIntegers, UnitGroup::FullUnits};
    CHECK(io::ring_spec_from_json(io::ring_spec_to_json(spec)) == spec);

    modalg::FreeModule m{spec, 2};
    gen::Rng r(3);
    modalg::Homomorphism f = gen::random_hom(r, m, m, 3);
    Json j = io::hom_to_json(f);
    CHECK(io::hom_from_json(j, spec) == f);
    CHECK(io::hom_to_json(io::hom_from_json(j, spec)).dump() == j.dump());
}

TEST_CASE("systems round trip and spanning-tree completion applies") {
    gen::Rng r(7);
    RingSpec spec{RingKind::Integers, UnitGroup::Signs};
    systems::TransitiveSystem S = gen::random_system(r, spec, {"a", "b", "c"}, 2, 3);
    Json j = io::system_to_json(S);
    systems::TransitiveSystem back = io::system_from_json(j);
    CHECK(systems::validate_system(back).empty());
    CHECK(io::system_to_json(back).dump(2) == j.dump(2));

    // drop all but a spanning set of maps; reading fills the rest
    Json partial = j;
    Json kept = Json::object();
    kept["a->b"] = j["maps"]["a->b"];
    kept["b->c"] = j["maps"]["b->c"];
    partial["maps"] = kept;
    systems::TransitiveSystem filled = io::system_from_json(partial);
    CHECK(systems::validate_system(filled).empty());
    CHECK(filled.maps.size() == 9);
    CHECK(filled.maps.at({"a", "b"}).equals(S.maps.at({"a", "b"})));
}

TEST_CASE("matrices accept numbers and big-integer strings") {
    mcg::IntMat m = io::mat_from_json(io::parse_text("[[1, -2], [\"123456789012345678901\", 0]]"));
    CHECK(m.n == 2);
    CHECK(m.at(1, 0) == Int("123456789012345678901"));
    Json j = io::mat_to_json(m);
    CHECK(io::mat_from_json(j) == m);
    // small entries stay numbers, oversized ones become strings
    CHECK(j[0][0].is_number());
    CHECK(j[1][0].is_string());

    CHECK_THROWS_AS(io::mat_from_json(io::parse_text("[[1, 2]]")), Error); // not square
}

TEST_CASE("twist words and surgeries") {
    gen::Rng r(11);
    mcg::SurfaceModel s{2, std::nullopt};
    mcg::TwistWord w = gen::random_twist_word(r, s, 5);
    Json j = io::twist_word_to_json(w);
    mcg::TwistWord back = io::twist_word_from_json(j);
    CHECK(mcg::word_action(back) == mcg::word_action(w));
    CHECK(io::twist_word_to_json(back).dump() == j.dump());

    Json sj = io::surgery_to_json(closure::build_surgery(back));
    CHECK(sj["entries"].size() == w.letters.size() +
              std::count_if(w.letters.begin(), w.letters.end(),
                            [](const mcg::TwistLetter& l) { return l.sign < 0; }));
}

TEST_CASE("closures, gluings, cuts round trip") {
    gen::Rng r(13);
    closure::ClosureDescriptor d = gen::random_closure(r, "d", "K", 2);
    closure::ClosureDescriptor dp = gen::random_closure(r, "dp", "K", 2);
    round_trip(d, io::closure_to_json, io::closure_from_json, closure::closure_equal);

    closure::GluingData g = gen::random_gluing(r, d, dp, 4);
    Json gj = io::gluing_to_json(g);
    closure::GluingData gback = io::gluing_from_json(gj);
    CHECK(gback.psi == g.psi);
    CHECK(io::gluing_to_json(gback).dump(2) == gj.dump(2));

    // omitting psi derives the canonical one
    Json no_psi = gj;
    no_psi.erase("psi");
    CHECK(io::gluing_from_json(no_psi).psi == g.psi);

    // a stored psi is still validated
    Json tampered = gj;
    tampered["psi"] = io::mat_to_json(mcg::IntMat::identity(2)); // wrong size
    CHECK_THROWS_AS(io::gluing_from_json(tampered), Error);

    closure::ClosureDescriptor parent = gen::make_closure("p", "K", 3, {0, 0, 0, 1, 0, 1});
    closure::CutData cd = closure::make_cut_data(parent, mcg::curve_a(parent.surface, 3),
                                                 mcg::curve_b(parent.surface, 3));
    round_trip(cd, io::cut_to_json, io::cut_from_json, closure::cut_equal);
}

TEST_CASE("morphism words round trip; handle letters are output-only") {
    gen::Rng r(17);
    closure::ClosureDescriptor d = gen::random_closure(r, "d", "K", 2);
    closure::ClosureDescriptor dp = gen::random_closure(r, "dp", "K", 2);
    closure::GluingData g = gen::random_gluing(r, d, dp, 4);

    closure::MorphismWord nf = closure::normal_form(closure::psi_same_genus(d, dp, g));
    nf.letters.push_back(closure::make_xi(dp, "x", -1));
    round_trip(nf, io::word_to_json, io::word_from_json, closure::words_equal);

    closure::MorphismWord raw = closure::psi_same_genus(d, dp, g);
    Json rj = io::word_to_json(raw); // emitting handle letters is fine
    try {
        io::word_from_json(rj);
        FAIL("expected handle letters to be rejected on input");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("constructor command") != std::string::npos);
    }
}

TEST_CASE("assignments and nesting models round trip") {
    gen::Rng r(19);
    closure::ClosureDescriptor d = gen::random_closure(r, "d", "K", 2);
    closure::ClosureDescriptor dp = gen::random_closure(r, "dp", "K", 2);
    closure::GluingData g = gen::random_gluing(r, d, dp, 4);
    closure::MorphismWord w = closure::psi_same_genus(d, dp, g);

    rank1::RankOneAssignment a =
        gen::random_assignment(r, RingSpec{RingKind::NovikovOverIntegers, UnitGroup::FullUnits}, {&w});
    Json aj = io::assignment_to_json(a);
    rank1::RankOneAssignment aback = io::assignment_from_json(aj);
    CHECK(io::assignment_to_json(aback).dump(2) == aj.dump(2));
    CHECK(rank1::evaluate_rank_one(aback, w) == rank1::evaluate_rank_one(a, w));

    khm::KhmModel m = gen::random_khm_model(r, 3, 2, 2);
    Json mj = io::khm_to_json(m);
    khm::KhmModel mback = io::khm_from_json(mj);
    CHECK(khm::validate_khm(mback).empty());
    CHECK(io::khm_to_json(mback).dump(2) == mj.dump(2));
}
