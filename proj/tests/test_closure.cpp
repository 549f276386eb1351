#include "ptsys/closure.hpp"
#include "ptsys/gen.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>

using namespace ptsys;
using closure::ClosureDescriptor;
using closure::CutData;
using closure::FreeWord;
using closure::GluingData;
using closure::LetterKind;
using closure::MorphismWord;
using mcg::IntMat;

namespace {

ClosureDescriptor genus2(const std::string& id) {
    return gen::make_closure(id, "K", 2, {0, 1, 0, 0});
}

ClosureDescriptor genus3(const std::string& id) {
    return gen::make_closure(id, "K", 3, {0, 0, 0, 1, 0, 1}); // b_2 + b_3
}

CutData standard_cut(const ClosureDescriptor& parent) {
    return closure::make_cut_data(parent, mcg::curve_a(parent.surface, 3),
                                  mcg::curve_b(parent.surface, 3));
}

// Lexicographic termination measure: splice count, length, xi distance to
// the tail, splice distance to its preferred end.
std::array<long, 4> measure(const MorphismWord& w) {
    const long len = static_cast<long>(w.letters.size());
    std::array<long, 4> m{0, len, 0, 0};
    for (long i = 0; i < len; ++i) {
        switch (w.letters[static_cast<std::size_t>(i)].kind) {
            case LetterKind::SpliceMerge:
                ++m[0];
                m[3] += len - 1 - i;
                break;
            case LetterKind::SpliceSplit:
                ++m[0];
                m[3] += i;
                break;
            case LetterKind::XiMerge: m[2] += len - 1 - i; break;
            default: break;
        }
    }
    return m;
}

} // namespace

TEST_CASE("free groupoid words reduce") {
    FreeWord x = FreeWord::gen("x");
    FreeWord y = FreeWord::gen("y");
    FreeWord w = closure::fw_then(x, closure::fw_then(y, closure::fw_inverse(y)));
    CHECK(closure::fw_equal(w, x));
    CHECK(closure::fw_is_identity(closure::fw_then(closure::fw_inverse(x), x)));
    CHECK(closure::fw_to_string(closure::fw_then(x, closure::fw_inverse(y))) == "x.y^-1");
    CHECK(closure::fw_to_string(FreeWord{}) == "1");
    CHECK_THROWS_AS(closure::fw_reduce({{"x", 2}}), Error);
    CHECK_THROWS_AS(closure::fw_reduce({{"", 1}}), Error);
}

TEST_CASE("closure records are validated") {
    CHECK_NOTHROW(closure::validate_closure(genus2("d")));

    ClosureDescriptor bad = genus2("d");
    bad.genus = 1;
    bad.surface.genus = 1;
    bad.eta.vec = {0, 1};
    CHECK_THROWS_AS(closure::validate_closure(bad), Error);

    bad = genus2("d");
    bad.eta.vec = {0, 2, 0, 0};
    CHECK_THROWS_AS(closure::validate_closure(bad), Error);

    bad = genus2("d");
    bad.odd = true; // no marked point recorded
    CHECK_THROWS_AS(closure::validate_closure(bad), Error);

    CHECK(closure::closure_equal(genus2("d"), genus2("d")));
    CHECK_FALSE(closure::closure_equal(genus2("d"), genus2("e")));
    CHECK(closure::closure_hash(genus2("d")) != closure::closure_hash(genus3("d")));
}

TEST_CASE("gluing data carries the marking curve") {
    gen::Rng r(101);
    ClosureDescriptor d = gen::random_closure(r, "d", "K", 2);
    ClosureDescriptor dp = gen::random_closure(r, "dp", "K", 2);
    GluingData g = gen::random_gluing(r, d, dp, 5);
    CHECK_NOTHROW(closure::validate_gluing(g));
    CHECK(mcg::mat_apply(mcg::mat_mul(g.phi_minus, g.psi), d.eta.vec) == dp.eta.vec);
    CHECK(closure::gluing_phi(g) ==
          mcg::mat_mul(mcg::sp_inverse(g.phi_plus), g.phi_minus));

    CHECK(closure::is_identity_gluing(closure::identity_gluing(d)));
    CHECK(closure::is_identity_gluing(
        closure::compose_gluings(g, closure::inverse_gluing(g))));

    GluingData bad = g;
    bad.phi_plus.at(0, 0) += 1;
    CHECK_THROWS_AS(closure::validate_gluing(bad), Error);
    bad = g;
    bad.target.eta.vec = mcg::curve_a(dp.surface, 1).vec;
    CHECK_THROWS_AS(closure::validate_gluing(bad), Error);
}

TEST_CASE("cut data along the third handle") {
    ClosureDescriptor parent = genus3("p");
    CutData cd = standard_cut(parent);
    CHECK(cd.c2.vec == std::vector<Int>{0, 0, 0, 0, -1, 0});
    CHECK(cd.child_basis.size() == 4);

    ClosureDescriptor child = closure::cut_open(cd);
    CHECK(child.genus == 2);
    CHECK(child.complement_tag == parent.complement_tag);
    CHECK(child.eta.vec == std::vector<Int>{0, 0, 0, 1}); // the projected b_2

    // names do not matter, vectors do
    CutData renamed = cd;
    renamed.c1.name = "other";
    CHECK(closure::cut_equal(cd, renamed));
    CHECK(closure::cut_hash(cd) == closure::cut_hash(renamed));

    // genus-2 parents cannot be cut
    CHECK_THROWS_AS(closure::make_cut_data(genus2("q"), mcg::curve_a(genus2("q").surface, 2),
                                           mcg::curve_b(genus2("q").surface, 2)),
                    Error);
    // the marking must cross the cutting torus exactly once
    ClosureDescriptor off = gen::make_closure("o", "K", 3, {0, 1, 0, 0, 0, 0});
    CHECK_THROWS_AS(
        closure::make_cut_data(off, mcg::curve_a(off.surface, 3), mcg::curve_b(off.surface, 3)),
        Error);
}

TEST_CASE("same-genus comparison words carry their bookkeeping") {
    gen::Rng r(7);
    ClosureDescriptor d = gen::random_closure(r, "d", "K", 2);
    ClosureDescriptor dp = gen::random_closure(r, "dp", "K", 2);
    GluingData g = gen::random_gluing(r, d, dp, 6);
    MorphismWord w = closure::psi_same_genus(d, dp, g);

    REQUIRE(w.letters.size() == 3);
    CHECK(w.letters[0].kind == LetterKind::HandleMinus);
    CHECK(w.letters[1].kind == LetterKind::HandlePlus);
    CHECK(w.letters[2].kind == LetterKind::Theta);

    const auto& hm = std::get<closure::HandlePayload>(w.letters[0].payload);
    const auto& hp = std::get<closure::HandlePayload>(w.letters[1].payload);
    CHECK(hm.inverse_marked);
    CHECK_FALSE(hp.inverse_marked);
    CHECK(mcg::word_action(hm.word) == mcg::sp_inverse(g.psi));
    CHECK(mcg::word_action(hp.word) == mcg::mat_mul(closure::gluing_phi(g), g.psi));
    CHECK_NOTHROW(closure::validate_surgery(hm.surgery));
    CHECK_NOTHROW(closure::validate_surgery(hp.surgery));
    const auto& th = std::get<closure::ThetaPayload>(w.letters[2].payload);
    CHECK(th.action == mcg::mat_mul(g.phi_minus, g.psi));

    // the normal form is one segment letter holding the boundary maps
    MorphismWord nf = closure::normal_form(w);
    REQUIRE(nf.letters.size() == 1);
    REQUIRE(nf.letters[0].kind == LetterKind::Theta);
    const auto& seg = std::get<closure::ThetaPayload>(nf.letters[0].payload);
    CHECK(closure::fw_equal(seg.complement_map, g.complement_map));
    REQUIRE(seg.phi_plus.has_value());
    CHECK(*seg.phi_plus == g.phi_plus);
    CHECK(*seg.phi_minus == g.phi_minus);

    // positive-only handle words change the letters, not the normal form
    MorphismWord wp = closure::psi_same_genus(d, dp, g, true);
    for (std::size_t i = 0; i < 2; ++i)
        for (const auto& l : std::get<closure::HandlePayload>(wp.letters[i].payload).word.letters)
            CHECK(l.sign == 1);
    CHECK(closure::coherence_check(w, wp).ok);

    CHECK(closure::normal_form(closure::psi_same_genus(d, d, closure::identity_gluing(d)))
              .letters.empty());
}

TEST_CASE("inverses cancel to the identity word") {
    gen::Rng r(13);
    ClosureDescriptor d = gen::random_closure(r, "d", "K", 2);
    ClosureDescriptor dp = gen::random_closure(r, "dp", "K", 2);
    GluingData g = gen::random_gluing(r, d, dp, 5);
    MorphismWord w = closure::psi_same_genus(d, dp, g);

    closure::CoherenceReport rep =
        closure::coherence_check(closure::concat(w, closure::inverse(w)),
                                 closure::identity_word(d));
    CHECK(rep.ok);

    MorphismWord winv = closure::psi_same_genus(dp, d, closure::inverse_gluing(g));
    CHECK(closure::words_equal(closure::normal_form(closure::inverse(w)),
                               closure::normal_form(winv)));
}

TEST_CASE("normalization is idempotent") {
    gen::Rng r(17);
    for (int i = 0; i < 10; ++i) {
        ClosureDescriptor d = gen::random_closure(r, "d", "K", 2);
        ClosureDescriptor d1 = gen::random_closure(r, "d1", "K", 2);
        ClosureDescriptor d2 = gen::random_closure(r, "d2", "K", 2);
        GluingData g1 = gen::random_gluing(r, d, d1, 4);
        GluingData g2 = gen::random_gluing(r, d1, d2, 4);
        MorphismWord w = closure::concat(closure::psi_same_genus(d, d1, g1),
                                         closure::psi_same_genus(d1, d2, g2));
        w.letters.push_back(closure::make_xi(d2, "x", 1));
        MorphismWord nf = closure::normal_form(w);
        CHECK(closure::words_equal(closure::normal_form(nf), nf));
    }
}

TEST_CASE("composite gluings and composite words agree") {
    gen::Rng r(23);
    ClosureDescriptor d0 = gen::random_closure(r, "d0", "K", 2);
    ClosureDescriptor d1 = gen::random_closure(r, "d1", "K", 2);
    ClosureDescriptor d2 = gen::random_closure(r, "d2", "K", 2);
    GluingData g1 = gen::random_gluing(r, d0, d1, 4);
    GluingData g2 = gen::random_gluing(r, d1, d2, 4);

    MorphismWord w1 = closure::psi_same_genus(d0, d2, closure::compose_gluings(g1, g2));
    MorphismWord w2 = closure::concat(closure::psi_same_genus(d0, d1, g1),
                                      closure::psi_same_genus(d1, d2, g2));
    closure::CoherenceReport rep = closure::coherence_check(w1, w2);
    CHECK(rep.ok);
    CHECK(std::find(rep.rules_used.begin(), rep.rules_used.end(), "segment-composition") !=
          rep.rules_used.end());
}

TEST_CASE("the comparison word does not depend on the choice of psi") {
    gen::Rng r(29);
    for (int i = 0; i < 5; ++i) {
        ClosureDescriptor d = gen::random_closure(r, "d", "K", 2);
        ClosureDescriptor dp = gen::random_closure(r, "dp", "K", 2);
        GluingData g = gen::random_gluing(r, d, dp, 4);
        GluingData alt = gen::alternative_psi(r, g, 4);
        CHECK(alt.psi != g.psi);
        CHECK(closure::coherence_check(closure::psi_same_genus(d, dp, g),
                                       closure::psi_same_genus(d, dp, alt))
                  .ok);
    }
}

TEST_CASE("genus steps through explicit cut data") {
    ClosureDescriptor parent = genus3("p");
    CutData cd = standard_cut(parent);
    ClosureDescriptor child = closure::cut_open(cd);

    MorphismWord up = closure::psi_genus_step(child, parent, cd, closure::identity_gluing(child),
                                              closure::identity_gluing(parent));
    REQUIRE(up.letters.size() == 1); // identity legs are dropped
    CHECK(up.letters[0].kind == LetterKind::SpliceMerge);

    MorphismWord down = closure::psi_genus_step_down(
        parent, child, cd, closure::identity_gluing(parent), closure::identity_gluing(child));
    REQUIRE(down.letters.size() == 1);
    CHECK(down.letters[0].kind == LetterKind::SpliceSplit);

    closure::RewriteTrace trace;
    CHECK(closure::normal_form(closure::concat(up, down), &trace).letters.empty());
    CHECK(std::find(trace.rules.begin(), trace.rules.end(), "merge-split-cancel") !=
          trace.rules.end());
}

TEST_CASE("independence of the cut-ready auxiliary") {
    gen::Rng r(31);
    for (int i = 0; i < 5; ++i) {
        gen::GenusStepPair p = gen::random_genus_step_pair(r, "u" + std::to_string(i));
        CHECK_FALSE(closure::words_equal(p.first, p.second));
        CHECK(closure::coherence_check(p.first, p.second).ok);
    }
}

TEST_CASE("comparison letters cancel and commute to the tail") {
    ClosureDescriptor d = genus2("d");

    MorphismWord cancel{d, d, {closure::make_xi(d, "x", 1), closure::make_xi(d, "x", -1)}};
    closure::RewriteTrace t1;
    CHECK(closure::normal_form(cancel, &t1).letters.empty());
    CHECK(std::find(t1.rules.begin(), t1.rules.end(), "xi-cancel") != t1.rules.end());

    // same label, same exponent: nothing to cancel
    MorphismWord stay{d, d, {closure::make_xi(d, "x", 1), closure::make_xi(d, "x", 1)}};
    CHECK(closure::normal_form(stay).letters.size() == 2);

    IntMat id4 = IntMat::identity(4);
    MorphismWord commute{
        d, d, {closure::make_xi(d, "x", 1), closure::make_theta(d, d, FreeWord::gen("z"), id4)}};
    closure::RewriteTrace t2;
    MorphismWord nf = closure::normal_form(commute, &t2);
    REQUIRE(nf.letters.size() == 2);
    CHECK(nf.letters[0].kind == LetterKind::Theta);
    CHECK(nf.letters[1].kind == LetterKind::XiMerge);
    CHECK(std::find(t2.rules.begin(), t2.rules.end(), "xi-commute") != t2.rules.end());
}

TEST_CASE("unit letters are absorbed") {
    ClosureDescriptor d = genus2("d");
    MorphismWord w{d, d, {closure::make_unit(d, RingElem::integers(Int(-1)))}};
    closure::RewriteTrace trace;
    CHECK(closure::normal_form(w, &trace).letters.empty());
    CHECK(std::find(trace.rules.begin(), trace.rules.end(), "unit-absorption") !=
          trace.rules.end());
    CHECK_THROWS_AS(closure::make_unit(d, RingElem::integers(Int(2))), Error);
}

TEST_CASE("splices move past cut-preserving segments") {
    ClosureDescriptor parent = genus3("p");
    CutData cd = standard_cut(parent);
    ClosureDescriptor child = closure::cut_open(cd);
    IntMat id4 = IntMat::identity(4);
    IntMat id6 = IntMat::identity(6);

    MorphismWord w1{child,
                    parent,
                    {closure::make_theta(child, child, FreeWord::gen("z"), id4),
                     closure::make_splice_merge(cd)}};
    MorphismWord w2{child,
                    parent,
                    {closure::make_splice_merge(cd),
                     closure::make_theta(parent, parent, FreeWord::gen("z"), id6)}};
    closure::CoherenceReport rep = closure::coherence_check(w1, w2);
    CHECK(rep.ok);
    CHECK(std::find(rep.rules_used.begin(), rep.rules_used.end(), "splice-transport") !=
          rep.rules_used.end());
}

TEST_CASE("diffeomorphism tags act functorially") {
    gen::Rng r(37);
    ClosureDescriptor d = gen::random_closure(r, "d", "K", 2);
    ClosureDescriptor dp = gen::random_closure(r, "dp", "K", 2);
    GluingData g = gen::random_gluing(r, d, dp, 4);
    closure::DiffeoTag f = gen::random_diffeo(r, d.surface, 4, "f");

    CHECK(closure::closure_equal(closure::twist_closure(d, closure::identity_diffeo(d)), d));
    closure::DiffeoTag f2 = gen::random_diffeo(r, d.surface, 3, "h");
    CHECK(closure::compose_diffeos(f, f2).action == mcg::mat_mul(f2.action, f.action));

    MorphismWord w = closure::diffeo_map(f, d, dp, g);
    MorphismWord nf = closure::normal_form(w);
    REQUIRE(nf.letters.size() == 1);
    const auto& seg = std::get<closure::ThetaPayload>(nf.letters[0].payload);
    CHECK(closure::fw_equal(seg.complement_map, closure::fw_then(g.complement_map, f.word)));
    REQUIRE(seg.phi_plus.has_value());
    CHECK(*seg.phi_plus == g.phi_plus);
    CHECK(*seg.phi_minus == g.phi_minus);

    // endpoints must match the gluing
    CHECK_THROWS_AS(closure::diffeo_map(f, dp, d, g), Error);

    for (int i = 0; i < 5; ++i) {
        gen::FunctorLawPair p = gen::random_functor_pair(r, "v" + std::to_string(i));
        CHECK(closure::coherence_check(p.lhs, p.rhs).ok);
    }
}

TEST_CASE("odd closures compare the same way") {
    gen::Rng r(43);
    ClosureDescriptor d = gen::random_closure(r, "d", "K", 2, true);
    ClosureDescriptor dp = gen::random_closure(r, "dp", "K", 2, true);
    CHECK(d.odd);
    REQUIRE(d.surface.marked_point.has_value());
    GluingData g = gen::random_gluing(r, d, dp, 4);
    MorphismWord w = closure::psi_same_genus(d, dp, g);
    CHECK(closure::coherence_check(closure::concat(w, closure::inverse(w)),
                                   closure::identity_word(d))
              .ok);
}

TEST_CASE("every path through a potential pool gives one normal form") {
    gen::Rng r(47);
    gen::ClosurePool pool = gen::random_pool(r, 2, 1, "pp");
    const std::size_t n = pool.nodes.size();
    REQUIRE(n == 3);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) continue;
            MorphismWord direct =
                closure::psi_general(pool.nodes[u], pool.nodes[v], {pool.edge(u, v).step});
            for (std::size_t m = 0; m < n; ++m) {
                if (m == u || m == v) continue;
                MorphismWord via = closure::psi_general(
                    pool.nodes[u], pool.nodes[v],
                    {pool.edge(u, m).step, pool.edge(m, v).step});
                CHECK(closure::coherence_check(direct, via).ok);
            }
        }
}

TEST_CASE("one rewrite step always lowers the termination measure") {
    gen::Rng r(53);
    gen::LetterPool pool = gen::confluence_pool(r);

    // enumerate endpoint-chained words over the pool alphabet
    std::vector<MorphismWord> stack;
    for (const ClosureDescriptor& c : pool.closures)
        stack.push_back(closure::identity_word(c));
    std::size_t checked = 0;
    while (!stack.empty()) {
        MorphismWord w = std::move(stack.back());
        stack.pop_back();
        if (!w.letters.empty()) {
            std::array<long, 4> before = measure(w);
            for (const MorphismWord& c : closure::rewrite_candidates(w)) {
                CHECK(measure(c) < before);
                ++checked;
            }
        }
        if (w.letters.size() == 3) continue;
        for (const closure::ElementaryMorphism& l : pool.letters) {
            if (!closure::closure_equal(l.source, w.target)) continue;
            MorphismWord next = w;
            next.letters.push_back(l);
            next.target = l.target;
            stack.push_back(std::move(next));
        }
    }
    CHECK(checked > 100); // the sweep actually exercised rules
}

TEST_CASE("words must chain") {
    ClosureDescriptor d = genus2("d");
    ClosureDescriptor e = genus2("e");
    MorphismWord bad{d, e, {closure::make_xi(d, "x", 1)}};
    CHECK_THROWS_AS(closure::validate_word(bad), Error);
    MorphismWord gap{
        d, e, {closure::make_xi(d, "x", 1), closure::make_xi(e, "y", 1)}};
    CHECK_THROWS_AS(closure::validate_word(gap), Error);
    CHECK_THROWS_AS(closure::coherence_check(closure::identity_word(d),
                                             closure::identity_word(e)),
                    Error);
}
