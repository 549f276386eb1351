#pragma once

#include "ptsys/mcg.hpp"
#include "ptsys/ring.hpp"
#include "ptsys/surgery.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ptsys::closure {

// ---------------------------------------------------------------------------
// Words in the free groupoid of complement-tag identifications. Letters apply
// left to right and carry exponents +-1; words are kept freely reduced.

struct FreeLetter {
    std::string label;
    int exp = 1;

    bool operator==(const FreeLetter& o) const = default;
};

struct FreeWord {
    std::vector<FreeLetter> letters;

    static FreeWord gen(const std::string& label, int exp = 1);
};

FreeWord fw_reduce(std::vector<FreeLetter> letters);
FreeWord fw_then(const FreeWord& first, const FreeWord& second);
FreeWord fw_inverse(const FreeWord& w);
bool fw_equal(const FreeWord& x, const FreeWord& y);
bool fw_is_identity(const FreeWord& w);
std::string fw_to_string(const FreeWord& w);

// ---------------------------------------------------------------------------
// Closures and gluing data.

// Combinatorial record of a marked closure: an opaque complement tag, the
// distinguished genus >= 2 surface, and the marking curve eta on it. Odd
// records carry a marked point on the surface.
struct ClosureDescriptor {
    std::string id;
    int genus = 2;
    std::string complement_tag;
    mcg::SurfaceModel surface;
    mcg::CurveClass eta;
    bool odd = false;
};

void validate_closure(const ClosureDescriptor& d);
bool closure_equal(const ClosureDescriptor& x, const ClosureDescriptor& y);
std::uint64_t closure_hash(const ClosureDescriptor& d);

// Identification data between two closures of the same record: a tag-level
// complement word plus the three homology matrices. The comparison matrix
// phi^C = (phi_plus)^{-1} phi_minus is always derived, never stored.
struct GluingData {
    ClosureDescriptor source;
    ClosureDescriptor target;
    FreeWord complement_map;
    mcg::IntMat phi_minus;
    mcg::IntMat phi_plus;
    mcg::IntMat psi;
};

mcg::IntMat gluing_phi(const GluingData& g);
void validate_gluing(const GluingData& g);
bool is_identity_gluing(const GluingData& g);
GluingData identity_gluing(const ClosureDescriptor& d);
// psi is filled canonically so that (phi_minus psi)(eta_src) = eta_tgt.
GluingData make_gluing(const ClosureDescriptor& src, const ClosureDescriptor& tgt,
                       const FreeWord& complement_map, const mcg::IntMat& phi_plus,
                       const mcg::IntMat& phi_minus);
GluingData inverse_gluing(const GluingData& g);
GluingData compose_gluings(const GluingData& first, const GluingData& second);

// ---------------------------------------------------------------------------
// Cut data: two opposite tori in a genus g+1 closure along which it opens to
// a genus g closure. delta is a fixed dual of c1 and child_basis a symplectic
// basis of the complement of span(c1, delta), stored column-wise.

struct CutData {
    ClosureDescriptor parent;
    mcg::CurveClass c1;
    mcg::CurveClass c2;
    mcg::CurveClass delta;
    std::vector<std::vector<Int>> child_basis;
};

// Canonical basis via symplectic completion through the pair (c1, delta).
CutData make_cut_data(const ClosureDescriptor& parent, const mcg::CurveClass& c1,
                      const mcg::CurveClass& delta);
void validate_cut(const CutData& cd);
bool cut_equal(const CutData& x, const CutData& y);
std::uint64_t cut_hash(const CutData& cd);

// The genus g closure the cut opens onto: same complement tag, eta induced by
// the symplectic projection expressed in child_basis coordinates.
ClosureDescriptor cut_open(const CutData& cd);

// ---------------------------------------------------------------------------
// Elementary morphism letters and words.

enum class LetterKind {
    HandleMinus,  // 2-handle family undoing the b-part twists, enters inverted
    HandlePlus,   // 2-handle family realizing the a-part twists
    Theta,        // identity-of-module bookkeeping letter
    SpliceMerge,  // child -> parent along a cut, raises genus by 1
    SpliceSplit,  // parent -> child along a cut
    XiMerge,      // comparison letter between merge flavors
    UnitScalar    // central unit, absorbed by normalization
};

std::string to_string(LetterKind k);

struct HandlePayload {
    mcg::TwistWord word;
    SurgeryPresentation surgery;
    bool inverse_marked = false;
};

struct ThetaPayload {
    FreeWord complement_map;
    mcg::IntMat action; // homology action source -> target
    // Present on canonical segment letters; recovered from the adjacent
    // handle letters otherwise.
    std::optional<mcg::IntMat> phi_plus;
    std::optional<mcg::IntMat> phi_minus;
};

struct SplicePayload {
    CutData cut;
};

struct XiPayload {
    std::string label;
    int exp = 1;
};

struct UnitPayload {
    RingElem value;
};

struct ElementaryMorphism {
    LetterKind kind = LetterKind::Theta;
    ClosureDescriptor source;
    ClosureDescriptor target;
    std::variant<HandlePayload, ThetaPayload, SplicePayload, XiPayload, UnitPayload> payload;
};

ElementaryMorphism make_theta(const ClosureDescriptor& src, const ClosureDescriptor& tgt,
                              const FreeWord& complement_map, const mcg::IntMat& action);
ElementaryMorphism make_splice_merge(const CutData& cd);
ElementaryMorphism make_splice_split(const CutData& cd);
ElementaryMorphism make_xi(const ClosureDescriptor& at, const std::string& label, int exp);
ElementaryMorphism make_unit(const ClosureDescriptor& at, const RingElem& value);

// Letters apply left to right; endpoints of consecutive letters must chain.
struct MorphismWord {
    ClosureDescriptor source;
    ClosureDescriptor target;
    std::vector<ElementaryMorphism> letters;
};

MorphismWord identity_word(const ClosureDescriptor& d);
void validate_word(const MorphismWord& w);
MorphismWord concat(const MorphismWord& first, const MorphismWord& second);
// Formal inverse; handle triples collapse to canonical segment letters.
MorphismWord inverse(const MorphismWord& w);

// ---------------------------------------------------------------------------
// Comparison-morphism constructors.

// Every negative twist is replaced by eleven positive ones with the same
// homology action.
mcg::TwistWord eliminate_negative_twists(const mcg::TwistWord& w);

// Same-genus comparison word: handle letters for the factored twist words of
// phi^C psi (a part) and psi^{-1} (b part), then the Theta letter carrying
// (complement_map, phi_minus psi). The factorization mode only changes the
// handle words, never the normal form.
MorphismWord psi_same_genus(const ClosureDescriptor& d, const ClosureDescriptor& dp,
                            const GluingData& g, bool positive_twists = false);

// Genus step through a cut-ready auxiliary: same-genus leg to the cut-open
// child, the splice letter, same-genus leg from the parent. Identity legs on
// matching endpoints are omitted.
MorphismWord psi_genus_step(const ClosureDescriptor& dg, const ClosureDescriptor& dg1,
                            const CutData& cd, const GluingData& leg1, const GluingData& leg2);
MorphismWord psi_genus_step_down(const ClosureDescriptor& dg1, const ClosureDescriptor& dg,
                                 const CutData& cd, const GluingData& leg1,
                                 const GluingData& leg2);

struct PathStep {
    enum class Kind { Same, Up, Down };
    Kind kind = Kind::Same;
    ClosureDescriptor target;
    std::optional<GluingData> gluing;     // Same
    std::optional<CutData> cut;           // Up / Down
    std::optional<GluingData> leg1, leg2; // Up / Down
};

MorphismWord psi_general(const ClosureDescriptor& d, const ClosureDescriptor& dp,
                         const std::vector<PathStep>& path);

// Label-level diffeomorphism of the complement with its induced action on
// the distinguished surface. Tags compose as free words.
struct DiffeoTag {
    FreeWord word;
    mcg::IntMat action;
};

DiffeoTag identity_diffeo(const ClosureDescriptor& d);
DiffeoTag compose_diffeos(const DiffeoTag& first, const DiffeoTag& second);
// D twisted by f: same tag and surface, eta pulled back through the action.
ClosureDescriptor twist_closure(const ClosureDescriptor& d, const DiffeoTag& f);
// Functor-of-diffeomorphism word: the comparison word to the twisted target
// followed by the recomposition Theta letter. g glues d to dp.
MorphismWord diffeo_map(const DiffeoTag& f, const ClosureDescriptor& d,
                        const ClosureDescriptor& dp, const GluingData& g);

// ---------------------------------------------------------------------------
// Rewriting.

// Rule labels, in the order they are attempted:
//   identity-segment      identity-data segment letters drop
//   segment-composition   adjacent same-genus letters merge
//   merge-split-cancel    splice letters along equal cuts cancel
//   xi-cancel             inverse comparison letters cancel
//   splice-transport      splice letters move past cut-preserving segments
//   xi-commute            comparison letters move to the tail
//   unit-absorption       central units drop
struct RewriteTrace {
    std::vector<std::string> rules;
};

MorphismWord normal_form(const MorphismWord& w, RewriteTrace* trace = nullptr);

// Every word reachable from w by one rule application at any position.
// Used for the local-confluence check.
std::vector<MorphismWord> rewrite_candidates(const MorphismWord& w);

// Letter equality at the bookkeeping level: Theta letters compare by
// (complement word, homology action), splice letters by their cut data.
bool letters_equal(const ElementaryMorphism& x, const ElementaryMorphism& y);
bool words_equal(const MorphismWord& x, const MorphismWord& y);

struct CoherenceReport {
    bool ok = false;
    MorphismWord nf1, nf2;
    std::vector<std::string> rules_used;
    std::string detail;
};

// Endpoint-checked equality of normal forms, unit letters ignored.
CoherenceReport coherence_check(const MorphismWord& w1, const MorphismWord& w2);

} // namespace ptsys::closure
