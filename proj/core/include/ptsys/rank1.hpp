#pragma once

#include "ptsys/closure.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace ptsys::rank1 {

// Rank-one coefficient data: one unit of the base ring per bookkeeping
// degree of freedom. Keys that are not listed default to 1, so the closure
// units act as a coboundary and cancel along any composable word; the letter
// values below are invariant under every rewrite rule except that handle
// letters may shed signs, which is why comparisons happen inside the
// declared unit group.
struct RankOneAssignment {
    RingSpec ring;
    std::map<std::string, RingElem> closure_unit;   // keyed by closure id
    std::map<std::string, RingElem> label_unit;     // complement and comparison labels
    std::map<std::uint64_t, RingElem> handle_unit;  // keyed by twist-word hash; +-1 only
    std::map<std::string, RingElem> splice_unit;    // keyed by parent genus
};

// Every stored value must be a unit of the stated ring with an exact inverse
// (monomial over the series ring); handle units must square to 1.
void validate_rank_one(const RankOneAssignment& a);

std::uint64_t handle_hash(const mcg::TwistWord& w);
std::string splice_key(const closure::CutData& cd);

RingElem letter_value(const RankOneAssignment& a, const closure::ElementaryMorphism& l);
RingElem evaluate_rank_one(const RankOneAssignment& a, const closure::MorphismWord& w);

} // namespace ptsys::rank1
