#pragma once

#include "ptsys/mcg.hpp"
#include "ptsys/numeric.hpp"

#include <optional>
#include <vector>

namespace ptsys::closure {

// One framed curve at an exact rational height in the product region
// R x (-3/4, 3/4). Framing -1 realizes a positive twist; a +1 framed entry
// undoes one and must be cancelled by a -1 partner just above it.
struct SurgeryEntry {
    mcg::CurveClass curve;
    Rat height = 0;
    int framing = -1;
    std::optional<Rat> cancelling_partner; // height of the paired -1 entry
};

struct SurgeryPresentation {
    std::vector<SurgeryEntry> entries; // strictly descending heights
};

// Framed-curve list for a twist word, heights equally spaced in (1/4, 3/4).
// A word with one positive letter yields a single -1 entry at height 1/2.
SurgeryPresentation build_surgery(const mcg::TwistWord& w);

// Two-band variant used by the handle letters of a same-genus comparison
// word: the a part occupies (1/4, 3/4), the b part (-3/4, -1/4).
SurgeryPresentation build_surgery_two_part(const mcg::TwistWord& a_part,
                                           const mcg::TwistWord& b_part);

// Checks height range and ordering, framing values, and that every +1 entry
// is immediately preceded by its cancelling -1 partner on the same curve.
void validate_surgery(const SurgeryPresentation& p);

} // namespace ptsys::closure
