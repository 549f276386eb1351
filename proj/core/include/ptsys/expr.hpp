#pragma once

#include "ptsys/novikov.hpp"
#include "ptsys/ring.hpp"

#include <optional>
#include <string>

namespace ptsys::expr {

// Arithmetic over a fixed coefficient ring.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | base ('^' exponent)?
//   base   := integer | 't' | 'inv' '(' expr ')' | '(' expr ')'
//
// Exponents are integers, or rationals in parentheses on the series symbol t.
// Over the series ring every division and inv() is computed by truncated
// geometric expansion at the given cutoff and the final value is truncated
// there too, so reports stay finite. Over the exact rings '/' demands exact
// divisibility and inv() a unit. Parse errors carry the offending position.
struct EvalOptions {
    RingSpec ring;
    Rat cutoff = Rat(50); // series precision; ignored by the exact rings
};

struct EvalResult {
    RingElem value;
    std::optional<Rat> cutoff; // set when the value lives in the series ring
};

EvalResult evaluate(const std::string& text, const EvalOptions& opt);

} // namespace ptsys::expr
