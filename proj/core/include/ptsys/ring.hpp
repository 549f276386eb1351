#pragma once

#include "ptsys/novikov.hpp"
#include "ptsys/numeric.hpp"

#include <optional>
#include <string>
#include <variant>

namespace ptsys {

enum class RingKind { Integers, IntegersMod2, RationalField, NovikovOverIntegers };
enum class UnitGroup { Trivial, Signs, FullUnits };

std::string to_string(RingKind k);
std::string to_string(UnitGroup g);
RingKind ring_kind_from_string(const std::string& s);
UnitGroup unit_group_from_string(const std::string& s);

struct RingSpec {
    RingKind kind = RingKind::Integers;
    UnitGroup unit_group = UnitGroup::Signs;

    bool operator==(const RingSpec& o) const = default;
};

// Tagged exact ring element. The tag is carried alongside the payload so
// mixed-ring arithmetic fails loudly instead of coercing.
class RingElem {
public:
    RingElem() : kind_(RingKind::Integers), v_(Int(0)) {}
    static RingElem integers(Int v) { return RingElem(RingKind::Integers, std::move(v)); }
    static RingElem mod2(int v);
    static RingElem rationals(Rat v) { return RingElem(RingKind::RationalField, std::move(v)); }
    static RingElem novikov(novikov::NovikovElement v) {
        return RingElem(RingKind::NovikovOverIntegers, std::move(v));
    }

    RingKind kind() const { return kind_; }
    const Int& as_int() const { return std::get<Int>(v_); }
    int as_mod2() const { return std::get<int>(v_); }
    const Rat& as_rat() const { return std::get<Rat>(v_); }
    const novikov::NovikovElement& as_novikov() const {
        return std::get<novikov::NovikovElement>(v_);
    }

    bool operator==(const RingElem& o) const { return kind_ == o.kind_ && v_ == o.v_; }
    bool operator!=(const RingElem& o) const { return !(*this == o); }

private:
    template <class T>
    RingElem(RingKind k, T v) : kind_(k), v_(std::move(v)) {}

    RingKind kind_;
    std::variant<Int, int, Rat, novikov::NovikovElement> v_;
};

RingElem ring_zero(RingKind k);
RingElem ring_one(RingKind k);
RingElem ring_from_int(RingKind k, const Int& n); // the canonical map Z -> R

RingElem ring_add(const RingElem& a, const RingElem& b);
RingElem ring_neg(const RingElem& a);
RingElem ring_sub(const RingElem& a, const RingElem& b);
RingElem ring_mul(const RingElem& a, const RingElem& b);

bool ring_is_zero(const RingElem& a);
bool ring_is_one(const RingElem& a);

// Membership in the full unit group R^x of the ring (for the Novikov ring:
// units of the completed ring, i.e. leading coefficient +-1).
bool ring_is_unit(const RingElem& a);

// Decides whether a/b lies in the given unit subgroup, both a, b nonzero.
// This is the per-pivot step of the cross-multiplication equivalence test.
bool ring_ratio_in_group(const RingElem& a, const RingElem& b, UnitGroup g);

// Exact quotient a/b inside the ring, or nullopt when the quotient does not
// exist with finite support (Novikov) or is not integral (integers).
std::optional<RingElem> ring_divide_exact(const RingElem& a, const RingElem& b);

// Exact inverse of a unit. Over the Novikov-type ring only monomial units
// have finitely supported inverses; anything else is rejected.
RingElem ring_unit_inverse(const RingElem& a);

std::string ring_to_string(const RingElem& a);
RingElem ring_parse(RingKind k, const std::string& text);

// Rejects meaningless spec combinations (everything is currently valid by
// the subgroup chain Trivial <= Signs <= FullUnits; kept as a choke point).
void validate_ring_spec(const RingSpec& spec);

} // namespace ptsys
