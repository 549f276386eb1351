#include "ptsys/ring.hpp"

namespace ptsys {

std::string to_string(RingKind k) {
    switch (k) {
        case RingKind::Integers: return "integers";
        case RingKind::IntegersMod2: return "integers_mod_2";
        case RingKind::RationalField: return "rationals";
        case RingKind::NovikovOverIntegers: return "novikov";
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

std::string to_string(UnitGroup g) {
    switch (g) {
        case UnitGroup::Trivial: return "trivial";
        case UnitGroup::Signs: return "signs";
        case UnitGroup::FullUnits: return "full_units";
    }
    throw Error(ErrorKind::internal, "bad unit group");
}

RingKind ring_kind_from_string(const std::string& s) {
    if (s == "integers") return RingKind::Integers;
    if (s == "integers_mod_2") return RingKind::IntegersMod2;
    if (s == "rationals") return RingKind::RationalField;
    if (s == "novikov") return RingKind::NovikovOverIntegers;
    throw Error(ErrorKind::parse, "unknown ring '" + s + "'");
}

UnitGroup unit_group_from_string(const std::string& s) {
    if (s == "trivial") return UnitGroup::Trivial;
    if (s == "signs") return UnitGroup::Signs;
    if (s == "full_units") return UnitGroup::FullUnits;
    throw Error(ErrorKind::parse, "unknown unit group '" + s + "'");
}

RingElem RingElem::mod2(int v) {
    RingElem e;
    e.kind_ = RingKind::IntegersMod2;
    e.v_ = ((v % 2) + 2) % 2;
    return e;
}

RingElem ring_zero(RingKind k) { return ring_from_int(k, Int(0)); }
RingElem ring_one(RingKind k) { return ring_from_int(k, Int(1)); }

RingElem ring_from_int(RingKind k, const Int& n) {
    switch (k) {
        case RingKind::Integers: return RingElem::integers(n);
        case RingKind::IntegersMod2: return RingElem::mod2(static_cast<int>(n % 2));
        case RingKind::RationalField: return RingElem::rationals(Rat(n));
        case RingKind::NovikovOverIntegers:
            return RingElem::novikov(novikov::NovikovElement(n));
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

static void check_same(const RingElem& a, const RingElem& b) {
    if (a.kind() != b.kind())
        throw Error(ErrorKind::precondition, "ring mismatch: " + to_string(a.kind()) +
                                                 " vs " + to_string(b.kind()));
}

RingElem ring_add(const RingElem& a, const RingElem& b) {
    check_same(a, b);
    switch (a.kind()) {
        case RingKind::Integers: return RingElem::integers(a.as_int() + b.as_int());
        case RingKind::IntegersMod2: return RingElem::mod2(a.as_mod2() ^ b.as_mod2());
        case RingKind::RationalField: return RingElem::rationals(a.as_rat() + b.as_rat());
        case RingKind::NovikovOverIntegers:
            return RingElem::novikov(novikov::add(a.as_novikov(), b.as_novikov()));
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

RingElem ring_neg(const RingElem& a) {
    switch (a.kind()) {
        case RingKind::Integers: return RingElem::integers(-a.as_int());
        case RingKind::IntegersMod2: return a;
        case RingKind::RationalField: return RingElem::rationals(-a.as_rat());
        case RingKind::NovikovOverIntegers:
            return RingElem::novikov(novikov::neg(a.as_novikov()));
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

RingElem ring_sub(const RingElem& a, const RingElem& b) { return ring_add(a, ring_neg(b)); }

RingElem ring_mul(const RingElem& a, const RingElem& b) {
    check_same(a, b);
    switch (a.kind()) {
        case RingKind::Integers: return RingElem::integers(a.as_int() * b.as_int());
        case RingKind::IntegersMod2: return RingElem::mod2(a.as_mod2() & b.as_mod2());
        case RingKind::RationalField: return RingElem::rationals(a.as_rat() * b.as_rat());
        case RingKind::NovikovOverIntegers:
            return RingElem::novikov(novikov::mul(a.as_novikov(), b.as_novikov()));
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

bool ring_is_zero(const RingElem& a) {
    switch (a.kind()) {
        case RingKind::Integers: return a.as_int() == 0;
        case RingKind::IntegersMod2: return a.as_mod2() == 0;
        case RingKind::RationalField: return a.as_rat() == 0;
        case RingKind::NovikovOverIntegers: return a.as_novikov().is_zero();
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

bool ring_is_one(const RingElem& a) { return a == ring_one(a.kind()); }

bool ring_is_unit(const RingElem& a) {
    switch (a.kind()) {
        case RingKind::Integers: return a.as_int() == 1 || a.as_int() == -1;
        case RingKind::IntegersMod2: return a.as_mod2() == 1;
        case RingKind::RationalField: return a.as_rat() != 0;
        case RingKind::NovikovOverIntegers: return novikov::is_unit(a.as_novikov());
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

bool ring_ratio_in_group(const RingElem& a, const RingElem& b, UnitGroup g) {
    check_same(a, b);
    if (ring_is_zero(a) || ring_is_zero(b))
        throw Error(ErrorKind::precondition, "ratio test needs nonzero pivots");
    switch (g) {
        case UnitGroup::Trivial:
            return a == b;
        case UnitGroup::Signs:
            return a == b || a == ring_neg(b);
        case UnitGroup::FullUnits:
            switch (a.kind()) {
                case RingKind::Integers: return a == b || a == ring_neg(b);
                case RingKind::IntegersMod2: return true; // both nonzero, hence 1
                case RingKind::RationalField: return true;
                case RingKind::NovikovOverIntegers:
                    return novikov::ratio_is_unit(a.as_novikov(), b.as_novikov());
            }
    }
    throw Error(ErrorKind::internal, "bad unit group");
}

std::optional<RingElem> ring_divide_exact(const RingElem& a, const RingElem& b) {
    check_same(a, b);
    if (ring_is_zero(b)) throw Error(ErrorKind::precondition, "division by zero");
    switch (a.kind()) {
        case RingKind::Integers:
            if (a.as_int() % b.as_int() != 0) return std::nullopt;
            return RingElem::integers(a.as_int() / b.as_int());
        case RingKind::IntegersMod2:
            return a; // b is 1
        case RingKind::RationalField:
            return RingElem::rationals(a.as_rat() / b.as_rat());
        case RingKind::NovikovOverIntegers: {
            auto q = novikov::divide_exact(a.as_novikov(), b.as_novikov());
            if (!q) return std::nullopt;
            return RingElem::novikov(*q);
        }
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

RingElem ring_unit_inverse(const RingElem& a) {
    if (!ring_is_unit(a)) throw Error(ErrorKind::precondition, "inverse of a non-unit");
    switch (a.kind()) {
        case RingKind::Integers:
        case RingKind::IntegersMod2:
            return a; // +-1 and 1 are self-inverse
        case RingKind::RationalField:
            return RingElem::rationals(Rat(1) / a.as_rat());
        case RingKind::NovikovOverIntegers: {
            const auto& terms = a.as_novikov().terms();
            if (terms.size() != 1)
                throw Error(ErrorKind::validation,
                            "unit inverse is not finitely supported; use a monomial unit");
            return RingElem::novikov(
                novikov::NovikovElement(-terms[0].first, terms[0].second));
        }
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

std::string ring_to_string(const RingElem& a) {
    switch (a.kind()) {
        case RingKind::Integers: return a.as_int().str();
        case RingKind::IntegersMod2: return a.as_mod2() ? "1" : "0";
        case RingKind::RationalField: return rat_to_string(a.as_rat());
        case RingKind::NovikovOverIntegers: return novikov::to_string(a.as_novikov());
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

RingElem ring_parse(RingKind k, const std::string& text) {
    try {
        switch (k) {
            case RingKind::Integers: return RingElem::integers(Int(text));
            case RingKind::IntegersMod2: {
                Int v(text);
                return RingElem::mod2(static_cast<int>(((v % 2) + 2) % 2));
            }
            case RingKind::RationalField: return RingElem::rationals(rat_from_string(text));
            case RingKind::NovikovOverIntegers: return RingElem::novikov(novikov::parse(text));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrorKind::parse, "bad " + to_string(k) + " literal '" + text + "'");
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

void validate_ring_spec(const RingSpec&) {
    // Trivial <= Signs <= FullUnits holds in every supported ring (over the
    // integers Signs and FullUnits coincide), so every combination is legal.
}

} // namespace ptsys
