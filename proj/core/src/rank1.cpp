#include "ptsys/rank1.hpp"

#include <sstream>

namespace ptsys::rank1 {

namespace {

RingElem lookup(const std::map<std::string, RingElem>& m, const std::string& key,
                RingKind kind) {
    auto it = m.find(key);
    return it == m.end() ? ring_one(kind) : it->second;
}

RingElem lookup(const std::map<std::uint64_t, RingElem>& m, std::uint64_t key,
                RingKind kind) {
    auto it = m.find(key);
    return it == m.end() ? ring_one(kind) : it->second;
}

void check_unit(const RingElem& v, const RingSpec& spec, const char* what) {
    if (v.kind() != spec.kind)
        throw Error(ErrorKind::validation,
                    std::string(what) + " value lives in the wrong ring");
    if (!ring_is_unit(v))
        throw Error(ErrorKind::validation, std::string(what) + " value is not a unit");
    ring_unit_inverse(v); // rejects units without an exact inverse
}

RingElem word_value(const RankOneAssignment& a, const closure::FreeWord& w) {
    RingElem out = ring_one(a.ring.kind);
    for (const auto& l : w.letters) {
        RingElem v = lookup(a.label_unit, l.label, a.ring.kind);
        if (l.exp == -1) v = ring_unit_inverse(v);
        out = ring_mul(out, v);
    }
    return out;
}

} // namespace

void validate_rank_one(const RankOneAssignment& a) {
    validate_ring_spec(a.ring);
    for (const auto& [k, v] : a.closure_unit) check_unit(v, a.ring, "closure unit");
    for (const auto& [k, v] : a.label_unit) check_unit(v, a.ring, "label unit");
    for (const auto& [k, v] : a.splice_unit) check_unit(v, a.ring, "splice unit");
    for (const auto& [k, v] : a.handle_unit) {
        check_unit(v, a.ring, "handle unit");
        if (!ring_is_one(ring_mul(v, v)))
            throw Error(ErrorKind::validation, "handle unit must square to 1");
    }
}

std::uint64_t handle_hash(const mcg::TwistWord& w) {
    std::ostringstream os;
    for (const auto& l : w.letters) {
        for (const Int& x : l.curve.vec) os << x << ',';
        os << ';' << l.sign << '|';
    }
    return fnv1a(os.str());
}

std::string splice_key(const closure::CutData& cd) {
    return std::to_string(cd.parent.genus);
}

RingElem letter_value(const RankOneAssignment& a, const closure::ElementaryMorphism& l) {
    const RingKind k = a.ring.kind;
    RingElem chi_t = lookup(a.closure_unit, l.target.id, k);
    RingElem chi_s_inv = ring_unit_inverse(lookup(a.closure_unit, l.source.id, k));
    switch (l.kind) {
        case closure::LetterKind::HandleMinus:
        case closure::LetterKind::HandlePlus: {
            const auto& p = std::get<closure::HandlePayload>(l.payload);
            RingElem rho = lookup(a.handle_unit, handle_hash(p.word), k);
            if (p.inverse_marked) rho = ring_unit_inverse(rho);
            return ring_mul(chi_t, ring_mul(rho, chi_s_inv));
        }
        case closure::LetterKind::Theta: {
            const auto& p = std::get<closure::ThetaPayload>(l.payload);
            return ring_mul(chi_t, ring_mul(word_value(a, p.complement_map), chi_s_inv));
        }
        case closure::LetterKind::SpliceMerge: {
            const auto& p = std::get<closure::SplicePayload>(l.payload);
            RingElem tau = lookup(a.splice_unit, splice_key(p.cut), k);
            return ring_mul(chi_t, ring_mul(tau, chi_s_inv));
        }
        case closure::LetterKind::SpliceSplit: {
            const auto& p = std::get<closure::SplicePayload>(l.payload);
            RingElem tau = ring_unit_inverse(lookup(a.splice_unit, splice_key(p.cut), k));
            return ring_mul(chi_t, ring_mul(tau, chi_s_inv));
        }
        case closure::LetterKind::XiMerge: {
            const auto& p = std::get<closure::XiPayload>(l.payload);
            RingElem v = lookup(a.label_unit, p.label, k);
            return p.exp == -1 ? ring_unit_inverse(v) : v;
        }
        case closure::LetterKind::UnitScalar:
            return std::get<closure::UnitPayload>(l.payload).value;
    }
    throw Error(ErrorKind::internal, "bad letter kind");
}

RingElem evaluate_rank_one(const RankOneAssignment& a, const closure::MorphismWord& w) {
    validate_rank_one(a);
    closure::validate_word(w);
    RingElem out = ring_one(a.ring.kind);
    for (const auto& l : w.letters) {
        RingElem v = letter_value(a, l);
        if (v.kind() != a.ring.kind)
            throw Error(ErrorKind::validation, "letter value lives in the wrong ring");
        out = ring_mul(out, v);
    }
    return out;
}

} // namespace ptsys::rank1
