#include "ptsys/surgery.hpp"

namespace ptsys::closure {

namespace {

// Letters of one band at t_i = top - (i+1) * step, i in [0, n). Negative
// letters add the +1 framed entry at t_i plus a cancelling -1 entry halfway
// up to the previous listed height.
void emit_band(std::vector<SurgeryEntry>& out, const mcg::TwistWord& w, const Rat& top) {
    const std::size_t n = w.letters.size();
    if (n == 0) return;
    const Rat step = Rat(1) / Rat(2 * (static_cast<long>(n) + 1));
    Rat prev = top;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& l = w.letters[i];
        Rat t = top - Rat(static_cast<long>(i) + 1) * step;
        if (l.sign == 1) {
            out.push_back({l.curve, t, -1, {}});
        } else {
            Rat partner = (t + prev) / 2;
            out.push_back({l.curve, partner, -1, {}});
            out.push_back({l.curve, t, 1, partner});
        }
        prev = t;
    }
}

} // namespace

SurgeryPresentation build_surgery(const mcg::TwistWord& w) {
    SurgeryPresentation p;
    emit_band(p.entries, w, Rat(3) / 4);
    validate_surgery(p);
    return p;
}

SurgeryPresentation build_surgery_two_part(const mcg::TwistWord& a_part,
                                           const mcg::TwistWord& b_part) {
    if (!a_part.letters.empty() && !b_part.letters.empty() &&
        !(a_part.surface == b_part.surface))
        throw Error(ErrorKind::precondition, "surgery bands live on different surfaces");
    SurgeryPresentation p;
    emit_band(p.entries, a_part, Rat(3) / 4);
    emit_band(p.entries, b_part, Rat(-1) / 4);
    validate_surgery(p);
    return p;
}

void validate_surgery(const SurgeryPresentation& p) {
    const Rat lo = Rat(-3) / 4;
    const Rat hi = Rat(3) / 4;
    const SurgeryEntry* prev = nullptr;
    for (std::size_t i = 0; i < p.entries.size(); ++i) {
        const SurgeryEntry& e = p.entries[i];
        if (e.height <= lo || e.height >= hi)
            throw Error(ErrorKind::validation,
                        "surgery height " + rat_to_string(e.height) + " outside (-3/4, 3/4)");
        if (e.framing != 1 && e.framing != -1)
            throw Error(ErrorKind::validation, "surgery framing must be +1 or -1");
        if (prev && !(e.height < prev->height))
            throw Error(ErrorKind::validation, "surgery heights are not strictly descending");
        if (e.framing == 1) {
            if (!e.cancelling_partner)
                throw Error(ErrorKind::validation,
                            "+1 framed entry without a cancelling partner");
            if (!prev || prev->framing != -1 || prev->height != *e.cancelling_partner ||
                prev->curve.vec != e.curve.vec)
                throw Error(ErrorKind::validation,
                            "cancelling partner must sit immediately above on the same curve");
        } else if (e.cancelling_partner) {
            throw Error(ErrorKind::validation, "-1 framed entry carries a partner height");
        }
        prev = &e;
    }
}

} // namespace ptsys::closure
