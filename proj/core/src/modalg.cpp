#include "ptsys/modalg.hpp"

namespace ptsys::modalg {

Homomorphism make_hom(FreeModule source, FreeModule target, std::vector<RingElem> entries) {
    if (source.ring != target.ring)
        throw Error(ErrorKind::precondition, "source/target ring mismatch");
    if (entries.size() != source.rank * target.rank)
        throw Error(ErrorKind::precondition, "matrix shape mismatch");
    for (const auto& e : entries)
        if (e.kind() != source.ring.kind)
            throw Error(ErrorKind::precondition, "entry ring mismatch");
    return Homomorphism{std::move(source), std::move(target), std::move(entries)};
}

Homomorphism identity_hom(const FreeModule& m) {
    std::vector<RingElem> e(m.rank * m.rank, ring_zero(m.ring.kind));
    for (std::size_t i = 0; i < m.rank; ++i) e[i * m.rank + i] = ring_one(m.ring.kind);
    return Homomorphism{m, m, std::move(e)};
}

Homomorphism zero_hom(const FreeModule& source, const FreeModule& target) {
    if (source.ring != target.ring)
        throw Error(ErrorKind::precondition, "source/target ring mismatch");
    return Homomorphism{source, target,
                        std::vector<RingElem>(source.rank * target.rank,
                                              ring_zero(source.ring.kind))};
}

Homomorphism scale_hom(const Homomorphism& f, const RingElem& u) {
    Homomorphism out = f;
    for (auto& e : out.matrix) e = ring_mul(u, e);
    return out;
}

Homomorphism add_hom(const Homomorphism& f, const Homomorphism& g) {
    if (f.source != g.source || f.target != g.target)
        throw Error(ErrorKind::precondition, "shape mismatch in add");
    Homomorphism out = f;
    for (std::size_t i = 0; i < out.matrix.size(); ++i)
        out.matrix[i] = ring_add(out.matrix[i], g.matrix[i]);
    return out;
}

Homomorphism compose_hom(const Homomorphism& f, const Homomorphism& g) {
    if (f.source != g.target)
        throw Error(ErrorKind::precondition, "compose: inner modules differ");
    Homomorphism out = zero_hom(g.source, f.target);
    for (std::size_t r = 0; r < f.rows(); ++r)
        for (std::size_t m = 0; m < f.cols(); ++m) {
            if (ring_is_zero(f.at(r, m))) continue;
            for (std::size_t c = 0; c < g.cols(); ++c)
                out.at(r, c) = ring_add(out.at(r, c), ring_mul(f.at(r, m), g.at(m, c)));
        }
    return out;
}

static RingElem det_rec(const Homomorphism& f, std::vector<std::size_t>& cols, std::size_t row) {
    RingKind k = f.source.ring.kind;
    if (cols.size() == 1) return f.at(row, cols[0]);
    RingElem acc = ring_zero(k);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const RingElem& pivot = f.at(row, cols[i]);
        if (ring_is_zero(pivot)) continue;
        std::size_t c = cols[i];
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(i));
        RingElem minor = det_rec(f, cols, row + 1);
        cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(i), c);
        RingElem term = ring_mul(pivot, minor);
        acc = (i % 2 == 0) ? ring_add(acc, term) : ring_sub(acc, term);
    }
    return acc;
}

RingElem det(const Homomorphism& f) {
    if (f.rows() != f.cols())
        throw Error(ErrorKind::precondition, "determinant of non-square matrix");
    if (f.rows() == 0) return ring_one(f.source.ring.kind);
    std::vector<std::size_t> cols(f.cols());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
    return det_rec(f, cols, 0);
}

bool is_isomorphism(const Homomorphism& f) {
    if (f.rows() != f.cols()) return false;
    return ring_is_unit(det(f));
}

static std::ptrdiff_t first_nonzero(const Homomorphism& f) {
    for (std::size_t i = 0; i < f.matrix.size(); ++i)
        if (!ring_is_zero(f.matrix[i])) return static_cast<std::ptrdiff_t>(i);
    return -1;
}

bool g_equivalent(const Homomorphism& f, const Homomorphism& g, UnitGroup G) {
    if (f.source != g.source || f.target != g.target)
        throw Error(ErrorKind::precondition, "g_equivalent: shape mismatch");
    if (G == UnitGroup::Trivial) return f.matrix == g.matrix;
    std::ptrdiff_t pg = first_nonzero(g);
    std::ptrdiff_t pf = first_nonzero(f);
    if (pg < 0 || pf < 0) return pg == pf; // zero maps: equal iff both zero
    auto i = static_cast<std::size_t>(pg);
    // f * g_i == g * f_i entrywise forces f = (f_i/g_i) * g over the
    // fraction field; membership of the ratio in G finishes the test.
    for (std::size_t j = 0; j < f.matrix.size(); ++j)
        if (ring_mul(f.matrix[j], g.matrix[i]) != ring_mul(g.matrix[j], f.matrix[i]))
            return false;
    return ring_ratio_in_group(f.matrix[i], g.matrix[i], G);
}

Homomorphism normalize_class(const Homomorphism& f, UnitGroup G) {
    if (G == UnitGroup::Trivial) return f;
    std::ptrdiff_t p = first_nonzero(f);
    if (p < 0) return f; // zero map: unchanged
    const RingElem& pivot = f.matrix[static_cast<std::size_t>(p)];
    RingKind k = f.source.ring.kind;

    auto sign_normalize = [&]() {
        // Flip by -1 so the pivot's sign (leading coefficient for the
        // Novikov ring) is positive.
        bool flip = false;
        switch (k) {
            case RingKind::Integers: flip = pivot.as_int() < 0; break;
            case RingKind::IntegersMod2: flip = false; break;
            case RingKind::RationalField: flip = pivot.as_rat() < 0; break;
            case RingKind::NovikovOverIntegers:
                flip = novikov::leading_term(pivot.as_novikov()).second < 0;
                break;
        }
        return flip ? scale_hom(f, ring_from_int(k, Int(-1))) : f;
    };

    if (G == UnitGroup::Signs) return sign_normalize();

    switch (k) {
        case RingKind::Integers:
            return sign_normalize(); // full units over Z are just signs
        case RingKind::IntegersMod2:
            return f;
        case RingKind::RationalField: {
            RingElem inv = RingElem::rationals(Rat(1) / pivot.as_rat());
            return scale_hom(f, inv);
        }
        case RingKind::NovikovOverIntegers: {
            const auto& nv = pivot.as_novikov();
            if (novikov::is_unit(nv)) {
                // Scale by the inverted leading monomial: pivot's leading
                // term becomes +1 * t^0.
                auto [e, c] = novikov::leading_term(nv);
                RingElem u = RingElem::novikov(novikov::NovikovElement(-e, c));
                return scale_hom(f, u);
            }
            return sign_normalize();
        }
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

bool GClassHom::equals(const GClassHom& o) const {
    if (unit_group != o.unit_group)
        throw Error(ErrorKind::precondition, "comparing classes over different groups");
    return g_equivalent(rep, o.rep, unit_group);
}

GClassHom compose(const GClassHom& f, const GClassHom& g) {
    if (f.unit_group != g.unit_group)
        throw Error(ErrorKind::precondition, "composing classes over different groups");
    return GClassHom{compose_hom(f.rep, g.rep), f.unit_group};
}

} // namespace ptsys::modalg
