#pragma once

#include "ptsys/ring.hpp"

#include <cstddef>
#include <vector>

namespace ptsys::modalg {

struct FreeModule {
    RingSpec ring;
    std::size_t rank = 0;

    bool operator==(const FreeModule& o) const = default;
};

// Matrix is target.rank x source.rank, row-major.
struct Homomorphism {
    FreeModule source;
    FreeModule target;
    std::vector<RingElem> matrix;

    std::size_t rows() const { return target.rank; }
    std::size_t cols() const { return source.rank; }
    const RingElem& at(std::size_t r, std::size_t c) const { return matrix[r * cols() + c]; }
    RingElem& at(std::size_t r, std::size_t c) { return matrix[r * cols() + c]; }

    bool operator==(const Homomorphism& o) const = default;
};

Homomorphism make_hom(FreeModule source, FreeModule target, std::vector<RingElem> entries);
Homomorphism identity_hom(const FreeModule& m);
Homomorphism zero_hom(const FreeModule& source, const FreeModule& target);
Homomorphism scale_hom(const Homomorphism& f, const RingElem& u);
Homomorphism add_hom(const Homomorphism& f, const Homomorphism& g);

// Fixed order convention: compose_hom(f, g) = f after g.
Homomorphism compose_hom(const Homomorphism& f, const Homomorphism& g);

// Exact determinant by Laplace expansion (ranks in this library are small).
RingElem det(const Homomorphism& f);

// Square with unit determinant in the module's ring.
bool is_isomorphism(const Homomorphism& f);

// True iff f = u*g for some u in G. Cross-multiplication over the integral
// domain: pick the first nonzero entry of g in row-major order, require
// f*g_ij == g*f_ij entrywise, then decide f_ij/g_ij in G.
bool g_equivalent(const Homomorphism& f, const Homomorphism& g, UnitGroup G);

// Canonical representative of the G-class (best effort; see spec of the
// pivot conventions in the function body). Idempotent and class-preserving.
Homomorphism normalize_class(const Homomorphism& f, UnitGroup G);

// A homomorphism together with its G-equivalence class. Equality of classes
// is g_equivalent of representatives.
struct GClassHom {
    Homomorphism rep;
    UnitGroup unit_group = UnitGroup::Trivial;

    bool equals(const GClassHom& o) const;
};

GClassHom compose(const GClassHom& f, const GClassHom& g); // f after g

} // namespace ptsys::modalg
