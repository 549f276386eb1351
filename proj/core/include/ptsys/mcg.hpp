#pragma once

#include "ptsys/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ptsys::mcg {

// Closed oriented surface modeled on H_1 with the standard symplectic basis
// a_1, b_1, ..., a_g, b_g. Coordinates interleave: index 2i is a_{i+1},
// index 2i+1 is b_{i+1}.
struct SurfaceModel {
    int genus = 1;
    std::optional<std::string> marked_point;

    std::size_t dim() const { return static_cast<std::size_t>(2 * genus); }
    bool operator==(const SurfaceModel& o) const = default;
};

struct CurveClass {
    SurfaceModel surface;
    std::vector<Int> vec;
    std::string name;
};

struct TwistLetter {
    CurveClass curve;
    int sign = 1; // +1 or -1
};

// Acts on H_1 as the ordered product of transvections; the rightmost letter
// acts first on vectors, so word_action multiplies letter matrices in list
// order.
struct TwistWord {
    SurfaceModel surface;
    std::vector<TwistLetter> letters;
};

// Small dense integer matrix, row-major.
struct IntMat {
    std::size_t n = 0;
    std::vector<Int> a;

    static IntMat identity(std::size_t n);
    const Int& at(std::size_t r, std::size_t c) const { return a[r * n + c]; }
    Int& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
    bool operator==(const IntMat& o) const = default;
};

IntMat mat_mul(const IntMat& x, const IntMat& y);
std::vector<Int> mat_apply(const IntMat& m, const std::vector<Int>& v);
IntMat mat_transpose(const IntMat& m);

IntMat symplectic_form(int genus); // block-diagonal [[0,1],[-1,0]]
bool is_symplectic(const IntMat& m);
IntMat sp_inverse(const IntMat& m); // J^{-1} M^T J

bool is_primitive(const std::vector<Int>& v);

Int intersection_vec(const std::vector<Int>& x, const std::vector<Int>& y);
Int intersection(const CurveClass& x, const CurveClass& y);

CurveClass curve_a(const SurfaceModel& s, int i);    // a_i, 1-based
CurveClass curve_b(const SurfaceModel& s, int i);    // b_i, 1-based
CurveClass curve_diff(const SurfaceModel& s, int i); // a_i - a_{i+1}, 1-based

// a_i, b_i for all handles plus the connecting classes a_i - a_{i+1}.
// Transvections along these generate the full integral symplectic group.
std::vector<CurveClass> default_generators(const SurfaceModel& s);

// Positive twist sends x to x + <x,c>c; negative is the inverse.
IntMat twist_matrix(const CurveClass& c, int sign);
IntMat word_action(const TwistWord& w);
bool is_identity_on_homology(const TwistWord& w);

// Image curve M.c (same name); symplectic matrices preserve primitivity.
CurveClass transport_curve(const IntMat& M, const CurveClass& c);

TwistWord concat_words(const TwistWord& x, const TwistWord& y);
TwistWord inverse_word(const TwistWord& w); // reversed letters, flipped signs

// Some d with <c,d> = 1, built by extended gcd; exists iff c is primitive.
CurveClass symplectic_dual(const CurveClass& c);

// Symplectic matrix whose first column is the given primitive vector
// (integral symplectic basis completion).
IntMat symplectic_basis_through(const SurfaceModel& s, const std::vector<Int>& a);

// Same completion with the first hyperbolic pair prescribed; needs <a,b> = 1.
IntMat symplectic_basis_through_pair(const SurfaceModel& s, const std::vector<Int>& a,
                                     const std::vector<Int>& b);

// Symplectic matrix sending the primitive vector a to the primitive vector b.
IntMat map_primitive(const SurfaceModel& s, const std::vector<Int>& a, const std::vector<Int>& b);

// Rewrites every negative letter as 11 positive twists: with <c,d> = +-1 the
// product (T_c T_d)^6 acts trivially on H_1, so T_c^{-1} = T_d (T_c T_d)^5.
TwistWord positivize_word(const TwistWord& w);

// Twist word whose action equals M exactly. Greedy norm descent over the
// given generators, then (when the default generators are available) an
// exact column-reduction phase. No length optimality is claimed.
TwistWord factor_symplectic(const IntMat& M, const std::vector<CurveClass>& generators,
                            bool positive_only);

} // namespace ptsys::mcg
