#pragma once

#include "ptsys/numeric.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ptsys::novikov {

// Finitely supported formal sum sum_i c_i * t^(a_i) with exact rational
// exponents and exact integer coefficients. Terms are kept sorted strictly
// increasing by exponent with no zero coefficients; the empty list is 0.
class NovikovElement {
public:
    using Term = std::pair<Rat, Int>;

    NovikovElement() = default;
    explicit NovikovElement(Int constant);                  // constant * t^0
    NovikovElement(Rat exponent, Int coefficient);          // single term
    static NovikovElement from_terms(std::vector<Term> terms); // normalizes

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool operator==(const NovikovElement& o) const { return terms_ == o.terms_; }
    bool operator!=(const NovikovElement& o) const { return terms_ != o.terms_; }

    // Total order (lexicographic on term lists); used only for canonical
    // sorting in containers and reports.
    bool operator<(const NovikovElement& o) const { return terms_ < o.terms_; }

private:
    std::vector<Term> terms_;
};

// Truncated series: terms exact up to `cutoff` (inclusive), unknown above.
// An absent cutoff means the value is exact (finitely supported).
struct TruncatedSeries {
    NovikovElement known;
    std::optional<Rat> cutoff;

    bool operator==(const TruncatedSeries& o) const {
        return known == o.known && cutoff == o.cutoff;
    }
};

NovikovElement exp_hom(const Rat& alpha); // single term (alpha, 1)

NovikovElement add(const NovikovElement& x, const NovikovElement& y);
NovikovElement neg(const NovikovElement& x);
NovikovElement sub(const NovikovElement& x, const NovikovElement& y);
NovikovElement mul(const NovikovElement& x, const NovikovElement& y);
NovikovElement mul_int(const NovikovElement& x, const Int& n);

inline NovikovElement operator+(const NovikovElement& x, const NovikovElement& y) { return add(x, y); }
inline NovikovElement operator-(const NovikovElement& x, const NovikovElement& y) { return sub(x, y); }
inline NovikovElement operator-(const NovikovElement& x) { return neg(x); }
inline NovikovElement operator*(const NovikovElement& x, const NovikovElement& y) { return mul(x, y); }

// Term of minimal exponent. Throws (precondition) on zero.
NovikovElement::Term leading_term(const NovikovElement& x);

// Unit criterion for finitely supported elements over integer coefficients:
// nonzero with leading coefficient +-1. Exactly the elements invertible by
// geometric-series expansion in the completed ring.
bool is_unit(const NovikovElement& x);

// Geometric-series inverse: x * result.known = 1 + (terms of exponent
// strictly above cutoff). When the leading exponent of x is negative the
// known part carries exact terms past the cutoff by that amount; they are
// needed for the product identity to hold through the cutoff itself.
// Requires is_unit(x).
TruncatedSeries invert(const NovikovElement& x, const Rat& cutoff);

TruncatedSeries truncate(const NovikovElement& x, const std::optional<Rat>& cutoff);
TruncatedSeries mul(const TruncatedSeries& x, const TruncatedSeries& y);
TruncatedSeries add(const TruncatedSeries& x, const TruncatedSeries& y);

// Exact division: returns x / y when the quotient is finitely supported,
// nullopt when leading-term division fails to terminate or divide exactly.
std::optional<NovikovElement> divide_exact(const NovikovElement& x, const NovikovElement& y);

// Decides whether x/y is a unit of the completed integer Novikov ring (both
// x, y nonzero). This is the FullUnits membership test for ratios: factor
// out monomials and integer contents, cancel the polynomial gcd, and check
// that the contents agree and both reduced parts have trailing coefficient
// +-1 (a rational power series with integer coefficients has a unit
// denominator in lowest terms, so the criterion is exact).
bool ratio_is_unit(const NovikovElement& x, const NovikovElement& y);

// Text format: "c1*t^(p1/q1) + c2*t^(p2/q2) + ...". Printing is canonical
// (round-trip parse(print(x)) == x); the parser additionally accepts "t",
// "1", bare integers, "t^n", and "-t"-style abbreviations.
std::string to_string(const NovikovElement& x);
std::string to_string(const TruncatedSeries& x);
NovikovElement parse(const std::string& text);

} // namespace ptsys::novikov
