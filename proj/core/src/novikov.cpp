#include "ptsys/novikov.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ptsys {

std::string rat_to_string(const Rat& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
        os << "/" << boost::multiprecision::denominator(r);
    return os.str();
}

Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        return make_rat(num, den);
    } catch (const std::exception&) {
        throw Error(ErrorKind::parse, "bad rational '" + s + "'");
    }
}

std::string hash_hex(const std::string& s) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a(s);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace ptsys

namespace ptsys::novikov {

NovikovElement::NovikovElement(Int constant) {
    if (constant != 0) terms_.emplace_back(Rat(0), std::move(constant));
}

NovikovElement::NovikovElement(Rat exponent, Int coefficient) {
    if (coefficient != 0) terms_.emplace_back(std::move(exponent), std::move(coefficient));
}

NovikovElement NovikovElement::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    NovikovElement out;
    for (auto& [e, c] : terms) {
        if (c == 0) continue;
        if (!out.terms_.empty() && out.terms_.back().first == e) {
            out.terms_.back().second += c;
            if (out.terms_.back().second == 0) out.terms_.pop_back();
        } else {
            out.terms_.emplace_back(std::move(e), std::move(c));
        }
    }
    return out;
}

NovikovElement exp_hom(const Rat& alpha) { return NovikovElement(alpha, Int(1)); }

NovikovElement add(const NovikovElement& x, const NovikovElement& y) {
    std::vector<NovikovElement::Term> out;
    out.reserve(x.size() + y.size());
    auto a = x.terms().begin(), ae = x.terms().end();
    auto b = y.terms().begin(), be = y.terms().end();
    while (a != ae && b != be) {
        if (a->first < b->first) {
            out.push_back(*a++);
        } else if (b->first < a->first) {
            out.push_back(*b++);
        } else {
            Int c = a->second + b->second;
            if (c != 0) out.emplace_back(a->first, std::move(c));
            ++a, ++b;
        }
    }
    out.insert(out.end(), a, ae);
    out.insert(out.end(), b, be);
    return NovikovElement::from_terms(std::move(out));
}

NovikovElement neg(const NovikovElement& x) {
    std::vector<NovikovElement::Term> out = x.terms();
    for (auto& t : out) t.second = -t.second;
    return NovikovElement::from_terms(std::move(out));
}

NovikovElement sub(const NovikovElement& x, const NovikovElement& y) { return add(x, neg(y)); }

NovikovElement mul(const NovikovElement& x, const NovikovElement& y) {
    // Shift-and-merge: fold scaled/shifted copies of y into the accumulator.
    NovikovElement acc;
    for (const auto& [ex, cx] : x.terms()) {
        std::vector<NovikovElement::Term> shifted;
        shifted.reserve(y.size());
        for (const auto& [ey, cy] : y.terms()) shifted.emplace_back(ex + ey, cx * cy);
        acc = add(acc, NovikovElement::from_terms(std::move(shifted)));
    }
    return acc;
}

NovikovElement mul_int(const NovikovElement& x, const Int& n) {
    std::vector<NovikovElement::Term> out = x.terms();
    for (auto& t : out) t.second *= n;
    return NovikovElement::from_terms(std::move(out));
}

NovikovElement::Term leading_term(const NovikovElement& x) {
    if (x.is_zero()) throw Error(ErrorKind::precondition, "leading_term of zero");
    return x.terms().front();
}

bool is_unit(const NovikovElement& x) {
    if (x.is_zero()) return false;
    const Int& c = x.terms().front().second;
    return c == 1 || c == -1;
}

TruncatedSeries truncate(const NovikovElement& x, const std::optional<Rat>& cutoff) {
    if (!cutoff) return {x, std::nullopt};
    std::vector<NovikovElement::Term> out;
    for (const auto& t : x.terms())
        if (t.first <= *cutoff) out.push_back(t);
    return {NovikovElement::from_terms(std::move(out)), cutoff};
}

static std::optional<Rat> min_cutoff(const std::optional<Rat>& a, const std::optional<Rat>& b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

TruncatedSeries mul(const TruncatedSeries& x, const TruncatedSeries& y) {
    return truncate(mul(x.known, y.known), min_cutoff(x.cutoff, y.cutoff));
}

TruncatedSeries add(const TruncatedSeries& x, const TruncatedSeries& y) {
    return truncate(add(x.known, y.known), min_cutoff(x.cutoff, y.cutoff));
}

TruncatedSeries invert(const NovikovElement& x, const Rat& cutoff) {
    if (!is_unit(x)) throw Error(ErrorKind::precondition, "invert: not a unit");
    const auto& [a0, c0] = x.terms().front();
    NovikovElement m(-a0, c0); // c0 = +-1, so m = x's leading monomial inverted
    // x*m = 1 - h with h supported in positive exponents.
    NovikovElement h = sub(NovikovElement(Int(1)), mul(x, m));
    // For a0 < 0 the unknown tail of the inverse feeds back under the cutoff
    // when multiplied by x, so compute |a0| deeper than requested. Then
    // x * known = 1 + (terms of exponent > cutoff) holds unconditionally.
    Rat depth = a0 < 0 ? cutoff - a0 : cutoff;
    Rat inner_cut = depth + a0;
    NovikovElement acc(Int(1));
    NovikovElement pw(Int(1));
    while (true) {
        pw = truncate(mul(pw, h), inner_cut).known;
        if (pw.is_zero()) break;
        acc = add(acc, pw);
    }
    TruncatedSeries out = truncate(mul(m, acc), depth);
    out.cutoff = cutoff;
    return out;
}

std::optional<NovikovElement> divide_exact(const NovikovElement& x, const NovikovElement& y) {
    if (y.is_zero()) throw Error(ErrorKind::precondition, "division by zero");
    if (x.is_zero()) return NovikovElement();
    // A finite quotient q has max exponent maxexp(x) - maxexp(y): top terms
    // multiply without cancellation, so anything larger cannot occur.
    Rat top_bound = x.terms().back().first - y.terms().back().first;
    NovikovElement r = x;
    std::vector<NovikovElement::Term> q;
    while (!r.is_zero()) {
        const auto& [re, rc] = r.terms().front();
        const auto& [ye, yc] = y.terms().front();
        if (rc % yc != 0) return std::nullopt;
        Rat qe = re - ye;
        if (qe > top_bound) return std::nullopt;
        Int qc = rc / yc;
        q.emplace_back(qe, qc);
        r = sub(r, mul(NovikovElement(qe, qc), y));
    }
    return NovikovElement::from_terms(std::move(q));
}

namespace {

// Dense integer polynomial helpers for ratio_is_unit. Elements arrive with
// rational exponents; after shifting the minimum exponent to zero and scaling
// by the lcm of denominators they become honest polynomials.
using Poly = std::vector<Int>; // coefficient of s^i at index i

Poly to_poly(const NovikovElement& x, const Int& scale) {
    Rat shift = x.terms().front().first;
    std::size_t deg = 0;
    std::vector<std::pair<std::size_t, Int>> entries;
    for (const auto& [e, c] : x.terms()) {
        Rat idx = (e - shift) * scale;
        if (boost::multiprecision::denominator(idx) != 1)
            throw Error(ErrorKind::internal, "exponent scaling failed");
        auto i = static_cast<std::size_t>(boost::multiprecision::numerator(idx).convert_to<long long>());
        entries.emplace_back(i, c);
        deg = std::max(deg, i);
    }
    Poly p(deg + 1, Int(0));
    for (auto& [i, c] : entries) p[i] = c;
    return p;
}

Int content(const Poly& p) {
    Int g = 0;
    for (const auto& c : p) g = boost::multiprecision::gcd(g, c);
    return g; // nonnegative; p is nonzero in all uses
}

using QPoly = std::vector<Rat>;

std::size_t qdeg(const QPoly& p) {
    std::size_t d = p.size();
    while (d > 0 && p[d - 1] == 0) --d;
    return d; // number of coefficients; 0 means the zero polynomial
}

QPoly qmod(QPoly a, const QPoly& b) {
    std::size_t db = qdeg(b);
    for (std::size_t da = qdeg(a); da >= db && da > 0; da = qdeg(a)) {
        Rat f = a[da - 1] / b[db - 1];
        for (std::size_t i = 0; i < db; ++i) a[da - db + i] -= f * b[i];
        a[da - 1] = 0; // force exact cancellation of the top coefficient
    }
    return a;
}

// Primitive integer gcd of two nonzero integer polynomials.
Poly poly_gcd(const Poly& x, const Poly& y) {
    QPoly a(x.begin(), x.end()), b(y.begin(), y.end());
    if (qdeg(a) < qdeg(b)) std::swap(a, b);
    while (qdeg(b) > 0) {
        QPoly r = qmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    // Clear denominators, then divide by the content.
    Int lcm = 1;
    for (std::size_t i = 0; i < qdeg(a); ++i)
        lcm = boost::multiprecision::lcm(lcm, Int(boost::multiprecision::denominator(a[i])));
    Poly g(qdeg(a));
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = Int(boost::multiprecision::numerator(Rat(a[i] * lcm)));
    Int c = content(g);
    for (auto& v : g) v /= c;
    if (g.back() < 0)
        for (auto& v : g) v = -v;
    return g;
}

// Exact division of integer polynomials (caller guarantees divisibility over Q;
// the result is integral by Gauss's lemma since the divisor is primitive).
Poly poly_div(const Poly& x, const Poly& d) {
    QPoly a(x.begin(), x.end());
    std::size_t dd = qdeg(QPoly(d.begin(), d.end()));
    std::size_t da = qdeg(a);
    QPoly q(da - dd + 1, Rat(0));
    while (qdeg(a) >= dd && qdeg(a) > 0) {
        std::size_t na = qdeg(a);
        Rat f = a[na - 1] / Rat(d[dd - 1]);
        q[na - dd] = f;
        for (std::size_t i = 0; i < dd; ++i) a[na - dd + i] -= f * d[i];
        a[na - 1] = 0;
    }
    Poly out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (boost::multiprecision::denominator(q[i]) != 1)
            throw Error(ErrorKind::internal, "non-integral exact quotient");
        out[i] = Int(boost::multiprecision::numerator(q[i]));
    }
    return out;
}

} // namespace

bool ratio_is_unit(const NovikovElement& x, const NovikovElement& y) {
    if (x.is_zero() || y.is_zero())
        throw Error(ErrorKind::precondition, "ratio_is_unit: zero argument");
    // Fast path: exact finite quotient one way or the other.
    if (auto q = divide_exact(x, y)) return is_unit(*q);
    if (auto q = divide_exact(y, x)) return is_unit(*q);
    // Common exponent scale for both elements.
    Int scale = 1;
    for (const auto& [e, c] : x.terms())
        scale = boost::multiprecision::lcm(scale, Int(boost::multiprecision::denominator(e)));
    for (const auto& [e, c] : y.terms())
        scale = boost::multiprecision::lcm(scale, Int(boost::multiprecision::denominator(e)));
    Poly px = to_poly(x, scale), py = to_poly(y, scale);
    Int cx = content(px), cy = content(py);
    if (cx != cy) return false;
    Poly d = poly_gcd(px, py);
    Poly rx = poly_div(px, d), ry = poly_div(py, d);
    // Constant coefficients are nonzero: s divides neither reduced part.
    Int ax = rx[0] < 0 ? Int(-rx[0]) : rx[0];
    Int ay = ry[0] < 0 ? Int(-ry[0]) : ry[0];
    return ax == cx && ay == cy; // i.e. primitive parts have +-1 trailing coeff
}

std::string to_string(const NovikovElement& x) {
    if (x.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : x.terms()) {
        Int a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
            first = false;
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        if (e == 0) {
            os << a;
        } else {
            os << a << "*t";
            if (e != 1) os << "^(" << rat_to_string(e) << ")";
        }
    }
    return os.str();
}

std::string to_string(const TruncatedSeries& x) {
    std::string s = to_string(x.known);
    if (x.cutoff) s += " + O(>" + rat_to_string(*x.cutoff) + ")";
    return s;
}

namespace {

struct ElementParser {
    const std::string& s;
    std::size_t i = 0;

    explicit ElementParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw Error(ErrorKind::parse, what + " at position " + std::to_string(i), i);
    }

    Int integer() {
        skip_ws();
        std::size_t start = i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        std::size_t digits = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == digits) fail("expected integer");
        return Int(s.substr(start, i - start));
    }

    Rat rational() {
        Int num = integer();
        skip_ws();
        if (i < s.size() && s[i] == '/') {
            ++i;
            Int den = integer();
            if (den == 0) fail("zero denominator");
            return Rat(num, den);
        }
        return Rat(num);
    }

    Rat exponent() {
        skip_ws();
        if (i < s.size() && s[i] == '(') {
            ++i;
            Rat r = rational();
            skip_ws();
            if (i >= s.size() || s[i] != ')') fail("expected ')'");
            ++i;
            return r;
        }
        return Rat(integer());
    }

    // One term: [coefficient] ['*'] ['t' ['^' exponent]]
    NovikovElement::Term term() {
        skip_ws();
        Int coeff(1);
        bool have_coeff = false;
        if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])))) {
            coeff = integer();
            have_coeff = true;
        }
        skip_ws();
        if (i < s.size() && s[i] == '*') {
            ++i;
            skip_ws();
        }
        if (i < s.size() && s[i] == 't') {
            ++i;
            skip_ws();
            Rat e(1);
            if (i < s.size() && s[i] == '^') {
                ++i;
                e = exponent();
            }
            return {e, coeff};
        }
        if (!have_coeff) fail("expected term");
        return {Rat(0), coeff};
    }

    NovikovElement parse_sum() {
        std::vector<NovikovElement::Term> terms;
        bool negate = false;
        if (peek() == '+' || peek() == '-') {
            negate = s[i] == '-';
            ++i;
        }
        while (true) {
            auto [e, c] = term();
            terms.emplace_back(e, negate ? -c : c);
            if (eof()) break;
            char op = peek();
            if (op != '+' && op != '-') fail("expected '+' or '-'");
            negate = op == '-';
            ++i;
        }
        return NovikovElement::from_terms(std::move(terms));
    }
};

} // namespace

NovikovElement parse(const std::string& text) {
    ElementParser p(text);
    if (p.eof()) throw Error(ErrorKind::parse, "empty element text", 0);
    NovikovElement e = p.parse_sum();
    if (!p.eof()) p.fail("trailing input");
    return e;
}

} // namespace ptsys::novikov
