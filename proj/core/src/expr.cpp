#include "ptsys/expr.hpp"

#include <cctype>
#include <utility>
#include <variant>

namespace ptsys::expr {

namespace {

using novikov::NovikovElement;
using novikov::TruncatedSeries;

std::optional<Rat> min_cutoff(const std::optional<Rat>& x, const std::optional<Rat>& y) {
    if (!x) return y;
    if (!y) return x;
    return std::min(*x, *y);
}

class Parser {
public:
    Parser(const std::string& text, const EvalOptions& opt)
        : text_(text), spec_(opt.ring), cutoff_(opt.cutoff),
          series_(opt.ring.kind == RingKind::NovikovOverIntegers) {}

    EvalResult run() {
        Value v = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input", pos_);
        EvalResult out;
        if (series_) {
            TruncatedSeries s = novikov::truncate(ser(v).known, cutoff_);
            out.value = RingElem::novikov(s.known);
            out.cutoff = cutoff_;
        } else {
            out.value = el(v);
        }
        return out;
    }

private:
    using Value = std::variant<RingElem, TruncatedSeries>;

    static const RingElem& el(const Value& v) { return std::get<RingElem>(v); }
    static const TruncatedSeries& ser(const Value& v) { return std::get<TruncatedSeries>(v); }

    [[noreturn]] void fail(const std::string& msg, std::size_t pos) const {
        throw Error(ErrorKind::parse, msg, pos);
    }

    // Value-dependent failures are not syntax errors; they exit as check
    // failures, not parse errors.
    [[noreturn]] void vfail(const std::string& msg, std::size_t pos) const {
        throw Error(ErrorKind::validation, msg, pos);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'", pos_);
    }

    Int digits() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start) fail("expected a number", start);
        return Int(text_.substr(start, pos_ - start));
    }

    Value from_int(const Int& n) const {
        if (series_) return TruncatedSeries{NovikovElement(n), std::nullopt};
        return ring_from_int(spec_.kind, n);
    }

    Value vadd(const Value& a, const Value& b) const {
        if (series_) return novikov::add(ser(a), ser(b));
        return ring_add(el(a), el(b));
    }

    Value vneg(const Value& a) const {
        if (series_) {
            const TruncatedSeries& s = ser(a);
            return TruncatedSeries{novikov::neg(s.known), s.cutoff};
        }
        return ring_neg(el(a));
    }

    Value vmul(const Value& a, const Value& b) const {
        if (series_) return novikov::mul(ser(a), ser(b));
        return ring_mul(el(a), el(b));
    }

    Value vinv(const Value& a, std::size_t pos) const {
        if (series_) {
            const TruncatedSeries& s = ser(a);
            if (!novikov::is_unit(s.known))
                vfail("inverse of a non-unit of the series ring", pos);
            TruncatedSeries r = novikov::invert(s.known, cutoff_);
            r.cutoff = min_cutoff(r.cutoff, s.cutoff);
            return r;
        }
        if (!ring_is_unit(el(a))) vfail("inverse of a non-unit", pos);
        return ring_unit_inverse(el(a));
    }

    Value vdiv(const Value& a, const Value& b, std::size_t pos) const {
        if (series_) {
            const TruncatedSeries& sa = ser(a);
            const TruncatedSeries& sb = ser(b);
            if (sb.known.is_zero()) vfail("division by zero", pos);
            if (!sa.cutoff && !sb.cutoff)
                if (auto q = novikov::divide_exact(sa.known, sb.known))
                    return TruncatedSeries{*q, std::nullopt};
            return novikov::mul(sa, vinv_series(sb, pos));
        }
        if (ring_is_zero(el(b))) vfail("division by zero", pos);
        if (auto q = ring_divide_exact(el(a), el(b))) return *q;
        vfail("division is not exact", pos);
    }

    TruncatedSeries vinv_series(const TruncatedSeries& s, std::size_t pos) const {
        if (!novikov::is_unit(s.known))
            vfail("divisor is not a unit of the series ring", pos);
        TruncatedSeries r = novikov::invert(s.known, cutoff_);
        r.cutoff = min_cutoff(r.cutoff, s.cutoff);
        return r;
    }

    Value vpow(Value base, const Int& n, std::size_t pos) const {
        Int e = n;
        if (e < 0) {
            base = vinv(base, pos);
            e = -e;
        }
        Value acc = from_int(Int(1));
        while (e > 0) {
            if ((e & 1) != 0) acc = vmul(acc, base);
            base = vmul(base, base);
            e >>= 1;
        }
        return acc;
    }

    // exponent := ['-'] digits | '(' ['-'] digits ['/' digits] ')'
    Rat exponent(bool rational_ok, std::size_t pos) {
        if (eat('(')) {
            bool negate = eat('-');
            Int num = digits();
            Int den(1);
            if (eat('/')) {
                if (!rational_ok) fail("fractional exponent on a non-monomial base", pos);
                den = digits();
            }
            expect(')');
            Rat q = make_rat(num, den);
            return negate ? Rat(-q) : q;
        }
        bool negate = eat('-');
        Int num = digits();
        Rat q(num);
        return negate ? Rat(-q) : q;
    }

    Value expr() {
        Value v = term();
        while (true) {
            if (eat('+')) {
                v = vadd(v, term());
            } else if (peek() == '-') {
                ++pos_;
                v = vadd(v, vneg(term()));
            } else {
                return v;
            }
        }
    }

    Value term() {
        Value v = factor();
        while (true) {
            if (eat('*')) {
                v = vmul(v, factor());
            } else if (peek() == '/') {
                std::size_t at = pos_;
                ++pos_;
                v = vdiv(v, factor(), at);
            } else {
                return v;
            }
        }
    }

    Value factor() {
        if (peek() == '-') {
            ++pos_;
            return vneg(factor());
        }
        std::size_t at = pos_;
        auto [v, is_t] = base();
        if (peek() == '^') {
            ++pos_;
            std::size_t epos = pos_;
            Rat e = exponent(is_t, epos);
            if (is_t) return TruncatedSeries{NovikovElement(e, Int(1)), std::nullopt};
            if (boost::multiprecision::denominator(e) != 1)
                fail("fractional exponent on a non-monomial base", epos);
            return vpow(v, Int(boost::multiprecision::numerator(e)), at);
        }
        return v;
    }

    std::pair<Value, bool> base() {
        char c = peek();
        std::size_t at = pos_;
        if (std::isdigit(static_cast<unsigned char>(c))) return {from_int(digits()), false};
        if (c == '(') {
            ++pos_;
            Value v = expr();
            expect(')');
            return {v, false};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   std::isalpha(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            if (name == "t") {
                if (!series_) fail("the symbol t needs the series ring", at);
                return {TruncatedSeries{NovikovElement(Rat(1), Int(1)), std::nullopt}, true};
            }
            if (name == "inv") {
                expect('(');
                Value v = expr();
                expect(')');
                return {vinv(v, at), false};
            }
            fail("unknown symbol '" + name + "'", at);
        }
        fail("expected a value", at);
    }

    const std::string& text_;
    RingSpec spec_;
    Rat cutoff_;
    bool series_;
    std::size_t pos_ = 0;
};

} // namespace

EvalResult evaluate(const std::string& text, const EvalOptions& opt) {
    validate_ring_spec(opt.ring);
    return Parser(text, opt).run();
}

} // namespace ptsys::expr
