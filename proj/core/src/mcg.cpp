#include "ptsys/mcg.hpp"

#include <algorithm>
#include <functional>

namespace ptsys::mcg {

namespace {

int sgn(const Int& v) { return v < 0 ? -1 : (v > 0 ? 1 : 0); }

Int iabs(const Int& v) { return v < 0 ? Int(-v) : v; }

void check_dim(const SurfaceModel& s, const std::vector<Int>& v) {
    if (s.genus < 1) throw Error(ErrorKind::precondition, "genus must be at least 1");
    if (v.size() != s.dim())
        throw Error(ErrorKind::precondition, "curve vector length does not match the surface");
}

void check_same_surface(const SurfaceModel& a, const SurfaceModel& b) {
    if (!(a == b)) throw Error(ErrorKind::precondition, "curves live on different surfaces");
}

// v -> v + s<v,c>c applied to every column.
void apply_transvection(IntMat& m, const std::vector<Int>& c, int s) {
    const std::size_t n = m.n;
    for (std::size_t col = 0; col < n; ++col) {
        Int p = 0;
        for (std::size_t i = 0; i + 1 < n; i += 2)
            p += m.at(i, col) * c[i + 1] - m.at(i + 1, col) * c[i];
        if (p == 0) continue;
        Int f = s * p;
        for (std::size_t i = 0; i < n; ++i)
            if (c[i] != 0) m.at(i, col) += f * c[i];
    }
}

struct Egcd {
    Int g, u, v; // u*a + v*b = g >= 0
};

Egcd egcd(const Int& a, const Int& b) {
    if (b == 0) return {iabs(a), Int(sgn(a)), Int(0)};
    Egcd e = egcd(b, a % b);
    return {e.g, e.v, e.u - (a / b) * e.v};
}

// x with w.x = 1; exists iff gcd(w) = 1.
std::vector<Int> solve_unit_functional(const std::vector<Int>& w) {
    Int g = 0;
    std::vector<Int> x(w.size(), Int(0));
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0) continue;
        if (g == 0) {
            g = iabs(w[i]);
            x[i] = sgn(w[i]);
            continue;
        }
        Egcd e = egcd(g, w[i]);
        for (std::size_t j = 0; j < i; ++j) x[j] *= e.u;
        x[i] = e.v;
        g = e.g;
    }
    if (g != 1)
        throw Error(ErrorKind::precondition, "vector is not primitive");
    return x;
}

// Integer column echelon basis of the lattice spanned by the given columns.
std::vector<std::vector<Int>> lattice_column_basis(std::vector<std::vector<Int>> cols) {
    if (cols.empty()) return cols;
    const std::size_t n = cols[0].size();
    std::size_t piv = 0;
    for (std::size_t r = 0; r < n && piv < cols.size(); ++r) {
        while (true) {
            std::size_t best = cols.size();
            for (std::size_t j = piv; j < cols.size(); ++j)
                if (cols[j][r] != 0 && (best == cols.size() || iabs(cols[j][r]) < iabs(cols[best][r])))
                    best = j;
            if (best == cols.size()) break;
            std::swap(cols[piv], cols[best]);
            bool clean = true;
            for (std::size_t j = piv + 1; j < cols.size(); ++j) {
                if (cols[j][r] == 0) continue;
                Int q = cols[j][r] / cols[piv][r];
                if (q != 0)
                    for (std::size_t k = 0; k < n; ++k) cols[j][k] -= q * cols[piv][k];
                if (cols[j][r] != 0) clean = false;
            }
            if (clean) {
                ++piv;
                break;
            }
        }
    }
    cols.resize(piv);
    return cols;
}

Int form_pair(const IntMat& F, const std::vector<Int>& x, const std::vector<Int>& y) {
    Int t = 0;
    for (std::size_t i = 0; i < F.n; ++i) {
        if (x[i] == 0) continue;
        Int row = 0;
        for (std::size_t j = 0; j < F.n; ++j) row += F.at(i, j) * y[j];
        t += x[i] * row;
    }
    return t;
}

// Columns of the result form a basis with T^t F T = J, first column v. When
// dual is given it becomes the second column; it must pair with v to 1.
IntMat symplectic_basis_with(const IntMat& F, const std::vector<Int>& v,
                             const std::vector<Int>* dual = nullptr) {
    const std::size_t n = F.n;
    std::vector<Int> d;
    if (dual) {
        if (form_pair(F, v, *dual) != 1)
            throw Error(ErrorKind::precondition, "prescribed dual does not pair to 1");
        d = *dual;
    } else {
        // w_j = <v, e_j>_F
        std::vector<Int> w(n, Int(0));
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Int> e(n, Int(0));
            e[j] = 1;
            w[j] = form_pair(F, v, e);
        }
        d = solve_unit_functional(w);
    }

    IntMat T;
    T.n = n;
    T.a.assign(n * n, Int(0));
    for (std::size_t i = 0; i < n; ++i) {
        T.at(i, 0) = v[i];
        T.at(i, 1) = d[i];
    }
    if (n == 2) return T;

    // Complement of the hyperbolic pair: pi(x) = x - <x,d>v + <x,v>d.
    std::vector<std::vector<Int>> images;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Int> e(n, Int(0));
        e[j] = 1;
        Int xd = form_pair(F, e, d);
        Int xv = form_pair(F, e, v);
        std::vector<Int> img(n);
        for (std::size_t i = 0; i < n; ++i) img[i] = e[i] - xd * v[i] + xv * d[i];
        images.push_back(std::move(img));
    }
    std::vector<std::vector<Int>> C = lattice_column_basis(std::move(images));
    if (C.size() != n - 2)
        throw Error(ErrorKind::internal, "complement lattice has unexpected rank");

    IntMat Fsub;
    Fsub.n = n - 2;
    Fsub.a.assign(Fsub.n * Fsub.n, Int(0));
    for (std::size_t i = 0; i < Fsub.n; ++i)
        for (std::size_t j = 0; j < Fsub.n; ++j) Fsub.at(i, j) = form_pair(F, C[i], C[j]);

    std::vector<Int> first(Fsub.n, Int(0));
    first[0] = 1;
    IntMat Tsub = symplectic_basis_with(Fsub, first);
    for (std::size_t colv = 0; colv < Fsub.n; ++colv)
        for (std::size_t i = 0; i < n; ++i) {
            Int acc = 0;
            for (std::size_t k = 0; k < Fsub.n; ++k) acc += C[k][i] * Tsub.at(k, colv);
            T.at(i, colv + 2) = acc;
        }
    return T;
}

} // namespace

IntMat IntMat::identity(std::size_t n) {
    IntMat m;
    m.n = n;
    m.a.assign(n * n, Int(0));
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat mat_mul(const IntMat& x, const IntMat& y) {
    if (x.n != y.n) throw Error(ErrorKind::precondition, "matrix size mismatch");
    IntMat r;
    r.n = x.n;
    r.a.assign(r.n * r.n, Int(0));
    for (std::size_t i = 0; i < r.n; ++i)
        for (std::size_t k = 0; k < r.n; ++k) {
            if (x.at(i, k) == 0) continue;
            for (std::size_t j = 0; j < r.n; ++j) r.at(i, j) += x.at(i, k) * y.at(k, j);
        }
    return r;
}

std::vector<Int> mat_apply(const IntMat& m, const std::vector<Int>& v) {
    if (m.n != v.size()) throw Error(ErrorKind::precondition, "matrix size mismatch");
    std::vector<Int> r(m.n, Int(0));
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) r[i] += m.at(i, j) * v[j];
    return r;
}

IntMat mat_transpose(const IntMat& m) {
    IntMat r;
    r.n = m.n;
    r.a.assign(m.n * m.n, Int(0));
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) r.at(j, i) = m.at(i, j);
    return r;
}

IntMat symplectic_form(int genus) {
    if (genus < 1) throw Error(ErrorKind::precondition, "genus must be at least 1");
    IntMat J;
    J.n = static_cast<std::size_t>(2 * genus);
    J.a.assign(J.n * J.n, Int(0));
    for (std::size_t i = 0; i + 1 < J.n; i += 2) {
        J.at(i, i + 1) = 1;
        J.at(i + 1, i) = -1;
    }
    return J;
}

bool is_symplectic(const IntMat& m) {
    if (m.n == 0 || m.n % 2 != 0) return false;
    IntMat J = symplectic_form(static_cast<int>(m.n / 2));
    return mat_mul(mat_transpose(m), mat_mul(J, m)) == J;
}

IntMat sp_inverse(const IntMat& m) {
    if (!is_symplectic(m)) throw Error(ErrorKind::precondition, "inverse of a non-symplectic matrix");
    IntMat J = symplectic_form(static_cast<int>(m.n / 2));
    IntMat negJ = J;
    for (auto& e : negJ.a) e = -e;
    return mat_mul(negJ, mat_mul(mat_transpose(m), J)); // J^{-1} = -J
}

bool is_primitive(const std::vector<Int>& v) {
    Int g = 0;
    for (const auto& e : v) g = egcd(g, e).g;
    return g == 1;
}

Int intersection_vec(const std::vector<Int>& x, const std::vector<Int>& y) {
    if (x.size() != y.size() || x.size() % 2 != 0)
        throw Error(ErrorKind::precondition, "pairing needs vectors of equal even length");
    Int t = 0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) t += x[i] * y[i + 1] - x[i + 1] * y[i];
    return t;
}

Int intersection(const CurveClass& x, const CurveClass& y) {
    check_same_surface(x.surface, y.surface);
    check_dim(x.surface, x.vec);
    check_dim(y.surface, y.vec);
    return intersection_vec(x.vec, y.vec);
}

CurveClass curve_a(const SurfaceModel& s, int i) {
    if (i < 1 || i > s.genus) throw Error(ErrorKind::precondition, "handle index out of range");
    std::vector<Int> v(s.dim(), Int(0));
    v[static_cast<std::size_t>(2 * (i - 1))] = 1;
    return {s, std::move(v), "a" + std::to_string(i)};
}

CurveClass curve_b(const SurfaceModel& s, int i) {
    if (i < 1 || i > s.genus) throw Error(ErrorKind::precondition, "handle index out of range");
    std::vector<Int> v(s.dim(), Int(0));
    v[static_cast<std::size_t>(2 * (i - 1) + 1)] = 1;
    return {s, std::move(v), "b" + std::to_string(i)};
}

CurveClass curve_diff(const SurfaceModel& s, int i) {
    if (i < 1 || i + 1 > s.genus) throw Error(ErrorKind::precondition, "handle index out of range");
    std::vector<Int> v(s.dim(), Int(0));
    v[static_cast<std::size_t>(2 * (i - 1))] = 1;
    v[static_cast<std::size_t>(2 * i)] = -1;
    return {s, std::move(v), "a" + std::to_string(i) + "-a" + std::to_string(i + 1)};
}

std::vector<CurveClass> default_generators(const SurfaceModel& s) {
    std::vector<CurveClass> out;
    for (int i = 1; i <= s.genus; ++i) {
        out.push_back(curve_a(s, i));
        out.push_back(curve_b(s, i));
    }
    for (int i = 1; i < s.genus; ++i) out.push_back(curve_diff(s, i));
    return out;
}

IntMat twist_matrix(const CurveClass& c, int sign) {
    check_dim(c.surface, c.vec);
    if (sign != 1 && sign != -1) throw Error(ErrorKind::precondition, "twist sign must be +-1");
    if (std::all_of(c.vec.begin(), c.vec.end(), [](const Int& e) { return e == 0; }))
        throw Error(ErrorKind::precondition, "twist about the zero class");
    if (!is_primitive(c.vec))
        throw Error(ErrorKind::precondition, "twist curve must be primitive");
    IntMat m = IntMat::identity(c.surface.dim());
    apply_transvection(m, c.vec, sign);
    return m;
}

IntMat word_action(const TwistWord& w) {
    IntMat m = IntMat::identity(w.surface.dim());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        check_same_surface(w.surface, it->curve.surface);
        if (it->sign != 1 && it->sign != -1)
            throw Error(ErrorKind::precondition, "twist sign must be +-1");
        apply_transvection(m, it->curve.vec, it->sign);
    }
    return m;
}

bool is_identity_on_homology(const TwistWord& w) {
    return word_action(w) == IntMat::identity(w.surface.dim());
}

CurveClass transport_curve(const IntMat& M, const CurveClass& c) {
    check_dim(c.surface, c.vec);
    if (M.n != c.surface.dim()) throw Error(ErrorKind::precondition, "matrix size mismatch");
    return {c.surface, mat_apply(M, c.vec), c.name};
}

TwistWord concat_words(const TwistWord& x, const TwistWord& y) {
    check_same_surface(x.surface, y.surface);
    TwistWord out = x;
    out.letters.insert(out.letters.end(), y.letters.begin(), y.letters.end());
    return out;
}

TwistWord inverse_word(const TwistWord& w) {
    TwistWord out{w.surface, {}};
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        out.letters.push_back({it->curve, -it->sign});
    return out;
}

CurveClass symplectic_dual(const CurveClass& c) {
    check_dim(c.surface, c.vec);
    const std::size_t n = c.surface.dim();
    std::vector<Int> w(n, Int(0));
    for (std::size_t i = 0; i + 1 < n; i += 2) {
        w[i + 1] = c.vec[i];
        w[i] = -c.vec[i + 1];
    }
    std::vector<Int> d = solve_unit_functional(w);
    return {c.surface, std::move(d), c.name + "*"};
}

IntMat symplectic_basis_through(const SurfaceModel& s, const std::vector<Int>& a) {
    check_dim(s, a);
    if (!is_primitive(a)) throw Error(ErrorKind::precondition, "vector is not primitive");
    IntMat T = symplectic_basis_with(symplectic_form(s.genus), a);
    if (!is_symplectic(T)) throw Error(ErrorKind::internal, "basis completion is not symplectic");
    return T;
}

IntMat symplectic_basis_through_pair(const SurfaceModel& s, const std::vector<Int>& a,
                                     const std::vector<Int>& b) {
    check_dim(s, a);
    check_dim(s, b);
    if (!is_primitive(a)) throw Error(ErrorKind::precondition, "vector is not primitive");
    IntMat T = symplectic_basis_with(symplectic_form(s.genus), a, &b);
    if (!is_symplectic(T)) throw Error(ErrorKind::internal, "basis completion is not symplectic");
    return T;
}

IntMat map_primitive(const SurfaceModel& s, const std::vector<Int>& a, const std::vector<Int>& b) {
    IntMat Ba = symplectic_basis_through(s, a);
    IntMat Bb = symplectic_basis_through(s, b);
    return mat_mul(Bb, sp_inverse(Ba));
}

TwistWord positivize_word(const TwistWord& w) {
    TwistWord out{w.surface, {}};
    for (const auto& l : w.letters) {
        if (l.sign == 1) {
            out.letters.push_back(l);
            continue;
        }
        // T_c^{-1} = T_d (T_c T_d)^5 with <c,d> = 1.
        CurveClass d = symplectic_dual(l.curve);
        out.letters.push_back({d, 1});
        for (int k = 0; k < 5; ++k) {
            out.letters.push_back({l.curve, 1});
            out.letters.push_back({d, 1});
        }
    }
    return out;
}

namespace {

struct Reducer {
    SurfaceModel surf;
    IntMat cur;
    std::vector<TwistLetter> applied;

    void apply(const CurveClass& c, int s) {
        apply_transvection(cur, c.vec, s);
        applied.push_back({c, s});
    }
};

void tw_a(Reducer& r, int handle, int s) { r.apply(curve_a(r.surf, handle + 1), s); }
void tw_b(Reducer& r, int handle, int s) { r.apply(curve_b(r.surf, handle + 1), s); }
void tw_conn(Reducer& r, int handle, int s) { r.apply(curve_diff(r.surf, handle + 1), s); }

void repeat_letters(const Int& count, const std::function<void()>& f) {
    for (Int t = iabs(count); t > 0; --t) f();
}

// Unit-letter plan taking the pair (x, y) to (gcd, 0) with nonnegative gcd,
// via x -= s*y ('a') and y += s*x ('b') moves.
struct Sl2Plan {
    std::vector<std::pair<char, int>> ops;
    Int g;
};

Sl2Plan plan_sl2_reduce(Int x, Int y) {
    Sl2Plan plan;
    auto emit = [&](char which, int s, const Int& times) {
        for (Int t = times; t > 0; --t) {
            plan.ops.push_back({which, s});
            if (which == 'a')
                x -= s * y;
            else
                y += s * x;
        }
    };
    while (true) {
        if (y == 0 && x >= 0) break;
        if (y == 0) { // x < 0
            emit('b', 1, 1);
            emit('a', 1, 1);
            continue;
        }
        if (x == 0) {
            emit('a', -sgn(y), 1);
            continue;
        }
        if (iabs(y) >= iabs(x)) {
            Int q = y / x;
            emit('b', -sgn(q), iabs(q));
        } else {
            Int q = x / y;
            emit('a', sgn(q), iabs(q));
        }
    }
    plan.g = x;
    return plan;
}

void run_plan(Reducer& r, int handle, const Sl2Plan& plan) {
    for (const auto& [which, s] : plan.ops)
        which == 'a' ? tw_a(r, handle, s) : tw_b(r, handle, s);
}

void run_plan_inverse(Reducer& r, int handle, const Sl2Plan& plan) {
    for (auto it = plan.ops.rbegin(); it != plan.ops.rend(); ++it)
        it->first == 'a' ? tw_a(r, handle, -it->second) : tw_b(r, handle, -it->second);
}

struct PairView {
    Reducer* r;
    int handle;
    std::size_t col;
    const Int& x() const { return r->cur.at(2 * static_cast<std::size_t>(handle), col); }
    const Int& y() const { return r->cur.at(2 * static_cast<std::size_t>(handle) + 1, col); }
};

// (x, y) -> (gcd, 0) at the given handle, tracking the given column.
Int sl2_reduce(Reducer& r, int handle, std::size_t col) {
    PairView p{&r, handle, col};
    Sl2Plan plan = plan_sl2_reduce(p.x(), p.y());
    run_plan(r, handle, plan);
    return plan.g;
}

// (x, y) -> (u, v); requires equal gcds.
void sl2_set(Reducer& r, int handle, std::size_t col, const Int& u, const Int& v) {
    Int g = sl2_reduce(r, handle, col);
    Sl2Plan target = plan_sl2_reduce(u, v);
    if (g != target.g)
        throw Error(ErrorKind::internal, "pair contents have different gcds");
    run_plan_inverse(r, handle, target);
}

Int round_nearest(const Int& a, const Int& b) { // b > 0, |a - q*b| <= b/2
    Int q = a / b;
    Int rem = a - q * b;
    if (2 * iabs(rem) > b) q += sgn(rem);
    return q;
}

// Pre: handles i and i+1 of the column hold (A, 0, B, 0). Post: (gcd, 0, 0, 0).
void merge_handles(Reducer& r, int i, std::size_t col) {
    PairView lo{&r, i, col}, hi{&r, i + 1, col};
    if (lo.y() != 0 || hi.y() != 0)
        throw Error(ErrorKind::internal, "merge expects cleared second coordinates");
    while (true) {
        Int A = lo.x(), B = hi.x();
        if (B == 0) {
            if (A < 0) sl2_reduce(r, i, col);
            break;
        }
        if (A == 0) {
            // Transfer B across, leaving the equal-magnitude state.
            sl2_set(r, i + 1, col, Int(0), iabs(B));
            tw_conn(r, i, 1); // x_i += |B|, x_{i+1} -= |B|
            sl2_set(r, i + 1, col, iabs(B), Int(0));
            continue;
        }
        if (iabs(A) == iabs(B)) {
            // Park A in y_i; one connecting twist then cancels x_{i+1} exactly.
            sl2_set(r, i, col, Int(0), iabs(A));
            tw_conn(r, i, -sgn(B)); // x_i += B, x_{i+1} -= B
            sl2_reduce(r, i, col);  // (B, |A|) -> (|A|, 0)
            break;
        }
        if (iabs(A) > iabs(B)) {
            sl2_set(r, i + 1, col, Int(0), iabs(B));
            Int q = round_nearest(A, iabs(B));
            repeat_letters(q, [&] { tw_conn(r, i, -sgn(q)); }); // A -= q|B|
            sl2_set(r, i + 1, col, iabs(B), Int(0));
        } else {
            sl2_set(r, i, col, Int(0), iabs(A));
            Int q = round_nearest(B, iabs(A));
            repeat_letters(q, [&] { tw_conn(r, i, -sgn(q)); }); // B -= q|A|
            sl2_set(r, i, col, iabs(A), Int(0));
        }
    }
}

// Column 2h -> e_{2h}, using handles >= h only.
void reduce_first_column(Reducer& r, int h, int g) {
    const std::size_t col = 2 * static_cast<std::size_t>(h);
    for (int i = g - 1; i >= h; --i) sl2_reduce(r, i, col);
    for (int i = g - 1; i > h; --i) merge_handles(r, i - 1, col);
    if (r.cur.at(col, col) != 1)
        throw Error(ErrorKind::internal, "column reduction lost primitivity");
}

// Column 2h+1 -> e_{2h+1}, fixing e_{2h}; its y_h coordinate stays 1 because
// the symplectic pairing with the already-fixed column is preserved.
void reduce_second_column(Reducer& r, int h, int g) {
    const std::size_t col = 2 * static_cast<std::size_t>(h) + 1;
    if (r.cur.at(col, col) != 1)
        throw Error(ErrorKind::internal, "pairing with the fixed column is off");
    for (int j = h + 1; j < g; ++j) sl2_reduce(r, j, col);
    for (int i = g - 1; i > h + 1; --i) merge_handles(r, i - 1, col);
    if (h + 1 < g) {
        PairView next{&r, h + 1, col};
        Int d = next.x();
        repeat_letters(d, [&] { tw_conn(r, h, -sgn(d)); }); // +-1 pump into x_h
    }
    PairView here{&r, h, col};
    Int xh = here.x();
    repeat_letters(xh, [&] { tw_a(r, h, sgn(xh)); });
}

bool contains_default_generators(const std::vector<CurveClass>& gens, const SurfaceModel& surf) {
    auto has = [&](const std::vector<Int>& v) {
        for (const auto& c : gens) {
            if (c.vec == v) return true;
            std::vector<Int> neg(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
            if (c.vec == neg) return true;
        }
        return false;
    };
    for (const auto& c : default_generators(surf))
        if (!has(c.vec)) return false;
    return true;
}

void greedy_phase(Reducer& red, const std::vector<CurveClass>& gens) {
    const IntMat id = IntMat::identity(red.cur.n);
    auto dist = [&](const IntMat& m) {
        Int t = 0;
        for (std::size_t i = 0; i < m.a.size(); ++i) {
            Int d = m.a[i] - id.a[i];
            t += d * d;
        }
        return t;
    };
    Int cur = dist(red.cur);
    for (int step = 0; step < 600 && !(red.cur == id); ++step) {
        Int best = cur;
        const CurveClass* bc = nullptr;
        int bs = 0;
        for (const auto& c : gens)
            for (int s : {1, -1}) {
                IntMat trial = red.cur;
                apply_transvection(trial, c.vec, s);
                Int d = dist(trial);
                if (d < best) {
                    best = d;
                    bc = &c;
                    bs = s;
                }
            }
        if (!bc) break;
        red.apply(*bc, bs);
        cur = best;
    }
}

} // namespace

TwistWord factor_symplectic(const IntMat& M, const std::vector<CurveClass>& generators,
                            bool positive_only) {
    if (M.n == 0 || M.n % 2 != 0)
        throw Error(ErrorKind::precondition, "matrix size is not 2g");
    SurfaceModel surf =
        generators.empty() ? SurfaceModel{static_cast<int>(M.n / 2), {}} : generators[0].surface;
    if (surf.dim() != M.n)
        throw Error(ErrorKind::precondition, "generator surface does not match the matrix");
    if (!is_symplectic(M))
        throw Error(ErrorKind::precondition, "matrix does not preserve the symplectic form");
    std::vector<CurveClass> gens = generators.empty() ? default_generators(surf) : generators;
    for (const auto& c : gens) {
        check_same_surface(surf, c.surface);
        check_dim(surf, c.vec);
    }

    Reducer red{surf, M, {}};
    greedy_phase(red, gens);
    if (!(red.cur == IntMat::identity(M.n))) {
        if (!contains_default_generators(gens, surf))
            throw Error(ErrorKind::validation,
                        "bounded search failed and the generator set does not contain the "
                        "standard spanning classes");
        const int g = surf.genus;
        for (int h = 0; h < g; ++h) {
            reduce_first_column(red, h, g);
            reduce_second_column(red, h, g);
        }
        if (!(red.cur == IntMat::identity(M.n)))
            throw Error(ErrorKind::internal, "column reduction did not reach the identity");
    }

    TwistWord w{surf, {}};
    w.letters.reserve(red.applied.size());
    for (const auto& l : red.applied) w.letters.push_back({l.curve, -l.sign});
    if (!(word_action(w) == M))
        throw Error(ErrorKind::internal, "factorization round trip failed");
    if (positive_only) w = positivize_word(w);
    return w;
}

} // namespace ptsys::mcg
