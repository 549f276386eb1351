#include "ptsys/closure.hpp"

#include <algorithm>
#include <sstream>

namespace ptsys::closure {

using mcg::IntMat;

namespace {

bool mat_is_identity(const IntMat& m) { return m == IntMat::identity(m.n); }

std::string vec_key(const std::vector<Int>& v) {
    std::ostringstream os;
    for (const Int& x : v) os << x << ',';
    return os.str();
}

std::string mat_key(const IntMat& m) {
    std::ostringstream os;
    os << m.n << ':';
    for (const Int& x : m.a) os << x << ',';
    return os.str();
}

std::string word_key(const mcg::TwistWord& w) {
    std::ostringstream os;
    for (const auto& l : w.letters) os << vec_key(l.curve.vec) << ';' << l.sign << '|';
    return os.str();
}

std::string closure_key(const ClosureDescriptor& d) {
    std::ostringstream os;
    os << d.id << '\n'
       << d.genus << '\n'
       << d.complement_tag << '\n'
       << (d.surface.marked_point ? *d.surface.marked_point : std::string("-")) << '\n'
       << vec_key(d.eta.vec) << '\n'
       << (d.odd ? 1 : 0);
    return os.str();
}

std::string cut_key(const CutData& cd) {
    std::ostringstream os;
    os << closure_key(cd.parent) << '\n'
       << vec_key(cd.c1.vec) << '\n'
       << vec_key(cd.delta.vec) << '\n';
    for (const auto& col : cd.child_basis) os << vec_key(col) << '|';
    return os.str();
}

// ---------------------------------------------------------------------------
// Internal rewrite letters. A Seg is the canonical same-genus segment: the
// complement word together with the two boundary identifications; everything
// else about a handle+Theta run is recoverable from these.

struct Seg {
    ClosureDescriptor src, tgt;
    FreeWord w;
    IntMat phi_plus, phi_minus;
};

struct Spl {
    bool merge = true;
    CutData cd;
    ClosureDescriptor src, tgt;
};

struct Xl {
    ClosureDescriptor at;
    std::string label;
    int exp = 1;
};

using RLetter = std::variant<Seg, Spl, Xl>;

// The canonical choice of psi for a segment maps eta_src to the phi_minus
// preimage of eta_tgt through the deterministic basis completion; the
// displayed homology action is then psi-independent.
IntMat segment_action(const Seg& s) {
    std::vector<Int> pre = mcg::mat_apply(mcg::sp_inverse(s.phi_minus), s.tgt.eta.vec);
    IntMat psi = mcg::map_primitive(s.src.surface, s.src.eta.vec, pre);
    return mcg::mat_mul(s.phi_minus, psi);
}

Seg recover_segment(const ElementaryMorphism& hm, const ElementaryMorphism& hp,
                    const ElementaryMorphism& th) {
    const auto& pm = std::get<HandlePayload>(hm.payload);
    const auto& pp = std::get<HandlePayload>(hp.payload);
    const auto& pt = std::get<ThetaPayload>(th.payload);
    IntMat b_act = mcg::word_action(pm.word);
    IntMat a_act = mcg::word_action(pp.word);
    IntMat phi_minus = mcg::mat_mul(pt.action, b_act);
    IntMat phi_c = mcg::mat_mul(a_act, b_act);
    IntMat phi_plus = mcg::mat_mul(phi_minus, mcg::sp_inverse(phi_c));
    return Seg{hm.source, th.target, pt.complement_map, phi_plus, phi_minus};
}

Seg segment_from_theta(const ElementaryMorphism& th) {
    const auto& p = std::get<ThetaPayload>(th.payload);
    if (p.phi_plus && p.phi_minus)
        return Seg{th.source, th.target, p.complement_map, *p.phi_plus, *p.phi_minus};
    return Seg{th.source, th.target, p.complement_map, p.action, p.action};
}

std::vector<Int> basis_coords(const std::vector<std::vector<Int>>& basis,
                              const std::vector<Int>& v) {
    const std::size_t m = basis.size();
    std::vector<Int> p(m);
    for (std::size_t k = 0; k < m; ++k) p[k] = mcg::intersection_vec(basis[k], v);
    // y = J^{-1} p = -J p on interleaved coordinates
    std::vector<Int> y(m);
    for (std::size_t i = 0; i + 1 < m; i += 2) {
        y[i] = -p[i + 1];
        y[i + 1] = p[i];
    }
    // check B y = v holds inside the complement
    std::vector<Int> back(basis.empty() ? 0 : basis[0].size(), Int(0));
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < back.size(); ++i) back[i] += basis[k][i] * y[k];
    if (back != v)
        throw Error(ErrorKind::internal, "vector does not lie in the child lattice");
    return y;
}

// Coordinate change of a cut-preserving symplectic map to the child bases.
IntMat restrict_matrix(const IntMat& m, const CutData& from, const CutData& to) {
    const std::size_t nc = from.child_basis.size();
    IntMat out;
    out.n = nc;
    out.a.assign(nc * nc, Int(0));
    for (std::size_t col = 0; col < nc; ++col) {
        std::vector<Int> img = mcg::mat_apply(m, from.child_basis[col]);
        std::vector<Int> y = basis_coords(to.child_basis, img);
        for (std::size_t r = 0; r < nc; ++r) out.at(r, col) = y[r];
    }
    if (!mcg::is_symplectic(out))
        throw Error(ErrorKind::internal, "restricted map is not symplectic");
    return out;
}

std::vector<Int> child_eta_vec(const CutData& cd) {
    const std::vector<Int>& eta = cd.parent.eta.vec;
    Int ed = mcg::intersection_vec(eta, cd.delta.vec);
    Int ec = mcg::intersection_vec(eta, cd.c1.vec);
    std::vector<Int> pi(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i)
        pi[i] = eta[i] - ed * cd.c1.vec[i] + ec * cd.delta.vec[i];
    return basis_coords(cd.child_basis, pi);
}

} // namespace

// ---------------------------------------------------------------------------
// Free groupoid words.

FreeWord fw_reduce(std::vector<FreeLetter> letters) {
    FreeWord out;
    for (auto& l : letters) {
        if (l.exp != 1 && l.exp != -1)
            throw Error(ErrorKind::precondition, "tag letter exponent must be +-1");
        if (l.label.empty())
            throw Error(ErrorKind::precondition, "tag letter label must be nonempty");
        if (!out.letters.empty() && out.letters.back().label == l.label &&
            out.letters.back().exp == -l.exp)
            out.letters.pop_back();
        else
            out.letters.push_back(std::move(l));
    }
    return out;
}

FreeWord FreeWord::gen(const std::string& label, int exp) { return fw_reduce({{label, exp}}); }

FreeWord fw_then(const FreeWord& first, const FreeWord& second) {
    std::vector<FreeLetter> all = first.letters;
    all.insert(all.end(), second.letters.begin(), second.letters.end());
    return fw_reduce(std::move(all));
}

FreeWord fw_inverse(const FreeWord& w) {
    std::vector<FreeLetter> rev;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        rev.push_back({it->label, -it->exp});
    return fw_reduce(std::move(rev));
}

bool fw_equal(const FreeWord& x, const FreeWord& y) { return x.letters == y.letters; }

bool fw_is_identity(const FreeWord& w) { return w.letters.empty(); }

std::string fw_to_string(const FreeWord& w) {
    if (w.letters.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) out += '.';
        out += w.letters[i].label;
        if (w.letters[i].exp == -1) out += "^-1";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Closures.

void validate_closure(const ClosureDescriptor& d) {
    if (d.id.empty()) throw Error(ErrorKind::validation, "closure id must be nonempty");
    if (d.complement_tag.empty())
        throw Error(ErrorKind::validation, "closure complement tag must be nonempty");
    if (d.genus < 2)
        throw Error(ErrorKind::validation, "closure genus must be at least 2");
    if (d.surface.genus != d.genus)
        throw Error(ErrorKind::validation, "closure surface genus does not match the record");
    if (d.odd != d.surface.marked_point.has_value())
        throw Error(ErrorKind::validation,
                    d.odd ? "odd closure record without a marked point"
                          : "marked point on an even closure record");
    if (d.eta.vec.size() != d.surface.dim())
        throw Error(ErrorKind::validation, "marking curve does not live on the surface");
    if (!mcg::is_primitive(d.eta.vec))
        throw Error(ErrorKind::validation, "marking curve class must be primitive");
}

bool closure_equal(const ClosureDescriptor& x, const ClosureDescriptor& y) {
    return x.id == y.id && x.genus == y.genus && x.complement_tag == y.complement_tag &&
           x.surface == y.surface && x.eta.vec == y.eta.vec && x.odd == y.odd;
}

std::uint64_t closure_hash(const ClosureDescriptor& d) { return fnv1a(closure_key(d)); }

// ---------------------------------------------------------------------------
// Gluing data.

mcg::IntMat gluing_phi(const GluingData& g) {
    return mcg::mat_mul(mcg::sp_inverse(g.phi_plus), g.phi_minus);
}

void validate_gluing(const GluingData& g) {
    validate_closure(g.source);
    validate_closure(g.target);
    if (g.source.genus != g.target.genus)
        throw Error(ErrorKind::validation, "gluing endpoints have different genus");
    if (g.source.odd != g.target.odd)
        throw Error(ErrorKind::validation, "gluing endpoints disagree about the marked point");
    const std::size_t n = g.source.surface.dim();
    for (const IntMat* m : {&g.phi_minus, &g.phi_plus, &g.psi}) {
        if (m->n != n)
            throw Error(ErrorKind::validation, "gluing matrix has the wrong size");
        if (!mcg::is_symplectic(*m))
            throw Error(ErrorKind::validation, "gluing matrix is not symplectic");
    }
    std::vector<Int> img =
        mcg::mat_apply(mcg::mat_mul(g.phi_minus, g.psi), g.source.eta.vec);
    if (img != g.target.eta.vec)
        throw Error(ErrorKind::validation,
                    "gluing does not carry the marking curve to the target marking");
}

bool is_identity_gluing(const GluingData& g) {
    return closure_equal(g.source, g.target) && fw_is_identity(g.complement_map) &&
           mat_is_identity(g.phi_minus) && mat_is_identity(g.phi_plus) &&
           mat_is_identity(g.psi);
}

GluingData identity_gluing(const ClosureDescriptor& d) {
    validate_closure(d);
    IntMat id = IntMat::identity(d.surface.dim());
    GluingData g{d, d, {}, id, id, id};
    validate_gluing(g);
    return g;
}

GluingData make_gluing(const ClosureDescriptor& src, const ClosureDescriptor& tgt,
                       const FreeWord& complement_map, const mcg::IntMat& phi_plus,
                       const mcg::IntMat& phi_minus) {
    std::vector<Int> pre = mcg::mat_apply(mcg::sp_inverse(phi_minus), tgt.eta.vec);
    IntMat psi = mcg::map_primitive(src.surface, src.eta.vec, pre);
    GluingData g{src, tgt, fw_reduce(complement_map.letters), phi_minus, phi_plus, psi};
    validate_gluing(g);
    return g;
}

GluingData inverse_gluing(const GluingData& g) {
    validate_gluing(g);
    IntMat mp = mcg::sp_inverse(g.phi_minus);
    GluingData out{g.target,
                   g.source,
                   fw_inverse(g.complement_map),
                   mp,
                   mcg::sp_inverse(g.phi_plus),
                   mcg::mat_mul(g.phi_minus, mcg::mat_mul(mcg::sp_inverse(g.psi), mp))};
    validate_gluing(out);
    return out;
}

GluingData compose_gluings(const GluingData& first, const GluingData& second) {
    validate_gluing(first);
    validate_gluing(second);
    if (!closure_equal(first.target, second.source))
        throw Error(ErrorKind::precondition, "gluings do not chain");
    IntMat phi_minus = mcg::mat_mul(second.phi_minus, first.phi_minus);
    IntMat m_total = mcg::mat_mul(mcg::mat_mul(second.phi_minus, second.psi),
                                  mcg::mat_mul(first.phi_minus, first.psi));
    GluingData out{first.source,
                   second.target,
                   fw_then(first.complement_map, second.complement_map),
                   phi_minus,
                   mcg::mat_mul(second.phi_plus, first.phi_plus),
                   mcg::mat_mul(mcg::sp_inverse(phi_minus), m_total)};
    validate_gluing(out);
    return out;
}

// ---------------------------------------------------------------------------
// Cut data.

CutData make_cut_data(const ClosureDescriptor& parent, const mcg::CurveClass& c1,
                      const mcg::CurveClass& delta) {
    IntMat basis = mcg::symplectic_basis_through_pair(parent.surface, c1.vec, delta.vec);
    std::vector<std::vector<Int>> cols;
    for (std::size_t c = 2; c < basis.n; ++c) {
        std::vector<Int> col(basis.n);
        for (std::size_t r = 0; r < basis.n; ++r) col[r] = basis.at(r, c);
        cols.push_back(std::move(col));
    }
    std::vector<Int> neg(c1.vec.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -c1.vec[i];
    CutData cd{parent,
               c1,
               mcg::CurveClass{parent.surface, std::move(neg), "-" + c1.name},
               delta,
               std::move(cols)};
    validate_cut(cd);
    return cd;
}

void validate_cut(const CutData& cd) {
    validate_closure(cd.parent);
    if (cd.parent.genus < 3)
        throw Error(ErrorKind::validation, "cut parent must have genus at least 3");
    const std::size_t n = cd.parent.surface.dim();
    if (cd.c1.vec.size() != n || cd.c2.vec.size() != n || cd.delta.vec.size() != n)
        throw Error(ErrorKind::validation, "cut curves do not live on the parent surface");
    if (!mcg::is_primitive(cd.c1.vec))
        throw Error(ErrorKind::validation, "cutting curve class must be primitive");
    for (std::size_t i = 0; i < n; ++i)
        if (cd.c2.vec[i] != -cd.c1.vec[i])
            throw Error(ErrorKind::validation, "cutting curves are not opposite in homology");
    Int pairing = mcg::intersection_vec(cd.parent.eta.vec, cd.c1.vec);
    if (pairing != 1 && pairing != -1)
        throw Error(ErrorKind::validation,
                    "marking curve must meet the cutting torus exactly once");
    if (mcg::intersection_vec(cd.c1.vec, cd.delta.vec) != 1)
        throw Error(ErrorKind::validation, "delta must pair to 1 with the cutting curve");
    if (cd.child_basis.size() != n - 2)
        throw Error(ErrorKind::validation, "child basis has the wrong number of columns");
    IntMat assembled;
    assembled.n = n;
    assembled.a.assign(n * n, Int(0));
    for (std::size_t r = 0; r < n; ++r) {
        assembled.at(r, 0) = cd.c1.vec[r];
        assembled.at(r, 1) = cd.delta.vec[r];
    }
    for (std::size_t c = 0; c < cd.child_basis.size(); ++c) {
        if (cd.child_basis[c].size() != n)
            throw Error(ErrorKind::validation, "child basis column has the wrong length");
        for (std::size_t r = 0; r < n; ++r) assembled.at(r, c + 2) = cd.child_basis[c][r];
    }
    if (!mcg::is_symplectic(assembled))
        throw Error(ErrorKind::validation,
                    "cut data does not assemble into a symplectic basis");
    if (!mcg::is_primitive(child_eta_vec(cd)))
        throw Error(ErrorKind::validation,
                    "induced marking on the cut-open surface is not primitive");
}

bool cut_equal(const CutData& x, const CutData& y) {
    return closure_equal(x.parent, y.parent) && x.c1.vec == y.c1.vec &&
           x.c2.vec == y.c2.vec && x.delta.vec == y.delta.vec &&
           x.child_basis == y.child_basis;
}

std::uint64_t cut_hash(const CutData& cd) { return fnv1a(cut_key(cd)); }

ClosureDescriptor cut_open(const CutData& cd) {
    validate_cut(cd);
    ClosureDescriptor child;
    child.genus = cd.parent.genus - 1;
    child.id = "cut:" + hash_hex(cut_key(cd));
    child.complement_tag = cd.parent.complement_tag;
    child.surface = mcg::SurfaceModel{child.genus, cd.parent.surface.marked_point};
    child.eta = mcg::CurveClass{child.surface, child_eta_vec(cd), cd.parent.eta.name};
    child.odd = cd.parent.odd;
    validate_closure(child);
    return child;
}

// ---------------------------------------------------------------------------
// Letters and words.

std::string to_string(LetterKind k) {
    switch (k) {
        case LetterKind::HandleMinus: return "handle-minus";
        case LetterKind::HandlePlus: return "handle-plus";
        case LetterKind::Theta: return "theta";
        case LetterKind::SpliceMerge: return "splice-merge";
        case LetterKind::SpliceSplit: return "splice-split";
        case LetterKind::XiMerge: return "xi";
        case LetterKind::UnitScalar: return "unit";
    }
    throw Error(ErrorKind::internal, "bad letter kind");
}

ElementaryMorphism make_theta(const ClosureDescriptor& src, const ClosureDescriptor& tgt,
                              const FreeWord& complement_map, const mcg::IntMat& action) {
    ElementaryMorphism m;
    m.kind = LetterKind::Theta;
    m.source = src;
    m.target = tgt;
    m.payload = ThetaPayload{fw_reduce(complement_map.letters), action, {}, {}};
    return m;
}

ElementaryMorphism make_splice_merge(const CutData& cd) {
    ElementaryMorphism m;
    m.kind = LetterKind::SpliceMerge;
    m.source = cut_open(cd);
    m.target = cd.parent;
    m.payload = SplicePayload{cd};
    return m;
}

ElementaryMorphism make_splice_split(const CutData& cd) {
    ElementaryMorphism m;
    m.kind = LetterKind::SpliceSplit;
    m.source = cd.parent;
    m.target = cut_open(cd);
    m.payload = SplicePayload{cd};
    return m;
}

ElementaryMorphism make_xi(const ClosureDescriptor& at, const std::string& label, int exp) {
    if (exp != 1 && exp != -1)
        throw Error(ErrorKind::precondition, "comparison letter exponent must be +-1");
    if (label.empty())
        throw Error(ErrorKind::precondition, "comparison letter label must be nonempty");
    ElementaryMorphism m;
    m.kind = LetterKind::XiMerge;
    m.source = at;
    m.target = at;
    m.payload = XiPayload{label, exp};
    return m;
}

ElementaryMorphism make_unit(const ClosureDescriptor& at, const RingElem& value) {
    if (!ring_is_unit(value))
        throw Error(ErrorKind::precondition, "scalar letter must carry a unit");
    ElementaryMorphism m;
    m.kind = LetterKind::UnitScalar;
    m.source = at;
    m.target = at;
    m.payload = UnitPayload{value};
    return m;
}

MorphismWord identity_word(const ClosureDescriptor& d) {
    validate_closure(d);
    return MorphismWord{d, d, {}};
}

void validate_word(const MorphismWord& w) {
    validate_closure(w.source);
    validate_closure(w.target);
    if (w.letters.empty()) {
        if (!closure_equal(w.source, w.target))
            throw Error(ErrorKind::validation,
                        "empty word must have equal source and target");
        return;
    }
    if (!closure_equal(w.letters.front().source, w.source))
        throw Error(ErrorKind::validation, "first letter does not start at the source");
    if (!closure_equal(w.letters.back().target, w.target))
        throw Error(ErrorKind::validation, "last letter does not end at the target");
    for (std::size_t i = 0; i + 1 < w.letters.size(); ++i)
        if (!closure_equal(w.letters[i].target, w.letters[i + 1].source))
            throw Error(ErrorKind::validation, "letter endpoints do not chain");

    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        const ElementaryMorphism& l = w.letters[i];
        validate_closure(l.source);
        validate_closure(l.target);
        switch (l.kind) {
            case LetterKind::HandleMinus: {
                const auto& p = std::get<HandlePayload>(l.payload);
                if (!p.inverse_marked)
                    throw Error(ErrorKind::validation,
                                "undoing handle letter must be marked as inverse");
                if (i + 2 >= w.letters.size() ||
                    w.letters[i + 1].kind != LetterKind::HandlePlus ||
                    w.letters[i + 2].kind != LetterKind::Theta)
                    throw Error(ErrorKind::validation,
                                "handle letters must form an undo/redo/theta run");
                validate_surgery(p.surgery);
                break;
            }
            case LetterKind::HandlePlus: {
                const auto& p = std::get<HandlePayload>(l.payload);
                if (p.inverse_marked)
                    throw Error(ErrorKind::validation,
                                "attaching handle letter must not be marked as inverse");
                if (i == 0 || w.letters[i - 1].kind != LetterKind::HandleMinus)
                    throw Error(ErrorKind::validation,
                                "handle letters must form an undo/redo/theta run");
                validate_surgery(p.surgery);
                break;
            }
            case LetterKind::Theta: {
                const auto& p = std::get<ThetaPayload>(l.payload);
                if (l.source.genus != l.target.genus)
                    throw Error(ErrorKind::validation,
                                "theta letter endpoints have different genus");
                if (p.action.n != l.source.surface.dim() || !mcg::is_symplectic(p.action))
                    throw Error(ErrorKind::validation,
                                "theta action must be symplectic of the right size");
                if (p.phi_plus.has_value() != p.phi_minus.has_value())
                    throw Error(ErrorKind::validation,
                                "theta letter must carry both boundary maps or neither");
                if (p.phi_plus) {
                    for (const IntMat* m : {&*p.phi_plus, &*p.phi_minus})
                        if (m->n != p.action.n || !mcg::is_symplectic(*m))
                            throw Error(ErrorKind::validation,
                                        "theta boundary map must be symplectic");
                }
                if (mcg::mat_apply(p.action, l.source.eta.vec) != l.target.eta.vec)
                    throw Error(ErrorKind::validation,
                                "theta action does not carry the marking curve");
                break;
            }
            case LetterKind::SpliceMerge: {
                const auto& p = std::get<SplicePayload>(l.payload);
                validate_cut(p.cut);
                if (!closure_equal(l.source, cut_open(p.cut)) ||
                    !closure_equal(l.target, p.cut.parent))
                    throw Error(ErrorKind::validation,
                                "splice-merge endpoints do not match its cut data");
                break;
            }
            case LetterKind::SpliceSplit: {
                const auto& p = std::get<SplicePayload>(l.payload);
                validate_cut(p.cut);
                if (!closure_equal(l.source, p.cut.parent) ||
                    !closure_equal(l.target, cut_open(p.cut)))
                    throw Error(ErrorKind::validation,
                                "splice-split endpoints do not match its cut data");
                break;
            }
            case LetterKind::XiMerge: {
                const auto& p = std::get<XiPayload>(l.payload);
                if (!closure_equal(l.source, l.target))
                    throw Error(ErrorKind::validation, "comparison letter must be an endo");
                if ((p.exp != 1 && p.exp != -1) || p.label.empty())
                    throw Error(ErrorKind::validation, "malformed comparison letter");
                break;
            }
            case LetterKind::UnitScalar: {
                const auto& p = std::get<UnitPayload>(l.payload);
                if (!closure_equal(l.source, l.target))
                    throw Error(ErrorKind::validation, "scalar letter must be an endo");
                if (!ring_is_unit(p.value))
                    throw Error(ErrorKind::validation, "scalar letter must carry a unit");
                break;
            }
        }
    }
}

MorphismWord concat(const MorphismWord& first, const MorphismWord& second) {
    if (!closure_equal(first.target, second.source))
        throw Error(ErrorKind::precondition, "words do not chain");
    MorphismWord out{first.source, second.target, first.letters};
    out.letters.insert(out.letters.end(), second.letters.begin(), second.letters.end());
    return out;
}

// ---------------------------------------------------------------------------
// Comparison-morphism constructors.

mcg::TwistWord eliminate_negative_twists(const mcg::TwistWord& w) {
    return mcg::positivize_word(w);
}

MorphismWord psi_same_genus(const ClosureDescriptor& d, const ClosureDescriptor& dp,
                            const GluingData& g, bool positive_twists) {
    if (!closure_equal(g.source, d) || !closure_equal(g.target, dp))
        throw Error(ErrorKind::validation, "gluing endpoints do not match the closures");
    validate_gluing(g);

    IntMat a_mat = mcg::mat_mul(gluing_phi(g), g.psi);
    IntMat b_mat = mcg::sp_inverse(g.psi);
    std::vector<mcg::CurveClass> gens = mcg::default_generators(d.surface);
    mcg::TwistWord aw = mcg::factor_symplectic(a_mat, gens, positive_twists);
    mcg::TwistWord bw = mcg::factor_symplectic(b_mat, gens, positive_twists);
    build_surgery_two_part(aw, bw); // joint height list must validate
    SurgeryPresentation sa = build_surgery(aw);
    SurgeryPresentation sb = build_surgery_two_part({d.surface, {}}, bw);

    ClosureDescriptor m1 = d;
    m1.id = d.id + "|xm:" + hash_hex(word_key(bw));
    ClosureDescriptor m2 = d;
    m2.id = d.id + "|xp:" + hash_hex(word_key(aw));

    ElementaryMorphism hm;
    hm.kind = LetterKind::HandleMinus;
    hm.source = d;
    hm.target = m1;
    hm.payload = HandlePayload{bw, sb, true};

    ElementaryMorphism hp;
    hp.kind = LetterKind::HandlePlus;
    hp.source = m1;
    hp.target = m2;
    hp.payload = HandlePayload{aw, sa, false};

    ElementaryMorphism th =
        make_theta(m2, dp, g.complement_map, mcg::mat_mul(g.phi_minus, g.psi));

    MorphismWord out{d, dp, {hm, hp, th}};
    validate_word(out);
    return out;
}

MorphismWord psi_genus_step(const ClosureDescriptor& dg, const ClosureDescriptor& dg1,
                            const CutData& cd, const GluingData& leg1,
                            const GluingData& leg2) {
    if (dg.genus + 1 != dg1.genus)
        throw Error(ErrorKind::validation, "genus step must raise the genus by one");
    if (cd.parent.genus != dg1.genus)
        throw Error(ErrorKind::validation, "cut parent genus does not match the target");
    ClosureDescriptor child = cut_open(cd);

    MorphismWord out{dg, dg1, {}};
    if (!(is_identity_gluing(leg1) && closure_equal(dg, child))) {
        MorphismWord leg = psi_same_genus(dg, child, leg1);
        out.letters.insert(out.letters.end(), leg.letters.begin(), leg.letters.end());
    }
    out.letters.push_back(make_splice_merge(cd));
    if (!(is_identity_gluing(leg2) && closure_equal(cd.parent, dg1))) {
        MorphismWord leg = psi_same_genus(cd.parent, dg1, leg2);
        out.letters.insert(out.letters.end(), leg.letters.begin(), leg.letters.end());
    }
    validate_word(out);
    return out;
}

MorphismWord psi_genus_step_down(const ClosureDescriptor& dg1, const ClosureDescriptor& dg,
                                 const CutData& cd, const GluingData& leg1,
                                 const GluingData& leg2) {
    if (dg1.genus != dg.genus + 1)
        throw Error(ErrorKind::validation, "genus step must lower the genus by one");
    if (cd.parent.genus != dg1.genus)
        throw Error(ErrorKind::validation, "cut parent genus does not match the source");
    ClosureDescriptor child = cut_open(cd);

    MorphismWord out{dg1, dg, {}};
    if (!(is_identity_gluing(leg1) && closure_equal(dg1, cd.parent))) {
        MorphismWord leg = psi_same_genus(dg1, cd.parent, leg1);
        out.letters.insert(out.letters.end(), leg.letters.begin(), leg.letters.end());
    }
    out.letters.push_back(make_splice_split(cd));
    if (!(is_identity_gluing(leg2) && closure_equal(child, dg))) {
        MorphismWord leg = psi_same_genus(child, dg, leg2);
        out.letters.insert(out.letters.end(), leg.letters.begin(), leg.letters.end());
    }
    validate_word(out);
    return out;
}

MorphismWord psi_general(const ClosureDescriptor& d, const ClosureDescriptor& dp,
                         const std::vector<PathStep>& path) {
    validate_closure(d);
    validate_closure(dp);
    MorphismWord out{d, d, {}};
    ClosureDescriptor cur = d;
    for (const PathStep& s : path) {
        MorphismWord piece{cur, s.target, {}};
        switch (s.kind) {
            case PathStep::Kind::Same:
                if (s.target.genus != cur.genus)
                    throw Error(ErrorKind::validation, "genus gap without cut data");
                if (!s.gluing)
                    throw Error(ErrorKind::validation, "same-genus step without gluing data");
                piece = psi_same_genus(cur, s.target, *s.gluing);
                break;
            case PathStep::Kind::Up:
                if (!s.cut || !s.leg1 || !s.leg2)
                    throw Error(ErrorKind::validation, "genus step without cut data");
                piece = psi_genus_step(cur, s.target, *s.cut, *s.leg1, *s.leg2);
                break;
            case PathStep::Kind::Down:
                if (!s.cut || !s.leg1 || !s.leg2)
                    throw Error(ErrorKind::validation, "genus step without cut data");
                piece = psi_genus_step_down(cur, s.target, *s.cut, *s.leg1, *s.leg2);
                break;
        }
        out.letters.insert(out.letters.end(), piece.letters.begin(), piece.letters.end());
        cur = s.target;
    }
    if (!closure_equal(cur, dp))
        throw Error(ErrorKind::validation, "path does not end at the stated target");
    out.target = dp;
    validate_word(out);
    return out;
}

// ---------------------------------------------------------------------------
// Diffeomorphism tags.

DiffeoTag identity_diffeo(const ClosureDescriptor& d) {
    return DiffeoTag{{}, IntMat::identity(d.surface.dim())};
}

DiffeoTag compose_diffeos(const DiffeoTag& first, const DiffeoTag& second) {
    return DiffeoTag{fw_then(first.word, second.word),
                     mcg::mat_mul(second.action, first.action)};
}

ClosureDescriptor twist_closure(const ClosureDescriptor& d, const DiffeoTag& f) {
    validate_closure(d);
    if (f.action.n != d.surface.dim() || !mcg::is_symplectic(f.action))
        throw Error(ErrorKind::precondition, "diffeomorphism action must be symplectic");
    if (fw_is_identity(f.word) && mat_is_identity(f.action)) return d;
    ClosureDescriptor out = d;
    out.id = d.id + "@" + fw_to_string(f.word);
    out.eta.vec = mcg::mat_apply(mcg::sp_inverse(f.action), d.eta.vec);
    validate_closure(out);
    return out;
}

MorphismWord diffeo_map(const DiffeoTag& f, const ClosureDescriptor& d,
                        const ClosureDescriptor& dp, const GluingData& g) {
    if (!closure_equal(g.source, d) || !closure_equal(g.target, dp))
        throw Error(ErrorKind::precondition, "gluing endpoints do not match the given closures");
    if (fw_is_identity(f.word) && mat_is_identity(f.action))
        return psi_same_genus(d, dp, g);
    ClosureDescriptor dpf = twist_closure(dp, f);
    IntMat ainv = mcg::sp_inverse(f.action);
    GluingData gf{d,
                  dpf,
                  g.complement_map,
                  mcg::mat_mul(ainv, g.phi_minus),
                  mcg::mat_mul(ainv, g.phi_plus),
                  g.psi};
    MorphismWord out = psi_same_genus(d, dpf, gf);
    ElementaryMorphism th = make_theta(dpf, dp, f.word, f.action);
    out.letters.push_back(th);
    out.target = dp;
    validate_word(out);
    return out;
}

// ---------------------------------------------------------------------------
// Rewriting.

namespace {

constexpr const char* kSegmentComposition = "segment-composition";
constexpr const char* kIdentitySegment = "identity-segment";
constexpr const char* kMergeSplitCancel = "merge-split-cancel";
constexpr const char* kXiCancel = "xi-cancel";
constexpr const char* kSpliceTransport = "splice-transport";
constexpr const char* kXiCommute = "xi-commute";
constexpr const char* kUnitAbsorption = "unit-absorption";

std::vector<RLetter> parse_letters(const MorphismWord& w, std::vector<std::string>* trace) {
    std::vector<RLetter> ls;
    const auto& raw = w.letters;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        switch (raw[i].kind) {
            case LetterKind::HandleMinus:
                ls.push_back(recover_segment(raw[i], raw[i + 1], raw[i + 2]));
                i += 2;
                break;
            case LetterKind::HandlePlus:
                throw Error(ErrorKind::validation,
                            "handle letters must form an undo/redo/theta run");
            case LetterKind::Theta:
                ls.push_back(segment_from_theta(raw[i]));
                break;
            case LetterKind::SpliceMerge: {
                const auto& p = std::get<SplicePayload>(raw[i].payload);
                ls.push_back(Spl{true, p.cut, raw[i].source, raw[i].target});
                break;
            }
            case LetterKind::SpliceSplit: {
                const auto& p = std::get<SplicePayload>(raw[i].payload);
                ls.push_back(Spl{false, p.cut, raw[i].source, raw[i].target});
                break;
            }
            case LetterKind::XiMerge: {
                const auto& p = std::get<XiPayload>(raw[i].payload);
                ls.push_back(Xl{raw[i].source, p.label, p.exp});
                break;
            }
            case LetterKind::UnitScalar:
                if (trace) trace->push_back(kUnitAbsorption);
                break;
        }
    }
    return ls;
}

ElementaryMorphism emit_letter(const RLetter& l) {
    if (const Seg* s = std::get_if<Seg>(&l)) {
        ElementaryMorphism m = make_theta(s->src, s->tgt, s->w, segment_action(*s));
        auto& p = std::get<ThetaPayload>(m.payload);
        p.phi_plus = s->phi_plus;
        p.phi_minus = s->phi_minus;
        return m;
    }
    if (const Spl* s = std::get_if<Spl>(&l))
        return s->merge ? make_splice_merge(s->cd) : make_splice_split(s->cd);
    const Xl& x = std::get<Xl>(l);
    return make_xi(x.at, x.label, x.exp);
}

MorphismWord emit_word(const ClosureDescriptor& src, const ClosureDescriptor& tgt,
                       const std::vector<RLetter>& ls) {
    MorphismWord out{src, tgt, {}};
    for (const RLetter& l : ls) out.letters.push_back(emit_letter(l));
    validate_word(out);
    return out;
}

bool is_identity_segment(const Seg& s) {
    return closure_equal(s.src, s.tgt) && fw_is_identity(s.w) &&
           mat_is_identity(s.phi_plus) && mat_is_identity(s.phi_minus);
}

// Forward transport of cut data through a segment whose boundary maps agree
// on the cut pair; fails (nullopt) when the images differ or do not define
// valid cut data on the far side.
std::optional<CutData> transport_cut(const Seg& s, const CutData& cd, bool forward) {
    IntMat mp = forward ? s.phi_plus : mcg::sp_inverse(s.phi_plus);
    IntMat mm = forward ? s.phi_minus : mcg::sp_inverse(s.phi_minus);
    std::vector<Int> c_img = mcg::mat_apply(mm, cd.c1.vec);
    if (mcg::mat_apply(mp, cd.c1.vec) != c_img) return std::nullopt;
    std::vector<Int> d_img = mcg::mat_apply(mm, cd.delta.vec);
    if (mcg::mat_apply(mp, cd.delta.vec) != d_img) return std::nullopt;
    const ClosureDescriptor& far = forward ? s.tgt : s.src;
    try {
        return make_cut_data(far, mcg::CurveClass{far.surface, c_img, cd.c1.name},
                             mcg::CurveClass{far.surface, d_img, cd.delta.name});
    } catch (const Error&) {
        return std::nullopt;
    }
}

enum class RuleKind {
    IdentitySegment,
    SegmentComposition,
    MergeSplitCancel,
    XiCancel,
    TransportMerge,
    TransportSplit,
    XiCommute
};

constexpr RuleKind kAllRules[] = {
    RuleKind::IdentitySegment, RuleKind::SegmentComposition, RuleKind::MergeSplitCancel,
    RuleKind::XiCancel,        RuleKind::TransportMerge,     RuleKind::TransportSplit,
    RuleKind::XiCommute};

const char* rule_label(RuleKind k) {
    switch (k) {
        case RuleKind::IdentitySegment: return kIdentitySegment;
        case RuleKind::SegmentComposition: return kSegmentComposition;
        case RuleKind::MergeSplitCancel: return kMergeSplitCancel;
        case RuleKind::XiCancel: return kXiCancel;
        case RuleKind::TransportMerge:
        case RuleKind::TransportSplit: return kSpliceTransport;
        case RuleKind::XiCommute: return kXiCommute;
    }
    throw Error(ErrorKind::internal, "bad rule kind");
}

bool apply_rule(std::vector<RLetter>& ls, std::size_t i, RuleKind k) {
    switch (k) {
        case RuleKind::IdentitySegment: {
            const Seg* s = std::get_if<Seg>(&ls[i]);
            if (!s || !is_identity_segment(*s)) return false;
            ls.erase(ls.begin() + static_cast<std::ptrdiff_t>(i));
            return true;
        }
        case RuleKind::SegmentComposition: {
            if (i + 1 >= ls.size()) return false;
            const Seg* a = std::get_if<Seg>(&ls[i]);
            const Seg* b = std::get_if<Seg>(&ls[i + 1]);
            if (!a || !b) return false;
            Seg merged{a->src, b->tgt, fw_then(a->w, b->w),
                       mcg::mat_mul(b->phi_plus, a->phi_plus),
                       mcg::mat_mul(b->phi_minus, a->phi_minus)};
            ls[i] = std::move(merged);
            ls.erase(ls.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            return true;
        }
        case RuleKind::MergeSplitCancel: {
            if (i + 1 >= ls.size()) return false;
            const Spl* a = std::get_if<Spl>(&ls[i]);
            const Spl* b = std::get_if<Spl>(&ls[i + 1]);
            if (!a || !b || a->merge == b->merge || !cut_equal(a->cd, b->cd)) return false;
            ls.erase(ls.begin() + static_cast<std::ptrdiff_t>(i),
                     ls.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            return true;
        }
        case RuleKind::XiCancel: {
            if (i + 1 >= ls.size()) return false;
            const Xl* a = std::get_if<Xl>(&ls[i]);
            const Xl* b = std::get_if<Xl>(&ls[i + 1]);
            if (!a || !b || a->label != b->label || a->exp + b->exp != 0) return false;
            ls.erase(ls.begin() + static_cast<std::ptrdiff_t>(i),
                     ls.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            return true;
        }
        case RuleKind::TransportMerge: {
            if (i + 1 >= ls.size()) return false;
            const Spl* a = std::get_if<Spl>(&ls[i]);
            const Seg* b = std::get_if<Seg>(&ls[i + 1]);
            if (!a || !b || !a->merge) return false;
            auto cd2 = transport_cut(*b, a->cd, true);
            if (!cd2) return false;
            ClosureDescriptor ch1 = a->src;
            ClosureDescriptor ch2 = cut_open(*cd2);
            Seg child{ch1, ch2, b->w, restrict_matrix(b->phi_plus, a->cd, *cd2),
                      restrict_matrix(b->phi_minus, a->cd, *cd2)};
            Spl moved{true, *cd2, ch2, b->tgt};
            ls[i] = std::move(child);
            ls[i + 1] = std::move(moved);
            return true;
        }
        case RuleKind::TransportSplit: {
            if (i + 1 >= ls.size()) return false;
            const Seg* a = std::get_if<Seg>(&ls[i]);
            const Spl* b = std::get_if<Spl>(&ls[i + 1]);
            if (!a || !b || b->merge) return false;
            auto cd0 = transport_cut(*a, b->cd, false);
            if (!cd0) return false;
            ClosureDescriptor ch0 = cut_open(*cd0);
            Seg child{ch0, b->tgt, a->w, restrict_matrix(a->phi_plus, *cd0, b->cd),
                      restrict_matrix(a->phi_minus, *cd0, b->cd)};
            Spl moved{false, *cd0, a->src, ch0};
            ls[i] = std::move(moved);
            ls[i + 1] = std::move(child);
            return true;
        }
        case RuleKind::XiCommute: {
            if (i + 1 >= ls.size()) return false;
            const Xl* a = std::get_if<Xl>(&ls[i]);
            if (!a || std::holds_alternative<Xl>(ls[i + 1])) return false;
            ClosureDescriptor far = std::holds_alternative<Seg>(ls[i + 1])
                                        ? std::get<Seg>(ls[i + 1]).tgt
                                        : std::get<Spl>(ls[i + 1]).tgt;
            Xl moved{far, a->label, a->exp};
            ls[i] = std::move(ls[i + 1]);
            ls[i + 1] = std::move(moved);
            return true;
        }
    }
    return false;
}

void run_engine(std::vector<RLetter>& ls, std::vector<std::string>* trace) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < ls.size() && !changed; ++i)
            for (RuleKind k : kAllRules) {
                if (!apply_rule(ls, i, k)) continue;
                if (trace) trace->push_back(rule_label(k));
                changed = true;
                break;
            }
    }
}

} // namespace

MorphismWord normal_form(const MorphismWord& w, RewriteTrace* trace) {
    validate_word(w);
    std::vector<std::string>* tr = trace ? &trace->rules : nullptr;
    std::vector<RLetter> ls = parse_letters(w, tr);
    run_engine(ls, tr);
    return emit_word(w.source, w.target, ls);
}

std::vector<MorphismWord> rewrite_candidates(const MorphismWord& w) {
    validate_word(w);
    std::vector<MorphismWord> out;

    bool has_units = false;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (w.letters[i].kind != LetterKind::UnitScalar) continue;
        has_units = true;
        MorphismWord c = w;
        c.letters.erase(c.letters.begin() + static_cast<std::ptrdiff_t>(i));
        out.push_back(std::move(c));
    }
    if (has_units) return out;

    std::vector<RLetter> base = parse_letters(w, nullptr);
    for (std::size_t i = 0; i < base.size(); ++i)
        for (RuleKind k : kAllRules) {
            std::vector<RLetter> copy = base;
            if (!apply_rule(copy, i, k)) continue;
            out.push_back(emit_word(w.source, w.target, copy));
        }
    return out;
}

bool letters_equal(const ElementaryMorphism& x, const ElementaryMorphism& y) {
    if (x.kind != y.kind || !closure_equal(x.source, y.source) ||
        !closure_equal(x.target, y.target))
        return false;
    switch (x.kind) {
        case LetterKind::HandleMinus:
        case LetterKind::HandlePlus: {
            const auto& a = std::get<HandlePayload>(x.payload);
            const auto& b = std::get<HandlePayload>(y.payload);
            if (a.inverse_marked != b.inverse_marked ||
                a.word.letters.size() != b.word.letters.size())
                return false;
            for (std::size_t i = 0; i < a.word.letters.size(); ++i)
                if (a.word.letters[i].curve.vec != b.word.letters[i].curve.vec ||
                    a.word.letters[i].sign != b.word.letters[i].sign)
                    return false;
            return true;
        }
        case LetterKind::Theta: {
            const auto& a = std::get<ThetaPayload>(x.payload);
            const auto& b = std::get<ThetaPayload>(y.payload);
            return fw_equal(a.complement_map, b.complement_map) && a.action == b.action;
        }
        case LetterKind::SpliceMerge:
        case LetterKind::SpliceSplit:
            return cut_equal(std::get<SplicePayload>(x.payload).cut,
                             std::get<SplicePayload>(y.payload).cut);
        case LetterKind::XiMerge: {
            const auto& a = std::get<XiPayload>(x.payload);
            const auto& b = std::get<XiPayload>(y.payload);
            return a.label == b.label && a.exp == b.exp;
        }
        case LetterKind::UnitScalar:
            return std::get<UnitPayload>(x.payload).value ==
                   std::get<UnitPayload>(y.payload).value;
    }
    return false;
}

bool words_equal(const MorphismWord& x, const MorphismWord& y) {
    if (!closure_equal(x.source, y.source) || !closure_equal(x.target, y.target))
        return false;
    if (x.letters.size() != y.letters.size()) return false;
    for (std::size_t i = 0; i < x.letters.size(); ++i)
        if (!letters_equal(x.letters[i], y.letters[i])) return false;
    return true;
}

CoherenceReport coherence_check(const MorphismWord& w1, const MorphismWord& w2) {
    if (!closure_equal(w1.source, w2.source) || !closure_equal(w1.target, w2.target))
        throw Error(ErrorKind::validation, "words do not share endpoints");
    CoherenceReport rep;
    RewriteTrace t1, t2;
    rep.nf1 = normal_form(w1, &t1);
    rep.nf2 = normal_form(w2, &t2);
    for (const auto& r : t1.rules)
        if (std::find(rep.rules_used.begin(), rep.rules_used.end(), r) == rep.rules_used.end())
            rep.rules_used.push_back(r);
    for (const auto& r : t2.rules)
        if (std::find(rep.rules_used.begin(), rep.rules_used.end(), r) == rep.rules_used.end())
            rep.rules_used.push_back(r);

    if (rep.nf1.letters.size() != rep.nf2.letters.size()) {
        rep.ok = false;
        rep.detail = "normal forms have " + std::to_string(rep.nf1.letters.size()) + " and " +
                     std::to_string(rep.nf2.letters.size()) + " letters";
        return rep;
    }
    for (std::size_t i = 0; i < rep.nf1.letters.size(); ++i) {
        if (letters_equal(rep.nf1.letters[i], rep.nf2.letters[i])) continue;
        rep.ok = false;
        rep.detail = "letter " + std::to_string(i) + " differs: " +
                     to_string(rep.nf1.letters[i].kind) + " vs " +
                     to_string(rep.nf2.letters[i].kind);
        return rep;
    }
    rep.ok = true;
    return rep;
}

MorphismWord inverse(const MorphismWord& w) {
    validate_word(w);
    MorphismWord out{w.target, w.source, {}};
    const auto& raw = w.letters;
    for (std::size_t j = raw.size(); j-- > 0;) {
        switch (raw[j].kind) {
            case LetterKind::Theta: {
                Seg s = (j >= 2 && raw[j - 1].kind == LetterKind::HandlePlus)
                            ? recover_segment(raw[j - 2], raw[j - 1], raw[j])
                            : segment_from_theta(raw[j]);
                if (j >= 2 && raw[j - 1].kind == LetterKind::HandlePlus) j -= 2;
                Seg inv{s.tgt, s.src, fw_inverse(s.w), mcg::sp_inverse(s.phi_plus),
                        mcg::sp_inverse(s.phi_minus)};
                out.letters.push_back(emit_letter(RLetter{inv}));
                break;
            }
            case LetterKind::HandleMinus:
            case LetterKind::HandlePlus:
                throw Error(ErrorKind::validation,
                            "handle letters must form an undo/redo/theta run");
            case LetterKind::SpliceMerge:
                out.letters.push_back(
                    make_splice_split(std::get<SplicePayload>(raw[j].payload).cut));
                break;
            case LetterKind::SpliceSplit:
                out.letters.push_back(
                    make_splice_merge(std::get<SplicePayload>(raw[j].payload).cut));
                break;
            case LetterKind::XiMerge: {
                const auto& p = std::get<XiPayload>(raw[j].payload);
                out.letters.push_back(make_xi(raw[j].source, p.label, -p.exp));
                break;
            }
            case LetterKind::UnitScalar: {
                const auto& p = std::get<UnitPayload>(raw[j].payload);
                out.letters.push_back(make_unit(raw[j].source, ring_unit_inverse(p.value)));
                break;
            }
        }
    }
    validate_word(out);
    return out;
}

} // namespace ptsys::closure
