#include "ptsys/gen.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ptsys::gen {

using closure::ClosureDescriptor;
using closure::CutData;
using closure::GluingData;
using closure::MorphismWord;
using mcg::IntMat;
using mcg::SurfaceModel;

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw Error(ErrorKind::precondition, "empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
    if (span == 0) return static_cast<std::int64_t>(raw()); // full width
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
    std::uint64_t x = raw();
    while (x >= limit) x = raw();
    return lo + static_cast<std::int64_t>(x % span);
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::precondition, "index into an empty set");
    return static_cast<std::size_t>(range(0, static_cast<std::int64_t>(n) - 1));
}

// ---------------------------------------------------------------------------
// Ring and module layer.

novikov::NovikovElement random_novikov(Rng& r, int max_terms, int max_denom, int max_abs) {
    std::vector<novikov::NovikovElement::Term> terms;
    int k = static_cast<int>(r.range(0, max_terms));
    for (int i = 0; i < k; ++i) {
        Int num(r.range(-12, 12));
        Int den(r.range(1, max_denom));
        Int coeff(r.range(-max_abs, max_abs));
        terms.emplace_back(make_rat(num, den), coeff);
    }
    return novikov::NovikovElement::from_terms(std::move(terms));
}

RingElem random_elem(Rng& r, RingKind k) {
    switch (k) {
        case RingKind::Integers: return RingElem::integers(Int(r.range(-9, 9)));
        case RingKind::IntegersMod2: return RingElem::mod2(static_cast<int>(r.range(0, 1)));
        case RingKind::RationalField:
            return RingElem::rationals(make_rat(Int(r.range(-9, 9)), Int(r.range(1, 9))));
        case RingKind::NovikovOverIntegers:
            return RingElem::novikov(random_novikov(r, 3, 6, 4));
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

RingElem random_unit(Rng& r, RingKind k) {
    switch (k) {
        case RingKind::Integers: return RingElem::integers(Int(r.coin() ? 1 : -1));
        case RingKind::IntegersMod2: return RingElem::mod2(1);
        case RingKind::RationalField: {
            Int num(r.range(1, 9));
            Int den(r.range(1, 9));
            Rat q = make_rat(num, den);
            if (r.coin()) q = -q;
            return RingElem::rationals(q);
        }
        case RingKind::NovikovOverIntegers: {
            Rat e = make_rat(Int(r.range(-6, 6)), Int(r.range(1, 4)));
            return RingElem::novikov(novikov::NovikovElement(e, Int(r.coin() ? 1 : -1)));
        }
    }
    throw Error(ErrorKind::internal, "bad ring kind");
}

modalg::Homomorphism random_hom(Rng& r, const modalg::FreeModule& src,
                                const modalg::FreeModule& tgt, int max_abs) {
    std::vector<RingElem> entries;
    entries.reserve(src.rank * tgt.rank);
    for (std::size_t i = 0; i < src.rank * tgt.rank; ++i) {
        if (src.ring.kind == RingKind::NovikovOverIntegers)
            entries.push_back(RingElem::novikov(random_novikov(r, 2, 4, max_abs)));
        else if (src.ring.kind == RingKind::RationalField)
            entries.push_back(
                RingElem::rationals(make_rat(Int(r.range(-max_abs, max_abs)), Int(r.range(1, 4)))));
        else if (src.ring.kind == RingKind::IntegersMod2)
            entries.push_back(RingElem::mod2(static_cast<int>(r.range(0, 1))));
        else
            entries.push_back(RingElem::integers(Int(r.range(-max_abs, max_abs))));
    }
    return modalg::make_hom(src, tgt, std::move(entries));
}

modalg::Homomorphism random_iso(Rng& r, const modalg::FreeModule& m, int steps) {
    modalg::Homomorphism f = modalg::identity_hom(m);
    if (m.rank == 0) return f;
    for (int s = 0; s < steps; ++s) {
        if (m.rank >= 2 && r.range(0, 3) != 0) {
            std::size_t i = r.index(m.rank);
            std::size_t j = r.index(m.rank);
            while (j == i) j = r.index(m.rank);
            RingElem c = ring_from_int(m.ring.kind, Int(r.range(-2, 2)));
            for (std::size_t k = 0; k < m.rank; ++k)
                f.at(i, k) = ring_add(f.at(i, k), ring_mul(c, f.at(j, k)));
        } else {
            std::size_t i = r.index(m.rank);
            for (std::size_t k = 0; k < m.rank; ++k) f.at(i, k) = ring_neg(f.at(i, k));
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Systems.

namespace {

RingElem unit_in_group(Rng& r, const RingSpec& spec) {
    switch (spec.unit_group) {
        case UnitGroup::Trivial: return ring_one(spec.kind);
        case UnitGroup::Signs:
            return r.coin() ? ring_one(spec.kind) : ring_neg(ring_one(spec.kind));
        case UnitGroup::FullUnits: return random_unit(r, spec.kind);
    }
    throw Error(ErrorKind::internal, "bad unit group");
}

} // namespace

systems::TransitiveSystem random_system(Rng& r, const RingSpec& spec,
                                        const std::vector<systems::Label>& indices,
                                        std::size_t rank, int steps) {
    systems::TransitiveSystem S;
    S.ring = spec;
    S.indices = indices;
    modalg::FreeModule mod{spec, rank};
    std::map<systems::Label, modalg::Homomorphism> V, Vinv;
    for (const auto& i : indices) {
        S.modules[i] = mod;
        V[i] = random_iso(r, mod, steps);
        Vinv[i] = systems::hom_inverse(V.at(i));
    }
    for (const auto& i : indices)
        for (const auto& j : indices) {
            modalg::Homomorphism rep = modalg::compose_hom(V.at(j), Vinv.at(i));
            rep = modalg::scale_hom(rep, unit_in_group(r, spec));
            S.maps[{i, j}] = modalg::GClassHom{std::move(rep), spec.unit_group};
        }
    return S;
}

systems::TransitiveSystem inject_defect(Rng& r, systems::TransitiveSystem S) {
    if (S.indices.size() < 2 || S.modules.at(S.indices.front()).rank == 0)
        throw Error(ErrorKind::precondition, "system too small to corrupt");
    for (int attempt = 0; attempt < 100; ++attempt) {
        systems::TransitiveSystem T = S;
        const systems::Label a = S.indices[r.index(S.indices.size())];
        const systems::Label b = S.indices[r.index(S.indices.size())];
        modalg::Homomorphism& rep = T.maps.at({a, b}).rep;
        std::size_t i = r.index(rep.rows());
        std::size_t j = r.index(rep.cols());
        switch (r.range(0, 2)) {
            case 0: // shift one entry
                rep.at(i, j) = ring_add(rep.at(i, j), ring_one(S.ring.kind));
                break;
            case 1: // kill a row: no longer an isomorphism
                for (std::size_t c = 0; c < rep.cols(); ++c)
                    rep.at(i, c) = ring_zero(S.ring.kind);
                break;
            default: // scale outside every unit subgroup
                rep = modalg::scale_hom(rep, ring_from_int(S.ring.kind, Int(2)));
                break;
        }
        if (!systems::validate_system(T).empty()) return T;
    }
    throw Error(ErrorKind::internal, "defect injection failed to invalidate the system");
}

// ---------------------------------------------------------------------------
// Mapping class layer.

mcg::TwistWord random_twist_word(Rng& r, const SurfaceModel& s, std::size_t len) {
    std::vector<mcg::CurveClass> gens = mcg::default_generators(s);
    mcg::TwistWord w{s, {}};
    for (std::size_t i = 0; i < len; ++i)
        w.letters.push_back({gens[r.index(gens.size())], r.coin() ? 1 : -1});
    return w;
}

mcg::IntMat random_symplectic(Rng& r, const SurfaceModel& s, std::size_t len) {
    return mcg::word_action(random_twist_word(r, s, len));
}

std::vector<Int> random_primitive(Rng& r, const SurfaceModel& s) {
    const std::size_t n = s.dim();
    while (true) {
        std::vector<Int> v(n);
        bool any = false;
        for (auto& x : v) {
            x = Int(r.range(-3, 3));
            if (x != 0) any = true;
        }
        if (!any) continue;
        Int g(0);
        for (const auto& x : v) g = boost::multiprecision::gcd(g, x);
        for (auto& x : v) x /= g;
        if (mcg::is_primitive(v)) return v;
    }
}

mcg::IntMat random_eta_stabilizer(Rng& r, const SurfaceModel& s, const std::vector<Int>& eta,
                                  std::size_t len) {
    const std::size_t n = s.dim();
    IntMat acc = IntMat::identity(n);
    std::size_t built = 0;
    for (std::size_t attempt = 0; attempt < 80 * (len + 1) && built < len; ++attempt) {
        std::vector<Int> v(n);
        bool any = false;
        for (auto& x : v) {
            x = Int(r.range(-2, 2));
            if (x != 0) any = true;
        }
        if (!any) continue;
        Int g(0);
        for (const auto& x : v) g = boost::multiprecision::gcd(g, x);
        for (auto& x : v) x /= g;
        if (mcg::intersection_vec(eta, v) != 0) continue;
        mcg::CurveClass c{s, v, "stab"};
        acc = mcg::mat_mul(mcg::twist_matrix(c, r.coin() ? 1 : -1), acc);
        ++built;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Closures and comparison data.

ClosureDescriptor make_closure(const std::string& id, const std::string& tag, int genus,
                               std::vector<Int> eta, bool odd) {
    ClosureDescriptor d;
    d.id = id;
    d.genus = genus;
    d.complement_tag = tag;
    d.surface = SurfaceModel{genus, odd ? std::optional<std::string>("pt") : std::nullopt};
    d.eta = mcg::CurveClass{d.surface, std::move(eta), "eta"};
    d.odd = odd;
    closure::validate_closure(d);
    return d;
}

ClosureDescriptor random_closure(Rng& r, const std::string& id, const std::string& tag,
                                 int genus, bool odd) {
    SurfaceModel s{genus, odd ? std::optional<std::string>("pt") : std::nullopt};
    return make_closure(id, tag, genus, random_primitive(r, s), odd);
}

closure::FreeWord random_free_word(Rng& r, std::size_t len, const std::string& prefix) {
    std::vector<closure::FreeLetter> letters;
    for (std::size_t i = 0; i < len; ++i)
        letters.push_back({prefix + std::to_string(r.index(4)), r.coin() ? 1 : -1});
    return closure::fw_reduce(std::move(letters));
}

GluingData random_gluing(Rng& r, const ClosureDescriptor& src, const ClosureDescriptor& tgt,
                         std::size_t len) {
    return closure::make_gluing(src, tgt, random_free_word(r, 2, "g"),
                                random_symplectic(r, src.surface, len),
                                random_symplectic(r, src.surface, len));
}

GluingData alternative_psi(Rng& r, const GluingData& g, std::size_t len) {
    GluingData out = g;
    IntMat s = random_eta_stabilizer(r, g.source.surface, g.source.eta.vec, len);
    out.psi = mcg::mat_mul(g.psi, s);
    closure::validate_gluing(out);
    return out;
}

closure::DiffeoTag random_diffeo(Rng& r, const SurfaceModel& s, std::size_t len,
                                 const std::string& prefix) {
    return closure::DiffeoTag{random_free_word(r, 2, prefix), random_symplectic(r, s, len)};
}

namespace {

// Coordinates of a cut-compatible map in the two child bases; columns are the
// coefficient vectors of the images of `from`'s basis in `to`'s basis.
IntMat restrict_to_child(const IntMat& m, const CutData& from, const CutData& to) {
    const std::size_t nc = from.child_basis.size();
    IntMat out;
    out.n = nc;
    out.a.assign(nc * nc, Int(0));
    for (std::size_t col = 0; col < nc; ++col) {
        std::vector<Int> img = mcg::mat_apply(m, from.child_basis[col]);
        std::vector<Int> p(nc);
        for (std::size_t k = 0; k < nc; ++k)
            p[k] = mcg::intersection_vec(to.child_basis[k], img);
        std::vector<Int> y(nc);
        for (std::size_t i = 0; i + 1 < nc; i += 2) {
            y[i] = -p[i + 1];
            y[i + 1] = p[i];
        }
        std::vector<Int> back(img.size(), Int(0));
        for (std::size_t k = 0; k < nc; ++k)
            for (std::size_t t = 0; t < back.size(); ++t) back[t] += to.child_basis[k][t] * y[k];
        if (back != img)
            throw Error(ErrorKind::internal, "map does not preserve the cut complement");
        for (std::size_t t = 0; t < nc; ++t) out.at(t, col) = y[t];
    }
    if (!mcg::is_symplectic(out))
        throw Error(ErrorKind::internal, "restricted map is not symplectic");
    return out;
}

IntMat embed_block(const IntMat& m4) {
    IntMat out = IntMat::identity(6);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) out.at(r, c) = m4.at(r, c);
    return out;
}

std::vector<Int> eta_b2_b3() {
    std::vector<Int> eta(6, Int(0));
    eta[3] = 1;
    eta[5] = 1;
    return eta;
}

} // namespace

GenusStepPair random_genus_step_pair(Rng& r, const std::string& id_prefix) {
    SurfaceModel s3{3, std::nullopt};
    const std::string tag = "K." + id_prefix;
    ClosureDescriptor y = make_closure(id_prefix + ".Y", tag, 3, eta_b2_b3());
    ClosureDescriptor x = random_closure(r, id_prefix + ".X", tag, 2);

    mcg::CurveClass a3 = mcg::curve_a(s3, 3);
    mcg::CurveClass b3 = mcg::curve_b(s3, 3);
    CutData cd = closure::make_cut_data(y, a3, b3);
    GluingData leg1 = random_gluing(r, x, closure::cut_open(cd), 4);
    MorphismWord first =
        closure::psi_genus_step(x, y, cd, leg1, closure::identity_gluing(y));

    IntMat t = random_eta_stabilizer(r, s3, y.eta.vec, 3);
    CutData cdt = closure::make_cut_data(y, mcg::transport_curve(t, a3),
                                         mcg::transport_curve(t, b3));
    IntMat rt = restrict_to_child(t, cd, cdt);
    GluingData leg1t = closure::make_gluing(x, closure::cut_open(cdt), leg1.complement_map,
                                            mcg::mat_mul(rt, leg1.phi_plus),
                                            mcg::mat_mul(rt, leg1.phi_minus));
    IntMat tinv = mcg::sp_inverse(t);
    GluingData leg2t = closure::make_gluing(y, y, {}, tinv, tinv);
    MorphismWord second = closure::psi_genus_step(x, y, cdt, leg1t, leg2t);
    return {std::move(first), std::move(second)};
}

FunctorLawPair random_functor_pair(Rng& r, const std::string& id_prefix) {
    const std::string tag = "K." + id_prefix;
    ClosureDescriptor d0 = random_closure(r, id_prefix + ".0", tag, 2);
    ClosureDescriptor d1 = random_closure(r, id_prefix + ".1", tag, 2);
    ClosureDescriptor d2 = random_closure(r, id_prefix + ".2", tag, 2);
    GluingData g1 = random_gluing(r, d0, d1, 4);
    GluingData g2 = random_gluing(r, d1, d2, 4);
    closure::DiffeoTag f = random_diffeo(r, d0.surface, 4, "u");
    closure::DiffeoTag fp = random_diffeo(r, d0.surface, 4, "v");
    closure::DiffeoTag f21 = closure::compose_diffeos(f, fp);

    closure::FreeWord w = closure::fw_then(
        closure::fw_then(g1.complement_map, f.word),
        closure::fw_then(g2.complement_map, closure::fw_inverse(f.word)));
    GluingData g12 =
        closure::make_gluing(d0, d2, w, mcg::mat_mul(g2.phi_plus, g1.phi_plus),
                             mcg::mat_mul(g2.phi_minus, g1.phi_minus));

    FunctorLawPair out;
    out.lhs = closure::diffeo_map(f21, d0, d2, g12);
    out.rhs = closure::concat(closure::diffeo_map(f, d0, d1, g1),
                              closure::diffeo_map(fp, d1, d2, g2));
    return out;
}

// ---------------------------------------------------------------------------
// Pools.

const PoolEdge& ClosurePool::edge(std::size_t from, std::size_t to) const {
    for (const PoolEdge& e : edges)
        if (e.from == from && e.to == to) return e;
    throw Error(ErrorKind::precondition, "no such pool edge");
}

ClosurePool random_pool(Rng& r, std::size_t genus2_count, std::size_t genus3_count,
                        const std::string& tag) {
    if (genus2_count == 0 || genus3_count == 0)
        throw Error(ErrorKind::precondition, "pool needs nodes of both genera");
    SurfaceModel s2{2, std::nullopt};
    SurfaceModel s3{3, std::nullopt};
    mcg::CurveClass a3 = mcg::curve_a(s3, 3);
    mcg::CurveClass b3 = mcg::curve_b(s3, 3);

    ClosurePool pool;
    std::vector<GluingData> p2, p3;

    ClosureDescriptor d20 = random_closure(r, tag + ".2.0", tag, 2);
    pool.nodes.push_back(d20);
    p2.push_back(closure::identity_gluing(d20));
    for (std::size_t i = 1; i < genus2_count; ++i) {
        ClosureDescriptor di = random_closure(r, tag + ".2." + std::to_string(i), tag, 2);
        pool.nodes.push_back(di);
        p2.push_back(random_gluing(r, d20, di, 4));
    }

    ClosureDescriptor d30 = make_closure(tag + ".3.0", tag, 3, eta_b2_b3());
    pool.nodes.push_back(d30);
    p3.push_back(closure::identity_gluing(d30));
    std::vector<IntMat> mp{IntMat::identity(6)}, mm{IntMat::identity(6)};
    for (std::size_t j = 1; j < genus3_count; ++j) {
        IntMat bp = embed_block(random_symplectic(r, s2, 4));
        IntMat bm = embed_block(random_symplectic(r, s2, 4));
        ClosureDescriptor dj = make_closure(tag + ".3." + std::to_string(j), tag, 3,
                                            mcg::mat_apply(bm, d30.eta.vec));
        pool.nodes.push_back(dj);
        p3.push_back(closure::make_gluing(d30, dj, random_free_word(r, 2, "g"), bp, bm));
        mp.push_back(bp);
        mm.push_back(bm);
    }

    std::vector<CutData> cuts;
    std::vector<ClosureDescriptor> children;
    for (std::size_t j = 0; j < genus3_count; ++j) {
        cuts.push_back(closure::make_cut_data(pool.nodes[genus2_count + j], a3, b3));
        children.push_back(closure::cut_open(cuts.back()));
    }

    GluingData bridge = random_gluing(r, d20, children[0], 4);
    std::vector<GluingData> reach; // d20 -> child_j
    for (std::size_t j = 0; j < genus3_count; ++j) {
        if (j == 0) {
            reach.push_back(bridge);
            continue;
        }
        GluingData cj = closure::make_gluing(children[0], children[j],
                                             p3[j].complement_map,
                                             restrict_to_child(mp[j], cuts[0], cuts[j]),
                                             restrict_to_child(mm[j], cuts[0], cuts[j]));
        reach.push_back(closure::compose_gluings(bridge, cj));
    }

    auto leg_to_child = [&](std::size_t i, std::size_t j) {
        return closure::compose_gluings(closure::inverse_gluing(p2[i]), reach[j]);
    };

    for (std::size_t u = 0; u < pool.nodes.size(); ++u)
        for (std::size_t v = 0; v < pool.nodes.size(); ++v) {
            if (u == v) continue;
            bool u2 = u < genus2_count;
            bool v2 = v < genus2_count;
            closure::PathStep step;
            step.target = pool.nodes[v];
            if (u2 && v2) {
                step.kind = closure::PathStep::Kind::Same;
                step.gluing =
                    closure::compose_gluings(closure::inverse_gluing(p2[u]), p2[v]);
            } else if (!u2 && !v2) {
                step.kind = closure::PathStep::Kind::Same;
                step.gluing = closure::compose_gluings(
                    closure::inverse_gluing(p3[u - genus2_count]), p3[v - genus2_count]);
            } else if (u2) {
                std::size_t j = v - genus2_count;
                step.kind = closure::PathStep::Kind::Up;
                step.cut = cuts[j];
                step.leg1 = leg_to_child(u, j);
                step.leg2 = closure::identity_gluing(pool.nodes[v]);
            } else {
                std::size_t j = u - genus2_count;
                step.kind = closure::PathStep::Kind::Down;
                step.cut = cuts[j];
                step.leg1 = closure::identity_gluing(pool.nodes[u]);
                step.leg2 = closure::inverse_gluing(leg_to_child(v, j));
            }
            pool.edges.push_back({u, v, std::move(step)});
        }
    return pool;
}

LetterPool confluence_pool(Rng& r) {
    SurfaceModel s3{3, std::nullopt};
    mcg::CurveClass a3 = mcg::curve_a(s3, 3);
    mcg::CurveClass b3 = mcg::curve_b(s3, 3);
    const std::string tag = "Kc";

    ClosureDescriptor d30 = make_closure("Q3.0", tag, 3, eta_b2_b3());
    IntMat m1 = embed_block(random_symplectic(r, SurfaceModel{2, std::nullopt}, 4));
    ClosureDescriptor d31 = make_closure("Q3.1", tag, 3, mcg::mat_apply(m1, d30.eta.vec));
    CutData cd0 = closure::make_cut_data(d30, a3, b3);
    CutData cd1 = closure::make_cut_data(d31, a3, b3);
    ClosureDescriptor c0 = closure::cut_open(cd0);
    ClosureDescriptor c1 = closure::cut_open(cd1);

    LetterPool p;
    p.closures = {c0, c1, d30, d31};

    IntMat loop2 = random_eta_stabilizer(r, c0.surface, c0.eta.vec, 2);
    IntMat loop3 = random_eta_stabilizer(r, s3, d30.eta.vec, 2);
    IntMat step2 = mcg::map_primitive(c0.surface, c0.eta.vec, c1.eta.vec);

    p.letters.push_back(closure::make_theta(c0, c0, closure::FreeWord::gen("g0"), loop2));
    p.letters.push_back(closure::make_theta(d30, d30, closure::FreeWord::gen("g1"), loop3));
    p.letters.push_back(closure::make_theta(c0, c1, closure::FreeWord::gen("g2"), step2));
    p.letters.push_back(
        closure::make_theta(c1, c0, closure::FreeWord::gen("g2", -1), mcg::sp_inverse(step2)));
    p.letters.push_back(closure::make_theta(d30, d31, closure::FreeWord::gen("g3"), m1));
    p.letters.push_back(
        closure::make_theta(d31, d30, closure::FreeWord::gen("g3", -1), mcg::sp_inverse(m1)));
    p.letters.push_back(closure::make_splice_merge(cd0));
    p.letters.push_back(closure::make_splice_split(cd0));
    p.letters.push_back(closure::make_splice_merge(cd1));
    p.letters.push_back(closure::make_splice_split(cd1));
    p.letters.push_back(closure::make_xi(c0, "x", 1));
    p.letters.push_back(closure::make_xi(c0, "x", -1));
    p.letters.push_back(closure::make_xi(d30, "y", 1));
    p.letters.push_back(closure::make_xi(d30, "y", -1));
    p.letters.push_back(closure::make_unit(c0, RingElem::integers(Int(-1))));
    return p;
}

// ---------------------------------------------------------------------------
// Rank-one data and KHM models.

rank1::RankOneAssignment random_assignment(Rng& r, const RingSpec& spec,
                                           const std::vector<const MorphismWord*>& words) {
    std::set<std::string> ids, labels, genera;
    std::set<std::uint64_t> hashes;
    for (const MorphismWord* w : words) {
        ids.insert(w->source.id);
        ids.insert(w->target.id);
        for (const auto& l : w->letters) {
            ids.insert(l.source.id);
            ids.insert(l.target.id);
            switch (l.kind) {
                case closure::LetterKind::HandleMinus:
                case closure::LetterKind::HandlePlus:
                    hashes.insert(
                        rank1::handle_hash(std::get<closure::HandlePayload>(l.payload).word));
                    break;
                case closure::LetterKind::Theta:
                    for (const auto& fl :
                         std::get<closure::ThetaPayload>(l.payload).complement_map.letters)
                        labels.insert(fl.label);
                    break;
                case closure::LetterKind::SpliceMerge:
                case closure::LetterKind::SpliceSplit:
                    genera.insert(
                        rank1::splice_key(std::get<closure::SplicePayload>(l.payload).cut));
                    break;
                case closure::LetterKind::XiMerge:
                    labels.insert(std::get<closure::XiPayload>(l.payload).label);
                    break;
                case closure::LetterKind::UnitScalar: break;
            }
        }
    }
    rank1::RankOneAssignment a;
    a.ring = spec;
    for (const auto& id : ids) a.closure_unit[id] = random_unit(r, spec.kind);
    for (const auto& l : labels) a.label_unit[l] = random_unit(r, spec.kind);
    for (const auto& g : genera) a.splice_unit[g] = random_unit(r, spec.kind);
    for (const auto& h : hashes) {
        RingElem one = ring_one(spec.kind);
        a.handle_unit[h] = r.coin() ? one : ring_neg(one);
    }
    rank1::validate_rank_one(a);
    return a;
}

khm::KhmModel random_khm_model(Rng& r, std::size_t tag_count, std::size_t index_count,
                               std::size_t rank) {
    if (tag_count < 2) throw Error(ErrorKind::precondition, "need at least two tags");
    khm::KhmModel m;
    m.ring = RingSpec{RingKind::Integers, UnitGroup::Signs};

    std::vector<systems::Label> indices;
    for (std::size_t i = 0; i < index_count; ++i) indices.push_back("i" + std::to_string(i));
    modalg::FreeModule mod{m.ring, rank};

    std::map<std::string, std::map<systems::Label, modalg::Homomorphism>> w, winv;
    for (std::size_t t = 0; t < tag_count; ++t) {
        std::string tag = "phi" + std::to_string(t);
        m.tags.push_back(tag);
        systems::TransitiveSystem S;
        S.ring = m.ring;
        S.indices = indices;
        for (const auto& i : indices) {
            S.modules[i] = mod;
            w[tag][i] = random_iso(r, mod, 4);
            winv[tag][i] = systems::hom_inverse(w[tag][i]);
        }
        for (const auto& i : indices)
            for (const auto& j : indices)
                S.maps[{i, j}] = modalg::GClassHom{
                    modalg::compose_hom(w[tag][j], winv[tag][i]), m.ring.unit_group};
        m.tag_systems[tag] = std::move(S);
    }

    auto connect = [&](const std::string& outer, const std::string& inner) {
        systems::SystemMorphism g;
        g.source = m.tag_systems.at(outer);
        g.target = m.tag_systems.at(inner);
        for (const auto& i : indices)
            for (const auto& j : indices)
                g.components[{i, j}] = modalg::GClassHom{
                    modalg::compose_hom(w[inner][j], winv[outer][i]), m.ring.unit_group};
        m.edges.push_back({outer, inner, std::move(g)});
    };

    // phi0 is the global minimum, so common refinements always exist; extra
    // edges respect the index order and keep the relation acyclic.
    for (std::size_t t = 1; t < tag_count; ++t) connect(m.tags[t], m.tags[0]);
    for (std::size_t t = 2; t < tag_count; ++t)
        for (std::size_t u = 1; u < t; ++u)
            if (r.range(0, 4) < 2) connect(m.tags[t], m.tags[u]);
    return m;
}

} // namespace ptsys::gen
