#include "ptsys/systems.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace ptsys::systems {

namespace {

using modalg::GClassHom;
using modalg::Homomorphism;

std::string pair_text(const Label& a, const Label& b) { return a + " -> " + b; }

int group_order(UnitGroup g) {
    switch (g) {
        case UnitGroup::Trivial: return 0;
        case UnitGroup::Signs: return 1;
        case UnitGroup::FullUnits: return 2;
    }
    throw Error(ErrorKind::internal, "bad unit group");
}

GClassHom retag(GClassHom c, UnitGroup g) {
    c.unit_group = g;
    return c;
}

} // namespace

std::vector<Violation> validate_system(const TransitiveSystem& S) {
    std::vector<Violation> out;
    auto bad = [&](std::string kind, std::vector<Label> idx, std::string detail) {
        out.push_back({std::move(kind), std::move(idx), std::move(detail)});
    };

    std::set<Label> seen;
    for (const auto& a : S.indices) {
        if (!seen.insert(a).second) bad("structure", {a}, "duplicate index");
        auto it = S.modules.find(a);
        if (it == S.modules.end()) {
            bad("structure", {a}, "missing module");
        } else if (!(it->second.ring == S.ring)) {
            bad("structure", {a}, "module ring differs from system ring");
        }
    }
    for (const auto& [a, m] : S.modules) {
        (void)m;
        if (!seen.count(a)) bad("structure", {a}, "module for unknown index");
    }
    for (const auto& [key, c] : S.maps) {
        (void)c;
        if (!seen.count(key.first) || !seen.count(key.second))
            bad("structure", {key.first, key.second}, "map for unknown index pair");
    }
    if (!out.empty()) return out;

    // Structural pass over all ordered pairs.
    for (const auto& a : S.indices) {
        for (const auto& b : S.indices) {
            auto it = S.maps.find({a, b});
            if (it == S.maps.end()) {
                bad("structure", {a, b}, "missing map");
                continue;
            }
            const GClassHom& c = it->second;
            if (c.unit_group != S.ring.unit_group) {
                bad("structure", {a, b}, "map class tagged with wrong unit group");
                continue;
            }
            if (!(c.rep.source == S.modules.at(a)) || !(c.rep.target == S.modules.at(b))) {
                bad("structure", {a, b}, "map shape does not match modules");
                continue;
            }
            if (!modalg::is_isomorphism(c.rep)) bad("not_isomorphism", {a, b}, "determinant is not a unit");
        }
    }
    if (!out.empty()) return out;

    for (const auto& a : S.indices) {
        GClassHom id{modalg::identity_hom(S.modules.at(a)), S.ring.unit_group};
        if (!S.maps.at({a, a}).equals(id))
            bad("identity", {a}, "diagonal map is not the identity class");
    }
    for (const auto& a : S.indices)
        for (const auto& b : S.indices)
            for (const auto& c : S.indices) {
                GClassHom lhs = modalg::compose(S.maps.at({b, c}), S.maps.at({a, b}));
                if (!lhs.equals(S.maps.at({a, c})))
                    bad("cocycle", {a, b, c},
                        "composite " + pair_text(a, b) + " then " + pair_text(b, c) +
                            " differs from " + pair_text(a, c));
            }
    return out;
}

std::vector<Violation> validate_morphism(const SystemMorphism& m) {
    std::vector<Violation> out;
    for (auto v : validate_system(m.source)) {
        v.detail = "source system: " + v.detail;
        out.push_back(std::move(v));
    }
    for (auto v : validate_system(m.target)) {
        v.detail = "target system: " + v.detail;
        out.push_back(std::move(v));
    }
    if (!out.empty()) return out;

    auto bad = [&](std::string kind, std::vector<Label> idx, std::string detail) {
        out.push_back({std::move(kind), std::move(idx), std::move(detail)});
    };

    if (m.source.ring.kind != m.target.ring.kind)
        bad("compat", {}, "source and target systems live over different rings");
    if (group_order(m.source.ring.unit_group) > group_order(m.target.ring.unit_group))
        bad("compat", {}, "target unit group does not contain the source unit group");
    if (!out.empty()) return out;

    const UnitGroup G = m.target.ring.unit_group;
    for (const auto& a : m.source.indices)
        for (const auto& g : m.target.indices) {
            auto it = m.components.find({a, g});
            if (it == m.components.end()) {
                bad("structure", {a, g}, "missing component");
                continue;
            }
            const GClassHom& c = it->second;
            if (c.unit_group != G) {
                bad("structure", {a, g}, "component class tagged with wrong unit group");
                continue;
            }
            if (!(c.rep.source == m.source.modules.at(a)) ||
                !(c.rep.target == m.target.modules.at(g)))
                bad("structure", {a, g}, "component shape does not match modules");
        }
    if (!out.empty()) return out;

    // f^b_d . g^a_b == h^g_d . f^a_g as G-classes, for all a,b in the source
    // and g,d in the target.
    for (const auto& a : m.source.indices)
        for (const auto& b : m.source.indices)
            for (const auto& g : m.target.indices)
                for (const auto& d : m.target.indices) {
                    GClassHom lhs = modalg::compose(
                        m.components.at({b, d}), retag(m.source.maps.at({a, b}), G));
                    GClassHom rhs =
                        modalg::compose(m.target.maps.at({g, d}), m.components.at({a, g}));
                    if (!lhs.equals(rhs))
                        bad("compat", {a, b, g, d},
                            "component square does not commute up to units");
                }
    return out;
}

bool morphisms_equal(const SystemMorphism& a, const SystemMorphism& b) {
    if (a.source.indices != b.source.indices || a.target.indices != b.target.indices)
        return false;
    const UnitGroup G = a.target.ring.unit_group;
    for (const auto& s : a.source.indices)
        for (const auto& t : a.target.indices) {
            auto ia = a.components.find({s, t});
            auto ib = b.components.find({s, t});
            if (ia == a.components.end() || ib == b.components.end()) return false;
            if (!retag(ia->second, G).equals(retag(ib->second, G))) return false;
        }
    return true;
}

SystemMorphism identity_morphism(const TransitiveSystem& S) {
    SystemMorphism m{S, S, {}};
    for (const auto& a : S.indices)
        for (const auto& b : S.indices) m.components[{a, b}] = S.maps.at({a, b});
    return m;
}

SystemMorphism compose_system_morphisms(const SystemMorphism& m2, const SystemMorphism& m1) {
    if (m1.target.indices != m2.source.indices)
        throw Error(ErrorKind::precondition, "morphisms are not composable");
    const UnitGroup G = m2.target.ring.unit_group;
    SystemMorphism out{m1.source, m2.target, {}};
    for (const auto& a : m1.source.indices)
        for (const auto& e : m2.target.indices) {
            bool first = true;
            GClassHom acc;
            for (const auto& b : m1.target.indices) {
                GClassHom cand = modalg::compose(retag(m2.components.at({b, e}), G),
                                                 retag(m1.components.at({a, b}), G));
                if (first) {
                    acc = cand;
                    first = false;
                } else if (!acc.equals(cand)) {
                    throw Error(ErrorKind::validation,
                                "composite component " + pair_text(a, e) +
                                    " depends on the intermediate index; inputs are not "
                                    "coherent morphisms");
                }
            }
            if (first) throw Error(ErrorKind::precondition, "empty intermediate system");
            out.components[{a, e}] = acc;
        }
    return out;
}

modalg::Homomorphism hom_inverse(const modalg::Homomorphism& f) {
    if (f.rows() != f.cols())
        throw Error(ErrorKind::precondition, "inverse of a non-square map");
    RingElem d = modalg::det(f);
    if (!ring_is_unit(d))
        throw Error(ErrorKind::precondition, "inverse of a non-isomorphism");
    const std::size_t n = f.rows();
    Homomorphism inv = modalg::zero_hom(f.target, f.source);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            // Cofactor expansion: inv[c][r] = (-1)^{r+c} det(minor(r,c)) / det.
            Homomorphism minor = modalg::zero_hom(
                modalg::FreeModule{f.source.ring, n - 1}, modalg::FreeModule{f.source.ring, n - 1});
            for (std::size_t i = 0, ii = 0; i < n; ++i) {
                if (i == r) continue;
                for (std::size_t j = 0, jj = 0; j < n; ++j) {
                    if (j == c) continue;
                    minor.at(ii, jj) = f.at(i, j);
                    ++jj;
                }
                ++ii;
            }
            RingElem cof = modalg::det(minor);
            if ((r + c) % 2 == 1) cof = ring_neg(cof);
            auto q = ring_divide_exact(cof, d);
            if (!q)
                throw Error(ErrorKind::validation,
                            "inverse exists only in the completed ring; supply the reverse "
                            "map explicitly");
            inv.at(c, r) = *q;
        }
    return inv;
}

SystemMorphism inverse_system_morphism(const SystemMorphism& m) {
    const UnitGroup G = m.source.ring.unit_group;
    SystemMorphism out{m.target, m.source, {}};
    for (const auto& [pr, cls] : m.components)
        out.components[{pr.second, pr.first}] = retag({hom_inverse(cls.rep), G}, G);
    return out;
}

QuotientResult quotient_module(const TransitiveSystem& S) {
    if (S.ring.unit_group != UnitGroup::Trivial)
        throw Error(ErrorKind::precondition, "quotient realization needs a trivial unit group");
    auto violations = validate_system(S);
    if (!violations.empty())
        throw Error(ErrorKind::precondition,
                    "quotient of an invalid system: " + violations.front().detail);
    if (S.indices.empty()) throw Error(ErrorKind::precondition, "empty system");

    const Label& base = S.indices.front();
    QuotientResult out{S.modules.at(base), {}};
    for (const auto& a : S.indices) out.identifications[a] = S.maps.at({a, base}).rep;

    // With a trivial group the cocycle identities hold on the nose, so the
    // identification triangles commute exactly; keep the check as a guard.
    for (const auto& a : S.indices)
        for (const auto& b : S.indices) {
            Homomorphism via =
                modalg::compose_hom(out.identifications.at(b), S.maps.at({a, b}).rep);
            if (!(via == out.identifications.at(a)))
                throw Error(ErrorKind::internal, "identification triangle failed to commute");
        }
    return out;
}

namespace {

RingElem map_entry(const RingElem& e, RingKind k) { return ring_from_int(k, e.as_int()); }

Homomorphism map_hom(const Homomorphism& f, const RingSpec& target) {
    Homomorphism out;
    out.source = {target, f.source.rank};
    out.target = {target, f.target.rank};
    out.matrix.reserve(f.matrix.size());
    for (const auto& e : f.matrix) out.matrix.push_back(map_entry(e, target.kind));
    return out;
}

} // namespace

TransitiveSystem tensor_system(const TransitiveSystem& S, const RingSpec& target) {
    if (S.ring.kind != RingKind::Integers)
        throw Error(ErrorKind::precondition, "tensoring is defined for systems over the integers");
    TransitiveSystem out;
    out.ring = target;
    out.indices = S.indices;
    for (const auto& [a, m] : S.modules) out.modules[a] = {target, m.rank};
    for (const auto& [key, c] : S.maps)
        out.maps[key] = {map_hom(c.rep, target), target.unit_group};
    return out;
}

SystemMorphism tensor_morphism(const SystemMorphism& m, const RingSpec& target) {
    SystemMorphism out;
    out.source = tensor_system(m.source, target);
    out.target = tensor_system(m.target, target);
    for (const auto& [key, c] : m.components)
        out.components[key] = {map_hom(c.rep, target), target.unit_group};
    return out;
}

std::vector<Violation> validate_system_of_systems(const SystemOfSystems& T) {
    std::vector<Violation> out;
    auto bad = [&](std::string kind, std::vector<Label> idx, std::string detail) {
        out.push_back({std::move(kind), std::move(idx), std::move(detail)});
    };

    std::set<Label> seen;
    for (const auto& o : T.outer) {
        if (!seen.insert(o).second) bad("structure", {o}, "duplicate outer index");
        auto it = T.inner.find(o);
        if (it == T.inner.end()) {
            bad("structure", {o}, "missing inner system");
            continue;
        }
        for (auto v : validate_system(it->second)) {
            v.indices.insert(v.indices.begin(), o);
            v.detail = "inner system: " + v.detail;
            out.push_back(std::move(v));
        }
    }
    if (!out.empty()) return out;

    const RingSpec ring = T.inner.at(T.outer.front()).ring;
    for (const auto& o : T.outer)
        if (!(T.inner.at(o).ring == ring))
            bad("compat", {o}, "inner systems disagree on ring or unit group");
    if (!out.empty()) return out;

    for (const auto& o : T.outer)
        for (const auto& p : T.outer) {
            auto it = T.connectors.find({o, p});
            if (it == T.connectors.end()) {
                bad("structure", {o, p}, "missing connector");
                continue;
            }
            const SystemMorphism& c = it->second;
            if (c.source.indices != T.inner.at(o).indices ||
                c.target.indices != T.inner.at(p).indices) {
                bad("structure", {o, p}, "connector endpoints do not match inner systems");
                continue;
            }
            for (auto v : validate_morphism(c)) {
                v.indices.insert(v.indices.begin(), p);
                v.indices.insert(v.indices.begin(), o);
                v.detail = "connector: " + v.detail;
                out.push_back(std::move(v));
            }
        }
    if (!out.empty()) return out;

    for (const auto& o : T.outer)
        if (!morphisms_equal(T.connectors.at({o, o}), identity_morphism(T.inner.at(o))))
            bad("identity", {o}, "diagonal connector is not the identity morphism");
    for (const auto& o : T.outer)
        for (const auto& p : T.outer)
            for (const auto& q : T.outer) {
                SystemMorphism comp = compose_system_morphisms(T.connectors.at({p, q}),
                                                               T.connectors.at({o, p}));
                if (!morphisms_equal(comp, T.connectors.at({o, q})))
                    bad("cocycle", {o, p, q}, "connector composite differs from the direct connector");
            }
    return out;
}

TransitiveSystem flatten_system_of_systems(const SystemOfSystems& T) {
    auto violations = validate_system_of_systems(T);
    if (!violations.empty())
        throw Error(ErrorKind::validation,
                    "flattening an invalid system of systems: " + violations.front().detail);
    if (T.outer.empty()) throw Error(ErrorKind::precondition, "empty outer index set");

    TransitiveSystem out;
    out.ring = T.inner.at(T.outer.front()).ring;
    for (const auto& o : T.outer)
        for (const auto& i : T.inner.at(o).indices) {
            Label l = o + "/" + i;
            out.indices.push_back(l);
            out.modules[l] = T.inner.at(o).modules.at(i);
        }
    for (const auto& o : T.outer)
        for (const auto& i : T.inner.at(o).indices)
            for (const auto& p : T.outer)
                for (const auto& j : T.inner.at(p).indices) {
                    GClassHom c = (o == p) ? T.inner.at(o).maps.at({i, j})
                                           : T.connectors.at({o, p}).components.at({i, j});
                    out.maps[{o + "/" + i, p + "/" + j}] = c;
                }
    return out;
}

TransitiveSystem complete_system(TransitiveSystem partial) {
    std::set<Label> known(partial.indices.begin(), partial.indices.end());
    if (partial.indices.empty()) return partial;
    for (const auto& [key, c] : partial.maps) {
        (void)c;
        if (!known.count(key.first) || !known.count(key.second))
            throw Error(ErrorKind::validation,
                        "map given for unknown index pair " + pair_text(key.first, key.second));
    }

    // Spanning tree over the undirected graph of provided maps.
    std::map<Label, std::vector<Label>> adj;
    for (const auto& [key, c] : partial.maps) {
        (void)c;
        if (key.first == key.second) continue;
        adj[key.first].push_back(key.second);
        adj[key.second].push_back(key.first);
    }

    auto edge_hom = [&](const Label& u, const Label& v) -> Homomorphism {
        auto it = partial.maps.find({u, v});
        if (it != partial.maps.end()) return it->second.rep;
        return hom_inverse(partial.maps.at({v, u}).rep);
    };

    const Label& base = partial.indices.front();
    std::map<Label, Homomorphism> to_base, from_base;
    to_base[base] = modalg::identity_hom(partial.modules.at(base));
    from_base[base] = to_base[base];
    std::deque<Label> queue{base};
    while (!queue.empty()) {
        Label u = queue.front();
        queue.pop_front();
        for (const auto& v : adj[u]) {
            if (to_base.count(v)) continue;
            to_base[v] = modalg::compose_hom(to_base.at(u), edge_hom(v, u));
            from_base[v] = modalg::compose_hom(edge_hom(u, v), from_base.at(u));
            queue.push_back(v);
        }
    }
    for (const auto& a : partial.indices)
        if (!to_base.count(a))
            throw Error(ErrorKind::validation,
                        "provided maps do not connect index '" + a + "' to the rest");

    for (const auto& a : partial.indices)
        for (const auto& b : partial.indices) {
            if (partial.maps.count({a, b})) continue;
            Homomorphism h = (a == b)
                                 ? modalg::identity_hom(partial.modules.at(a))
                                 : modalg::compose_hom(from_base.at(b), to_base.at(a));
            partial.maps[{a, b}] = {std::move(h), partial.ring.unit_group};
        }
    return partial;
}

} // namespace ptsys::systems
