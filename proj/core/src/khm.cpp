#include "ptsys/khm.hpp"

#include <algorithm>
#include <set>

namespace ptsys::khm {

using systems::SystemMorphism;
using systems::Violation;

namespace {

std::vector<std::vector<const NestingEdge*>> all_simple_paths(const KhmModel& m,
                                                              const std::string& from,
                                                              const std::string& to) {
    std::vector<std::vector<const NestingEdge*>> out;
    std::vector<const NestingEdge*> cur;
    std::set<std::string> visited;
    auto dfs = [&](auto&& self, const std::string& at) -> void {
        if (at == to) {
            out.push_back(cur);
            return;
        }
        visited.insert(at);
        for (const NestingEdge& e : m.edges) {
            if (e.outer != at || visited.count(e.inner)) continue;
            cur.push_back(&e);
            self(self, e.inner);
            cur.pop_back();
        }
        visited.erase(at);
    };
    dfs(dfs, from);
    return out;
}

SystemMorphism path_product(const KhmModel& m, const std::string& from,
                            const std::vector<const NestingEdge*>& path) {
    if (path.empty()) return systems::identity_morphism(m.tag_systems.at(from));
    SystemMorphism acc = path[0]->gen;
    for (std::size_t i = 1; i < path.size(); ++i)
        acc = systems::compose_system_morphisms(path[i]->gen, acc);
    return acc;
}

bool has_cycle(const KhmModel& m) {
    std::map<std::string, int> state; // 0 fresh, 1 on stack, 2 done
    auto dfs = [&](auto&& self, const std::string& at) -> bool {
        state[at] = 1;
        for (const NestingEdge& e : m.edges) {
            if (e.outer != at) continue;
            int s = state.count(e.inner) ? state[e.inner] : 0;
            if (s == 1) return true;
            if (s == 0 && self(self, e.inner)) return true;
        }
        state[at] = 2;
        return false;
    };
    for (const auto& t : m.tags)
        if (!state.count(t) && dfs(dfs, t)) return true;
    return false;
}

} // namespace

std::vector<Violation> validate_khm(const KhmModel& m) {
    std::vector<Violation> out;
    auto bad = [&](std::string kind, std::vector<std::string> idx, std::string detail) {
        out.push_back({std::move(kind), std::move(idx), std::move(detail)});
    };

    validate_ring_spec(m.ring);
    if (m.tags.empty()) bad("structure", {}, "no embedding tags");
    std::set<std::string> seen;
    for (const auto& t : m.tags) {
        if (t.empty()) bad("structure", {t}, "empty tag name");
        if (!seen.insert(t).second) bad("structure", {t}, "duplicate tag");
        auto it = m.tag_systems.find(t);
        if (it == m.tag_systems.end()) {
            bad("structure", {t}, "missing system for tag");
            continue;
        }
        if (!(it->second.ring == m.ring))
            bad("compat", {t}, "tag system ring differs from the model ring");
        for (auto v : systems::validate_system(it->second)) {
            v.indices.insert(v.indices.begin(), t);
            v.detail = "tag system: " + v.detail;
            out.push_back(std::move(v));
        }
    }
    if (!out.empty()) return out;

    for (const NestingEdge& e : m.edges) {
        if (!seen.count(e.outer) || !seen.count(e.inner)) {
            bad("structure", {e.outer, e.inner}, "edge references an unknown tag");
            continue;
        }
        if (e.outer == e.inner) {
            bad("structure", {e.outer}, "tag nested in itself");
            continue;
        }
        if (e.gen.source.indices != m.tag_systems.at(e.outer).indices ||
            e.gen.target.indices != m.tag_systems.at(e.inner).indices) {
            bad("structure", {e.outer, e.inner},
                "edge morphism endpoints do not match the tag systems");
            continue;
        }
        for (auto v : systems::validate_morphism(e.gen)) {
            v.indices.insert(v.indices.begin(), e.inner);
            v.indices.insert(v.indices.begin(), e.outer);
            v.detail = "edge morphism: " + v.detail;
            out.push_back(std::move(v));
        }
    }
    if (!out.empty()) return out;

    if (has_cycle(m)) {
        bad("structure", {}, "nesting relation has a cycle");
        return out;
    }

    for (const auto& a : m.tags)
        for (const auto& b : m.tags) {
            if (a == b) continue;
            auto paths = all_simple_paths(m, a, b);
            if (paths.size() < 2) continue;
            SystemMorphism first = path_product(m, a, paths[0]);
            for (std::size_t i = 1; i < paths.size(); ++i)
                if (!systems::morphisms_equal(first, path_product(m, a, paths[i]))) {
                    bad("cocycle", {a, b}, "parallel nesting paths induce different morphisms");
                    break;
                }
        }
    if (!out.empty()) return out;

    for (const auto& a : m.tags)
        for (const auto& b : m.tags) {
            std::vector<std::string> ra = khm_refinements(m, a);
            std::vector<std::string> rb = khm_refinements(m, b);
            bool found = false;
            for (const auto& r : ra)
                if (std::find(rb.begin(), rb.end(), r) != rb.end()) {
                    found = true;
                    break;
                }
            if (!found) bad("compat", {a, b}, "tags have no common refinement");
        }
    return out;
}

std::vector<std::string> khm_refinements(const KhmModel& m, const std::string& tag) {
    if (!m.tag_systems.count(tag))
        throw Error(ErrorKind::precondition, "unknown embedding tag " + tag);
    std::set<std::string> reach{tag};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const NestingEdge& e : m.edges)
            if (reach.count(e.outer) && reach.insert(e.inner).second) grew = true;
    }
    // keep the model's declared order
    std::vector<std::string> out;
    for (const auto& t : m.tags)
        if (reach.count(t)) out.push_back(t);
    return out;
}

SystemMorphism khm_transport(const KhmModel& m, const std::string& from,
                             const std::string& to) {
    if (!m.tag_systems.count(from) || !m.tag_systems.count(to))
        throw Error(ErrorKind::precondition, "unknown embedding tag");
    auto paths = all_simple_paths(m, from, to);
    if (paths.empty())
        throw Error(ErrorKind::precondition, "tag " + to + " is not nested in " + from);
    SystemMorphism first = path_product(m, from, paths[0]);
    for (std::size_t i = 1; i < paths.size(); ++i)
        if (!systems::morphisms_equal(first, path_product(m, from, paths[i])))
            throw Error(ErrorKind::validation,
                        "parallel nesting paths induce different morphisms");
    return first;
}

SystemMorphism khm_psi(const KhmModel& m, const std::string& a, const std::string& b) {
    if (!m.tag_systems.count(a) || !m.tag_systems.count(b))
        throw Error(ErrorKind::precondition, "unknown embedding tag");
    std::vector<std::string> ra = khm_refinements(m, a);
    std::vector<std::string> rb = khm_refinements(m, b);
    bool have = false;
    SystemMorphism result;
    for (const auto& r : ra) {
        if (std::find(rb.begin(), rb.end(), r) == rb.end()) continue;
        SystemMorphism down_a = khm_transport(m, a, r);
        SystemMorphism down_b = khm_transport(m, b, r);
        SystemMorphism cand = systems::compose_system_morphisms(
            systems::inverse_system_morphism(down_b), down_a);
        if (!have) {
            result = cand;
            have = true;
        } else if (!systems::morphisms_equal(result, cand)) {
            throw Error(ErrorKind::validation,
                        "comparison morphism depends on the chosen common refinement");
        }
    }
    if (!have)
        throw Error(ErrorKind::precondition,
                    "tags " + a + " and " + b + " have no common refinement");
    return result;
}

systems::SystemOfSystems khm_system_of_systems(const KhmModel& m) {
    auto violations = validate_khm(m);
    if (!violations.empty())
        throw Error(ErrorKind::validation,
                    "system of systems from an invalid model: " + violations.front().detail);
    systems::SystemOfSystems out;
    out.outer = m.tags;
    out.inner = m.tag_systems;
    for (const auto& a : m.tags)
        for (const auto& b : m.tags)
            out.connectors[{a, b}] =
                a == b ? systems::identity_morphism(m.tag_systems.at(a)) : khm_psi(m, a, b);
    return out;
}

} // namespace ptsys::khm
