#pragma once

#include "ptsys/systems.hpp"

#include <map>
#include <string>
#include <vector>

namespace ptsys::khm {

// One nesting relation: `inner` sits inside `outer`, and `gen` is the
// comparison morphism from the outer tag's system to the inner one.
struct NestingEdge {
    std::string outer;
    std::string inner;
    systems::SystemMorphism gen;
};

// Per-embedding-tag transitive systems together with the nesting order on
// tags, given by generating edges of a DAG.
struct KhmModel {
    RingSpec ring;
    std::vector<std::string> tags;
    std::map<std::string, systems::TransitiveSystem> tag_systems;
    std::vector<NestingEdge> edges;
};

// Structural checks: per-tag systems valid over the shared ring, edges
// acyclic between known tags, all parallel nesting paths inducing equal
// morphisms, and every tag pair admitting a common refinement.
std::vector<systems::Violation> validate_khm(const KhmModel& m);

// Tags reachable from `tag` downward through the nesting edges (inclusive).
std::vector<std::string> khm_refinements(const KhmModel& m, const std::string& tag);

// Path product of generators from `from` down to `to`; all simple paths are
// compared and disagreement is an error.
systems::SystemMorphism khm_transport(const KhmModel& m, const std::string& from,
                                      const std::string& to);

// Comparison morphism between arbitrary tags through a common refinement r:
// (transport b->r)^{-1} after (transport a->r). Computed for every common
// refinement; disagreement between the choices is an error.
systems::SystemMorphism khm_psi(const KhmModel& m, const std::string& a,
                                const std::string& b);

// Assembles the full two-level system: outer indices = tags, connectors =
// khm_psi for every ordered pair. The result is ready for flattening.
systems::SystemOfSystems khm_system_of_systems(const KhmModel& m);

} // namespace ptsys::khm
