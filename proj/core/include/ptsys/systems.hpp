#pragma once

#include "ptsys/modalg.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ptsys::systems {

using Label = std::string;
using LabelPair = std::pair<Label, Label>; // (from, to)

struct Violation {
    std::string kind; // structure | not_isomorphism | identity | cocycle | compat
    std::vector<Label> indices;
    std::string detail;
};

// G-transitive system: modules indexed by labels, one G-class of
// isomorphisms per ordered index pair (including the diagonal).
struct TransitiveSystem {
    RingSpec ring; // ring.unit_group is the system's G
    std::vector<Label> indices;
    std::map<Label, modalg::FreeModule> modules;
    std::map<LabelPair, modalg::GClassHom> maps;
};

// Morphism of systems {f^alpha_gamma}: one class per (source index, target
// index) pair, compatible with both systems' structure maps.
struct SystemMorphism {
    TransitiveSystem source;
    TransitiveSystem target;
    std::map<LabelPair, modalg::GClassHom> components; // (src label, tgt label)
};

struct SystemOfSystems {
    std::vector<Label> outer;
    std::map<Label, TransitiveSystem> inner;
    std::map<LabelPair, SystemMorphism> connectors;
};

std::vector<Violation> validate_system(const TransitiveSystem& S);
std::vector<Violation> validate_morphism(const SystemMorphism& m);

// Componentwise class equality (the outer level carries no extra unit slack).
bool morphisms_equal(const SystemMorphism& a, const SystemMorphism& b);

SystemMorphism identity_morphism(const TransitiveSystem& S);

// Components composed through any intermediate index; consistency across all
// intermediate choices is checked and inconsistency is an error.
SystemMorphism compose_system_morphisms(const SystemMorphism& m2, const SystemMorphism& m1);

// Exact inverse of an isomorphism (adjugate over determinant). Over the
// Novikov ring the entrywise divisions must terminate; otherwise this throws
// (the inverse exists only in the completed ring).
modalg::Homomorphism hom_inverse(const modalg::Homomorphism& f);

// Componentwise inverse; every representative must be an exact isomorphism.
SystemMorphism inverse_system_morphism(const SystemMorphism& m);

struct QuotientResult {
    modalg::FreeModule module; // M_{alpha_0} for the first index
    std::map<Label, modalg::Homomorphism> identifications; // alpha -> (M_alpha -> M)
};

// Base-point realization of the quotient module of a {1}-system.
QuotientResult quotient_module(const TransitiveSystem& S);

// Entrywise application of the canonical map Z -> R. S must live over the
// integers; the result lives over `target` (typically with full units).
TransitiveSystem tensor_system(const TransitiveSystem& S, const RingSpec& target);

SystemMorphism tensor_morphism(const SystemMorphism& m, const RingSpec& target);

std::vector<Violation> validate_system_of_systems(const SystemOfSystems& T);

// Disjoint-union flattening; cross-block maps come from the connectors.
// Outer labels and inner labels are joined with '/'.
TransitiveSystem flatten_system_of_systems(const SystemOfSystems& T);

// Spanning-tree completion: fills in missing maps by transport through the
// graph of provided maps (inverting provided maps where the tree is
// traversed backwards), then returns the completed system. Missing diagonal
// entries become identities. Disconnected input is an error.
TransitiveSystem complete_system(TransitiveSystem partial);

} // namespace ptsys::systems
