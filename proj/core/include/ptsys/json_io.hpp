#pragma once

#include "ptsys/closure.hpp"
#include "ptsys/khm.hpp"
#include "ptsys/rank1.hpp"
#include "ptsys/systems.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace ptsys::io {

// Ordered JSON keeps insertion order, so serialized documents and reports
// are byte-stable across runs.
using Json = nlohmann::ordered_json;

// File / text parsing with position-carrying parse errors.
Json parse_text(const std::string& text);
Json parse_file(const std::string& path);

// Field access that reports the missing or mistyped key by JSON pointer.
const Json& field(const Json& j, const std::string& key, const std::string& where);

// ---------------------------------------------------------------------------
// Ring layer. Elements travel as their exact text format.

Json ring_spec_to_json(const RingSpec& spec);
RingSpec ring_spec_from_json(const Json& j);

// ---------------------------------------------------------------------------
// Modules and systems. Matrices are row-major string entries with the ring
// named inline; systems follow
//   { "ring", "unit_group", "indices", "modules": {label: rank},
//     "maps": {"a->b": matrix} }
// and missing maps are filled by spanning-tree transport.

Json hom_to_json(const modalg::Homomorphism& f);
modalg::Homomorphism hom_from_json(const Json& j, const RingSpec& ring);

Json system_to_json(const systems::TransitiveSystem& S);
systems::TransitiveSystem system_from_json(const Json& j);

Json morphism_to_json(const systems::SystemMorphism& m);
systems::SystemMorphism morphism_from_json(const Json& j);

Json sos_to_json(const systems::SystemOfSystems& T);
systems::SystemOfSystems sos_from_json(const Json& j);

Json violations_to_json(const std::vector<systems::Violation>& vs);

// ---------------------------------------------------------------------------
// Surfaces, curves, twist words, surgery lists.

Json mat_to_json(const mcg::IntMat& m);
mcg::IntMat mat_from_json(const Json& j);

Json int_vec_to_json(const std::vector<Int>& v);
std::vector<Int> int_vec_from_json(const Json& j);

// { "genus": g, "letters": [ {"curve": [..], "sign": 1}, ... ] }
Json twist_word_to_json(const mcg::TwistWord& w);
mcg::TwistWord twist_word_from_json(const Json& j);

Json surgery_to_json(const closure::SurgeryPresentation& p);

// ---------------------------------------------------------------------------
// Closures, gluings, cuts, morphism words. Letters embed their endpoint
// closures, so word documents are self-contained. Hand-written words use
// the bare letter kinds (theta, splice-merge, splice-split, xi, unit);
// handle letters only appear in emitted documents.

Json closure_to_json(const closure::ClosureDescriptor& d);
closure::ClosureDescriptor closure_from_json(const Json& j);

Json free_word_to_json(const closure::FreeWord& w);
closure::FreeWord free_word_from_json(const Json& j);

Json gluing_to_json(const closure::GluingData& g);
// psi may be omitted; it is then derived canonically.
closure::GluingData gluing_from_json(const Json& j);

Json cut_to_json(const closure::CutData& cd);
closure::CutData cut_from_json(const Json& j);

Json letter_to_json(const closure::ElementaryMorphism& l);
closure::ElementaryMorphism letter_from_json(const Json& j);

Json word_to_json(const closure::MorphismWord& w);
closure::MorphismWord word_from_json(const Json& j);

// ---------------------------------------------------------------------------
// Rank-one assignments and KHM models.

Json assignment_to_json(const rank1::RankOneAssignment& a);
rank1::RankOneAssignment assignment_from_json(const Json& j);

Json khm_to_json(const khm::KhmModel& m);
khm::KhmModel khm_from_json(const Json& j);

} // namespace ptsys::io
